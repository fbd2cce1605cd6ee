use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{ConfigLayer, HubMode, Topology};

#[derive(Debug, Parser)]
#[command(name = "plcfront", version, about = "Power-line front-haul assessment for small cells")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write one deployment and its grid as layout.json.
    Generate(CommonArgs),
    /// Run replications of one scenario and write metrics.csv.
    Simulate(CommonArgs),
    /// Run a density × topology sweep and write sweep.csv plus plots.
    Sweep(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

fn parse_topology(s: &str) -> Result<Topology, String> {
    s.parse().map_err(|e: crate::SimError| e.to_string())
}

fn parse_hub(s: &str) -> Result<HubMode, String> {
    s.parse().map_err(|e: crate::SimError| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// TOML file with config keys; flags take precedence over it.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub density: Option<f64>,
    /// Sweep densities, comma-separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub densities: Option<Vec<f64>>,
    /// bus, tree or chain; sweep accepts a comma-separated list.
    #[arg(long, value_delimiter = ',', num_args = 1.., value_parser = parse_topology)]
    pub topology: Option<Vec<Topology>>,
    /// center or uniform-random.
    #[arg(long, value_parser = parse_hub)]
    pub hub: Option<HubMode>,
    #[arg(long)]
    pub side: Option<f64>,
    #[arg(long = "cell-area")]
    pub cell_area: Option<f64>,
    #[arg(long = "max-wire")]
    pub max_wire: Option<f64>,
    #[arg(long)]
    pub branches: Option<usize>,
    #[arg(long = "branch-cap")]
    pub branch_cap: Option<usize>,
    #[arg(long)]
    pub interarrival: Option<f64>,
    #[arg(long)]
    pub horizon: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Toggle::On)]
    pub plots: Toggle,
}

impl CommonArgs {
    /// Scalar overrides carried by the flags. A topology list sets the
    /// scenario topology to its first entry.
    pub fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            side_m: self.side,
            density: self.density,
            cell_area_m2: self.cell_area,
            n_branches: self.branches,
            max_wire_m: self.max_wire,
            max_cells_per_branch: self.branch_cap,
            hub_mode: self.hub,
            topology: self.topology.as_ref().and_then(|t| t.first().copied()),
            mean_interarrival_s: self.interarrival,
            horizon_s: self.horizon,
            dt_s: self.dt,
            replications: self.reps,
            master_seed: self.seed,
            ..Default::default()
        }
    }
}
