//! Command-line front end: config layering, the `generate`, `simulate` and
//! `sweep` commands, and their file outputs.

mod args;
pub mod output;
pub mod plot;

pub use args::{Cli, Command, CommonArgs, Toggle};

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{ConfigLayer, SimulationConfig, Topology};
use crate::error::{Result, SimError};
use crate::simulator::{replication_seed, run_replication_detailed, run_sweep};
use crate::traffic::TrafficModel;

use output::{write_atomic, LayoutFile, RunManifest};

pub const SEED_ENV: &str = "SIM_SEED";

/// Defaults, then `SIM_SEED`, then the config file, then flags; the result
/// is validated.
pub fn parse_config(file: Option<&Path>, flags: &ConfigLayer, env_seed: Option<&str>) -> Result<SimulationConfig> {
    let mut cfg = SimulationConfig::default();
    if let Some(s) = env_seed {
        cfg.master_seed = s.trim().parse().map_err(|_| {
            SimError::config("master_seed", format!("{SEED_ENV}={s:?} is not an unsigned integer"))
        })?;
    }
    if let Some(path) = file {
        let text = fs::read_to_string(path).map_err(|e| SimError::io(path, e))?;
        ConfigLayer::from_toml(&text)?.apply_to(&mut cfg);
    }
    flags.apply_to(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| SimError::io(dir, e))
}

fn write_sidecar(dir: &Path, stem: &str, manifest: &RunManifest) -> Result<()> {
    let stamped = manifest.clone().stamped_now();
    let path = dir.join(format!("{stem}.manifest.json"));
    write_atomic(&path, stamped.to_json().as_bytes())
}

/// Replication 0 of the configured scenario as `layout.json`.
pub fn cmd_generate(config: &SimulationConfig, out_dir: &Path) -> Result<PathBuf> {
    let model = TrafficModel::from_config(config)?;
    let seed = replication_seed(config.master_seed, 0, config.topology, 0);
    let rep = run_replication_detailed(config, &model, seed)?;
    let manifest = RunManifest::new("generate", config, &model);

    ensure_dir(out_dir)?;
    let layout = LayoutFile::new(manifest.clone(), seed, &rep.deployment, &rep.grid);
    let path = out_dir.join("layout.json");
    write_atomic(&path, layout.to_json().as_bytes())?;
    write_sidecar(out_dir, "layout", &manifest)?;
    Ok(path)
}

/// `config.replications` replications as `metrics.csv`, one row each.
pub fn cmd_simulate(config: &SimulationConfig, out_dir: &Path) -> Result<PathBuf> {
    let model = TrafficModel::from_config(config)?;
    let reports = (0..config.replications)
        .map(|k| {
            let seed = replication_seed(config.master_seed, 0, config.topology, k);
            run_replication_detailed(config, &model, seed).map(|r| r.metrics)
        })
        .collect::<Result<Vec<_>>>()?;
    let manifest = RunManifest::new("simulate", config, &model);

    ensure_dir(out_dir)?;
    let path = out_dir.join("metrics.csv");
    write_atomic(&path, output::metrics_csv(&manifest, &reports).as_bytes())?;
    write_sidecar(out_dir, "metrics", &manifest)?;
    Ok(path)
}

/// Aggregate `sweep.csv` and, with `plots`, the three SVG figures.
pub fn cmd_sweep(
    config: &SimulationConfig,
    densities: &[f64],
    topologies: &[Topology],
    plots: bool,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    if densities.is_empty() {
        return Err(SimError::config("densities", "list must not be empty"));
    }
    if topologies.is_empty() {
        return Err(SimError::config("topology", "list must not be empty"));
    }
    let model = TrafficModel::from_config(config)?;
    let result = run_sweep(config, densities, topologies, config.replications)?;
    let manifest = RunManifest::new("sweep", config, &model);

    ensure_dir(out_dir)?;
    let mut written = Vec::new();
    let csv = out_dir.join("sweep.csv");
    write_atomic(&csv, output::sweep_csv(&manifest, &result).as_bytes())?;
    written.push(csv);
    if plots {
        for (name, svg) in [
            ("reachability.svg", plot::reachability_plot(&manifest, &result)),
            ("traffic_avg.svg", plot::traffic_plot(&manifest, &result, plot::TrafficStat::Average)),
            ("traffic_max.svg", plot::traffic_plot(&manifest, &result, plot::TrafficStat::Maximum)),
        ] {
            let path = out_dir.join(name);
            write_atomic(&path, svg.as_bytes())?;
            written.push(path);
        }
    }
    write_sidecar(out_dir, "sweep", &manifest)?;
    Ok(written)
}

pub fn run(cli: Cli) -> Result<Vec<PathBuf>> {
    let env_seed = std::env::var(SEED_ENV).ok();
    let (Command::Generate(args) | Command::Simulate(args) | Command::Sweep(args)) = &cli.command;
    let config = parse_config(args.config.as_deref(), &args.layer(), env_seed.as_deref())?;
    match &cli.command {
        Command::Generate(a) => cmd_generate(&config, &a.out).map(|p| vec![p]),
        Command::Simulate(a) => cmd_simulate(&config, &a.out).map(|p| vec![p]),
        Command::Sweep(a) => {
            let densities = a.densities.clone().unwrap_or_else(|| vec![config.density]);
            let topologies = a.topology.clone().unwrap_or_else(|| Topology::ALL.to_vec());
            cmd_sweep(&config, &densities, &topologies, a.plots == Toggle::On, &a.out)
        }
    }
}
