//! File formats: run manifests, the layout JSON, and the CSV tables.
//!
//! CSV files start with `#`-prefixed provenance lines (the manifest as one
//! JSON line), followed by a fixed header row and data rows. Missing values
//! (e.g. reachability of an empty deployment) are empty fields.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::config::{SimulationConfig, Topology};
use crate::deployment::{Cell, CellDeployment};
use crate::error::{Result, SimError};
use crate::geometry::Point;
use crate::gridgen::{CellWire, GridEdge, GridNode, PowerGrid};
use crate::simulator::{MetricsReport, Summary, SweepResult};
use crate::traffic::TrafficModel;

pub const METRICS_HEADER: &str =
    "seed,topology,density,reachability,avg_rate_bps,max_rate_bps,mean_wait_s,forced_crossings";

pub const SWEEP_HEADER: &str = "density,topology,replications,\
reachability_mean,reachability_stderr,\
avg_rate_bps_mean,avg_rate_bps_stderr,\
max_rate_bps_mean,max_rate_bps_stderr,\
mean_wait_s_mean,mean_wait_s_stderr,\
forced_crossings_mean";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub master_seed: u64,
    pub config: SimulationConfig,
    pub traffic: TrafficModel,
    /// Only present in sidecar manifests; data files stay byte-stable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp_unix_s: Option<u64>,
}

impl RunManifest {
    pub fn new(command: &str, config: &SimulationConfig, traffic: &TrafficModel) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            master_seed: config.master_seed,
            config: config.clone(),
            traffic: traffic.clone(),
            timestamp_unix_s: None,
        }
    }

    pub fn stamped_now(mut self) -> Self {
        self.timestamp_unix_s = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn comment_lines(&self) -> String {
        format!(
            "# {} {} {}\n# manifest: {}\n",
            self.tool,
            self.version,
            self.command,
            serde_json::to_string(self).expect("manifest serializes")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HubEntry {
    pub x_m: f64,
    pub y_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellEntry {
    pub id: usize,
    pub x_m: f64,
    pub y_m: f64,
    pub radius_m: f64,
    pub sector: usize,
    pub node: usize,
    pub wire_distance_m: f64,
    pub served: bool,
}

/// Deployment plus grid as written by `generate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutFile {
    pub manifest: RunManifest,
    pub seed: u64,
    pub side_m: f64,
    pub topology: Topology,
    pub n_sectors: usize,
    pub sector_anchor_rad: f64,
    pub hub: HubEntry,
    pub forced_crossings: usize,
    pub cells: Vec<CellEntry>,
    pub nodes: Vec<GridNode>,
    pub edges: Vec<GridEdge>,
}

impl LayoutFile {
    pub fn new(manifest: RunManifest, seed: u64, deployment: &CellDeployment, grid: &PowerGrid) -> Self {
        let cells = deployment
            .cells
            .iter()
            .zip(&grid.cells)
            .map(|(c, w)| {
                debug_assert_eq!(c.id, w.cell_id);
                CellEntry {
                    id: c.id,
                    x_m: c.x_m,
                    y_m: c.y_m,
                    radius_m: c.radius_m,
                    sector: c.sector,
                    node: w.node,
                    wire_distance_m: w.wire_distance_m,
                    served: w.served,
                }
            })
            .collect();
        LayoutFile {
            manifest,
            seed,
            side_m: deployment.side_m,
            topology: grid.topology,
            n_sectors: deployment.n_sectors,
            sector_anchor_rad: deployment.sector_anchor_rad,
            hub: HubEntry {
                x_m: deployment.hub.x,
                y_m: deployment.hub.y,
            },
            forced_crossings: grid.forced_crossings,
            cells,
            nodes: grid.nodes.clone(),
            edges: grid.edges.clone(),
        }
    }

    pub fn into_parts(self) -> (CellDeployment, PowerGrid) {
        let deployment = CellDeployment {
            side_m: self.side_m,
            hub: Point::new(self.hub.x_m, self.hub.y_m),
            cells: self
                .cells
                .iter()
                .map(|c| Cell {
                    id: c.id,
                    x_m: c.x_m,
                    y_m: c.y_m,
                    radius_m: c.radius_m,
                    sector: c.sector,
                })
                .collect(),
            n_sectors: self.n_sectors,
            sector_anchor_rad: self.sector_anchor_rad,
        };
        let grid = PowerGrid {
            topology: self.topology,
            hub: 0,
            nodes: self.nodes,
            edges: self.edges,
            cells: self
                .cells
                .iter()
                .map(|c| CellWire {
                    cell_id: c.id,
                    node: c.node,
                    branch: c.sector,
                    wire_distance_m: c.wire_distance_m,
                    served: c.served,
                })
                .collect(),
            n_branches: self.n_sectors.max(1),
            forced_crossings: self.forced_crossings,
        };
        (deployment, grid)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("layout serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| SimError::ConfigParse(format!("layout JSON: {e}")))
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn metrics_csv(manifest: &RunManifest, reports: &[MetricsReport]) -> String {
    let mut out = manifest.comment_lines();
    out.push_str(METRICS_HEADER);
    out.push('\n');
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.seed,
            r.topology,
            r.density,
            opt(r.reachability),
            r.avg_rate_bps,
            r.max_rate_bps,
            opt(r.mean_wait_s),
            r.forced_crossings
        )
        .unwrap();
    }
    out
}

fn pair(s: &Summary) -> String {
    format!("{},{}", opt(s.mean), opt(s.stderr))
}

pub fn sweep_csv(manifest: &RunManifest, result: &SweepResult) -> String {
    let mut out = manifest.comment_lines();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for row in &result.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            row.density,
            row.topology,
            row.replications,
            pair(&row.reachability),
            pair(&row.avg_rate_bps),
            pair(&row.max_rate_bps),
            pair(&row.mean_wait_s),
            opt(row.forced_crossings.mean)
        )
        .unwrap();
    }
    out
}

/// Write to a temporary sibling, then rename over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, bytes).map_err(|e| SimError::io(path, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        SimError::io(path, e)
    })
}
