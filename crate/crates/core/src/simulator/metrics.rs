use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::Topology;
use crate::gridgen::{reachability_fraction, PowerGrid};
use crate::simulator::RateSeries;
use crate::traffic::Session;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub seed: u64,
    pub topology: Topology,
    pub density: f64,
    pub total_cells: usize,
    pub served_cells: usize,
    /// `None` when the deployment has no cells.
    pub reachability: Option<f64>,
    pub avg_rate_bps: f64,
    pub max_rate_bps: f64,
    /// Inter-request gap pooled over all served cells.
    pub mean_wait_s: Option<f64>,
    /// Mean over served cells of each cell's own mean gap.
    pub mean_wait_per_cell_s: Option<f64>,
    pub per_branch_avg_bps: Vec<f64>,
    pub forced_crossings: usize,
    /// Mean rate offered by all cells, served or not, when requested.
    pub offered_avg_bps: Option<f64>,
}

/// Summary statistics of one replication.
pub fn compute_metrics(series: &RateSeries, grid: &PowerGrid, sessions: &[Session]) -> MetricsReport {
    let max_rate_bps = series.hub.iter().copied().fold(0.0, f64::max);
    // a time mean can exceed the max only by rounding
    let avg_rate_bps = series.time_mean(&series.hub).min(max_rate_bps);
    let per_branch_avg_bps = series.branches.iter().map(|b| series.time_mean(b)).collect();

    let mut starts: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for s in sessions {
        if grid.cell(s.cell_id).is_ok_and(|c| c.served) {
            starts.entry(s.cell_id).or_default().push(s.start_s);
        }
    }
    let (mut gap_sum, mut gap_n) = (0.0, 0usize);
    let mut per_cell = Vec::new();
    for v in starts.values_mut() {
        if v.len() < 2 {
            continue;
        }
        v.sort_by(f64::total_cmp);
        let span = v[v.len() - 1] - v[0];
        let gaps = v.len() - 1;
        gap_sum += span;
        gap_n += gaps;
        per_cell.push(span / gaps as f64);
    }
    let mean_wait_s = (gap_n > 0).then(|| gap_sum / gap_n as f64);
    let mean_wait_per_cell_s =
        (!per_cell.is_empty()).then(|| per_cell.iter().sum::<f64>() / per_cell.len() as f64);

    MetricsReport {
        seed: 0,
        topology: grid.topology,
        density: f64::NAN,
        total_cells: grid.cells.len(),
        served_cells: grid.served_count(),
        reachability: reachability_fraction(grid),
        avg_rate_bps,
        max_rate_bps,
        mean_wait_s,
        mean_wait_per_cell_s,
        per_branch_avg_bps,
        forced_crossings: grid.forced_crossings,
        offered_avg_bps: None,
    }
}
