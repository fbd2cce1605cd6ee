use serde::{Deserialize, Serialize};

use crate::gridgen::PowerGrid;
use crate::traffic::Session;

/// Aggregate rate per time step at the hub and on each main branch.
///
/// Step `i` covers `[i·dt, (i+1)·dt)`; the final step is clipped at the
/// horizon when `dt` does not divide it. Each value is the mean rate over
/// its step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateSeries {
    pub dt_s: f64,
    pub horizon_s: f64,
    pub hub: Vec<f64>,
    pub branches: Vec<Vec<f64>>,
}

impl RateSeries {
    pub fn zeros(dt_s: f64, horizon_s: f64, n_branches: usize) -> Self {
        let n = (horizon_s / dt_s).ceil() as usize;
        RateSeries {
            dt_s,
            horizon_s,
            hub: vec![0.0; n],
            branches: vec![vec![0.0; n]; n_branches],
        }
    }

    pub fn len(&self) -> usize {
        self.hub.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hub.is_empty()
    }

    pub fn step_span(&self, i: usize) -> (f64, f64) {
        let t0 = i as f64 * self.dt_s;
        let t1 = ((i + 1) as f64 * self.dt_s).min(self.horizon_s);
        (t0, t1)
    }

    /// Time-weighted mean of a step series over the horizon.
    pub fn time_mean(&self, values: &[f64]) -> f64 {
        let bits: f64 = values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let (t0, t1) = self.step_span(i);
                v * (t1 - t0)
            })
            .sum();
        bits / self.horizon_s
    }

    /// Largest relative gap between the hub series and the sum of branches.
    pub fn hub_branch_mismatch(&self) -> f64 {
        (0..self.len())
            .map(|i| {
                let sum: f64 = self.branches.iter().map(|b| b[i]).sum();
                let scale = self.hub[i].abs().max(sum.abs()).max(1.0);
                (self.hub[i] - sum).abs() / scale
            })
            .fold(0.0, f64::max)
    }

    /// Spread `rate_bps` over `[start, end)` ∩ `[0, horizon)`, prorating
    /// partially covered steps.
    fn add(&mut self, branch: Option<usize>, start: f64, end: f64, rate_bps: f64) {
        let s = start.max(0.0);
        let e = end.min(self.horizon_s);
        if e <= s {
            return;
        }
        let first = (s / self.dt_s).floor() as usize;
        let last = ((e / self.dt_s).ceil() as usize).min(self.len());
        for i in first..last {
            let (t0, t1) = self.step_span(i);
            let overlap = e.min(t1) - s.max(t0);
            if overlap <= 0.0 {
                continue;
            }
            let v = rate_bps * overlap / (t1 - t0);
            self.hub[i] += v;
            if let Some(b) = branch {
                self.branches[b][i] += v;
            }
        }
    }
}

/// Step series of the traffic served cells feed into the grid. Sessions of
/// unserved cells, or of cells absent from the grid, contribute nothing.
pub fn aggregate_rate_series(sessions: &[Session], grid: &PowerGrid, dt_s: f64, horizon_s: f64) -> RateSeries {
    let mut series = RateSeries::zeros(dt_s, horizon_s, grid.branch_count());
    for s in sessions {
        let Ok(cell) = grid.cell(s.cell_id) else {
            continue;
        };
        if !cell.served {
            continue;
        }
        series.add(Some(cell.branch), s.start_s, s.start_s + s.duration_s, s.rate_bps);
    }
    series
}

/// Mean rate over the horizon of all `sessions`, served or not.
pub fn offered_average(sessions: &[Session], dt_s: f64, horizon_s: f64) -> f64 {
    let mut series = RateSeries::zeros(dt_s, horizon_s, 0);
    for s in sessions {
        series.add(None, s.start_s, s.start_s + s.duration_s, s.rate_bps);
    }
    series.time_mean(&series.hub)
}
