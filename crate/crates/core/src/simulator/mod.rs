//! Replication pipeline and density sweeps.

mod metrics;
mod series;
mod sweep;

pub use metrics::{compute_metrics, MetricsReport};
pub use series::{aggregate_rate_series, offered_average, RateSeries};
pub use sweep::{replication_seed, run_sweep, run_sweep_cell, run_sweep_with, Summary, SweepResult, SweepRow};

use crate::config::SimulationConfig;
use crate::deployment::{deploy, CellDeployment};
use crate::error::{Result, SimError};
use crate::gridgen::{build_grid, mark_served, PowerGrid};
use crate::seed::rng_for;
use crate::traffic::{generate_cell_sessions, Session, TrafficModel};

/// Stream keys under a replication seed.
pub const STREAM_HUB: u64 = 0;
pub const STREAM_CELLS: u64 = 1;
pub const STREAM_TRAFFIC: u64 = 2;

/// Everything one replication produced, for inspection and export.
#[derive(Debug, Clone)]
pub struct Replication {
    pub deployment: CellDeployment,
    pub grid: PowerGrid,
    pub sessions: Vec<Session>,
    pub series: RateSeries,
    pub metrics: MetricsReport,
}

/// Cells placed, sectored and wired, with served flags set.
pub fn build_layout(config: &SimulationConfig, seed: u64) -> Result<(CellDeployment, PowerGrid)> {
    config.validate()?;
    let deployment = deploy(config, &mut rng_for(seed, &[STREAM_HUB]), &mut rng_for(seed, &[STREAM_CELLS]))?;
    let mut grid = build_grid(&deployment, config.topology, config.max_wire_m);
    mark_served(&mut grid, config.max_wire_m, config.max_cells_per_branch);
    grid.check_invariants()?;
    Ok((deployment, grid))
}

/// Sessions of one cell; each cell owns its stream, so the draws do not
/// depend on which other cells are generated.
pub fn cell_sessions(model: &TrafficModel, seed: u64, cell_id: usize, horizon_s: f64) -> Vec<Session> {
    let mut rng = rng_for(seed, &[STREAM_TRAFFIC, cell_id as u64]);
    generate_cell_sessions(&mut rng, model, cell_id, horizon_s)
}

pub fn run_replication_detailed(config: &SimulationConfig, model: &TrafficModel, seed: u64) -> Result<Replication> {
    let (deployment, grid) = build_layout(config, seed)?;

    // unserved cells only matter when their offered load is reported
    let sessions: Vec<Session> = grid
        .cells
        .iter()
        .filter(|c| c.served || config.count_unserved_offered)
        .flat_map(|c| cell_sessions(model, seed, c.cell_id, config.horizon_s))
        .collect();

    let series = aggregate_rate_series(&sessions, &grid, config.dt_s, config.horizon_s);
    let mismatch = series.hub_branch_mismatch();
    if mismatch > 1e-6 {
        return Err(SimError::Invariant(format!(
            "hub series deviates from branch sum by {mismatch:e} (relative)"
        )));
    }

    let mut metrics = compute_metrics(&series, &grid, &sessions);
    metrics.seed = seed;
    metrics.density = config.density;
    if config.count_unserved_offered {
        metrics.offered_avg_bps = Some(offered_average(&sessions, config.dt_s, config.horizon_s));
    }
    Ok(Replication {
        deployment,
        grid,
        sessions,
        series,
        metrics,
    })
}

/// Deterministic pipeline for `(config, seed)`: hub, cells, sectors, grid,
/// service, traffic, aggregation, metrics.
pub fn run_replication(config: &SimulationConfig, seed: u64) -> Result<MetricsReport> {
    config.validate()?;
    let model = TrafficModel::from_config(config)?;
    run_replication_detailed(config, &model, seed).map(|r| r.metrics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Topology;

    fn short(config: SimulationConfig) -> SimulationConfig {
        SimulationConfig {
            horizon_s: 600.0,
            ..config
        }
    }

    #[test]
    fn empty_deployment() {
        let cfg = short(SimulationConfig {
            density: 0.0,
            ..Default::default()
        });
        let m = run_replication(&cfg, 1).unwrap();
        assert_eq!(m.reachability, None);
        assert_eq!(m.total_cells, 0);
        assert_eq!((m.avg_rate_bps, m.max_rate_bps), (0.0, 0.0));
        assert_eq!(m.mean_wait_s, None);
    }

    #[test]
    fn deterministic() {
        for topology in Topology::ALL {
            let cfg = short(SimulationConfig {
                topology,
                ..Default::default()
            });
            assert_eq!(run_replication(&cfg, 42).unwrap(), run_replication(&cfg, 42).unwrap());
        }
    }

    #[test]
    fn invalid_config_propagates() {
        let cfg = SimulationConfig {
            dt_s: -1.0,
            ..Default::default()
        };
        assert!(matches!(run_replication(&cfg, 1), Err(SimError::InvalidConfig { .. })));
    }

    #[test]
    fn offered_load_reported_on_request() {
        let cfg = short(SimulationConfig {
            count_unserved_offered: true,
            max_cells_per_branch: 5,
            ..Default::default()
        });
        let m = run_replication(&cfg, 3).unwrap();
        let offered = m.offered_avg_bps.unwrap();
        assert!(offered > m.avg_rate_bps);
        let plain = run_replication(&SimulationConfig { count_unserved_offered: false, ..cfg }, 3).unwrap();
        assert_eq!(plain.avg_rate_bps, m.avg_rate_bps);
        assert_eq!(plain.offered_avg_bps, None);
    }
}
