use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{SimulationConfig, Topology};
use crate::error::Result;
use crate::seed::derive_seed;
use crate::simulator::{run_replication_detailed, MetricsReport};
use crate::traffic::TrafficModel;

/// Seed of replication `rep` at density position `density_index` for
/// `topology`: `derive_seed(master, [density_index, topology.index(), rep])`.
/// Positional, so any single cell of a sweep can be rerun on its own.
pub fn replication_seed(master: u64, density_index: usize, topology: Topology, rep: usize) -> u64 {
    derive_seed(master, &[density_index as u64, topology.index(), rep as u64])
}

/// Mean and standard error over the replications that produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: Option<f64>,
    pub stderr: Option<f64>,
}

impl Summary {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let v: Vec<f64> = values.into_iter().collect();
        let n = v.len();
        if n == 0 {
            return Summary {
                n,
                mean: None,
                stderr: None,
            };
        }
        let mean = v.iter().sum::<f64>() / n as f64;
        let stderr = (n >= 2).then(|| {
            let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        });
        Summary {
            n,
            mean: Some(mean),
            stderr,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub density_index: usize,
    pub density: f64,
    pub topology: Topology,
    pub replications: usize,
    pub reachability: Summary,
    pub avg_rate_bps: Summary,
    pub max_rate_bps: Summary,
    pub mean_wait_s: Summary,
    pub forced_crossings: Summary,
}

impl SweepRow {
    fn from_reports(density_index: usize, density: f64, topology: Topology, reports: &[MetricsReport]) -> Self {
        SweepRow {
            density_index,
            density,
            topology,
            replications: reports.len(),
            reachability: Summary::of(reports.iter().filter_map(|r| r.reachability)),
            avg_rate_bps: Summary::of(reports.iter().map(|r| r.avg_rate_bps)),
            max_rate_bps: Summary::of(reports.iter().map(|r| r.max_rate_bps)),
            mean_wait_s: Summary::of(reports.iter().filter_map(|r| r.mean_wait_s)),
            forced_crossings: Summary::of(reports.iter().map(|r| r.forced_crossings as f64)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub master_seed: u64,
    pub rows: Vec<SweepRow>,
}

fn replicate(
    config: &SimulationConfig,
    model: &TrafficModel,
    densities: &[f64],
    density_index: usize,
    topology: Topology,
    rep: usize,
) -> Result<MetricsReport> {
    let cfg = SimulationConfig {
        density: densities[density_index],
        topology,
        ..config.clone()
    };
    let seed = replication_seed(config.master_seed, density_index, topology, rep);
    run_replication_detailed(&cfg, model, seed).map(|r| r.metrics)
}

/// One `(density, topology)` row, independent of the rest of the sweep.
pub fn run_sweep_cell(
    config: &SimulationConfig,
    densities: &[f64],
    density_index: usize,
    topology: Topology,
    replications: usize,
) -> Result<SweepRow> {
    config.validate()?;
    let model = TrafficModel::from_config(config)?;
    let reports = (0..replications)
        .map(|k| replicate(config, &model, densities, density_index, topology, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepRow::from_reports(density_index, densities[density_index], topology, &reports))
}

/// Every density × topology combination, `replications` times each. Rows
/// come out density-major in the order given.
pub fn run_sweep(
    config: &SimulationConfig,
    densities: &[f64],
    topologies: &[Topology],
    replications: usize,
) -> Result<SweepResult> {
    run_sweep_with(config, densities, topologies, replications, true)
}

pub fn run_sweep_with(
    config: &SimulationConfig,
    densities: &[f64],
    topologies: &[Topology],
    replications: usize,
    parallel: bool,
) -> Result<SweepResult> {
    config.validate()?;
    if replications < 1 {
        return Err(crate::SimError::config("replications", "must be >= 1"));
    }
    for (i, &d) in densities.iter().enumerate() {
        SimulationConfig {
            density: d,
            ..config.clone()
        }
        .validate()
        .map_err(|e| crate::SimError::config("density", format!("entry {i}: {e}")))?;
    }
    let model = TrafficModel::from_config(config)?;

    let jobs: Vec<(usize, Topology, usize)> = (0..densities.len())
        .flat_map(|i| topologies.iter().flat_map(move |&t| (0..replications).map(move |k| (i, t, k))))
        .collect();
    let run = |&(i, t, k): &(usize, Topology, usize)| replicate(config, &model, densities, i, t, k);
    let reports: Vec<MetricsReport> = if parallel {
        jobs.par_iter().map(run).collect::<Result<_>>()?
    } else {
        jobs.iter().map(run).collect::<Result<_>>()?
    };

    let rows = reports
        .chunks(replications)
        .zip(jobs.iter().step_by(replications))
        .map(|(chunk, &(i, t, _))| SweepRow::from_reports(i, densities[i], t, chunk))
        .collect();
    Ok(SweepResult {
        master_seed: config.master_seed,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SimulationConfig {
        SimulationConfig {
            horizon_s: 200.0,
            master_seed: 99,
            ..Default::default()
        }
    }

    #[test]
    fn summary_stats() {
        let s = Summary::of([1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, Some(2.5));
        let expected = (5.0f64 / 3.0 / 4.0).sqrt();
        assert!((s.stderr.unwrap() - expected).abs() < 1e-15);
        assert_eq!(Summary::of([7.0]).stderr, None);
        assert_eq!(Summary::of([]).mean, None);
    }

    #[test]
    fn shape_and_single_rep() {
        let r = run_sweep(&quick(), &[0.1, 0.25], &Topology::ALL, 1).unwrap();
        assert_eq!(r.rows.len(), 6);
        assert!(r.rows.iter().all(|row| row.reachability.stderr.is_none() && row.replications == 1));
        assert_eq!(r.rows[4].density, 0.25);
        assert_eq!(r.rows[4].topology, Topology::Tree);
    }

    #[test]
    fn rows_reproducible_in_isolation() {
        let densities = [0.05, 0.1];
        let r = run_sweep(&quick(), &densities, &[Topology::Chain, Topology::Bus], 3).unwrap();
        let row = run_sweep_cell(&quick(), &densities, 1, Topology::Bus, 3).unwrap();
        assert_eq!(r.rows[3], row);
    }

    #[test]
    fn parallel_matches_sequential() {
        let a = run_sweep_with(&quick(), &[0.1], &Topology::ALL, 4, true).unwrap();
        let b = run_sweep_with(&quick(), &[0.1], &Topology::ALL, 4, false).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_reps_rejected() {
        assert!(run_sweep(&quick(), &[0.1], &Topology::ALL, 0).is_err());
    }
}
