//! Random small-cell layouts and their angular partition into sectors.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::{HubMode, SimulationConfig};
use crate::error::{Result, SimError};
use crate::geometry::Point;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub id: usize,
    pub x_m: f64,
    pub y_m: f64,
    pub radius_m: f64,
    /// Main-branch index; meaningful once the deployment has been sectored.
    pub sector: usize,
}

impl Cell {
    pub fn pos(&self) -> Point {
        Point::new(self.x_m, self.y_m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellDeployment {
    pub side_m: f64,
    pub hub: Point,
    pub cells: Vec<Cell>,
    /// Number of sectors the cells were partitioned into; 0 before
    /// [`assign_sectors`] ran.
    pub n_sectors: usize,
    pub sector_anchor_rad: f64,
}

impl CellDeployment {
    pub fn new(side_m: f64, hub: Point, cells: Vec<Cell>) -> Self {
        CellDeployment {
            side_m,
            hub,
            cells,
            n_sectors: 0,
            sector_anchor_rad: 0.0,
        }
    }

    pub fn sector_width(&self) -> f64 {
        TAU / self.n_sectors as f64
    }

    /// Direction of the bisector of `sector`, radians from east.
    pub fn bisector_angle(&self, sector: usize) -> f64 {
        self.sector_anchor_rad + (sector as f64 + 0.5) * self.sector_width()
    }

    pub fn sector_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_sectors];
        for c in &self.cells {
            counts[c.sector] += 1;
        }
        counts
    }
}

/// `floor(density · side² / cell_area)`.
pub fn cell_count(density: f64, side_m: f64, cell_area_m2: f64) -> Result<usize> {
    if !(side_m.is_finite() && side_m > 0.0) {
        return Err(SimError::config("side_m", format!("must be > 0 (got {side_m})")));
    }
    if !(cell_area_m2.is_finite() && cell_area_m2 > 0.0) {
        return Err(SimError::config(
            "cell_area_m2",
            format!("must be > 0 (got {cell_area_m2})"),
        ));
    }
    if !(density.is_finite() && density >= 0.0) {
        return Err(SimError::config("density", format!("must be >= 0 (got {density})")));
    }
    Ok((density * side_m * side_m / cell_area_m2).floor() as usize)
}

pub fn coverage_radius(cell_area_m2: f64) -> f64 {
    (cell_area_m2 / PI).sqrt()
}

/// Independent uniform positions on `[0, side]²` (a binomial point process).
/// Coverage disks may overlap.
pub fn place_cells<R: Rng + ?Sized>(
    count: usize,
    side_m: f64,
    cell_area_m2: f64,
    rng: &mut R,
) -> Vec<Cell> {
    let radius_m = coverage_radius(cell_area_m2);
    (0..count)
        .map(|id| {
            let x_m = rng.random::<f64>() * side_m;
            let y_m = rng.random::<f64>() * side_m;
            Cell {
                id,
                x_m,
                y_m,
                radius_m,
                sector: 0,
            }
        })
        .collect()
}

pub fn place_hub<R: Rng + ?Sized>(config: &SimulationConfig, rng: &mut R) -> Point {
    let s = config.side_m;
    match config.hub_mode {
        HubMode::Center => Point::new(s / 2.0, s / 2.0),
        HubMode::UniformRandom => {
            let x = rng.random::<f64>() * s;
            let y = rng.random::<f64>() * s;
            Point::new(x, y)
        }
    }
}

/// Sector of a point at polar angle `theta` (about the hub, already reduced
/// to [0, 2π) relative to the anchor). Bins are `(k·w, (k+1)·w]` except that
/// sector 0 also owns the anchor ray itself, so a point exactly on a boundary
/// goes to the lower index.
pub fn sector_of_angle(theta: f64, n_sectors: usize) -> usize {
    if theta <= 0.0 {
        return 0;
    }
    let w = TAU / n_sectors as f64;
    let k = (theta / w).ceil() as usize;
    k.saturating_sub(1).min(n_sectors - 1)
}

/// Label each cell with the angular wedge it falls into. A cell coincident
/// with the hub goes to sector 0.
pub fn assign_sectors(deployment: &mut CellDeployment, n_branches: usize, anchor_rad: f64) -> Result<()> {
    if n_branches < 1 {
        return Err(SimError::config("n_branches", "must be >= 1"));
    }
    deployment.n_sectors = n_branches;
    deployment.sector_anchor_rad = anchor_rad;
    let hub = deployment.hub;
    for cell in &mut deployment.cells {
        let p = cell.pos();
        cell.sector = if p == hub {
            0
        } else {
            let theta = (p.angle_from(hub) - anchor_rad).rem_euclid(TAU);
            sector_of_angle(theta, n_branches)
        };
    }
    Ok(())
}

/// Hub, cells and sectors for one replication, drawing positions from the
/// two given streams.
pub fn deploy<R: Rng + ?Sized>(
    config: &SimulationConfig,
    hub_rng: &mut R,
    cell_rng: &mut R,
) -> Result<CellDeployment> {
    let n = cell_count(config.density, config.side_m, config.cell_area_m2)?;
    let hub = place_hub(config, hub_rng);
    let cells = place_cells(n, config.side_m, config.cell_area_m2, cell_rng);
    let mut deployment = CellDeployment::new(config.side_m, hub, cells);
    assign_sectors(&mut deployment, config.n_branches, config.sector_anchor_rad)?;
    Ok(deployment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng_for;

    #[test]
    fn cell_count_examples() {
        assert_eq!(cell_count(0.25, 700.0, 400.0).unwrap(), 306);
        assert_eq!(cell_count(0.0, 700.0, 400.0).unwrap(), 0);
        assert_eq!(cell_count(1.0, 700.0, 400.0).unwrap(), 1225);
    }

    #[test]
    fn cell_count_rejects_bad_geometry() {
        assert!(cell_count(0.25, 0.0, 400.0).is_err());
        assert!(cell_count(0.25, 700.0, -1.0).is_err());
    }

    #[test]
    fn empty_placement() {
        let mut rng = rng_for(1, &[]);
        assert!(place_cells(0, 700.0, 400.0, &mut rng).is_empty());
    }

    #[test]
    fn placement_mean_is_half_side() {
        let mut rng = rng_for(11, &[]);
        let cells = place_cells(100_000, 700.0, 400.0, &mut rng);
        let mx = cells.iter().map(|c| c.x_m).sum::<f64>() / cells.len() as f64;
        let my = cells.iter().map(|c| c.y_m).sum::<f64>() / cells.len() as f64;
        // CLT: sd(mean) = 700/sqrt(12 * 1e5) ≈ 0.64
        assert!((mx - 350.0).abs() < 1.0, "{mx}");
        assert!((my - 350.0).abs() < 1.0, "{my}");
        assert!(cells
            .iter()
            .all(|c| (0.0..=700.0).contains(&c.x_m) && (0.0..=700.0).contains(&c.y_m)));
    }

    #[test]
    fn placement_is_deterministic() {
        let a = place_cells(50, 700.0, 400.0, &mut rng_for(3, &[1]));
        let b = place_cells(50, 700.0, 400.0, &mut rng_for(3, &[1]));
        assert_eq!(a, b);
        let r = a[0].radius_m;
        assert!((PI * r * r - 400.0).abs() < 1e-9);
    }

    #[test]
    fn center_hub() {
        let cfg = SimulationConfig::default();
        let hub = place_hub(&cfg, &mut rng_for(0, &[]));
        assert_eq!(hub, Point::new(350.0, 350.0));
    }

    #[test]
    fn uniform_hub_mean_and_repro() {
        let cfg = SimulationConfig {
            hub_mode: HubMode::UniformRandom,
            ..Default::default()
        };
        let mut rng = rng_for(5, &[]);
        let (mut sx, mut sy) = (0.0, 0.0);
        let n = 100_000;
        for _ in 0..n {
            let h = place_hub(&cfg, &mut rng);
            sx += h.x;
            sy += h.y;
        }
        assert!((sx / n as f64 - 350.0).abs() < 1.0);
        assert!((sy / n as f64 - 350.0).abs() < 1.0);
        assert_eq!(
            place_hub(&cfg, &mut rng_for(9, &[])),
            place_hub(&cfg, &mut rng_for(9, &[]))
        );
    }

    fn single(x: f64, y: f64) -> CellDeployment {
        CellDeployment::new(
            100.0,
            Point::new(0.0, 0.0),
            vec![Cell {
                id: 0,
                x_m: x,
                y_m: y,
                radius_m: 1.0,
                sector: 0,
            }],
        )
    }

    fn sector_at_deg(deg: f64) -> usize {
        let r = deg.to_radians();
        let mut d = single(10.0 * r.cos(), 10.0 * r.sin());
        assign_sectors(&mut d, 6, 0.0).unwrap();
        d.cells[0].sector
    }

    #[test]
    fn sector_bins() {
        assert_eq!(sector_at_deg(0.1f64.to_degrees()), 0);
        assert_eq!(sector_at_deg(59.9), 0);
        assert_eq!(sector_at_deg(60.1), 1);
        assert_eq!(sector_at_deg(359.9), 5);
        assert_eq!(sector_at_deg(-0.1), 5);
    }

    #[test]
    fn boundary_goes_to_lower_sector() {
        assert_eq!(sector_of_angle(TAU / 6.0, 6), 0);
        assert_eq!(sector_of_angle(2.0 * TAU / 6.0, 6), 1);
        assert_eq!(sector_of_angle(0.0, 6), 0);
        assert_eq!(sector_of_angle(TAU - 1e-12, 6), 5);
    }

    #[test]
    fn cell_on_hub_gets_sector_zero() {
        let mut d = single(0.0, 0.0);
        assign_sectors(&mut d, 6, 1.0).unwrap();
        assert_eq!(d.cells[0].sector, 0);
    }

    #[test]
    fn sectors_partition_the_cells() {
        let cfg = SimulationConfig::default();
        let d = deploy(&cfg, &mut rng_for(2, &[0]), &mut rng_for(2, &[1])).unwrap();
        assert_eq!(d.cells.len(), 306);
        assert_eq!(d.sector_counts().iter().sum::<usize>(), 306);
        assert!(d.cells.iter().all(|c| c.sector < 6));
    }
}
