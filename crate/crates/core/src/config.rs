//! Scenario parameters and their validation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    Bus,
    Tree,
    Chain,
}

impl Topology {
    pub const ALL: [Topology; 3] = [Topology::Bus, Topology::Tree, Topology::Chain];

    /// Stable index used in seed derivation; independent of CLI list order.
    pub fn index(self) -> u64 {
        match self {
            Topology::Bus => 0,
            Topology::Tree => 1,
            Topology::Chain => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Topology::Bus => "bus",
            Topology::Tree => "tree",
            Topology::Chain => "chain",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Topology {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "bus" => Ok(Topology::Bus),
            "tree" => Ok(Topology::Tree),
            "chain" => Ok(Topology::Chain),
            other => Err(SimError::config(
                "topology",
                format!("must be one of bus, tree, chain (got `{other}`)"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HubMode {
    Center,
    UniformRandom,
}

impl FromStr for HubMode {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "center" => Ok(HubMode::Center),
            "uniform-random" | "uniform" => Ok(HubMode::UniformRandom),
            other => Err(SimError::config(
                "hub_mode",
                format!("must be `center` or `uniform-random` (got `{other}`)"),
            )),
        }
    }
}

/// How the "kb" in the packet-size statistics is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SizeUnit {
    /// 1 kb = 1000 bits.
    Kilobits,
    /// 1 kB = 8000 bits.
    Kilobytes,
}

impl SizeUnit {
    pub fn bits_per_unit(self) -> f64 {
        match self {
            SizeUnit::Kilobits => 1e3,
            SizeUnit::Kilobytes => 8e3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub side_m: f64,
    pub density: f64,
    pub cell_area_m2: f64,
    pub n_branches: usize,
    /// Wedge anchor for sector 0, radians counter-clockwise from east.
    pub sector_anchor_rad: f64,
    pub max_wire_m: f64,
    pub max_cells_per_branch: usize,
    pub hub_mode: HubMode,
    pub topology: Topology,
    pub mean_interarrival_s: f64,
    pub data_fraction: f64,
    pub voice_rate_bps: f64,
    pub voice_mean_duration_s: f64,
    pub volume_cap_bits: f64,
    pub size_unit: SizeUnit,
    pub horizon_s: f64,
    pub dt_s: f64,
    pub replications: usize,
    pub master_seed: u64,
    /// Also report the load offered by unserved cells.
    pub count_unserved_offered: bool,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            side_m: 700.0,
            density: 0.25,
            cell_area_m2: 400.0,
            n_branches: 6,
            sector_anchor_rad: 0.0,
            max_wire_m: 300.0,
            max_cells_per_branch: 35,
            hub_mode: HubMode::Center,
            topology: Topology::Bus,
            mean_interarrival_s: 10.0,
            data_fraction: 0.97,
            voice_rate_bps: 128_000.0,
            voice_mean_duration_s: 100.0,
            volume_cap_bits: 1e9,
            size_unit: SizeUnit::Kilobits,
            horizon_s: 3600.0,
            dt_s: 1.0,
            replications: 1,
            master_seed: 1,
            count_unserved_offered: false,
        }
    }
}

fn positive(field: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(SimError::config(field, format!("must be a finite value > 0 (got {v})")))
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        positive("side_m", self.side_m)?;
        positive("cell_area_m2", self.cell_area_m2)?;
        if !(self.density.is_finite() && self.density >= 0.0) {
            return Err(SimError::config(
                "density",
                format!("must be a finite value >= 0 (got {})", self.density),
            ));
        }
        if self.n_branches < 1 {
            return Err(SimError::config("n_branches", "must be >= 1"));
        }
        if !self.sector_anchor_rad.is_finite() {
            return Err(SimError::config("sector_anchor_rad", "must be finite"));
        }
        positive("max_wire_m", self.max_wire_m)?;
        if self.max_cells_per_branch < 1 {
            return Err(SimError::config("max_cells_per_branch", "must be >= 1"));
        }
        positive("mean_interarrival_s", self.mean_interarrival_s)?;
        if !(0.0..=1.0).contains(&self.data_fraction) {
            return Err(SimError::config(
                "data_fraction",
                format!("must lie in [0, 1] (got {})", self.data_fraction),
            ));
        }
        positive("voice_rate_bps", self.voice_rate_bps)?;
        positive("voice_mean_duration_s", self.voice_mean_duration_s)?;
        positive("volume_cap_bits", self.volume_cap_bits)?;
        positive("dt_s", self.dt_s)?;
        positive("horizon_s", self.horizon_s)?;
        if self.horizon_s < self.dt_s {
            return Err(SimError::config(
                "horizon_s",
                format!("must be >= dt_s ({} < {})", self.horizon_s, self.dt_s),
            ));
        }
        if self.replications < 1 {
            return Err(SimError::config("replications", "must be >= 1"));
        }
        Ok(())
    }
}

/// A sparse set of config values, as read from a file or from flags.
/// Layers are applied over [`SimulationConfig::default`] in precedence order.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub side_m: Option<f64>,
    pub density: Option<f64>,
    pub cell_area_m2: Option<f64>,
    pub n_branches: Option<usize>,
    pub sector_anchor_rad: Option<f64>,
    pub max_wire_m: Option<f64>,
    pub max_cells_per_branch: Option<usize>,
    pub hub_mode: Option<HubMode>,
    pub topology: Option<Topology>,
    pub mean_interarrival_s: Option<f64>,
    pub data_fraction: Option<f64>,
    pub voice_rate_bps: Option<f64>,
    pub voice_mean_duration_s: Option<f64>,
    pub volume_cap_bits: Option<f64>,
    pub size_unit: Option<SizeUnit>,
    pub horizon_s: Option<f64>,
    pub dt_s: Option<f64>,
    pub replications: Option<usize>,
    pub master_seed: Option<u64>,
    pub count_unserved_offered: Option<bool>,
}

macro_rules! overlay {
    ($layer:expr, $cfg:expr, $($field:ident),* $(,)?) => {
        $( if let Some(v) = $layer.$field { $cfg.$field = v; } )*
    };
}

impl ConfigLayer {
    pub fn apply_to(&self, cfg: &mut SimulationConfig) {
        overlay!(
            self.clone(),
            cfg,
            side_m,
            density,
            cell_area_m2,
            n_branches,
            sector_anchor_rad,
            max_wire_m,
            max_cells_per_branch,
            hub_mode,
            topology,
            mean_interarrival_s,
            data_fraction,
            voice_rate_bps,
            voice_mean_duration_s,
            volume_cap_bits,
            size_unit,
            horizon_s,
            dt_s,
            replications,
            master_seed,
            count_unserved_offered,
        );
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| SimError::ConfigParse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        SimulationConfig::default().validate().unwrap();
    }

    #[test]
    fn zero_dt_names_the_field() {
        let cfg = SimulationConfig {
            dt_s: 0.0,
            ..Default::default()
        };
        let err = cfg.validate().unwrap_err();
        assert!(matches!(err, SimError::InvalidConfig { field: "dt_s", .. }));
        assert!(err.to_string().contains("dt_s"));
    }

    #[test]
    fn horizon_shorter_than_step_is_rejected() {
        let cfg = SimulationConfig {
            horizon_s: 0.5,
            ..Default::default()
        };
        assert!(matches!(
            cfg.validate(),
            Err(SimError::InvalidConfig { field: "horizon_s", .. })
        ));
    }

    #[test]
    fn unknown_key_lists_valid_keys() {
        let err = ConfigLayer::from_toml("sidee_m = 3.0").unwrap_err().to_string();
        assert!(err.contains("sidee_m"), "{err}");
        assert!(err.contains("side_m"), "{err}");
    }

    #[test]
    fn layer_overrides_only_present_fields() {
        let layer = ConfigLayer::from_toml("density = 0.5\ntopology = \"chain\"").unwrap();
        let mut cfg = SimulationConfig::default();
        layer.apply_to(&mut cfg);
        assert_eq!(cfg.density, 0.5);
        assert_eq!(cfg.topology, Topology::Chain);
        assert_eq!(cfg.side_m, 700.0);
    }
}
