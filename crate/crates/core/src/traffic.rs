//! Session-level traffic model.
//!
//! Data volumes follow a Pareto law fitted so that a given fraction of
//! sessions is small and the top quantile carries a given share of the
//! volume; data durations follow a lognormal law fitted to two quantiles.
//! Voice calls run at a constant rate with exponential holding times.
//! Requests in each cell arrive as a Poisson process.

use rand::distr::Open01;
use rand::Rng;
use rand_distr::{Distribution, LogNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::config::SimulationConfig;
use crate::error::{Result, SimError};

/// Fits with a Pareto exponent above this are treated as infeasible (the
/// share constraint is then indistinguishable from a uniform split).
pub const ALPHA_CEILING: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeQuantiles {
    /// Fraction of sessions smaller than `small_bits`.
    pub p_small: f64,
    pub small_bits: f64,
    /// Top fraction of sessions by volume...
    pub top_q: f64,
    /// ...and the share of total volume it carries.
    pub top_share: f64,
}

impl Default for SizeQuantiles {
    fn default() -> Self {
        SizeQuantiles {
            p_small: 0.8,
            small_bits: 10_000.0,
            top_q: 0.1,
            top_share: 0.9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DurationQuantiles {
    /// Fraction of sessions shorter than `short_s`.
    pub p_short: f64,
    pub short_s: f64,
    /// Fraction of sessions longer than `long_s`.
    pub p_long: f64,
    pub long_s: f64,
}

impl Default for DurationQuantiles {
    fn default() -> Self {
        DurationQuantiles {
            p_short: 0.8,
            short_s: 11.0,
            p_long: 0.001,
            long_s: 200.0,
        }
    }
}

/// Pareto `(alpha, xm_bits)` matching both size constraints.
///
/// The top-`q` share of a Pareto law is `q^(1 - 1/alpha)`, which inverts in
/// closed form; `xm` then follows from the small-session quantile.
pub fn fit_size_distribution(q: SizeQuantiles) -> Result<(f64, f64)> {
    let SizeQuantiles {
        p_small,
        small_bits,
        top_q,
        top_share,
    } = q;
    if !(0.0 < top_q && top_q < 1.0 && 0.0 < top_share && top_share < 1.0) {
        return Err(SimError::FitFailure(format!(
            "top quantile {top_q} and share {top_share} must lie in (0, 1)"
        )));
    }
    if top_share <= top_q {
        return Err(SimError::FitFailure(format!(
            "top {top_q} of sessions must carry more than their count share (got {top_share})"
        )));
    }
    if !(0.0 < p_small && p_small < 1.0 && small_bits > 0.0) {
        return Err(SimError::FitFailure(format!(
            "small-session quantile ({p_small}, {small_bits} bits) out of range"
        )));
    }
    let alpha = 1.0 / (1.0 - top_share.ln() / top_q.ln());
    if !(alpha.is_finite() && alpha > 1.0 && alpha <= ALPHA_CEILING) {
        return Err(SimError::FitFailure(format!(
            "no finite-mean Pareto exponent fits (alpha = {alpha})"
        )));
    }
    let xm = small_bits * (1.0 - p_small).powf(1.0 / alpha);
    Ok((alpha, xm))
}

/// Lognormal `(mu, sigma)` through the two duration quantiles.
pub fn fit_duration_distribution(q: DurationQuantiles) -> Result<(f64, f64)> {
    let DurationQuantiles {
        p_short,
        short_s,
        p_long,
        long_s,
    } = q;
    if !(short_s > 0.0 && short_s < long_s) {
        return Err(SimError::FitFailure(format!(
            "need 0 < short ({short_s} s) < long ({long_s} s)"
        )));
    }
    if !(0.0 < p_short && 0.0 < p_long && p_short + p_long < 1.0) {
        return Err(SimError::FitFailure(format!(
            "quantile fractions {p_short}, {p_long} inconsistent"
        )));
    }
    let std = Normal::standard();
    let z_short = std.inverse_cdf(p_short);
    let z_long = std.inverse_cdf(1.0 - p_long);
    let sigma = (long_s.ln() - short_s.ln()) / (z_long - z_short);
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(SimError::FitFailure(format!(
            "quantiles give non-positive spread (sigma = {sigma})"
        )));
    }
    let mu = short_s.ln() - z_short * sigma;
    Ok((mu, sigma))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SessionClass {
    Voice,
    Data,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub cell_id: usize,
    pub class: SessionClass,
    pub start_s: f64,
    pub duration_s: f64,
    pub rate_bps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficModel {
    pub data_fraction: f64,
    pub pareto_alpha: f64,
    pub pareto_xm_bits: f64,
    pub lognorm_mu: f64,
    pub lognorm_sigma: f64,
    pub voice_rate_bps: f64,
    pub voice_mean_duration_s: f64,
    pub mean_interarrival_s: f64,
    pub volume_cap_bits: f64,
}

impl TrafficModel {
    /// Fit the default quantile constraints, reading "kb" in the unit the
    /// config selects.
    pub fn from_config(cfg: &SimulationConfig) -> Result<Self> {
        let size = SizeQuantiles {
            small_bits: 10.0 * cfg.size_unit.bits_per_unit(),
            ..Default::default()
        };
        let (pareto_alpha, pareto_xm_bits) = fit_size_distribution(size)?;
        let (lognorm_mu, lognorm_sigma) = fit_duration_distribution(DurationQuantiles::default())?;
        let model = TrafficModel {
            data_fraction: cfg.data_fraction,
            pareto_alpha,
            pareto_xm_bits,
            lognorm_mu,
            lognorm_sigma,
            voice_rate_bps: cfg.voice_rate_bps,
            voice_mean_duration_s: cfg.voice_mean_duration_s,
            mean_interarrival_s: cfg.mean_interarrival_s,
            volume_cap_bits: cfg.volume_cap_bits,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.pareto_alpha > 1.0 && self.pareto_xm_bits > 0.0 && self.lognorm_sigma > 0.0) {
            return Err(SimError::FitFailure(format!(
                "fitted parameters out of range: {self:?}"
            )));
        }
        if self.volume_cap_bits <= self.pareto_xm_bits {
            return Err(SimError::config(
                "volume_cap_bits",
                format!(
                    "must exceed the Pareto scale {} bits (got {})",
                    self.pareto_xm_bits, self.volume_cap_bits
                ),
            ));
        }
        if !(0.0..=1.0).contains(&self.data_fraction) {
            return Err(SimError::config("data_fraction", "must lie in [0, 1]"));
        }
        for (field, v) in [
            ("voice_rate_bps", self.voice_rate_bps),
            ("voice_mean_duration_s", self.voice_mean_duration_s),
            ("mean_interarrival_s", self.mean_interarrival_s),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(SimError::config(field, format!("must be > 0 (got {v})")));
            }
        }
        Ok(())
    }

    /// Mean of the Pareto law conditioned on `V <= volume_cap_bits`.
    pub fn truncated_volume_mean(&self) -> f64 {
        let (a, xm, cap) = (self.pareto_alpha, self.pareto_xm_bits, self.volume_cap_bits);
        let r = xm / cap;
        a * xm / (a - 1.0) * (1.0 - r.powf(a - 1.0)) / (1.0 - r.powf(a))
    }

    /// Long-run offered rate of one cell, bits/s.
    pub fn offered_rate_per_cell(&self) -> f64 {
        let data = self.data_fraction * self.truncated_volume_mean();
        let voice = (1.0 - self.data_fraction) * self.voice_rate_bps * self.voice_mean_duration_s;
        (data + voice) / self.mean_interarrival_s
    }

    /// Draw from the truncated Pareto law by inversion; support `[xm, cap]`.
    pub fn sample_volume<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (a, xm, cap) = (self.pareto_alpha, self.pareto_xm_bits, self.volume_cap_bits);
        let u: f64 = rng.sample(Open01);
        let mass = 1.0 - (xm / cap).powf(a);
        (xm * (1.0 - u * mass).powf(-1.0 / a)).clamp(xm, cap)
    }

    pub fn sample_data_duration<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        LogNormal::new(self.lognorm_mu, self.lognorm_sigma)
            .expect("sigma validated positive")
            .sample(rng)
            .max(f64::MIN_POSITIVE)
    }

    pub fn sample_data_session<R: Rng + ?Sized>(&self, rng: &mut R, cell_id: usize, start_s: f64) -> Session {
        let volume = self.sample_volume(rng);
        let duration_s = self.sample_data_duration(rng);
        Session {
            cell_id,
            class: SessionClass::Data,
            start_s,
            duration_s,
            rate_bps: volume / duration_s,
        }
    }

    pub fn sample_voice_session<R: Rng + ?Sized>(&self, rng: &mut R, cell_id: usize, start_s: f64) -> Session {
        Session {
            cell_id,
            class: SessionClass::Voice,
            start_s,
            duration_s: sample_interarrival(rng, self.voice_mean_duration_s),
            rate_bps: self.voice_rate_bps,
        }
    }
}

/// Exponential gap with the given mean; strictly positive.
pub fn sample_interarrival<R: Rng + ?Sized>(rng: &mut R, mean_s: f64) -> f64 {
    let u: f64 = rng.sample(Open01);
    -mean_s * u.ln()
}

pub fn sample_session<R: Rng + ?Sized>(rng: &mut R, model: &TrafficModel, cell_id: usize, start_s: f64) -> Session {
    if rng.random::<f64>() < model.data_fraction {
        model.sample_data_session(rng, cell_id, start_s)
    } else {
        model.sample_voice_session(rng, cell_id, start_s)
    }
}

/// Sessions of one cell whose request falls in `[0, horizon_s)`, in start
/// order. Sessions may run past the horizon.
pub fn generate_cell_sessions<R: Rng + ?Sized>(
    rng: &mut R,
    model: &TrafficModel,
    cell_id: usize,
    horizon_s: f64,
) -> Vec<Session> {
    let mut out = Vec::new();
    let mut t = 0.0;
    loop {
        t += sample_interarrival(rng, model.mean_interarrival_s);
        if t >= horizon_s {
            break;
        }
        out.push(sample_session(rng, model, cell_id, t));
    }
    out
}
