//! Probability that the source–target overlap exceeds x̄ when the target's
//! polar angle θ on the (2N−1)-sphere follows a prior density.
//!
//! Prob(x ≥ x̄) = ∫₀^{acos x̄} ρ(θ) sin^{2N−2}θ dθ / ∫₀^{π/2} ρ(θ) sin^{2N−2}θ dθ.
//! Any normalization of ρ cancels in the ratio.

mod quadrature;
mod recurrence;

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::ProbabilityValue;
use crate::error::{Error, Result};

pub use quadrature::{integrate_log, LogIntegral};
pub use recurrence::{ln_sin_power_full, ln_sin_power_integral};

pub const DEFAULT_DAMPING_BASE: f64 = 10.0;
pub const QUADRATURE_REL_TOL: f64 = 1e-10;
/// Relative error estimate above which a quadrature counts as failed.
pub const QUADRATURE_FAILURE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum PriorKind {
    /// exp(−θ²/2σ²) / (1 + (b sin θ)^k), b = 10 and k = 2N − 2 by default.
    DampedGaussian {
        sigma_sq: f64,
        damping_base: f64,
        damping_exponent: f64,
    },
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PriorSpec {
    hilbert_dim: u32,
    kind: PriorKind,
}

impl PriorSpec {
    pub fn uniform(hilbert_dim: u32) -> Result<Self> {
        validate_dim(hilbert_dim)?;
        Ok(Self {
            hilbert_dim,
            kind: PriorKind::Uniform,
        })
    }

    pub fn damped_gaussian(hilbert_dim: u32, sigma_sq: f64) -> Result<Self> {
        validate_dim(hilbert_dim)?;
        Self::with_damping(
            hilbert_dim,
            sigma_sq,
            DEFAULT_DAMPING_BASE,
            2.0 * (hilbert_dim as f64 - 1.0),
        )
    }

    pub fn with_damping(hilbert_dim: u32, sigma_sq: f64, damping_base: f64, damping_exponent: f64) -> Result<Self> {
        validate_dim(hilbert_dim)?;
        if !(sigma_sq > 0.0 && sigma_sq.is_finite()) {
            return Err(Error::domain("sigma_sq", "finite and > 0", sigma_sq));
        }
        if !(damping_base > 0.0 && damping_base.is_finite()) {
            return Err(Error::domain("damping_base", "finite and > 0", damping_base));
        }
        if !(damping_exponent > 0.0 && damping_exponent.is_finite()) {
            return Err(Error::domain("damping_exponent", "finite and > 0", damping_exponent));
        }
        Ok(Self {
            hilbert_dim,
            kind: PriorKind::DampedGaussian {
                sigma_sq,
                damping_base,
                damping_exponent,
            },
        })
    }

    pub fn hilbert_dim(&self) -> u32 {
        self.hilbert_dim
    }

    pub fn kind(&self) -> PriorKind {
        self.kind
    }

    /// 2N − 2, the power of sin θ in the surface measure.
    pub fn measure_exponent(&self) -> u32 {
        2 * self.hilbert_dim - 2
    }
}

fn validate_dim(n: u32) -> Result<()> {
    if n >= 2 {
        Ok(())
    } else {
        Err(Error::domain("hilbert_dim", "N >= 2", n as f64))
    }
}

fn validate_theta(theta: f64) -> Result<()> {
    if (0.0..=FRAC_PI_2).contains(&theta) {
        Ok(())
    } else {
        Err(Error::domain("theta", "0 <= theta <= pi/2", theta))
    }
}

fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn ln_density(spec: &PriorSpec, theta: f64) -> f64 {
    match spec.kind {
        PriorKind::Uniform => 0.0,
        PriorKind::DampedGaussian {
            sigma_sq,
            damping_base,
            damping_exponent,
        } => {
            let z = damping_exponent * (damping_base * theta.sin()).ln();
            -theta * theta / (2.0 * sigma_sq) - softplus(z)
        }
    }
}

fn ln_integrand(spec: &PriorSpec, theta: f64) -> f64 {
    ln_density(spec, theta) + spec.measure_exponent() as f64 * theta.sin().ln()
}

/// Unnormalized ρ(θ).
pub fn density(spec: &PriorSpec, theta: f64) -> Result<f64> {
    validate_theta(theta)?;
    Ok(ln_density(spec, theta).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    pub log_space_used: bool,
}

fn checked(r: LogIntegral) -> Result<LogIntegral> {
    let rel = r.relative_error();
    if rel > QUADRATURE_FAILURE || rel.is_nan() {
        Err(Error::Quadrature { estimate: rel })
    } else {
        Ok(r)
    }
}

pub fn prob_overlap_at_least(spec: &PriorSpec, x_bar: f64) -> Result<QuadratureResult> {
    if !(x_bar > 0.0 && x_bar < 1.0) {
        return Err(Error::domain("x_bar", "0 < x_bar < 1", x_bar));
    }
    let f = |theta: f64| ln_integrand(spec, theta);
    let num = checked(integrate_log(f, 0.0, x_bar.acos(), QUADRATURE_REL_TOL)?)?;
    let den = checked(integrate_log(f, 0.0, FRAC_PI_2, QUADRATURE_REL_TOL)?)?;
    if den.ln_value == f64::NEG_INFINITY {
        return Err(Error::Numeric("prior integrand vanishes on [0, pi/2]".into()));
    }
    let value = ProbabilityValue::from_raw((num.ln_value - den.ln_value).exp())?.value();
    Ok(QuadratureResult {
        value,
        abs_error_estimate: value * (num.relative_error() + den.relative_error()),
        evaluations: num.evaluations + den.evaluations,
        log_space_used: num.log_space_used || den.log_space_used,
    })
}

/// 𝒩 with ∫₀^{π/2} 𝒩 ρ(θ) dθ = 1; 2/π for the uniform prior.
pub fn normalization_constant(spec: &PriorSpec) -> Result<f64> {
    if let PriorKind::Uniform = spec.kind {
        return Ok(2.0 / PI);
    }
    let r = checked(integrate_log(
        |theta| ln_density(spec, theta),
        0.0,
        FRAC_PI_2,
        QUADRATURE_REL_TOL,
    )?)?;
    Ok((-r.ln_value).exp())
}

/// Uniform-prior probability from the sin-power recurrence, independent of
/// the quadrature.
pub fn uniform_prob_closed_check(hilbert_dim: u32, x_bar: f64) -> Result<f64> {
    validate_dim(hilbert_dim)?;
    if !(0.0..=1.0).contains(&x_bar) {
        return Err(Error::domain("x_bar", "0 <= x_bar <= 1", x_bar));
    }
    let m = 2 * hilbert_dim - 2;
    let a = x_bar.acos().min(FRAC_PI_2);
    let ratio = (ln_sin_power_integral(m, a)? - ln_sin_power_full(m)).exp();
    Ok(ratio.min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub spec: PriorSpec,
    pub x_bar: f64,
    pub result: QuadratureResult,
}

/// Evaluates each (spec, x̄) pair in parallel; output keeps input order.
pub fn prob_overlap_sweep(points: &[(PriorSpec, f64)]) -> Result<Vec<SweepPoint>> {
    points
        .par_iter()
        .map(|&(spec, x_bar)| {
            Ok(SweepPoint {
                spec,
                x_bar,
                result: prob_overlap_at_least(&spec, x_bar)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_values() {
        let g = PriorSpec::damped_gaussian(16, 1.0).unwrap();
        assert_eq!(density(&g, 0.0).unwrap(), 1.0);
        let t = PI / 4.0;
        let expected = (-PI * PI / 32.0).exp() / (1.0 + (10.0 * 0.5f64.sqrt()).powi(30));
        let got = density(&g, t).unwrap();
        assert!(((got - expected) / expected).abs() < 1e-12);
        let u = PriorSpec::uniform(16).unwrap();
        assert_eq!(density(&u, 1.3).unwrap(), 1.0);
        assert!(density(&u, -0.1).is_err());
        assert!(density(&u, 1.6).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(PriorSpec::uniform(1).is_err());
        assert!(PriorSpec::damped_gaussian(16, 0.0).is_err());
        assert!(PriorSpec::with_damping(4, 1.0, 10.0, 0.0).is_err());
        assert_eq!(PriorSpec::uniform(16).unwrap().measure_exponent(), 30);
    }

    #[test]
    fn three_sphere_cap_fraction() {
        let expected = (PI / 6.0 - 3f64.sqrt() / 8.0) / (PI / 4.0);
        let closed = uniform_prob_closed_check(2, 0.5).unwrap();
        assert!((closed - expected).abs() < 1e-14, "{closed}");
        let quad = prob_overlap_at_least(&PriorSpec::uniform(2).unwrap(), 0.5).unwrap();
        assert!((quad.value - expected).abs() < 1e-10);
    }

    #[test]
    fn uniform_tail() {
        let quad = prob_overlap_at_least(&PriorSpec::uniform(16).unwrap(), 0.95).unwrap();
        let closed = uniform_prob_closed_check(16, 0.95).unwrap();
        assert!(((quad.value - closed) / closed).abs() < 1e-8);
        assert!((quad.value - 3.2e-17).abs() <= 0.1e-17, "{}", quad.value);
    }

    #[test]
    fn limits() {
        assert!((uniform_prob_closed_check(2, 1e-300).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(uniform_prob_closed_check(2, 1.0).unwrap(), 0.0);
        let g = PriorSpec::damped_gaussian(16, 1.0).unwrap();
        assert!((prob_overlap_at_least(&g, 1e-12).unwrap().value - 1.0).abs() < 1e-10);
        assert!(prob_overlap_at_least(&g, 1.0 - 1e-12).unwrap().value < 1e-10);
        assert!(prob_overlap_at_least(&g, 0.0).is_err());
    }

    #[test]
    fn normalization() {
        assert_eq!(normalization_constant(&PriorSpec::uniform(3).unwrap()).unwrap(), 2.0 / PI);
        let g = PriorSpec::damped_gaussian(16, 1.0).unwrap();
        let n = normalization_constant(&g).unwrap();
        let r = integrate_log(|t| ln_density(&g, t), 0.0, FRAC_PI_2, 1e-12).unwrap();
        assert!((n * r.ln_value.exp() - 1.0).abs() < 1e-10);
        // σ² → ∞ at N = 2 leaves 1/(1 + 100 sin²θ), whose integral is π/(2√101).
        let wide = PriorSpec::damped_gaussian(2, 1e12).unwrap();
        let limit = 2.0 * 101f64.sqrt() / PI;
        assert!(((normalization_constant(&wide).unwrap() - limit) / limit).abs() < 1e-9);
    }

    #[test]
    fn sweep_preserves_order() {
        let pts: Vec<_> = [1.0, 0.1, 0.01]
            .iter()
            .map(|&s| (PriorSpec::damped_gaussian(16, s).unwrap(), 0.95))
            .collect();
        let out = prob_overlap_sweep(&pts).unwrap();
        for (p, o) in pts.iter().zip(&out) {
            assert_eq!(o.result, prob_overlap_at_least(&p.0, p.1).unwrap());
        }
        assert!(out[0].result.value < out[1].result.value);
        assert!(out[1].result.value < out[2].result.value);
    }
}
