//! Two-state ambiguous discrimination bounds on the admissible imperfection
//! angle δ.
//!
//! A nearly-optimal search is accepted when its fidelity deficit
//! ΔF(δ) = 1 − cos²δ does not exceed the minimum error probability p_E(δ) of
//! telling |w⟩ from a state at angle δ. That holds exactly when
//! sin²δ ≤ p_w p_w̃, i.e. δ ≤ δ_max.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::config::{sqrt_clamped, ProbabilityValue, CLAMP_TOLERANCE};
use crate::error::{Error, Result};

/// Prior probabilities of the exact (p_w) and approximate (p_w̃) targets.
///
/// Only p_w is stored; p_w̃ is always 1 − p_w.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscriminationSetup {
    p_w: f64,
    alpha: f64,
}

impl DiscriminationSetup {
    pub fn from_prior(p_w: f64) -> Result<Self> {
        if !(p_w > 0.0 && p_w < 1.0) {
            return Err(Error::domain("p_w", "0 < p_w < 1", p_w));
        }
        Ok(Self {
            p_w,
            alpha: (1.0 - p_w) / p_w,
        })
    }

    /// Setup with p_w̃ = α p_w. Every quantity derived here depends on the
    /// priors only through p_w p_w̃, so α and 1/α describe the same problem.
    pub fn from_asymmetry(alpha: f64) -> Result<Self> {
        validate_alpha(alpha)?;
        let p_w = 1.0 / (1.0 + alpha);
        Ok(Self { p_w, alpha })
    }

    pub fn p_w(&self) -> f64 {
        self.p_w
    }

    pub fn p_wtilde(&self) -> f64 {
        1.0 - self.p_w
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn prior_product(&self) -> f64 {
        self.p_w * self.p_wtilde()
    }
}

/// Deficit budget ε with its angle cap, cos²(δ_max) = 1 − ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityBudget {
    pub epsilon: f64,
    pub delta_max: f64,
}

impl FidelityBudget {
    pub fn from_epsilon(epsilon: f64) -> Result<Self> {
        Ok(Self {
            epsilon,
            delta_max: delta_max_from_epsilon(epsilon)?,
        })
    }
}

fn validate_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("alpha", "alpha > 0", alpha))
    }
}

fn validate_angle(delta: f64) -> Result<()> {
    if (0.0..=FRAC_PI_2).contains(&delta) {
        Ok(())
    } else {
        Err(Error::domain("delta", "0 <= delta <= pi/2", delta))
    }
}

/// p_E(δ) = ½(1 − √(1 − 4 p_w p_w̃ cos²δ)).
///
/// Evaluated as 2pq cos²δ / (1 + √(1 − 4pq cos²δ)), which avoids the
/// cancellation in the difference when pq is small.
pub fn min_error_probability(delta: f64, setup: &DiscriminationSetup) -> Result<ProbabilityValue> {
    validate_angle(delta)?;
    let c2 = delta.cos().powi(2);
    let pq = setup.prior_product();
    let radicand = 1.0 - 4.0 * pq * c2;
    if radicand < -CLAMP_TOLERANCE {
        return Err(Error::Numeric(format!("p_E radicand {radicand:e} is negative")));
    }
    let root = sqrt_clamped(radicand, "p_E")?;
    ProbabilityValue::from_raw(2.0 * pq * c2 / (1.0 + root))
}

/// ΔF(δ) = 1 − cos²δ, computed as sin²δ.
pub fn fidelity_deficit(delta: f64) -> Result<f64> {
    validate_angle(delta)?;
    Ok(delta.sin().powi(2))
}

/// δ_max(ε) = acos √(1 − ε), computed as asin √ε.
pub fn delta_max_from_epsilon(epsilon: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::domain("epsilon", "0 <= epsilon < 1", epsilon));
    }
    Ok(epsilon.sqrt().asin())
}

/// δ_max for a fixed prior p_w: acos √(1 − p_w(1 − p_w)).
pub fn delta_max_from_prior(p_w: f64) -> Result<f64> {
    if !(p_w > 0.0 && p_w < 1.0) {
        return Err(Error::domain("p_w", "0 < p_w < 1", p_w));
    }
    delta_max_from_epsilon(p_w * (1.0 - p_w))
}

/// δ_max(α) = acos √(1 − α(1+α)⁻²).
pub fn delta_max_from_asymmetry(alpha: f64) -> Result<f64> {
    delta_max_from_epsilon(epsilon_of_asymmetry(alpha)?)
}

/// ε(α) = α(1+α)⁻², evaluated on min(α, 1/α) so α ↔ 1/α agree bit for bit.
pub fn epsilon_of_asymmetry(alpha: f64) -> Result<f64> {
    validate_alpha(alpha)?;
    let r = if alpha > 1.0 { alpha.recip() } else { alpha };
    Ok(r / ((1.0 + r) * (1.0 + r)))
}

/// Whether 0 ≤ ΔF(δ) ≤ p_E(δ); equality counts as satisfied.
pub fn search_beats_discrimination(delta: f64, setup: &DiscriminationSetup) -> Result<bool> {
    let deficit = fidelity_deficit(delta)?;
    let p_e = min_error_probability(delta, setup)?.value();
    Ok(deficit <= p_e)
}

/// One sample of the ΔF and p_E curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorCurvePoint {
    pub delta: f64,
    pub deficit: f64,
    pub p_e: f64,
}

/// ΔF and p_E sampled at `points` evenly spaced angles on [0, π/2].
pub fn error_curve(setup: &DiscriminationSetup, points: usize) -> Result<Vec<ErrorCurvePoint>> {
    if points < 2 {
        return Err(Error::domain("points", "points >= 2", points as f64));
    }
    (0..points)
        .map(|i| {
            let delta = FRAC_PI_2 * i as f64 / (points - 1) as f64;
            Ok(ErrorCurvePoint {
                delta,
                deficit: fidelity_deficit(delta)?,
                p_e: min_error_probability(delta, setup)?.value(),
            })
        })
        .collect()
}
