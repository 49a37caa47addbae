//! Search parameters and the probability newtype shared by every module.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Rounding slack tolerated on probabilities and acos arguments before clamping.
pub const CLAMP_TOLERANCE: f64 = 1e-12;

/// Physical parameters of one search instance.
///
/// `x` is the source/target overlap, `gamma` the driver-to-oracle energy
/// ratio E'/E. Planck's constant is stored in reduced form; [`h`](Self::h)
/// returns the unreduced value 2πħ used by the time formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchConfig {
    x: f64,
    gamma: f64,
    energy: f64,
    hbar: f64,
}

impl SearchConfig {
    pub fn new(x: f64, gamma: f64, energy: f64, hbar: f64) -> Result<Self> {
        validate_overlap(x)?;
        validate_gamma(gamma)?;
        validate_positive("energy", energy)?;
        validate_positive("hbar", hbar)?;
        Ok(Self {
            x,
            gamma,
            energy,
            hbar,
        })
    }

    /// Builds a configuration from the unreduced Planck constant `h`.
    pub fn with_h(x: f64, gamma: f64, energy: f64, h: f64) -> Result<Self> {
        validate_positive("h", h)?;
        Self::new(x, gamma, energy, h / (2.0 * PI))
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn h(&self) -> f64 {
        2.0 * PI * self.hbar
    }

    /// Same instance with the driver energy reset to E' = E.
    pub fn original(&self) -> Self {
        Self { gamma: 1.0, ..*self }
    }

    /// 4x²γ + (1 − γ)², the squared (dimensionless) level splitting.
    pub fn discriminant(&self) -> f64 {
        discriminant(self.x, self.gamma)
    }
}

pub(crate) fn discriminant(x: f64, gamma: f64) -> f64 {
    4.0 * x * x * gamma + (1.0 - gamma) * (1.0 - gamma)
}

pub(crate) fn validate_overlap(x: f64) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain("x", "0 < x <= 1", x))
    }
}

pub(crate) fn validate_gamma(gamma: f64) -> Result<()> {
    if gamma >= 1.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("gamma", "gamma >= 1", gamma))
    }
}

pub(crate) fn validate_positive(field: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(field, "finite and > 0", value))
    }
}

pub(crate) fn validate_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("t", "finite and >= 0", t))
    }
}

/// A probability in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct ProbabilityValue(f64);

impl ProbabilityValue {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::domain("probability", "0 <= p <= 1", value))
        }
    }

    /// Accepts a computed value, clamping rounding drift of up to
    /// [`CLAMP_TOLERANCE`] outside [0, 1].
    pub fn from_raw(raw: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&raw) {
            return Ok(Self(raw));
        }
        if (-CLAMP_TOLERANCE..=1.0 + CLAMP_TOLERANCE).contains(&raw) {
            log::debug!("clamping probability {raw:e} into [0, 1]");
            return Ok(Self(raw.clamp(0.0, 1.0)));
        }
        Err(Error::Numeric(format!(
            "probability {raw:e} outside [0, 1] beyond tolerance"
        )))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<ProbabilityValue> for f64 {
    fn from(p: ProbabilityValue) -> f64 {
        p.0
    }
}

/// `acos` that absorbs arguments within [`CLAMP_TOLERANCE`] of [−1, 1].
pub(crate) fn acos_clamped(arg: f64, what: &str) -> Result<f64> {
    if (-1.0 - CLAMP_TOLERANCE..=1.0 + CLAMP_TOLERANCE).contains(&arg) {
        Ok(arg.clamp(-1.0, 1.0).acos())
    } else {
        Err(Error::Numeric(format!(
            "acos argument {arg} for {what} outside [-1, 1]"
        )))
    }
}

/// `sqrt` that maps small negative rounding residue to zero.
pub(crate) fn sqrt_clamped(radicand: f64, what: &str) -> Result<f64> {
    if radicand >= 0.0 {
        Ok(radicand.sqrt())
    } else if radicand >= -CLAMP_TOLERANCE {
        Ok(0.0)
    } else {
        Err(Error::Numeric(format!(
            "negative radicand {radicand:e} for {what}"
        )))
    }
}
