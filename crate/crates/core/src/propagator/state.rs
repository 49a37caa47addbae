use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::config::ProbabilityValue;
use crate::error::{Error, Result};

/// Allowed deviation of Σ|c_j|² from 1.
pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BasisTag {
    /// The {|w⟩, |r⟩} basis of the two-level reduction.
    #[serde(rename = "wr-2d")]
    TwoLevel,
    /// The computational basis {|1⟩ … |N⟩}.
    #[serde(rename = "computational-Nd")]
    Computational,
}

/// A normalized pure state. Construction fails rather than renormalizing.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    basis: BasisTag,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>, basis: BasisTag) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOLERANCE || !norm_sq.is_finite() {
            return Err(Error::Numeric(format!(
                "state norm² {norm_sq} deviates from 1 by more than {NORM_TOLERANCE:e}"
            )));
        }
        if amplitudes.is_empty() {
            return Err(Error::domain("dimension", ">= 1", 0.0));
        }
        Ok(Self { amplitudes, basis })
    }

    pub fn basis_state(dim: usize, index: usize, basis: BasisTag) -> Result<Self> {
        if index >= dim {
            return Err(Error::domain("index", "index < dimension", index as f64));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Self::new(amps, basis)
    }

    /// |s⟩ = N^(−1/2) Σ_j |j⟩.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("dimension", ">= 1", 0.0));
        }
        let a = C64::new((dim as f64).recip().sqrt(), 0.0);
        Self::new(vec![a; dim], BasisTag::Computational)
    }

    /// |s⟩ = x|w⟩ + √(1−x²)|r⟩ in the {|w⟩, |r⟩} basis.
    pub fn two_level_source(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::domain("x", "0 <= x <= 1", x));
        }
        Self::new(
            vec![C64::new(x, 0.0), C64::new((1.0 - x * x).sqrt(), 0.0)],
            BasisTag::TwoLevel,
        )
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// ‖self − other‖².
    pub fn distance_sq(&self, other: &StateVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum())
    }
}

/// |⟨a|b⟩|².
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<ProbabilityValue> {
    ProbabilityValue::from_raw(a.inner(b)?.norm_sqr())
}
