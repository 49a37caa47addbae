use num_complex::Complex64 as C64;

use crate::config::{validate_gamma, validate_positive, SearchConfig};
use crate::error::{Error, Result};

/// Largest admissible ‖H − H†‖_max.
pub const HERMITICITY_TOLERANCE: f64 = 1e-12;

/// Largest dimension the dense oracles accept.
pub const MAX_DIMENSION: usize = 4096;

/// A dense Hermitian matrix in energy units, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    dimension: usize,
    matrix: Vec<C64>,
    label: String,
}

impl HamiltonianSpec {
    pub fn new(dimension: usize, matrix: Vec<C64>, label: impl Into<String>) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::domain("dimension", ">= 2", dimension as f64));
        }
        if matrix.len() != dimension * dimension {
            return Err(Error::DimensionMismatch {
                left: matrix.len(),
                right: dimension * dimension,
            });
        }
        let mut worst = 0.0_f64;
        for i in 0..dimension {
            for j in i..dimension {
                let d = (matrix[i * dimension + j] - matrix[j * dimension + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        if worst > HERMITICITY_TOLERANCE || !worst.is_finite() {
            return Err(Error::Numeric(format!(
                "matrix is not Hermitian: ‖H − H†‖_max = {worst:e}"
            )));
        }
        Ok(Self {
            dimension,
            matrix,
            label: label.into(),
        })
    }

    /// E|w⟩⟨w| + γE|s⟩⟨s| in the {|w⟩, |r⟩} basis, with 0 ≤ x ≤ 1.
    pub fn two_level(x: f64, gamma: f64, energy: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::domain("x", "0 <= x <= 1", x));
        }
        validate_gamma(gamma)?;
        validate_positive("energy", energy)?;
        let y = (1.0 - x * x).sqrt();
        let ge = gamma * energy;
        let off = C64::new(ge * x * y, 0.0);
        let matrix = vec![
            C64::new(energy + ge * x * x, 0.0),
            off,
            off,
            C64::new(ge * y * y, 0.0),
        ];
        Self::new(2, matrix, format!("two-level x={x} gamma={gamma}"))
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn matrix(&self) -> &[C64] {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[row * self.dimension + col]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dimension).map(|i| self.entry(i, i).re).sum()
    }

    /// Maximum absolute row sum; bounds the spectral norm from above.
    pub fn norm_inf(&self) -> f64 {
        self.matrix
            .chunks(self.dimension)
            .map(|row| row.iter().map(|c| c.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub(crate) fn apply(&self, v: &[C64], out: &mut [C64]) {
        for (row, o) in self.matrix.chunks(self.dimension).zip(out.iter_mut()) {
            *o = row.iter().zip(v).map(|(h, c)| h * c).sum();
        }
    }
}

pub fn build_hamiltonian_2d(cfg: &SearchConfig) -> Result<HamiltonianSpec> {
    HamiltonianSpec::two_level(cfg.x(), cfg.gamma(), cfg.energy())
}

/// The N-dimensional family {E|w⟩⟨w| + γE|s⟩⟨s|}_w with uniform |s⟩,
/// plus the driver γE|s⟩⟨s| alone.
///
/// Matrices are produced on demand; at the dimension cap holding all N of
/// them at once would need N³ complex entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullSpaceFamily {
    n: usize,
    gamma: f64,
    energy: f64,
}

impl FullSpaceFamily {
    pub fn new(n: usize, gamma: f64, energy: f64) -> Result<Self> {
        if n < 4 {
            return Err(Error::domain("N", "N >= 4", n as f64));
        }
        if n > MAX_DIMENSION {
            return Err(Error::domain("N", "N <= 4096", n as f64));
        }
        validate_gamma(gamma)?;
        validate_positive("energy", energy)?;
        Ok(Self { n, gamma, energy })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// N^(−1/2).
    pub fn overlap(&self) -> f64 {
        (self.n as f64).recip().sqrt()
    }

    pub fn driver(&self) -> HamiltonianSpec {
        let n = self.n;
        let entry = C64::new(self.gamma * self.energy / n as f64, 0.0);
        HamiltonianSpec {
            dimension: n,
            matrix: vec![entry; n * n],
            label: format!("driver N={n} gamma={}", self.gamma),
        }
    }

    /// Hamiltonian with marked state |w⟩ = |target⟩ (0-based).
    pub fn target(&self, target: usize) -> Result<HamiltonianSpec> {
        if target >= self.n {
            return Err(Error::domain("target", "target < N", target as f64));
        }
        let mut h = self.driver();
        h.matrix[target * self.n + target] += C64::new(self.energy, 0.0);
        h.label = format!("search N={} gamma={} w={target}", self.n, self.gamma);
        Ok(h)
    }
}

/// Every target Hamiltonian followed by the driver-only matrix.
pub fn build_fullspace_hamiltonians(n: usize, gamma: f64, energy: f64) -> Result<Vec<HamiltonianSpec>> {
    let family = FullSpaceFamily::new(n, gamma, energy)?;
    let mut out = (0..n).map(|w| family.target(w)).collect::<Result<Vec<_>>>()?;
    out.push(family.driver());
    Ok(out)
}
