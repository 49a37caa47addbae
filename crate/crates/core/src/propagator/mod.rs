//! Brute-force evolution oracles for the closed forms in [`crate::kinematics`].
//!
//! Two independent routes solve iħ dψ/dt = Hψ: exact propagation through a
//! Hermitian eigendecomposition ([`evolve_exact`], [`Propagator`]) and fixed
//! step fourth-order Runge–Kutta ([`evolve_ode`]).

mod eigen;
mod hamiltonian;
mod ode;
mod state;

use num_complex::Complex64 as C64;

use crate::config::validate_positive;
use crate::error::{Error, Result};

pub use eigen::{eigh, HermitianEigen, OFF_DIAGONAL_THRESHOLD};
pub use hamiltonian::{
    build_fullspace_hamiltonians, build_hamiltonian_2d, FullSpaceFamily, HamiltonianSpec,
    HERMITICITY_TOLERANCE, MAX_DIMENSION,
};
pub use ode::{evolve_ode, MAX_STEPS};
pub use state::{fidelity, BasisTag, StateVector, NORM_TOLERANCE};

/// exp(−iHt/ħ) for a fixed H, reusable across many times.
#[derive(Debug, Clone)]
pub struct Propagator {
    eigen: HermitianEigen,
    hbar: f64,
}

impl Propagator {
    pub fn new(h: &HamiltonianSpec, hbar: f64) -> Result<Self> {
        validate_positive("hbar", hbar)?;
        Ok(Self {
            eigen: eigh(h)?,
            hbar,
        })
    }

    pub fn eigen(&self) -> &HermitianEigen {
        &self.eigen
    }

    pub fn evolve(&self, psi0: &StateVector, t: f64) -> Result<StateVector> {
        let n = self.eigen.dimension();
        if psi0.dim() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: psi0.dim(),
            });
        }
        if !t.is_finite() {
            return Err(Error::domain("t", "finite", t));
        }
        if t == 0.0 {
            return Ok(psi0.clone());
        }
        let psi = psi0.amplitudes();
        let coeffs: Vec<C64> = (0..n)
            .map(|k| {
                let c: C64 = (0..n)
                    .map(|j| self.eigen.vector_entry(j, k).conj() * psi[j])
                    .sum();
                c * C64::from_polar(1.0, -self.eigen.values()[k] * t / self.hbar)
            })
            .collect();
        let out = (0..n)
            .map(|j| (0..n).map(|k| self.eigen.vector_entry(j, k) * coeffs[k]).sum())
            .collect();
        StateVector::new(out, psi0.basis())
    }
}

/// exp(−iHt/ħ)|ψ₀⟩ via eigendecomposition.
pub fn evolve_exact(h: &HamiltonianSpec, psi0: &StateVector, t: f64, hbar: f64) -> Result<StateVector> {
    if h.dimension() != psi0.dim() {
        return Err(Error::DimensionMismatch {
            left: h.dimension(),
            right: psi0.dim(),
        });
    }
    if t == 0.0 {
        return Ok(psi0.clone());
    }
    Propagator::new(h, hbar)?.evolve(psi0, t)
}
