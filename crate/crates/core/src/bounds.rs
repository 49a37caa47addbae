//! Numerical check of the √N search-time lower bound for imperfect targets.
//!
//! For every marked index w the full-space state |ψ_w(t)⟩ evolves under
//! E|w⟩⟨w| + γE|s⟩⟨s| while the reference |ψ(t)⟩ evolves under the driver
//! γE|s⟩⟨s| alone, both from the uniform |s⟩. The harness evaluates
//!
//! ```text
//! Σ_w ‖ψ_w(t) − ψ(t)‖² ≤ (2E√N/ħ) t          (growth bound, every t)
//! Σ_w ‖ψ_w(t̃) − ψ(t̃)‖² ≥ N(1 − δ)            (terminal bound at t̃)
//! t̃ ≥ (ħ/2E)(1 − δ)√N                         (their combination)
//! ```
//!
//! with t̃ the modified algorithm's peak time at x = N^(−1/2).

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{validate_gamma, validate_positive, SearchConfig};
use crate::error::{Error, Result};
use crate::kinematics::{imperfection_angle, peak_time_general};
use crate::propagator::{FullSpaceFamily, Propagator, StateVector};

/// Largest δ accepted by [`min_time_lower_bound`].
pub const MAX_SMALL_DELTA: f64 = 0.2;
const WARN_DELTA: f64 = 0.1;

/// Slack on the Cauchy–Schwarz ℓ¹ bound.
pub const L1_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub gamma: f64,
    pub delta: f64,
    pub t_check: f64,
    /// Σ_w ‖ψ_w(t) − ψ(t)‖².
    pub lhs: f64,
    /// (2E√N/ħ) t.
    pub rhs_growth: f64,
    /// N(1 − δ).
    pub rhs_terminal: f64,
    /// (ħ/2E)(1 − δ)√N.
    pub t_lower_bound: f64,
    pub growth_satisfied: bool,
    /// Evaluated only at t̃.
    pub terminal_satisfied: Option<bool>,
    /// N(1−δ) ≤ lhs ≤ rhs_growth and t̃ ≥ t_lower_bound, evaluated only at t̃.
    pub chain_satisfied: Option<bool>,
    /// max_w − min_w of the individual distances; zero up to rounding by symmetry.
    pub target_spread: f64,
    /// δ ≤ 0.2, where the first-order bound is meant to apply.
    pub small_delta: bool,
}

/// (ħ/2E)(1 − δ)√N for 0 ≤ δ ≤ 0.2; warns above 0.1.
pub fn min_time_lower_bound(n: usize, delta: f64, energy: f64, hbar: f64) -> Result<f64> {
    if !(0.0..=MAX_SMALL_DELTA).contains(&delta) {
        return Err(Error::domain("delta", "0 <= delta <= 0.2", delta));
    }
    if delta > WARN_DELTA {
        log::warn!("delta = {delta} is outside the small-angle regime the bound assumes");
    }
    lower_bound_formula(n, delta, energy, hbar)
}

fn lower_bound_formula(n: usize, delta: f64, energy: f64, hbar: f64) -> Result<f64> {
    if n < 4 {
        return Err(Error::domain("N", "N >= 4", n as f64));
    }
    validate_positive("energy", energy)?;
    validate_positive("hbar", hbar)?;
    Ok(hbar / (2.0 * energy) * (1.0 - delta) * (n as f64).sqrt())
}

/// Whether Σ|c_j| ≤ √N (+1e−10) for a normalized state.
pub fn amplitude_l1_check(state: &StateVector) -> bool {
    let l1: f64 = state.amplitudes().iter().map(|c| c.norm()).sum();
    l1 <= (state.dim() as f64).sqrt() + L1_TOLERANCE
}

/// Norm of the part of `psi` outside span{|w⟩, |s⟩} with |s⟩ uniform.
pub fn span_residual(psi: &StateVector, target: usize) -> Result<f64> {
    let n = psi.dim();
    if target >= n {
        return Err(Error::domain("target", "target < N", target as f64));
    }
    let amps = psi.amplitudes();
    // Orthonormal pair: |w⟩ and |r⟩ ∝ |s⟩ − x|w⟩, where |r⟩ is uniform off w.
    let along_w = amps[target];
    let r_entry = (((n - 1) as f64).recip()).sqrt();
    let along_r: C64 = amps
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != target)
        .map(|(_, c)| c * r_entry)
        .sum();
    let residual_sq: f64 = amps
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let proj = if j == target { along_w } else { along_r * r_entry };
            (c - proj).norm_sqr()
        })
        .sum();
    Ok(residual_sq.sqrt())
}

/// Propagators for all N target Hamiltonians and the driver.
pub struct DistanceHarness {
    family: FullSpaceFamily,
    hbar: f64,
    source: StateVector,
    targets: Vec<Propagator>,
    driver: Propagator,
}

impl DistanceHarness {
    pub fn new(n: usize, gamma: f64, energy: f64, hbar: f64) -> Result<Self> {
        validate_gamma(gamma)?;
        validate_positive("hbar", hbar)?;
        let family = FullSpaceFamily::new(n, gamma, energy)?;
        let targets = (0..n)
            .into_par_iter()
            .map(|w| Propagator::new(&family.target(w)?, hbar))
            .collect::<Result<Vec<_>>>()?;
        let driver = Propagator::new(&family.driver(), hbar)?;
        Ok(Self {
            family,
            hbar,
            source: StateVector::uniform(n)?,
            targets,
            driver,
        })
    }

    pub fn family(&self) -> &FullSpaceFamily {
        &self.family
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn evolve_target(&self, target: usize, t: f64) -> Result<StateVector> {
        self.targets
            .get(target)
            .ok_or_else(|| Error::domain("target", "target < N", target as f64))?
            .evolve(&self.source, t)
    }

    /// Per-target distances ‖ψ_w(t) − ψ(t)‖², indexed by w.
    pub fn distances(&self, t: f64) -> Result<Vec<f64>> {
        let reference = self.driver.evolve(&self.source, t)?;
        self.targets
            .par_iter()
            .map(|p| p.evolve(&self.source, t)?.distance_sq(&reference))
            .collect()
    }

    /// Σ_w ‖ψ_w(t) − ψ(t)‖², summed in index order, with the spread across w.
    pub fn distance_sum(&self, t: f64) -> Result<(f64, f64)> {
        let d = self.distances(t)?;
        let sum = d.iter().sum();
        let max = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = d.iter().copied().fold(f64::INFINITY, f64::min);
        Ok((sum, max - min))
    }

    fn base_report(&self, t: f64) -> Result<BoundReport> {
        let n = self.family.dimension();
        let energy = self.family.energy();
        let gamma = self.family.gamma();
        let delta = imperfection_angle(self.family.overlap(), gamma)?;
        let (lhs, spread) = self.distance_sum(t)?;
        let rhs_growth = 2.0 * energy * (n as f64).sqrt() / self.hbar * t;
        Ok(BoundReport {
            n,
            gamma,
            delta,
            t_check: t,
            lhs,
            rhs_growth,
            rhs_terminal: n as f64 * (1.0 - delta),
            t_lower_bound: lower_bound_formula(n, delta, energy, self.hbar)?,
            growth_satisfied: lhs <= rhs_growth,
            terminal_satisfied: None,
            chain_satisfied: None,
            target_spread: spread,
            small_delta: delta <= MAX_SMALL_DELTA,
        })
    }

    pub fn growth_reports(&self, t_grid: &[f64]) -> Result<Vec<BoundReport>> {
        validate_grid(t_grid)?;
        t_grid.iter().map(|&t| self.base_report(t)).collect()
    }

    /// Peak time of the modified algorithm at x = N^(−1/2).
    pub fn terminal_time(&self) -> Result<f64> {
        let cfg = SearchConfig::new(
            self.family.overlap(),
            self.family.gamma(),
            self.family.energy(),
            self.hbar,
        )?;
        peak_time_general(&cfg)
    }

    pub fn terminal_report(&self) -> Result<BoundReport> {
        let t_tilde = self.terminal_time()?;
        let mut report = self.base_report(t_tilde)?;
        let terminal = report.lhs >= report.rhs_terminal;
        report.terminal_satisfied = Some(terminal);
        report.chain_satisfied = Some(
            terminal
                && report.lhs <= report.rhs_growth
                && report.rhs_terminal <= report.rhs_growth
                && t_tilde >= report.t_lower_bound,
        );
        Ok(report)
    }
}

fn validate_grid(t_grid: &[f64]) -> Result<()> {
    match t_grid.first() {
        Some(&t0) if t0 == 0.0 => {}
        Some(&t0) => return Err(Error::domain("t_grid", "first time = 0", t0)),
        None => return Err(Error::domain("t_grid", "non-empty", 0.0)),
    }
    if let Some(w) = t_grid.windows(2).find(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
        return Err(Error::domain("t_grid", "strictly ascending", w[1]));
    }
    Ok(())
}

pub fn verify_distance_growth(
    n: usize,
    gamma: f64,
    energy: f64,
    hbar: f64,
    t_grid: &[f64],
) -> Result<Vec<BoundReport>> {
    validate_grid(t_grid)?;
    DistanceHarness::new(n, gamma, energy, hbar)?.growth_reports(t_grid)
}

pub fn verify_terminal_distance(n: usize, gamma: f64, energy: f64, hbar: f64) -> Result<BoundReport> {
    DistanceHarness::new(n, gamma, energy, hbar)?.terminal_report()
}
