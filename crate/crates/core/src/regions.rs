//! Where in the (x, γ) plane the modified algorithm beats the original.
//!
//! Three regions are scanned cell by cell:
//!
//! * `R_t`: at the modified peak time t̄_g, P_g^max exceeds P_s(t̄_g);
//! * `R_P`: the modified peak time is shorter than the time t̃_s the original
//!   needs to reach the same probability;
//! * `r_P`: `R_P` restricted to P_g^max above a threshold and to angles that
//!   pass the discrimination test.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::{validate_positive, SearchConfig};
use crate::discrimination::{
    fidelity_deficit, min_error_probability, search_beats_discrimination, DiscriminationSetup,
};
use crate::error::{Error, Result};
use crate::kinematics::{
    imperfection_angle, matched_time_special, max_transition_probability, peak_time_general,
    transition_probability_special,
};

pub const DEFAULT_GRID_SIZE: usize = 512;
pub const DEFAULT_GAMMA_MAX: f64 = 10.0;
pub const DEFAULT_THRESHOLD: f64 = 0.995;
pub const DEFAULT_PRIOR_RATIO: f64 = 100.0;

/// Overlaps of the published comparison table.
pub const TABLE1_X: [f64; 7] = [0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95];

/// Relative margin below which two sides of a strict inequality count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

fn strictly_less(a: f64, b: f64) -> bool {
    a < b - TIE_TOLERANCE * a.abs().max(b.abs())
}

/// x_i = (i + ½)/n for i in 0..n.
pub fn x_midpoints(n: usize) -> Vec<f64> {
    (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect()
}

/// n evenly spaced values from 1 to `gamma_max` inclusive (just [1] for n = 1).
pub fn gamma_linspace(n: usize, gamma_max: f64) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![1.0],
        _ => (0..n)
            .map(|j| 1.0 + (gamma_max - 1.0) * j as f64 / (n - 1) as f64)
            .collect(),
    }
}

fn validate_axes(x_axis: &[f64], gamma_axis: &[f64]) -> Result<()> {
    if x_axis.is_empty() {
        return Err(Error::domain("x_axis", "non-empty", 0.0));
    }
    if gamma_axis.is_empty() {
        return Err(Error::domain("gamma_axis", "non-empty", 0.0));
    }
    if let Some(&x) = x_axis.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
        return Err(Error::domain("x_axis", "samples in (0, 1)", x));
    }
    if let Some(&g) = gamma_axis.iter().find(|&&g| !(g >= 1.0 && g.is_finite())) {
        return Err(Error::domain("gamma_axis", "samples >= 1", g));
    }
    if let Some(w) = x_axis.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::domain("x_axis", "strictly increasing", w[1]));
    }
    if let Some(w) = gamma_axis.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::domain("gamma_axis", "strictly increasing", w[1]));
    }
    Ok(())
}

/// A value per (x, γ) cell, stored γ-major: index = j·nx + i.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid<T> {
    nx: usize,
    ngamma: usize,
    data: Vec<T>,
}

impl<T: Copy> Grid<T> {
    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ngamma(&self) -> usize {
        self.ngamma
    }

    pub fn get(&self, xi: usize, gj: usize) -> T {
        self.data[gj * self.nx + xi]
    }

    pub fn values(&self) -> &[T] {
        &self.data
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionGrid {
    pub x_axis: Vec<f64>,
    pub gamma_axis: Vec<f64>,
    pub pmax: Grid<f64>,
    pub in_rt: Grid<bool>,
    pub in_rp: Grid<bool>,
    /// The thresholded sub-region r_P.
    pub in_rp_threshold: Grid<bool>,
    pub threshold: f64,
    pub prior_ratio: f64,
}

impl RegionGrid {
    pub fn len(&self) -> usize {
        self.x_axis.len() * self.gamma_axis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// r_P ⊆ R_P cellwise.
    pub fn subset_holds(&self) -> bool {
        self.in_rp_threshold
            .values()
            .iter()
            .zip(self.in_rp.values())
            .all(|(&small, &big)| !small || big)
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    pmax: f64,
    rt: bool,
    rp: bool,
    rp_threshold: bool,
}

fn evaluate_cell(x: f64, gamma: f64, threshold: f64, setup: &DiscriminationSetup) -> Result<Cell> {
    // Both comparisons are ratios of times in units of h/E, so h = E = 1.
    let cfg = SearchConfig::with_h(x, gamma, 1.0, 1.0)?;
    let pmax = max_transition_probability(x, gamma)?.value();
    let t_general = peak_time_general(&cfg)?;
    let t_matched = matched_time_special(x, gamma, 1.0, 1.0)?;
    let p_special = transition_probability_special(&cfg, t_general)?.value();

    let rp = strictly_less(t_general, t_matched);
    let rt = strictly_less(p_special, pmax);
    let delta = imperfection_angle(x, gamma)?;
    let rp_threshold = rp && pmax > threshold && search_beats_discrimination(delta, setup)?;
    Ok(Cell {
        pmax,
        rt,
        rp,
        rp_threshold,
    })
}

/// Evaluates every cell; cells run in parallel into a pre-indexed grid.
pub fn scan_regions(
    x_axis: &[f64],
    gamma_axis: &[f64],
    threshold: f64,
    setup: &DiscriminationSetup,
) -> Result<RegionGrid> {
    validate_axes(x_axis, gamma_axis)?;
    if !(0.0..1.0).contains(&threshold) {
        return Err(Error::domain("threshold", "0 <= threshold < 1", threshold));
    }
    let nx = x_axis.len();
    let ngamma = gamma_axis.len();
    let cells = (0..nx * ngamma)
        .into_par_iter()
        .map(|idx| evaluate_cell(x_axis[idx % nx], gamma_axis[idx / nx], threshold, setup))
        .collect::<Result<Vec<_>>>()?;

    let layer = |f: fn(&Cell) -> bool| Grid {
        nx,
        ngamma,
        data: cells.iter().map(f).collect(),
    };
    Ok(RegionGrid {
        x_axis: x_axis.to_vec(),
        gamma_axis: gamma_axis.to_vec(),
        pmax: Grid {
            nx,
            ngamma,
            data: cells.iter().map(|c| c.pmax).collect(),
        },
        in_rt: layer(|c| c.rt),
        in_rp: layer(|c| c.rp),
        in_rp_threshold: layer(|c| c.rp_threshold),
        threshold,
        prior_ratio: setup.alpha(),
    })
}

/// Whether R_t and R_P agree at every cell.
pub fn regions_coincide(grid: &RegionGrid) -> bool {
    grid.in_rt.values() == grid.in_rp.values()
}

/// P_g^max over the grid, for external contouring.
pub fn pmax_grid(x_axis: &[f64], gamma_axis: &[f64]) -> Result<Grid<f64>> {
    validate_axes(x_axis, gamma_axis)?;
    let nx = x_axis.len();
    let data = (0..nx * gamma_axis.len())
        .map(|idx| Ok(max_transition_probability(x_axis[idx % nx], gamma_axis[idx / nx])?.value()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Grid {
        nx,
        ngamma: gamma_axis.len(),
        data,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableRow {
    pub x: f64,
    pub delta: f64,
    pub pmax: f64,
    pub delta_f: f64,
    pub p_e: f64,
    /// t̃_s: time for the original algorithm to reach `pmax`.
    pub t_special: f64,
    /// t̄_g: peak time of the modified algorithm.
    pub t_general: f64,
}

pub fn make_table1(x_list: &[f64], gamma: f64, alpha: f64, energy: f64, h: f64) -> Result<Vec<TableRow>> {
    validate_positive("h", h)?;
    let setup = DiscriminationSetup::from_asymmetry(alpha)?;
    x_list
        .iter()
        .map(|&x| {
            if !(x > 0.0 && x < 1.0) {
                return Err(Error::domain("x", "0 < x < 1", x));
            }
            let cfg = SearchConfig::with_h(x, gamma, energy, h)?;
            let delta = imperfection_angle(x, gamma)?;
            let pmax = max_transition_probability(x, gamma)?.value();
            Ok(TableRow {
                x,
                delta,
                pmax,
                delta_f: 1.0 - pmax,
                p_e: min_error_probability(delta, &setup)?.value(),
                t_special: matched_time_special(x, gamma, energy, h)?,
                t_general: peak_time_general(&cfg)?,
            })
        })
        .collect()
}

// ΔF from the angle, used to cross-check the table's 1 − P_max column.
#[allow(dead_code)]
fn deficit_of(row: &TableRow) -> Result<f64> {
    fidelity_deficit(row.delta)
}
