//! Closed-form dynamics of the original (γ = 1) and modified (γ ≥ 1)
//! two-level search Hamiltonians.
//!
//! Starting from |s⟩ with ⟨s|w⟩ = x, the modified Hamiltonian
//! E|w⟩⟨w| + γE|s⟩⟨s| drives the success probability
//!
//! ```text
//! P_g(t) = P_max sin²(ωt) + x² cos²(ωt),   ω = E√(4x²γ + (1−γ)²) / 2ħ
//! P_max  = x²(1+γ)² / (4x²γ + (1−γ)²)
//! ```
//!
//! which collapses to the original P_s(t) = sin²(Ext/ħ) + x² cos²(Ext/ħ)
//! at γ = 1.

use std::f64::consts::PI;

use serde::Serialize;

use crate::config::{
    acos_clamped, discriminant, sqrt_clamped, validate_gamma, validate_overlap,
    validate_positive, validate_time, ProbabilityValue, SearchConfig, CLAMP_TOLERANCE,
};
use crate::error::{Error, Result};

/// Which of the two algorithms a time-domain query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Curve {
    /// The modified Hamiltonian with E' = γE.
    General,
    /// The original Hamiltonian (γ treated as 1).
    Special,
}

pub fn transition_probability_general(cfg: &SearchConfig, t: f64) -> Result<ProbabilityValue> {
    validate_time(t)?;
    let pmax = max_transition_probability(cfg.x(), cfg.gamma())?.value();
    let phase = cfg.energy() * cfg.discriminant().sqrt() * t / (2.0 * cfg.hbar());
    let (s, c) = phase.sin_cos();
    let x2 = cfg.x() * cfg.x();
    ProbabilityValue::from_raw(pmax * s * s + x2 * c * c)
}

pub fn transition_probability_special(cfg: &SearchConfig, t: f64) -> Result<ProbabilityValue> {
    validate_time(t)?;
    let phase = cfg.energy() * cfg.x() * t / cfg.hbar();
    let (s, c) = phase.sin_cos();
    let x2 = cfg.x() * cfg.x();
    ProbabilityValue::from_raw(s * s + x2 * c * c)
}

pub fn transition_probability(curve: Curve, cfg: &SearchConfig, t: f64) -> Result<ProbabilityValue> {
    match curve {
        Curve::General => transition_probability_general(cfg, t),
        Curve::Special => transition_probability_special(cfg, t),
    }
}

/// Peak success probability of the modified algorithm; exactly 1 when γ = 1 or x = 1.
pub fn max_transition_probability(x: f64, gamma: f64) -> Result<ProbabilityValue> {
    validate_overlap(x)?;
    validate_gamma(gamma)?;
    let num = x * x * (1.0 + gamma) * (1.0 + gamma);
    ProbabilityValue::from_raw(num / discriminant(x, gamma))
}

/// t̄_g = (h/4E) · 2/√(4x²γ + (1−γ)²).
pub fn peak_time_general(cfg: &SearchConfig) -> Result<f64> {
    let d = cfg.discriminant();
    if d <= 0.0 {
        return Err(Error::domain("x", "4x²γ + (1−γ)² > 0", cfg.x()));
    }
    Ok(cfg.h() / (4.0 * cfg.energy()) * 2.0 / d.sqrt())
}

/// t̄_s = h/(4Ex).
pub fn peak_time_special(cfg: &SearchConfig) -> Result<f64> {
    Ok(cfg.h() / (4.0 * cfg.energy() * cfg.x()))
}

/// Time t̃_s at which the original algorithm first reaches the modified
/// algorithm's peak probability P_max(x, γ).
///
/// Uses (1 − P_max)/(1 − x²) = (γ − 1)²/(4x²γ + (1−γ)²), which is exact
/// at γ = 1 where the direct difference is pure rounding noise.
pub fn matched_time_special(x: f64, gamma: f64, energy: f64, h: f64) -> Result<f64> {
    validate_overlap(x)?;
    if x >= 1.0 {
        return Err(Error::domain("x", "0 < x < 1", x));
    }
    validate_gamma(gamma)?;
    validate_positive("energy", energy)?;
    validate_positive("h", h)?;
    let ratio = (gamma - 1.0) * (gamma - 1.0) / discriminant(x, gamma);
    let arg = sqrt_clamped(ratio, "matched time")?;
    let angle = acos_clamped(arg, "matched time")?;
    Ok(h / (2.0 * PI * energy * x) * angle)
}

/// δ(x, γ) with cos δ = (1+γ)x / √((1−γ)² + 4γx²).
///
/// Evaluated as atan2(|γ−1|√(1−x²), (1+γ)x), the same angle without the
/// acos precision loss near δ = 0.
pub fn imperfection_angle(x: f64, gamma: f64) -> Result<f64> {
    validate_overlap(x)?;
    validate_gamma(gamma)?;
    let along = (1.0 + gamma) * x;
    let across = (gamma - 1.0) * (1.0 - x * x).sqrt();
    let norm = discriminant(x, gamma).sqrt();
    let cos = along / norm;
    if cos > 1.0 + CLAMP_TOLERANCE {
        return Err(Error::Numeric(format!("cos δ = {cos} exceeds 1")));
    }
    Ok(across.atan2(along))
}

/// A repetition period of the curve: 4πħ/(E√D) for the modified curve and
/// 2πħ/(Ex) for the original (twice the fundamental period of sin²).
pub fn period(curve: Curve, cfg: &SearchConfig) -> f64 {
    match curve {
        Curve::General => 4.0 * PI * cfg.hbar() / (cfg.energy() * cfg.discriminant().sqrt()),
        Curve::Special => 2.0 * PI * cfg.hbar() / (cfg.energy() * cfg.x()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub time: f64,
    /// The threshold was already met at t = 0 (threshold ≤ x²).
    pub already_satisfied: bool,
}

/// Smallest t ≥ 0 at which the curve reaches `threshold`.
///
/// The first rise is bracketed by sampling at T/1024 and refined by
/// bisection to |Δt| ≤ 1e−12·T.
pub fn first_crossing_time(
    curve: Curve,
    cfg: &SearchConfig,
    threshold: ProbabilityValue,
) -> Result<Crossing> {
    let thr = threshold.value();
    let x2 = cfg.x() * cfg.x();
    if thr <= x2 {
        return Ok(Crossing {
            time: 0.0,
            already_satisfied: true,
        });
    }
    let (maximum, peak) = match curve {
        Curve::General => (
            max_transition_probability(cfg.x(), cfg.gamma())?.value(),
            peak_time_general(cfg)?,
        ),
        Curve::Special => (1.0, peak_time_special(cfg)?),
    };
    if thr > maximum + CLAMP_TOLERANCE {
        return Err(Error::UnreachableThreshold {
            threshold: thr,
            maximum,
        });
    }
    if thr >= maximum {
        return Ok(Crossing {
            time: peak,
            already_satisfied: false,
        });
    }

    let p = |t: f64| transition_probability(curve, cfg, t).map(f64::from);
    let big_t = period(curve, cfg);
    let step = big_t / 1024.0;

    let mut lo = 0.0;
    let mut hi = loop {
        let next = (lo + step).min(peak);
        if p(next)? >= thr {
            break next;
        }
        if next >= peak {
            // The maximum sits within clamp tolerance of `thr`.
            return Ok(Crossing {
                time: peak,
                already_satisfied: false,
            });
        }
        lo = next;
    };

    let resolution = 1e-12 * big_t;
    while hi - lo > resolution {
        let mid = 0.5 * (lo + hi);
        if p(mid)? >= thr {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Crossing {
        time: 0.5 * (lo + hi),
        already_satisfied: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_cfg(x: f64, gamma: f64) -> SearchConfig {
        SearchConfig::with_h(x, gamma, 1.0, 1.0).unwrap()
    }

    fn prob(p: Result<ProbabilityValue>) -> f64 {
        p.unwrap().value()
    }

    #[test]
    fn general_curve_hits_table_peak() {
        let p = prob(transition_probability_general(&table_cfg(0.8, 1.1), 0.29743));
        assert!((p - 0.99873).abs() < 5e-6, "{p}");
    }

    #[test]
    fn both_curves_start_at_x_squared() {
        for &x in &[0.1, 0.37, 0.8, 1.0] {
            let cfg = table_cfg(x, 1.1);
            assert_eq!(prob(transition_probability_general(&cfg, 0.0)), x * x);
            assert_eq!(prob(transition_probability_special(&cfg, 0.0)), x * x);
        }
    }

    #[test]
    fn special_curve_values() {
        let p = prob(transition_probability_special(&table_cfg(0.8, 1.1), 0.20202));
        assert!((p - 0.9).abs() < 5e-4, "{p}");
        let p = prob(transition_probability_special(&table_cfg(0.5, 1.0), 0.5));
        assert!((p - 1.0).abs() < 1e-15);
    }

    #[test]
    fn max_probability_table_values() {
        assert!((prob(max_transition_probability(0.8, 1.1)) - 0.9987).abs() < 5e-5);
        assert!((prob(max_transition_probability(0.65, 1.1)) - 0.9969).abs() < 5e-5);
        for &x in &[0.01, 0.3, 0.99] {
            assert!((prob(max_transition_probability(x, 1.0)) - 1.0).abs() < 1e-15);
        }
        assert_eq!(prob(max_transition_probability(1.0, 7.0)), 1.0);
        assert!(max_transition_probability(0.0, 1.0).is_err());
    }

    #[test]
    fn peak_times() {
        let t = peak_time_general(&table_cfg(0.8, 1.1)).unwrap();
        assert!((t - 0.297).abs() < 5e-4, "{t}");
        let t = peak_time_general(&table_cfg(0.65, 1.1)).unwrap();
        assert!((t - 0.366).abs() < 5e-4, "{t}");
        let t = peak_time_general(&table_cfg(0.5, 1.0)).unwrap();
        assert!((t - 0.5).abs() < 1e-15);

        assert!((peak_time_special(&table_cfg(0.8, 1.1)).unwrap() - 0.3125).abs() < 1e-15);
        assert!((peak_time_special(&table_cfg(1.0, 1.1)).unwrap() - 0.25).abs() < 1e-15);
        let cfg = table_cfg(0.65, 1.1);
        let ts = peak_time_special(&cfg).unwrap();
        assert!((ts - 0.384_615_384_6).abs() < 1e-9);
        assert!((prob(transition_probability_special(&cfg, ts)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matched_times() {
        let t = matched_time_special(0.8, 1.1, 1.0, 1.0).unwrap();
        assert!((t - 0.301).abs() < 5e-4, "{t}");
        let t = matched_time_special(0.95, 1.1, 1.0, 1.0).unwrap();
        assert!((t - 0.255).abs() < 5e-4, "{t}");
        let t = matched_time_special(0.6, 1.0, 1.0, 1.0).unwrap();
        assert!((t - 1.0 / 2.4).abs() < 1e-15);
        assert!(matches!(
            matched_time_special(1.0, 1.1, 1.0, 1.0),
            Err(Error::Domain { field: "x", .. })
        ));
    }

    #[test]
    fn matched_time_agrees_with_direct_formula() {
        // The literal (1 − P_max)/(1 − x²) form, away from γ = 1 where it is well conditioned.
        for &(x, g) in &[(0.3, 1.5), (0.8, 1.1), (0.95, 4.0), (0.1, 9.0)] {
            let pmax = prob(max_transition_probability(x, g));
            let literal = 1.0 / (2.0 * PI * x) * ((1.0 - pmax) / (1.0 - x * x)).sqrt().acos();
            let t = matched_time_special(x, g, 1.0, 1.0).unwrap();
            assert!((t - literal).abs() < 1e-12, "{x} {g}");
            let cfg = table_cfg(x, g);
            let p = prob(transition_probability_special(&cfg, t));
            assert!((p - pmax).abs() < 1e-12);
        }
    }

    #[test]
    fn imperfection_angles() {
        assert!((imperfection_angle(0.8, 1.1).unwrap() - 3.57e-2).abs() < 5e-5);
        assert!((imperfection_angle(0.65, 1.1).unwrap() - 5.56e-2).abs() < 5e-5);
        for &x in &[0.05, 0.5, 1.0] {
            assert_eq!(imperfection_angle(x, 1.0).unwrap(), 0.0);
        }
        // Literal acos form where it is well conditioned.
        let (x, g) = (0.3_f64, 3.0_f64);
        let literal = ((1.0 + g) * x / ((1.0 - g).powi(2) + 4.0 * g * x * x).sqrt()).acos();
        assert!((imperfection_angle(x, g).unwrap() - literal).abs() < 1e-14);
    }

    #[test]
    fn crossing_times_at_reference_point() {
        let cfg = table_cfg(0.8, 1.1);
        let thr = ProbabilityValue::new(0.9).unwrap();
        let g = first_crossing_time(Curve::General, &cfg, thr).unwrap();
        let s = first_crossing_time(Curve::Special, &cfg, thr).unwrap();
        assert!((g.time - 0.193).abs() < 5e-4, "{g:?}");
        assert!((s.time - 0.202).abs() < 5e-4, "{s:?}");
        assert!(!g.already_satisfied && !s.already_satisfied);

        let at = ProbabilityValue::new(0.64).unwrap();
        let s = first_crossing_time(Curve::Special, &cfg, at).unwrap();
        assert_eq!(s.time, 0.0);
        assert!(s.already_satisfied);
    }

    #[test]
    fn crossing_solves_the_closed_form_inverse() {
        let cfg = table_cfg(0.8, 1.1);
        let pmax = prob(max_transition_probability(0.8, 1.1));
        let omega = PI * cfg.discriminant().sqrt();
        for &thr in &[0.7, 0.9, 0.99, 0.998] {
            let exact = (((thr - 0.64) / (pmax - 0.64)).sqrt()).asin() / omega;
            let got = first_crossing_time(Curve::General, &cfg, ProbabilityValue::new(thr).unwrap())
                .unwrap()
                .time;
            assert!((got - exact).abs() < 1e-11, "{thr}: {got} vs {exact}");
        }
    }

    #[test]
    fn unreachable_threshold() {
        let cfg = table_cfg(0.8, 1.1);
        let err = first_crossing_time(Curve::General, &cfg, ProbabilityValue::new(0.9999).unwrap());
        assert!(matches!(err, Err(Error::UnreachableThreshold { .. })));
        let pmax = max_transition_probability(0.8, 1.1).unwrap();
        let c = first_crossing_time(Curve::General, &cfg, pmax).unwrap();
        assert_eq!(c.time, peak_time_general(&cfg).unwrap());
    }

    #[test]
    fn negative_time_rejected() {
        let cfg = table_cfg(0.8, 1.1);
        assert!(transition_probability_general(&cfg, -1.0).is_err());
    }
}
