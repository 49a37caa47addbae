//! ln ∫₀^a sin^m θ dθ without quadrature.
//!
//! The default route is the all-positive series
//! sin^{m+1}a cos a/(m+1) · Σ_k Π_{j≤k} sin²a (m+2j)/(m+2j+1).
//! Its convergence ratio is sin²a, so above a = π/3 the integral is instead
//! taken as the Wallis value minus ∫₀^{π/2−a} cos^m, whose
//! integration-by-parts recurrence has only positive terms. That difference
//! is used only while it keeps at least half of the Wallis value; below that
//! the series is summed regardless of its length.

use std::f64::consts::{FRAC_PI_2, LN_2};

use crate::error::{Error, Result};

const SERIES_LIMIT: f64 = 0.75;
const MAX_SERIES_TERMS: usize = 100_000_000;

/// ln(1 − e^x) for x < 0.
fn ln_one_minus_exp(x: f64) -> Result<f64> {
    if x >= 0.0 {
        return Err(Error::Numeric(format!("ln(1 - e^{x}) is undefined")));
    }
    Ok(if x > -LN_2 { (-x.exp_m1()).ln() } else { (-x.exp()).ln_1p() })
}

fn ln_series(m: u32, a: f64) -> f64 {
    let (s, c) = a.sin_cos();
    let z = s * s;
    let m = m as f64;
    let ln_lead = (m + 1.0) * s.ln() + c.ln() - (m + 1.0).ln();
    let (mut term, mut sum) = (1.0f64, 1.0f64);
    for k in 1..MAX_SERIES_TERMS {
        let k = k as f64;
        term *= z * (m + 2.0 * k) / (m + 2.0 * k + 1.0);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    ln_lead + sum.ln()
}

/// ln ∫₀^b cos^m φ dφ by J_m = cos^{m−1}b sin b/m + (m−1)/m J_{m−2}.
/// Both terms are positive, so the forward sweep loses no accuracy.
fn ln_cos_power_integral(m: u32, b: f64) -> f64 {
    if b == 0.0 {
        return f64::NEG_INFINITY;
    }
    let (s, c) = b.sin_cos();
    let (ln_s, ln_c) = (s.ln(), c.ln());
    let (mut j, mut ln_j) = if m % 2 == 0 { (0, b.ln()) } else { (1, ln_s) };
    while j < m {
        j += 2;
        let jf = j as f64;
        let boundary = (jf - 1.0) * ln_c + ln_s - jf.ln();
        let carry = ((jf - 1.0) / jf).ln() + ln_j;
        let hi = boundary.max(carry);
        ln_j = hi + ((boundary - hi).exp() + (carry - hi).exp()).ln();
    }
    ln_j
}

/// ln(W_m − J_m(π/2 − a)), or `None` when more than half of W_m cancels.
fn ln_complement(m: u32, a: f64) -> Result<Option<f64>> {
    let ln_w = ln_sin_power_full(m);
    let ln_j = ln_cos_power_integral(m, (FRAC_PI_2 - a).max(0.0));
    if ln_j - ln_w > -LN_2 {
        return Ok(None);
    }
    Ok(Some(ln_w + ln_one_minus_exp(ln_j - ln_w)?))
}

/// ln ∫₀^a sin^m θ dθ for 0 ≤ a ≤ π/2; −∞ at a = 0.
pub fn ln_sin_power_integral(m: u32, a: f64) -> Result<f64> {
    if !(0.0..=FRAC_PI_2).contains(&a) {
        return Err(Error::domain("a", "0 <= a <= pi/2", a));
    }
    if a == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if a.sin().powi(2) > SERIES_LIMIT {
        if let Some(v) = ln_complement(m, a)? {
            return Ok(v);
        }
    }
    Ok(ln_series(m, a))
}

/// ln ∫₀^{π/2} sin^m θ dθ by the Wallis product.
pub fn ln_sin_power_full(m: u32) -> f64 {
    let (mut j, mut ln_i) = if m % 2 == 0 { (0, FRAC_PI_2.ln()) } else { (1, 0.0) };
    while j < m {
        j += 2;
        ln_i += ((j as f64 - 1.0) / j as f64).ln();
    }
    ln_i
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn low_orders_match_antiderivatives() {
        for &a in &[0.1, 0.7, PI / 3.0, 1.2, 1.5, FRAC_PI_2] {
            let (s, c) = f64::sin_cos(a);
            let i0 = a;
            let one_minus_c = 2.0 * (a / 2.0).sin().powi(2);
            let i1 = one_minus_c;
            let i2 = a / 2.0 - s * c / 2.0;
            let i3 = one_minus_c.powi(2) * (2.0 + c) / 3.0;
            for (m, exact) in [(0, i0), (1, i1), (2, i2), (3, i3)] {
                let got = ln_sin_power_integral(m, a).unwrap().exp();
                assert!(((got - exact) / exact).abs() < 1e-13, "m={m} a={a}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn series_and_complement_agree() {
        for (m, a) in [(2, 1.3), (10, 1.45), (30, 1.5), (200, 1.55)] {
            let series = ln_series(m, a);
            let complement = ln_complement(m, a).unwrap().unwrap();
            assert!((series - complement).abs() < 1e-12, "m={m}: {series} vs {complement}");
        }
        // Far below the median the difference is refused.
        assert!(ln_complement(200, PI / 3.0).unwrap().is_none());
    }

    #[test]
    fn wallis_values() {
        assert!((ln_sin_power_full(2).exp() - PI / 4.0).abs() < 1e-15);
        assert!((ln_sin_power_full(3).exp() - 2.0 / 3.0).abs() < 1e-15);
        let full = ln_sin_power_integral(30, FRAC_PI_2).unwrap();
        assert!((full - ln_sin_power_full(30)).abs() < 1e-13);
    }

    #[test]
    fn large_order_stays_finite() {
        let v = ln_sin_power_integral(20_000, 0.01).unwrap();
        assert!(v.is_finite() && v < -90_000.0);
        assert!(ln_sin_power_integral(2, 2.0).is_err());
        assert_eq!(ln_sin_power_integral(4, 0.0).unwrap(), f64::NEG_INFINITY);
    }
}
