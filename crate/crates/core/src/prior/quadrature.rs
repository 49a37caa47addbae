//! Adaptive Simpson quadrature on an integrand given by its logarithm.
//!
//! Every panel is scaled by its own largest sample before the Simpson sums
//! are formed, and panel contributions are combined with log-sum-exp, so
//! integrands spanning hundreds of decades neither underflow nor overflow.

use crate::error::{Error, Result};

const INITIAL_PANELS: usize = 64;
const MAX_DEPTH: u32 = 40;

/// Panels whose scale falls outside these bounds would under- or overflow
/// if summed linearly.
const LINEAR_FLOOR: f64 = 1e-280;
const LINEAR_CEILING: f64 = 1e280;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogIntegral {
    pub ln_value: f64,
    pub ln_abs_error: f64,
    pub evaluations: usize,
    pub log_space_used: bool,
}

impl LogIntegral {
    /// Estimated error relative to the value; 0 for an identically zero integral.
    pub fn relative_error(&self) -> f64 {
        if self.ln_value == f64::NEG_INFINITY {
            0.0
        } else {
            (self.ln_abs_error - self.ln_value).exp()
        }
    }
}

pub(crate) fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max.is_infinite() {
        return max;
    }
    max + terms.iter().map(|&t| (t - max).exp()).sum::<f64>().ln()
}

struct Panel {
    ln_value: f64,
    ln_error: f64,
}

struct State<'f, F> {
    ln_f: &'f F,
    panels: Vec<Panel>,
    evaluations: usize,
    log_space_used: bool,
}

impl<F: Fn(f64) -> f64> State<'_, F> {
    fn eval(&mut self, x: f64) -> f64 {
        self.evaluations += 1;
        (self.ln_f)(x)
    }

    // ln-samples at a, (a+b)/2, b are passed in; ln_tol bounds |S2 − S1|/15.
    fn refine(&mut self, a: f64, b: f64, la: f64, lm: f64, lb: f64, ln_tol: f64, depth: u32) {
        let m = 0.5 * (a + b);
        let (ld, le) = (self.eval(0.5 * (a + m)), self.eval(0.5 * (m + b)));
        let s = [la, ld, lm, le, lb].into_iter().fold(f64::NEG_INFINITY, f64::max);
        if s == f64::NEG_INFINITY {
            return;
        }
        let [fa, fd, fm, fe, fb] = [la, ld, lm, le, lb].map(|l| (l - s).exp());
        let h = b - a;
        let whole = h / 6.0 * (fa + 4.0 * fm + fb);
        let halves = h / 12.0 * (fa + 4.0 * fd + 2.0 * fm + 4.0 * fe + fb);
        let diff = (halves - whole).abs() / 15.0;
        let converged = diff.ln() + s <= ln_tol;
        if converged || depth >= MAX_DEPTH || m <= a || m >= b {
            let corrected = halves + (halves - whole) / 15.0;
            let value = if corrected > 0.0 { corrected } else { halves };
            if !(LINEAR_FLOOR..=LINEAR_CEILING).contains(&s.exp()) {
                self.log_space_used = true;
            }
            self.panels.push(Panel {
                ln_value: value.ln() + s,
                ln_error: diff.ln() + s,
            });
            return;
        }
        let half_tol = ln_tol - std::f64::consts::LN_2;
        self.refine(a, m, la, ld, lm, half_tol, depth + 1);
        self.refine(m, b, lm, le, lb, half_tol, depth + 1);
    }
}

/// ∫_a^b exp(ln_f(θ)) dθ with error target `rel_tol` relative to the whole
/// integral. `ln_f` may return −∞ where the integrand vanishes.
pub fn integrate_log<F: Fn(f64) -> f64>(ln_f: F, a: f64, b: f64, rel_tol: f64) -> Result<LogIntegral> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::domain("interval", "finite with a <= b", b - a));
    }
    if !(rel_tol > 0.0) {
        return Err(Error::domain("rel_tol", "rel_tol > 0", rel_tol));
    }
    let mut state = State {
        ln_f: &ln_f,
        panels: Vec::new(),
        evaluations: 0,
        log_space_used: false,
    };
    if a == b {
        return Ok(LogIntegral {
            ln_value: f64::NEG_INFINITY,
            ln_abs_error: f64::NEG_INFINITY,
            evaluations: 0,
            log_space_used: false,
        });
    }

    let width = (b - a) / INITIAL_PANELS as f64;
    let nodes: Vec<f64> = (0..=2 * INITIAL_PANELS)
        .map(|i| a + (b - a) * i as f64 / (2 * INITIAL_PANELS) as f64)
        .collect();
    let samples: Vec<f64> = nodes.iter().map(|&x| state.eval(x)).collect();
    if let Some(bad) = samples.iter().find(|v| v.is_nan() || **v == f64::INFINITY) {
        return Err(Error::Numeric(format!("log-integrand evaluated to {bad}")));
    }

    // Coarse composite Simpson in log space sets the global magnitude.
    let weighted: Vec<f64> = samples
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let w = if i == 0 || i == samples.len() - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            l + (w * width / 6.0).ln()
        })
        .collect();
    let ln_scale = log_sum_exp(&weighted);
    if ln_scale == f64::NEG_INFINITY {
        return Ok(LogIntegral {
            ln_value: f64::NEG_INFINITY,
            ln_abs_error: f64::NEG_INFINITY,
            evaluations: state.evaluations,
            log_space_used: false,
        });
    }

    let ln_tol = rel_tol.ln() + ln_scale - (INITIAL_PANELS as f64).ln();
    for p in 0..INITIAL_PANELS {
        let (i, j) = (2 * p, 2 * p + 2);
        state.refine(
            nodes[i],
            nodes[j],
            samples[i],
            samples[i + 1],
            samples[j],
            ln_tol,
            0,
        );
    }
    let values: Vec<f64> = state.panels.iter().map(|p| p.ln_value).collect();
    let errors: Vec<f64> = state.panels.iter().map(|p| p.ln_error).collect();
    Ok(LogIntegral {
        ln_value: log_sum_exp(&values),
        ln_abs_error: log_sum_exp(&errors),
        evaluations: state.evaluations,
        log_space_used: state.log_space_used,
    })
}
