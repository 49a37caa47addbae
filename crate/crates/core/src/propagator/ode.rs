use num_complex::Complex64 as C64;

use super::hamiltonian::HamiltonianSpec;
use super::state::StateVector;
use crate::config::validate_positive;
use crate::error::{Error, Result};

pub const MAX_STEPS: u64 = 100_000_000;

/// Largest admissible ‖H‖·dt/ħ.
const MAX_STEP_PHASE: f64 = 0.01;

/// Classical RK4 on iħ dψ/dt = Hψ with a fixed step.
///
/// The interval is cut into ⌈t/dt⌉ equal steps so the last step lands on `t`.
pub fn evolve_ode(
    h: &HamiltonianSpec,
    psi0: &StateVector,
    t: f64,
    hbar: f64,
    dt: f64,
) -> Result<StateVector> {
    let n = h.dimension();
    if psi0.dim() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: psi0.dim(),
        });
    }
    validate_positive("hbar", hbar)?;
    validate_positive("dt", dt)?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::domain("t", "finite and >= 0", t));
    }
    if t == 0.0 {
        return Ok(psi0.clone());
    }
    if h.norm_inf() * dt / hbar > MAX_STEP_PHASE {
        return Err(Error::domain("dt", "‖H‖·dt/ħ <= 0.01", dt));
    }
    let steps = (t / dt).ceil();
    if steps > MAX_STEPS as f64 {
        return Err(Error::Resource(format!(
            "{steps} RK4 steps exceed the cap of {MAX_STEPS}"
        )));
    }
    let steps = steps as u64;
    let step = t / steps as f64;

    // dψ/dt = −(i/ħ) H ψ
    let factor = C64::new(0.0, -1.0 / hbar);
    let deriv = |v: &[C64], out: &mut [C64]| {
        h.apply(v, out);
        out.iter_mut().for_each(|c| *c *= factor);
    };

    let mut psi = psi0.amplitudes().to_vec();
    let zero = C64::new(0.0, 0.0);
    let (mut k1, mut k2, mut k3, mut k4) = (vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]);
    let mut tmp = vec![zero; n];
    for _ in 0..steps {
        deriv(&psi, &mut k1);
        for i in 0..n {
            tmp[i] = psi[i] + k1[i] * (0.5 * step);
        }
        deriv(&tmp, &mut k2);
        for i in 0..n {
            tmp[i] = psi[i] + k2[i] * (0.5 * step);
        }
        deriv(&tmp, &mut k3);
        for i in 0..n {
            tmp[i] = psi[i] + k3[i] * step;
        }
        deriv(&tmp, &mut k4);
        for i in 0..n {
            psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (step / 6.0);
        }
    }
    StateVector::new(psi, psi0.basis())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_size_guards() {
        let h = HamiltonianSpec::two_level(0.5, 1.0, 1.0).unwrap();
        let s = StateVector::two_level_source(0.5).unwrap();
        assert!(matches!(
            evolve_ode(&h, &s, 1.0, 1.0, 0.1),
            Err(Error::Domain { field: "dt", .. })
        ));
        assert!(matches!(
            evolve_ode(&h, &s, 1e6, 1.0, 1e-5),
            Err(Error::Resource(_))
        ));
    }
}
