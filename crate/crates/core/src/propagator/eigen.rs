//! Hermitian eigendecomposition: closed form for 2×2, cyclic Jacobi otherwise.

use num_complex::Complex64 as C64;

use super::hamiltonian::HamiltonianSpec;
use crate::error::{Error, Result};

/// Jacobi stops once the off-diagonal Frobenius norm falls below this
/// fraction of the full Frobenius norm.
pub const OFF_DIAGONAL_THRESHOLD: f64 = 1e-14;
const MAX_SWEEPS: usize = 64;

/// H = V Λ V† with eigenvalues ascending; column k of `vectors` (row-major)
/// is the k-th eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    n: usize,
    values: Vec<f64>,
    vectors: Vec<C64>,
}

impl HermitianEigen {
    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vector_entry(&self, row: usize, k: usize) -> C64 {
        self.vectors[row * self.n + k]
    }
}

pub fn eigh(h: &HamiltonianSpec) -> Result<HermitianEigen> {
    if h.dimension() == 2 {
        Ok(eigh_2x2(h))
    } else {
        jacobi(h)
    }
}

fn eigh_2x2(h: &HamiltonianSpec) -> HermitianEigen {
    let a = h.entry(0, 0).re;
    let d = h.entry(1, 1).re;
    let b = h.entry(0, 1);
    let mean = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let r = half_gap.hypot(b.norm());
    let values = vec![mean - r, mean + r];

    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let mut vectors = vec![zero; 4];
    if b.norm() == 0.0 {
        // Already diagonal; order the basis vectors by eigenvalue.
        let (lo, hi) = if a <= d { (0, 1) } else { (1, 0) };
        vectors[lo * 2] = one;
        vectors[hi * 2 + 1] = one;
    } else {
        for (k, &lambda) in values.iter().enumerate() {
            // Two candidate null vectors of H − λ; keep the better-conditioned one.
            let first = [b, C64::new(lambda - a, 0.0)];
            let second = [C64::new(lambda - d, 0.0), b.conj()];
            let norm = |v: &[C64; 2]| (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            let v = if norm(&first) >= norm(&second) { first } else { second };
            let n = norm(&v);
            vectors[k] = v[0] / n;
            vectors[2 + k] = v[1] / n;
        }
    }
    HermitianEigen {
        n: 2,
        values,
        vectors,
    }
}

fn jacobi(h: &HamiltonianSpec) -> Result<HermitianEigen> {
    let n = h.dimension();
    let mut a = h.matrix().to_vec();
    let mut v = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = C64::new(1.0, 0.0);
    }

    let scale = a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Ok(finish(n, &a, v));
    }
    let off_norm = |a: &[C64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    for _ in 0..MAX_SWEEPS {
        if off_norm(&a) <= OFF_DIAGONAL_THRESHOLD * scale {
            return Ok(finish(n, &a, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r <= f64::EPSILON * 1e-4 * scale {
                    continue;
                }
                // Unitary phase on index q makes a_pq real and positive.
                let phase = apq / r;
                for k in 0..n {
                    a[k * n + q] *= phase.conj();
                    v[k * n + q] *= phase.conj();
                }
                for k in 0..n {
                    a[q * n + k] *= phase;
                }

                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let (kp, kq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = kp * c - kq * s;
                    a[k * n + q] = kp * s + kq * c;
                    let (vp, vq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = vp * c - vq * s;
                    v[k * n + q] = vp * s + vq * c;
                }
                for k in 0..n {
                    let (pk, qk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = pk * c - qk * s;
                    a[q * n + k] = pk * s + qk * c;
                }
                a[p * n + q] = C64::new(0.0, 0.0);
                a[q * n + p] = C64::new(0.0, 0.0);
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
            }
        }
    }
    let residual = off_norm(&a) / scale;
    Err(Error::Numeric(format!(
        "Jacobi eigendecomposition of {} did not converge (relative off-diagonal {residual:e})",
        h.label()
    )))
}

fn finish(n: usize, a: &[C64], v: Vec<C64>) -> HermitianEigen {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&i| a[i * n + i].re).collect();
    let mut vectors = vec![C64::new(0.0, 0.0); n * n];
    for row in 0..n {
        for (k, &src) in order.iter().enumerate() {
            vectors[row * n + k] = v[row * n + src];
        }
    }
    HermitianEigen { n, values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(h: &HamiltonianSpec, e: &HermitianEigen) -> f64 {
        let n = h.dimension();
        let mut worst = 0.0_f64;
        for k in 0..n {
            for i in 0..n {
                let hv: C64 = (0..n).map(|j| h.entry(i, j) * e.vector_entry(j, k)).sum();
                worst = worst.max((hv - e.vector_entry(i, k) * e.values()[k]).norm());
            }
        }
        worst
    }

    fn orthonormality_error(e: &HermitianEigen) -> f64 {
        let n = e.dimension();
        let mut worst = 0.0_f64;
        for a in 0..n {
            for b in 0..n {
                let dot: C64 = (0..n)
                    .map(|i| e.vector_entry(i, a).conj() * e.vector_entry(i, b))
                    .sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - expect).norm());
            }
        }
        worst
    }

    #[test]
    fn two_by_two_closed_form() {
        let h = HamiltonianSpec::two_level(0.6, 1.1, 1.0).unwrap();
        let e = eigh(&h).unwrap();
        // λ± = E(1+γ)/2 ± (E/2)√(4x²γ + (1−γ)²)
        let d = (4.0 * 0.36 * 1.1 + 0.01_f64).sqrt();
        assert!((e.values()[0] - 0.5 * (2.1 - d)).abs() < 1e-14);
        assert!((e.values()[1] - 0.5 * (2.1 + d)).abs() < 1e-14);
        assert!(residual(&h, &e) < 1e-14);
        assert!(orthonormality_error(&e) < 1e-14);

        let diag = HamiltonianSpec::two_level(1.0, 1.0, 1.0).unwrap();
        let e = eigh(&diag).unwrap();
        assert_eq!(e.values(), &[0.0, 2.0]);
        assert!(residual(&diag, &e) < 1e-15);
    }

    #[test]
    fn jacobi_complex_hermitian() {
        // Deterministic dense complex Hermitian matrix.
        let n = 7;
        let mut m = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i..n {
                let re = ((i * 7 + j * 3) % 11) as f64 / 5.0 - 1.0;
                let im = if i == j { 0.0 } else { ((i * 5 + j) % 13) as f64 / 6.0 - 1.0 };
                m[i * n + j] = C64::new(re, im);
                m[j * n + i] = C64::new(re, -im);
            }
        }
        let h = HamiltonianSpec::new(n, m, "dense").unwrap();
        let e = eigh(&h).unwrap();
        assert!(residual(&h, &e) < 1e-12, "{}", residual(&h, &e));
        assert!(orthonormality_error(&e) < 1e-12);
        assert!(e.values().windows(2).all(|w| w[0] <= w[1]));
        let trace: f64 = e.values().iter().sum();
        assert!((trace - h.trace()).abs() < 1e-12);
    }

    #[test]
    fn jacobi_degenerate_driver() {
        use super::super::hamiltonian::FullSpaceFamily;
        let fam = FullSpaceFamily::new(16, 1.1, 1.0).unwrap();
        let driver = fam.driver();
        let e = eigh(&driver).unwrap();
        // Rank one: fifteen zeros and γE.
        assert!(e.values()[..15].iter().all(|v| v.abs() < 1e-13));
        assert!((e.values()[15] - 1.1).abs() < 1e-13);
        assert!(residual(&driver, &e) < 1e-13);
    }
}
