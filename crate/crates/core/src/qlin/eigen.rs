//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then annihilates the (now real) pivot with an ordinary plane
//! rotation. Sweeps visit every pair `p < q` in row order, so results are
//! deterministic.

use num_complex::Complex64 as C64;

use super::matrix::CMatrix;
use crate::error::{Error, Result};

/// Off-diagonal Frobenius norm, relative to the full norm, at which sweeps stop.
pub const OFF_DIAGONAL_TOLERANCE: f64 = 1e-13;
pub const MAX_SWEEPS: usize = 100;
/// Largest Hermiticity defect accepted on input.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Eigenvalues in ascending order with the matching unitary `V` (columns are
/// eigenvectors), so that `A = V diag(values) V†`.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigen {
    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        CMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * fv[k])
                .sum::<C64>()
        })
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

pub fn eigh(input: &CMatrix) -> Result<Eigen> {
    let herr = input.hermiticity_error();
    if herr > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian(herr));
    }
    let n = input.dim();
    // symmetrize so rounding in the input cannot leak into the rotations
    let mut a = CMatrix::from_fn(n, |i, j| {
        if i == j {
            C64::new(input[(i, i)].re, 0.0)
        } else {
            (input[(i, j)] + input[(j, i)].conj()) * 0.5
        }
    });
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();
    let threshold = OFF_DIAGONAL_TOLERANCE * if scale > 0.0 { scale } else { 1.0 };

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        let off = off_diagonal_norm(&a);
        if off > threshold {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                off,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(Eigen { values, vectors })
}

/// Annihilates `a[(p, q)]` with `a ← U† a U`, `v ← v U`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    // phase removal: D = diag(1 at p, e^{-iφ} at q) makes the pivot real and positive
    let phase = apq / r;
    let dq = phase.conj();

    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // U = D R with R = [[c, s], [-s, c]] on (p, q)
    let upp = C64::new(c, 0.0);
    let upq = C64::new(s, 0.0);
    let uqp = dq * (-s);
    let uqq = dq * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * upp + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn random_hermitian(dim: usize, entries: &[(f64, f64)]) -> CMatrix {
        let mut m = CMatrix::zeros(dim);
        let mut it = entries.iter().cycle();
        for i in 0..dim {
            for j in i..dim {
                let &(re, im) = it.next().unwrap();
                if i == j {
                    m[(i, i)] = C64::new(re, 0.0);
                } else {
                    m[(i, j)] = C64::new(re, im);
                    m[(j, i)] = C64::new(re, -im);
                }
            }
        }
        m
    }

    #[test]
    fn diagonal_input_sorted() {
        let e = eigh(&CMatrix::from_diagonal(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_off_diagonal() {
        let m = CMatrix::from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]);
        let e = eigh(&m).unwrap();
        assert!((e.values[0] + 0.5).abs() < 1e-15);
        assert!((e.values[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn complex_pivot() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2
        let mut m = CMatrix::identity(2);
        m[(0, 1)] = C64::new(0.0, 1.0);
        m[(1, 0)] = C64::new(0.0, -1.0);
        let e = eigh(&m).unwrap();
        assert!(e.values[0].abs() < 1e-15);
        assert!((e.values[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eigh(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn empty_and_zero_matrices() {
        assert!(eigh(&CMatrix::zeros(0)).unwrap().values.is_empty());
        assert_eq!(eigh(&CMatrix::zeros(3)).unwrap().values, vec![0.0; 3]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn reconstruction_and_trace(
            dim in 1usize..=64,
            entries in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..97),
        ) {
            let h = random_hermitian(dim, &entries);
            let e = eigh(&h).unwrap();
            let back = e.reconstruct_with(|l| l);
            prop_assert!((&h - &back).max_abs() <= 1e-10);
            let sum: f64 = e.values.iter().sum();
            prop_assert!((sum - h.trace().re).abs() <= 1e-10);
            prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let vv = &e.vectors.adjoint() * &e.vectors;
            prop_assert!((&vv - &CMatrix::identity(dim)).max_abs() <= 1e-10);
        }
    }
}
