//! Special states: Bloch-parametrized qubits, symmetric (Dicke) basis states,
//! the copier preparation state, scaled density operators and Haar-random kets.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{out_of_range, Error, Result};
use crate::qlin::{CMatrix, DensityOperator, StateVector, SubsystemLayout, C64};

/// Pure qubit `α|0⟩ + β|1⟩` with `α = sin(θ/2) e^{iφ}` and `β = cos(θ/2)`.
///
/// The phase sits on the `|0⟩` amplitude, so `θ = π` is `|0⟩` and `θ = 0`
/// is `|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BlochQubit {
    theta: f64,
    phi: f64,
}

impl BlochQubit {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return out_of_range("theta", theta, "[0, π]");
        }
        if !(0.0..TAU).contains(&phi) {
            return out_of_range("phi", phi, "[0, 2π)");
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `(α, β)`.
    pub fn amplitudes(&self) -> (C64, C64) {
        let half = 0.5 * self.theta;
        (
            C64::from_polar(half.sin(), self.phi),
            C64::new(half.cos(), 0.0),
        )
    }

    /// Angles of a normalized qubit ket, discarding its global phase.
    pub fn from_ket(psi: &StateVector) -> Result<Self> {
        if psi.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: psi.dim(),
            });
        }
        let (a, b) = (psi.amps()[0], psi.amps()[1]);
        let theta = 2.0 * a.norm().atan2(b.norm());
        let phi = if a.norm() == 0.0 {
            0.0
        } else if b.norm() == 0.0 {
            a.arg()
        } else {
            a.arg() - b.arg()
        };
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Self::new(theta.clamp(0.0, PI), phi)
    }

    pub fn random_with<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let psi = haar_random_ket_with(2, rng).expect("dim 2 is valid");
        Self::from_ket(&psi).expect("Haar sample is a valid qubit")
    }

    pub fn random(seed: u64) -> Self {
        Self::random_with(&mut seeded_rng(seed))
    }
}

impl Default for BlochQubit {
    /// `θ = π/2, φ = 0`, the state `(|0⟩ + |1⟩)/√2`.
    fn default() -> Self {
        Self {
            theta: 0.5 * PI,
            phi: 0.0,
        }
    }
}

/// Label of the symmetric state `|n;k⟩`: `n` qubits with `k` excitations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetricIndex {
    n: usize,
    k: usize,
}

impl SymmetricIndex {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return out_of_range("n", 0.0, "n ≥ 1");
        }
        if k > n {
            return out_of_range("k", k as f64, "0 ≤ k ≤ n");
        }
        Ok(Self { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

pub fn bloch_ket(q: &BlochQubit) -> StateVector {
    let (a, b) = q.amplitudes();
    StateVector::from_parts(SubsystemLayout::qubits(1), vec![a, b])
}

/// `β*|0⟩ − α*|1⟩`.
pub fn orthogonal_ket(q: &BlochQubit) -> StateVector {
    let (a, b) = q.amplitudes();
    StateVector::from_parts(SubsystemLayout::qubits(1), vec![b.conj(), -a.conj()])
}

/// Real amplitudes of `|n;k⟩` (the zero vector when `k > n`).
pub(crate) fn symmetric_amplitudes(n: usize, k: usize) -> Vec<f64> {
    let dim = 1usize << n;
    let mut amps = vec![0.0; dim];
    if k > n {
        return amps;
    }
    let weight = 1.0 / binomial(n, k).sqrt();
    for (i, a) in amps.iter_mut().enumerate() {
        if i.count_ones() as usize == k {
            *a = weight;
        }
    }
    amps
}

pub fn symmetric_basis_ket(s: SymmetricIndex) -> StateVector {
    let amps = symmetric_amplitudes(s.n, s.k)
        .into_iter()
        .map(|x| C64::new(x, 0.0))
        .collect();
    StateVector::from_parts(SubsystemLayout::qubits(s.n), amps)
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Coefficients `(e_k, f_k)` of the preparation state for `n` copies.
pub fn prep_coefficients(n: usize) -> Vec<(f64, f64)> {
    let norm = (2.0 / (n as f64 + 2.0)).sqrt();
    (0..=n)
        .map(|k| {
            let e = norm * binomial(n, k) / binomial(n + 1, k);
            let f = (k as f64 / (n - k + 1) as f64).sqrt() * e;
            (e, f)
        })
        .collect()
}

/// `Σ_k [e_k |n;k⟩_a + f_k |n;k−1⟩_a] |n;k⟩_b` on `2n` qubits, copy qubits
/// `a1..an` first and idle qubits `b1..bn` after. The `k = 0` second term is
/// absent because `f_0 = 0`.
pub fn prep_state(n: usize) -> Result<StateVector> {
    if n == 0 {
        return out_of_range("n", 0.0, "n ≥ 1");
    }
    let half = 1usize << n;
    let mut amps = vec![C64::new(0.0, 0.0); half * half];
    for (k, (e, f)) in prep_coefficients(n).into_iter().enumerate() {
        let mut a_part: Vec<f64> = symmetric_amplitudes(n, k).iter().map(|x| e * x).collect();
        if k > 0 {
            for (dst, x) in a_part.iter_mut().zip(symmetric_amplitudes(n, k - 1)) {
                *dst += f * x;
            }
        }
        let b_part = symmetric_amplitudes(n, k);
        for (ia, &xa) in a_part.iter().enumerate() {
            if xa == 0.0 {
                continue;
            }
            for (ib, &xb) in b_part.iter().enumerate() {
                amps[ia * half + ib] += C64::new(xa * xb, 0.0);
            }
        }
    }
    StateVector::new(SubsystemLayout::qubits(2 * n), amps)
}

/// `s ρ_id + (1 − s)/M · 1`.
pub fn scaled_state(ideal: &DensityOperator, s: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&s) {
        return out_of_range("s", s, "[0, 1]");
    }
    let m = ideal.dim();
    let mat = &ideal.matrix().scale(s) + &CMatrix::identity(m).scale((1.0 - s) / m as f64);
    Ok(DensityOperator::from_parts(ideal.layout().clone(), mat))
}

/// Random generator used for every seeded sample in the crate.
pub type SeedRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeedRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-random ket: `dim` complex amplitudes whose real and imaginary parts
/// are drawn as independent standard normals (real part first, in index
/// order), then normalized.
pub fn haar_random_ket_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<StateVector> {
    if dim < 2 {
        return out_of_range("dim", dim as f64, "dim ≥ 2");
    }
    let amps: Vec<C64> = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im)
        })
        .collect();
    StateVector::normalized(SubsystemLayout::single(dim)?, amps)
}

/// [`haar_random_ket_with`] driven by [`seeded_rng`]`(seed)`.
pub fn haar_random_ket(dim: usize, seed: u64) -> Result<StateVector> {
    haar_random_ket_with(dim, &mut seeded_rng(seed))
}
