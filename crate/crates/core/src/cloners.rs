//! Direct cloning transformations, written as isometries from the input space
//! into the joint clones ⊗ copier space. The copier's initial state never
//! appears, so no unitary completion is needed.

use crate::error::{out_of_range, Error, Result};
use crate::network::{clone_via_network, MAX_COPIES};
use crate::qlin::{DensityOperator, StateVector, SubsystemLayout, TensorProduct, C64};
use crate::states::{bloch_ket, symmetric_amplitudes, BlochQubit};

/// Largest single-system dimension accepted by [`mdim_clone`].
pub const MAX_DIMENSION: usize = 64;

/// Largest deviation tolerated between marginals that must coincide.
pub const MARGINAL_TOLERANCE: f64 = 1e-10;

/// Joint output of a cloner. Subsystems `0..clone_count` are the clones, the
/// remaining subsystems (with dimensions `copier_dims`) make up the copier.
#[derive(Debug, Clone, PartialEq)]
pub struct CloneOutput {
    joint: StateVector,
    clone_count: usize,
    copier_dims: Vec<usize>,
}

impl CloneOutput {
    pub(crate) fn new(joint: StateVector, clone_count: usize) -> Self {
        let copier_dims = joint.layout().dims()[clone_count..].to_vec();
        Self {
            joint,
            clone_count,
            copier_dims,
        }
    }

    pub fn joint(&self) -> &StateVector {
        &self.joint
    }

    pub fn clone_count(&self) -> usize {
        self.clone_count
    }

    pub fn copier_dims(&self) -> &[usize] {
        &self.copier_dims
    }

    pub fn clone_marginal(&self, j: usize) -> Result<DensityOperator> {
        if j >= self.clone_count {
            return Err(Error::InvalidSubsystems {
                indices: vec![j],
                subsystems: self.clone_count,
            });
        }
        self.joint.reduced(&[j])
    }

    pub fn clone_marginals(&self) -> Result<Vec<DensityOperator>> {
        (0..self.clone_count)
            .map(|j| self.clone_marginal(j))
            .collect()
    }

    pub fn clone_pair(&self, i: usize, j: usize) -> Result<DensityOperator> {
        if i >= self.clone_count || j >= self.clone_count || i == j {
            return Err(Error::InvalidSubsystems {
                indices: vec![i, j],
                subsystems: self.clone_count,
            });
        }
        self.joint.reduced(&[i, j])
    }

    /// State of the whole copier.
    pub fn copier_marginal(&self) -> Result<DensityOperator> {
        let all: Vec<usize> = (self.clone_count..self.joint.layout().len()).collect();
        self.joint.reduced(&all)
    }

    /// State of copier subsystem `j` (0-based within the copier).
    pub fn copier_part(&self, j: usize) -> Result<DensityOperator> {
        if j >= self.copier_dims.len() {
            return Err(Error::InvalidSubsystems {
                indices: vec![j],
                subsystems: self.copier_dims.len(),
            });
        }
        self.joint.reduced(&[self.clone_count + j])
    }
}

fn check_copies(n: usize) -> Result<()> {
    if (1..=MAX_COPIES).contains(&n) {
        Ok(())
    } else {
        out_of_range("n", n as f64, "1 ≤ n ≤ 8")
    }
}

fn check_qubit(psi: &StateVector) -> Result<(C64, C64)> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: psi.dim(),
        });
    }
    Ok((psi.amps()[0], psi.amps()[1]))
}

fn combine(columns: &[Vec<f64>], coeffs: &[C64]) -> Vec<C64> {
    let len = columns[0].len();
    let mut out = vec![C64::new(0.0, 0.0); len];
    for (col, &c) in columns.iter().zip(coeffs) {
        if c == C64::new(0.0, 0.0) {
            continue;
        }
        for (dst, &x) in out.iter_mut().zip(col) {
            *dst += c * x;
        }
    }
    out
}

/// The 1 → 2 copier on an arbitrary qubit ket, copier basis `|↑⟩ = |0⟩`,
/// `|↓⟩ = |1⟩`:
///
/// ```text
/// |0⟩ → √(2/3)|00⟩|↑⟩ + √(1/3)|+⟩|↓⟩
/// |1⟩ → √(2/3)|11⟩|↓⟩ + √(1/3)|+⟩|↑⟩,   |+⟩ = (|10⟩ + |01⟩)/√2
/// ```
pub fn uqcm_map_ket(psi: &StateVector) -> Result<CloneOutput> {
    let (alpha, beta) = check_qubit(psi)?;
    let big = (2.0f64 / 3.0).sqrt();
    let small = (1.0f64 / 6.0).sqrt();
    // index = 4·a0 + 2·a1 + x
    let mut zero = vec![0.0; 8];
    zero[0b000] = big;
    zero[0b101] = small;
    zero[0b011] = small;
    let mut one = vec![0.0; 8];
    one[0b111] = big;
    one[0b100] = small;
    one[0b010] = small;
    let amps = combine(&[zero, one], &[alpha, beta]);
    Ok(CloneOutput::new(
        StateVector::from_parts(SubsystemLayout::qubits(3), amps),
        2,
    ))
}

pub fn uqcm_map(q: &BlochQubit) -> CloneOutput {
    uqcm_map_ket(&bloch_ket(q)).expect("Bloch ket is a qubit")
}

/// `λ_k^{(n+1)} = [2(n+1−k) / ((n+1)(n+2))]^{1/2}`.
pub fn gm_lambda(n: usize, k: usize) -> f64 {
    let n = n as f64;
    let k = k as f64;
    (2.0 * (n + 1.0 - k) / ((n + 1.0) * (n + 2.0))).sqrt()
}

/// Images of `|0⟩` and `|1⟩` under the `1 → 1+n` symmetric cloner, on
/// `2n+1` qubits ordered `a0, a1..an, b1..bn`.
fn gisin_massar_columns(n: usize) -> [Vec<f64>; 2] {
    let d_idle = 1usize << n;
    let mut zero = vec![0.0; 1 << (2 * n + 1)];
    let mut one = vec![0.0; 1 << (2 * n + 1)];
    for k in 0..=n {
        let idle = symmetric_amplitudes(n, k);
        let sym0 = symmetric_amplitudes(n + 1, k);
        let sym1 = symmetric_amplitudes(n + 1, k + 1);
        let (l0, l1) = (gm_lambda(n, k), gm_lambda(n, n - k));
        for (ib, &xb) in idle.iter().enumerate() {
            if xb == 0.0 {
                continue;
            }
            for (ia, (&x0, &x1)) in sym0.iter().zip(&sym1).enumerate() {
                zero[ia * d_idle + ib] += l0 * x0 * xb;
                one[ia * d_idle + ib] += l1 * x1 * xb;
            }
        }
    }
    [zero, one]
}

/// The `1 → 1+n` symmetric cloner on an arbitrary qubit ket:
/// `|0⟩ → Σ_k λ_k |n+1;k⟩|n;k⟩`, `|1⟩ → Σ_k λ_{n−k} |n+1;k+1⟩|n;k⟩`.
pub fn gisin_massar_map_ket(psi: &StateVector, n: usize) -> Result<CloneOutput> {
    check_copies(n)?;
    let (alpha, beta) = check_qubit(psi)?;
    let amps = combine(&gisin_massar_columns(n), &[alpha, beta]);
    let joint = StateVector::normalized(SubsystemLayout::qubits(2 * n + 1), amps)?;
    Ok(CloneOutput::new(joint, n + 1))
}

pub fn gisin_massar_map(q: &BlochQubit, n: usize) -> Result<CloneOutput> {
    gisin_massar_map_ket(&bloch_ket(q), n)
}

/// Real positive coefficients of the `M`-dimensional cloner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdimCoefficients {
    pub m: usize,
    pub c: f64,
    pub d: f64,
}

impl MdimCoefficients {
    /// `c² + 2(M−1)d²`, which must be 1.
    pub fn normalization(&self) -> f64 {
        self.c * self.c + 2.0 * (self.m as f64 - 1.0) * self.d * self.d
    }
}

/// `c = √(2/(M+1))`, `d = √(1/(2(M+1)))`.
pub fn mdim_coefficients(m: usize) -> Result<MdimCoefficients> {
    if m < 2 {
        return out_of_range("m", m as f64, "m ≥ 2");
    }
    let mf = m as f64;
    Ok(MdimCoefficients {
        m,
        c: (2.0 / (mf + 1.0)).sqrt(),
        d: (1.0 / (2.0 * (mf + 1.0))).sqrt(),
    })
}

/// Universal cloner for an `M`-level system, output layout `[M, M, M]`
/// (original, copy, copier):
/// `|i⟩ → c|i⟩|i⟩|X_i⟩ + d Σ_{j≠i} (|i⟩|j⟩ + |j⟩|i⟩)|X_j⟩`, with `X_j = |j⟩`.
pub fn mdim_clone(phi: &StateVector) -> Result<CloneOutput> {
    let m = phi.dim();
    if !(2..=MAX_DIMENSION).contains(&m) {
        return out_of_range("m", m as f64, "2 ≤ m ≤ 64");
    }
    let MdimCoefficients { c, d, .. } = mdim_coefficients(m)?;
    let idx = |a: usize, b: usize, x: usize| (a * m + b) * m + x;
    let mut amps = vec![C64::new(0.0, 0.0); m * m * m];
    for (i, &ai) in phi.amps().iter().enumerate() {
        if ai == C64::new(0.0, 0.0) {
            continue;
        }
        amps[idx(i, i, i)] += ai * c;
        for j in (0..m).filter(|&j| j != i) {
            amps[idx(i, j, j)] += ai * d;
            amps[idx(j, i, j)] += ai * d;
        }
    }
    let layout = SubsystemLayout::new(vec![m, m, m])?;
    Ok(CloneOutput::new(StateVector::normalized(layout, amps)?, 2))
}

fn check_alpha(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return out_of_range("alpha", alpha, "[0, 1]");
    }
    Ok((1.0 - alpha * alpha).max(0.0).sqrt())
}

/// Output of the gate network read as a cloner: clones `a0, a1..an`, copier
/// `b1..bn`.
pub fn network_clone_output(q: &BlochQubit, n: usize) -> Result<CloneOutput> {
    Ok(CloneOutput::new(clone_via_network(q, n)?, n + 1))
}

/// `α|00⟩ + β|11⟩` with `β = √(1 − α²)`.
pub fn register_ideal(alpha: f64) -> Result<StateVector> {
    let beta = check_alpha(alpha)?;
    StateVector::from_real(SubsystemLayout::qubits(2), &[alpha, 0.0, 0.0, beta])
}

fn two_qubits(rho: DensityOperator) -> Result<DensityOperator> {
    rho.with_layout(SubsystemLayout::qubits(2))
}

/// Both register qubits cloned independently by two qubit cloners. The
/// output is regrouped as `[(a0 b1), (a1 b0), x_I, x_II]`: the two clone
/// registers first, then the two copiers.
pub fn local_register_output(alpha: f64) -> Result<CloneOutput> {
    let beta = check_alpha(alpha)?;
    let cloned = |bit: usize| -> Result<StateVector> {
        let basis = StateVector::basis(2, bit)?.with_layout(SubsystemLayout::qubits(1))?;
        mdim_clone(&basis)?
            .joint()
            .with_layout(SubsystemLayout::qubits(3))
    };
    let (c0, c1) = (cloned(0)?, cloned(1)?);
    // subsystems: a0 a1 xI b0 b1 xII
    let both0 = c0.tensor(&c0);
    let both1 = c1.tensor(&c1);
    let amps: Vec<C64> = both0
        .amps()
        .iter()
        .zip(both1.amps())
        .map(|(x, y)| x * alpha + y * beta)
        .collect();
    let joint = StateVector::from_parts(both0.layout().clone(), amps);
    let regrouped = joint
        .permuted(&[0, 4, 1, 3, 2, 5])?
        .with_layout(SubsystemLayout::new(vec![4, 4, 2, 2])?)?;
    Ok(CloneOutput::new(regrouped, 2))
}

/// Clone registers `(ρ_{a0 b1}, ρ_{a1 b0})` of the local scheme.
pub fn local_register_clone_pairs(alpha: f64) -> Result<(DensityOperator, DensityOperator)> {
    let out = local_register_output(alpha)?;
    Ok((
        two_qubits(out.clone_marginal(0)?)?,
        two_qubits(out.clone_marginal(1)?)?,
    ))
}

/// `ρ_{a0 b1}` of the local scheme, checked against `ρ_{a1 b0}`.
pub fn local_register_clone(alpha: f64) -> Result<DensityOperator> {
    let (first, second) = local_register_clone_pairs(alpha)?;
    let dev = first.max_deviation(&second);
    if dev > MARGINAL_TOLERANCE {
        return Err(Error::AsymmetricPairs(dev));
    }
    Ok(first)
}

/// The register cloned as one 4-level system, basis `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn nonlocal_register_output(alpha: f64) -> Result<CloneOutput> {
    let ideal = register_ideal(alpha)?.with_layout(SubsystemLayout::single(4)?)?;
    mdim_clone(&ideal)
}

pub fn nonlocal_register_clone(alpha: f64) -> Result<DensityOperator> {
    let out = nonlocal_register_output(alpha)?;
    let (first, second) = (out.clone_marginal(0)?, out.clone_marginal(1)?);
    let dev = first.max_deviation(&second);
    if dev > MARGINAL_TOLERANCE {
        return Err(Error::AsymmetricPairs(dev));
    }
    two_qubits(first)
}
