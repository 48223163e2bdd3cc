//! Dense complex linear algebra over small tensor-product spaces.
//!
//! Index convention: the first subsystem of a [`SubsystemLayout`] is the most
//! significant digit of a flat basis index (row-major Kronecker order), so for
//! two qubits the flat index of `|ab⟩` is `2a + b`.
//!
//! Tolerances used throughout the crate:
//! constructive identities `1e-12`, eigenvalue and functional checks `1e-10`,
//! quadrature checks `1e-6`.

mod eigen;
mod matrix;

pub use eigen::{eigh, Eigen, HERMITIAN_TOLERANCE, MAX_SWEEPS, OFF_DIAGONAL_TOLERANCE};
pub use matrix::CMatrix;
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use matrix::ZERO;

pub const NORM_TOLERANCE: f64 = 1e-12;
pub const TRACE_TOLERANCE: f64 = 1e-12;
/// Most negative eigenvalue accepted in a density operator.
pub const POSITIVITY_TOLERANCE: f64 = 1e-10;

/// Ordered subsystem dimensions of a tensor-product space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsystemLayout {
    dims: Vec<usize>,
}

impl SubsystemLayout {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidLayout("no subsystems".into()));
        }
        if let Some(pos) = dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidLayout(format!(
                "subsystem {pos} has dimension 0"
            )));
        }
        Ok(Self { dims })
    }

    pub fn qubits(n: usize) -> Self {
        Self::new(vec![2; n.max(1)]).expect("qubit layout")
    }

    pub fn single(dim: usize) -> Result<Self> {
        Self::new(vec![dim])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self { dims }
    }

    /// Stride of subsystem `k` within a flat index.
    pub fn stride(&self, k: usize) -> usize {
        self.dims[k + 1..].iter().product()
    }

    /// Digits of a flat basis index, most significant first.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    pub fn flat_index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&x, &d)| acc * d + x)
    }

    fn check_selection(&self, keep: &[usize]) -> Result<Vec<usize>> {
        let bad = || Error::InvalidSubsystems {
            indices: keep.to_vec(),
            subsystems: self.len(),
        };
        if keep.is_empty() || keep.iter().any(|&k| k >= self.len()) {
            return Err(bad());
        }
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad());
        }
        Ok(sorted)
    }

    fn sub_layout(&self, keep: &[usize]) -> Self {
        Self {
            dims: keep.iter().map(|&k| self.dims[k]).collect(),
        }
    }
}

/// Normalized pure state with a subsystem layout.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: SubsystemLayout,
    amps: Vec<C64>,
}

impl StateVector {
    /// Checks the length against the layout and normalization to [`NORM_TOLERANCE`].
    pub fn new(layout: SubsystemLayout, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != layout.total() {
            return Err(Error::DimensionMismatch {
                expected: layout.total(),
                found: amps.len(),
            });
        }
        let n2 = norm_sqr(&amps);
        if (n2 - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { layout, amps })
    }

    /// Rescales `amps` to unit norm. Fails on the zero vector.
    pub fn normalized(layout: SubsystemLayout, mut amps: Vec<C64>) -> Result<Self> {
        let n2 = norm_sqr(&amps);
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::NotNormalized(n2));
        }
        let inv = 1.0 / n2.sqrt();
        amps.iter_mut().for_each(|a| *a *= inv);
        Self::new(layout, amps)
    }

    pub fn from_real(layout: SubsystemLayout, amps: &[f64]) -> Result<Self> {
        Self::new(layout, amps.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Computational basis state of a single subsystem of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index,
            });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = C64::new(1.0, 0.0);
        Self::new(SubsystemLayout::single(dim)?, amps)
    }

    /// Skips the normalization check; used for images of normalized states
    /// under maps that are isometric.
    pub(crate) fn from_parts(layout: SubsystemLayout, amps: Vec<C64>) -> Self {
        debug_assert_eq!(layout.total(), amps.len());
        Self { layout, amps }
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amps).sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|`, equal to 1 iff the states agree up to a global phase.
    pub fn overlap(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    /// Same amplitudes on a new layout with the same total dimension.
    pub fn with_layout(&self, layout: SubsystemLayout) -> Result<Self> {
        if layout.total() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: layout.total(),
            });
        }
        Ok(Self {
            layout,
            amps: self.amps.clone(),
        })
    }

    /// Reorders subsystems: subsystem `t` of the result is subsystem
    /// `order[t]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let n = self.layout.len();
        let mut seen = vec![false; n];
        if order.len() != n
            || order
                .iter()
                .any(|&k| k >= n || std::mem::replace(&mut seen[k], true))
        {
            return Err(Error::InvalidSubsystems {
                indices: order.to_vec(),
                subsystems: n,
            });
        }
        let layout = SubsystemLayout {
            dims: order.iter().map(|&k| self.layout.dims[k]).collect(),
        };
        let mut amps = vec![ZERO; self.dim()];
        let mut digits = vec![0; n];
        for (flat, &a) in self.amps.iter().enumerate() {
            fill_digits(&self.layout, flat, &mut digits);
            let target = order
                .iter()
                .fold(0, |acc, &k| acc * self.layout.dims[k] + digits[k]);
            amps[target] = a;
        }
        Ok(Self { layout, amps })
    }

    /// `⟨self|ρ|self⟩`.
    pub fn expectation(&self, rho: &CMatrix) -> Result<f64> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        let n = self.dim();
        let mut acc = ZERO;
        for i in 0..n {
            let mut row = ZERO;
            for j in 0..n {
                row += rho[(i, j)] * self.amps[j];
            }
            acc += self.amps[i].conj() * row;
        }
        Ok(acc.re)
    }

    /// Reduced density operator on `keep`, computed directly from the
    /// amplitudes without forming the full projector.
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityOperator> {
        let keep = self.layout.check_selection(keep)?;
        let traced: Vec<usize> = (0..self.layout.len())
            .filter(|k| !keep.contains(k))
            .collect();
        let kept_layout = self.layout.sub_layout(&keep);
        let traced_layout = self.layout.sub_layout(&traced);
        let (dk, dt) = (
            kept_layout.total(),
            if traced.is_empty() {
                1
            } else {
                traced_layout.total()
            },
        );

        // reshape amplitudes into a dk × dt matrix
        let mut psi = vec![ZERO; dk * dt];
        let mut digits = vec![0; self.layout.len()];
        for (flat, &a) in self.amps.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            fill_digits(&self.layout, flat, &mut digits);
            let r = keep
                .iter()
                .fold(0, |acc, &k| acc * self.layout.dims[k] + digits[k]);
            let c = traced
                .iter()
                .fold(0, |acc, &k| acc * self.layout.dims[k] + digits[k]);
            psi[r * dt + c] = a;
        }
        let mut mat = CMatrix::zeros(dk);
        for i in 0..dk {
            let ri = &psi[i * dt..(i + 1) * dt];
            for j in i..dk {
                let rj = &psi[j * dt..(j + 1) * dt];
                let v: C64 = ri.iter().zip(rj).map(|(a, b)| a * b.conj()).sum();
                mat[(i, j)] = v;
                mat[(j, i)] = v.conj();
            }
        }
        Ok(DensityOperator::from_parts(kept_layout, mat))
    }
}

fn norm_sqr(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

fn fill_digits(layout: &SubsystemLayout, mut index: usize, out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(&layout.dims).rev() {
        *slot = index % d;
        index /= d;
    }
}

/// Hermitian, unit-trace, positive-semidefinite operator with a layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    layout: SubsystemLayout,
    mat: CMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(layout: SubsystemLayout, mat: CMatrix) -> Result<Self> {
        if mat.dim() != layout.total() {
            return Err(Error::DimensionMismatch {
                expected: layout.total(),
                found: mat.dim(),
            });
        }
        let herr = mat.hermiticity_error();
        if herr > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian(herr));
        }
        let tr = mat.trace().re;
        if (tr - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::NotUnitTrace(tr));
        }
        let min = eigh(&mat)?.values.first().copied().unwrap_or(0.0);
        if min < -POSITIVITY_TOLERANCE {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { layout, mat })
    }

    pub(crate) fn from_parts(layout: SubsystemLayout, mat: CMatrix) -> Self {
        debug_assert_eq!(layout.total(), mat.dim());
        Self { layout, mat }
    }

    pub fn maximally_mixed(layout: SubsystemLayout) -> Self {
        let d = layout.total();
        Self::from_parts(layout, CMatrix::identity(d).scale(1.0 / d as f64))
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn with_layout(&self, layout: SubsystemLayout) -> Result<Self> {
        if layout.total() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: layout.total(),
            });
        }
        Ok(Self {
            layout,
            mat: self.mat.clone(),
        })
    }

    /// Complex conjugate in the computational basis, which equals the
    /// transpose for a Hermitian matrix.
    pub fn transpose(&self) -> Self {
        Self::from_parts(self.layout.clone(), self.mat.transpose())
    }

    pub fn as_hermitian(&self) -> HermitianMatrix {
        HermitianMatrix {
            layout: self.layout.clone(),
            mat: self.mat.clone(),
        }
    }

    pub fn max_deviation(&self, other: &Self) -> f64 {
        (&self.mat - &other.mat).max_abs()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eigh(&self.mat)?.values)
    }
}

/// Hermitian matrix that need not be positive, such as a partial transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    layout: SubsystemLayout,
    mat: CMatrix,
}

impl HermitianMatrix {
    pub fn new(layout: SubsystemLayout, mat: CMatrix) -> Result<Self> {
        if mat.dim() != layout.total() {
            return Err(Error::DimensionMismatch {
                expected: layout.total(),
                found: mat.dim(),
            });
        }
        let herr = mat.hermiticity_error();
        if herr > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian(herr));
        }
        Ok(Self { layout, mat })
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }
}

/// Kronecker product with the receiver as the most significant factor.
pub trait TensorProduct: Sized {
    fn tensor(&self, other: &Self) -> Self;
}

impl TensorProduct for StateVector {
    fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Self::from_parts(self.layout.concat(&other.layout), amps)
    }
}

impl TensorProduct for DensityOperator {
    fn tensor(&self, other: &Self) -> Self {
        Self::from_parts(self.layout.concat(&other.layout), self.mat.kron(&other.mat))
    }
}

pub fn tensor<T: TensorProduct>(a: &T, b: &T) -> T {
    a.tensor(b)
}

/// `|ψ⟩⟨ψ|`.
pub fn outer(psi: &StateVector) -> DensityOperator {
    let a = &psi.amps;
    let mat = CMatrix::from_fn(a.len(), |i, j| a[i] * a[j].conj());
    DensityOperator::from_parts(psi.layout.clone(), mat)
}

/// Traces out every subsystem not listed in `keep`. Kept subsystems stay in
/// their original order regardless of the order in `keep`.
pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    let layout = &rho.layout;
    let keep = layout.check_selection(keep)?;
    let kept_layout = layout.sub_layout(&keep);
    let dk = kept_layout.total();
    let n = rho.dim();
    let mut out = CMatrix::zeros(dk);
    let mut di = vec![0; layout.len()];
    let mut dj = vec![0; layout.len()];
    for i in 0..n {
        fill_digits(layout, i, &mut di);
        for j in 0..n {
            fill_digits(layout, j, &mut dj);
            let traced_match = (0..layout.len())
                .filter(|k| !keep.contains(k))
                .all(|k| di[k] == dj[k]);
            if !traced_match {
                continue;
            }
            let r = keep.iter().fold(0, |acc, &k| acc * layout.dims[k] + di[k]);
            let c = keep.iter().fold(0, |acc, &k| acc * layout.dims[k] + dj[k]);
            out[(r, c)] += rho.mat[(i, j)];
        }
    }
    Ok(DensityOperator::from_parts(kept_layout, out))
}

/// Transposes the indices of subsystem `sub`.
pub fn partial_transpose(rho: &DensityOperator, sub: usize) -> Result<HermitianMatrix> {
    let pt = partial_transpose_matrix(&rho.mat, &rho.layout, sub)?;
    Ok(HermitianMatrix {
        layout: rho.layout.clone(),
        mat: pt,
    })
}

pub(crate) fn partial_transpose_matrix(
    mat: &CMatrix,
    layout: &SubsystemLayout,
    sub: usize,
) -> Result<CMatrix> {
    if sub >= layout.len() {
        return Err(Error::InvalidSubsystems {
            indices: vec![sub],
            subsystems: layout.len(),
        });
    }
    let stride = layout.stride(sub);
    let d = layout.dims[sub];
    let n = mat.dim();
    let mut out = CMatrix::zeros(n);
    for i in 0..n {
        let xi = (i / stride) % d;
        for j in 0..n {
            let xj = (j / stride) % d;
            // swap the `sub` digits of the row and column index
            let i2 = i - xi * stride + xj * stride;
            let j2 = j - xj * stride + xi * stride;
            out[(i2, j2)] = mat[(i, j)];
        }
    }
    Ok(out)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(h: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(eigh(&h.mat)?.values)
}

/// Eigenvalues this small are indistinguishable from rounding noise and are
/// treated as zero before taking square roots or logarithms.
fn noise_floor(values: &[f64]) -> f64 {
    let largest = values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    1e-14 * largest * values.len().max(1) as f64
}

fn clamp_nonnegative(values: &[f64]) -> Result<Vec<f64>> {
    let floor = noise_floor(values);
    values
        .iter()
        .map(|&l| {
            if l < -POSITIVITY_TOLERANCE {
                Err(Error::NotPositive(l))
            } else if l < floor {
                Ok(0.0)
            } else {
                Ok(l)
            }
        })
        .collect()
}

/// Principal square root of a positive-semidefinite matrix.
pub fn psd_sqrt(mat: &CMatrix) -> Result<CMatrix> {
    let e = eigh(mat)?;
    let clamped = clamp_nonnegative(&e.values)?;
    let e = Eigen {
        values: clamped,
        vectors: e.vectors,
    };
    Ok(e.reconstruct_with(f64::sqrt))
}

/// `Tr √(√ρ1 ρ2 √ρ1)`.
pub fn root_fidelity(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho1.dim(),
            found: rho2.dim(),
        });
    }
    let s1 = psd_sqrt(&rho1.mat)?;
    let inner = &(&s1 * &rho2.mat) * &s1;
    // symmetrize away the rounding asymmetry of the triple product
    let inner = CMatrix::from_fn(inner.dim(), |i, j| {
        (inner[(i, j)] + inner[(j, i)].conj()) * 0.5
    });
    let values = clamp_nonnegative(&eigh(&inner)?.values)?;
    Ok(values.iter().map(|l| l.sqrt()).sum())
}

/// Bures distance `√2 (1 − Tr√(√ρ1 ρ2 √ρ1))^{1/2}`.
///
/// Identical inputs give a value at the level of `√ε ≈ 1e-8`, not exactly 0:
/// the square root amplifies rounding in the fidelity.
pub fn bures_distance(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<f64> {
    let f = root_fidelity(rho1, rho2)?;
    Ok(std::f64::consts::SQRT_2 * (1.0 - f).max(0.0).sqrt())
}

/// `Tr ρ²`.
pub fn purity(rho: &DensityOperator) -> f64 {
    rho.mat.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// `−Tr ρ ln ρ` in nats, with `0 ln 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    let values = clamp_nonnegative(&eigh(&rho.mat)?.values)?;
    Ok(values
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum::<f64>()
        .max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2, SQRT_2};

    fn ket(amps: &[f64]) -> StateVector {
        let n = amps.len().trailing_zeros() as usize;
        StateVector::from_real(SubsystemLayout::qubits(n), amps).unwrap()
    }

    fn bell() -> DensityOperator {
        outer(&ket(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]))
    }

    #[test]
    fn layout_rejects_zero_dims() {
        assert!(SubsystemLayout::new(vec![2, 0]).is_err());
        assert!(SubsystemLayout::new(vec![]).is_err());
    }

    #[test]
    fn layout_digits_round_trip() {
        let l = SubsystemLayout::new(vec![2, 3, 4]).unwrap();
        for i in 0..24 {
            assert_eq!(l.flat_index(&l.digits(i)), i);
        }
        assert_eq!(l.digits(23), vec![1, 2, 3]);
    }

    #[test]
    fn tensor_of_basis_kets() {
        let s = ket(&[1.0, 0.0]).tensor(&ket(&[0.0, 1.0]));
        assert_eq!(s.layout().dims(), &[2, 2]);
        let re: Vec<f64> = s.amps().iter().map(|a| a.re).collect();
        assert_eq!(re, vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn tensor_input_layout_of_copier() {
        let (a, b) = (0.6, 0.8);
        let psi = ket(&[a, b]);
        let zero = ket(&[1.0, 0.0]);
        let s = tensor(&tensor(&psi, &zero), &zero);
        let re: Vec<f64> = s.amps().iter().map(|a| a.re).collect();
        assert_eq!(re, vec![a, 0.0, 0.0, 0.0, b, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn tensor_trace_multiplicative() {
        let r = outer(&ket(&[0.6, 0.8])).tensor(&DensityOperator::maximally_mixed(
            SubsystemLayout::qubits(1),
        ));
        assert!((r.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn outer_examples() {
        let r = outer(&ket(&[1.0, 0.0]));
        assert_eq!(r.matrix(), &CMatrix::from_diagonal(&[1.0, 0.0]));
        let r = outer(&ket(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]));
        assert!(r
            .matrix()
            .as_slice()
            .iter()
            .all(|z| (z.re - 0.5).abs() < 1e-15));
    }

    #[test]
    fn partial_trace_of_product() {
        let r = outer(&ket(&[1.0, 0.0, 0.0, 0.0]));
        let m = partial_trace(&r, &[0]).unwrap();
        assert_eq!(m.matrix(), &CMatrix::from_diagonal(&[1.0, 0.0]));
    }

    #[test]
    fn partial_trace_rejects_bad_selection() {
        let r = bell();
        assert!(partial_trace(&r, &[]).is_err());
        assert!(partial_trace(&r, &[2]).is_err());
        assert!(partial_trace(&r, &[0, 0]).is_err());
    }

    #[test]
    fn reduced_matches_partial_trace() {
        let amps: Vec<C64> = (0..12)
            .map(|i| C64::new(i as f64, (i % 5) as f64 - 2.0))
            .collect();
        let psi =
            StateVector::normalized(SubsystemLayout::new(vec![2, 3, 2]).unwrap(), amps).unwrap();
        for keep in [
            vec![0],
            vec![1],
            vec![2],
            vec![0, 2],
            vec![2, 1],
            vec![0, 1, 2],
        ] {
            let a = psi.reduced(&keep).unwrap();
            let b = partial_trace(&outer(&psi), &keep).unwrap();
            assert_eq!(a.layout(), b.layout());
            assert!(a.max_deviation(&b) < 1e-15);
        }
    }

    #[test]
    fn permuted_reorders_factors() {
        let a = ket(&[0.6, 0.8]);
        let b = StateVector::normalized(
            SubsystemLayout::single(3).unwrap(),
            vec![C64::new(1.0, 0.0), C64::new(0.0, 2.0), C64::new(-1.0, 0.0)],
        )
        .unwrap();
        let ab = a.tensor(&b);
        let ba = ab.permuted(&[1, 0]).unwrap();
        assert_eq!(ba, b.tensor(&a));
        assert!(ab.permuted(&[0, 0]).is_err());
        assert!(ab.permuted(&[0]).is_err());
    }

    #[test]
    fn partial_transpose_of_bell_state() {
        let pt = partial_transpose(&bell(), 1).unwrap();
        let ev = hermitian_eigenvalues(&pt).unwrap();
        assert!((ev[0] + 0.5).abs() < 1e-12);
        assert!((ev[3] - 0.5).abs() < 1e-12);
        assert!(partial_transpose(&bell(), 2).is_err());
    }

    #[test]
    fn partial_transpose_of_product_is_kron_with_transpose() {
        let mut m = CMatrix::from_diagonal(&[0.3, 0.7]);
        m[(0, 1)] = C64::new(0.1, 0.2);
        m[(1, 0)] = C64::new(0.1, -0.2);
        let rho_b = DensityOperator::new(SubsystemLayout::qubits(1), m).unwrap();
        let rho_a = outer(&ket(&[0.6, 0.8]));
        let pt = partial_transpose(&rho_a.tensor(&rho_b), 1).unwrap();
        let expect = rho_a.tensor(&rho_b.transpose());
        assert!((pt.matrix() - expect.matrix()).max_abs() < 1e-15);
        assert!(hermitian_eigenvalues(&pt).unwrap()[0] > -1e-12);
    }

    #[test]
    fn density_operator_validation() {
        let l = SubsystemLayout::qubits(1);
        assert!(matches!(
            DensityOperator::new(l.clone(), CMatrix::from_diagonal(&[0.5, 0.6])),
            Err(Error::NotUnitTrace(_))
        ));
        assert!(matches!(
            DensityOperator::new(l.clone(), CMatrix::from_diagonal(&[1.5, -0.5])),
            Err(Error::NotPositive(_))
        ));
        assert!(matches!(
            DensityOperator::new(l, CMatrix::from_real_rows(&[&[0.5, 0.1], &[0.0, 0.5]])),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&bell()).unwrap().abs() < 1e-12);
        let mixed = DensityOperator::maximally_mixed(SubsystemLayout::new(vec![5]).unwrap());
        assert!((von_neumann_entropy(&mixed).unwrap() - 5f64.ln()).abs() < 1e-12);
        let clone = DensityOperator::new(
            SubsystemLayout::qubits(1),
            CMatrix::from_diagonal(&[5.0 / 6.0, 1.0 / 6.0]),
        )
        .unwrap();
        let expected = 6f64.ln() - 5.0 / 6.0 * 5f64.ln();
        assert!((von_neumann_entropy(&clone).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 0.450_561_208_866_304_6).abs() < 1e-15);
    }

    #[test]
    fn bures_examples() {
        let zero = outer(&ket(&[1.0, 0.0]));
        let one = outer(&ket(&[0.0, 1.0]));
        assert!(bures_distance(&zero, &zero).unwrap() < 1e-7);
        assert!((bures_distance(&zero, &one).unwrap() - SQRT_2).abs() < 1e-12);
        assert!(bures_distance(&zero, &bell()).is_err());

        let out = DensityOperator::new(
            SubsystemLayout::qubits(1),
            CMatrix::from_diagonal(&[5.0 / 6.0, 1.0 / 6.0]),
        )
        .unwrap();
        let expect = SQRT_2 * (1.0 - (5.0f64 / 6.0).sqrt()).sqrt();
        assert!((bures_distance(&out, &zero).unwrap() - expect).abs() < 1e-12);
        assert!((bures_distance(&zero, &out).unwrap() - expect).abs() < 1e-12);
        assert!((expect - 0.417_442).abs() < 1e-6);
    }

    #[test]
    fn purity_examples() {
        assert!((purity(&bell()) - 1.0).abs() < 1e-15);
        let mixed = DensityOperator::maximally_mixed(SubsystemLayout::qubits(3));
        assert!((purity(&mixed) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let mut m = CMatrix::from_diagonal(&[0.3, 0.7]);
        m[(0, 1)] = C64::new(0.1, 0.2);
        m[(1, 0)] = C64::new(0.1, -0.2);
        let r = psd_sqrt(&m).unwrap();
        assert!((&(&r * &r) - &m).max_abs() < 1e-14);
        let neg = CMatrix::from_diagonal(&[1.0, -1e-3]);
        assert!(matches!(psd_sqrt(&neg), Err(Error::NotPositive(_))));
    }

    #[test]
    fn entropy_of_bell_marginal_is_ln2() {
        let m = partial_trace(&bell(), &[1]).unwrap();
        assert!((von_neumann_entropy(&m).unwrap() - LN_2).abs() < 1e-12);
    }
}
