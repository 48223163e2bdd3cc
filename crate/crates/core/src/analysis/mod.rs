//! Figures of merit and closed-form references for the cloners, plus the
//! separability machinery used to compare simulation with theory.

mod quadrature;
mod report;

pub use quadrature::{gauss_legendre, SphereGrid, MIN_GRID};
pub use report::{
    gm_report, mdim_report, register_report, round_sig, uqcm_report, CloneReport, Entropies,
    InputSource, InputSpec, PairVerdict, SCHEMA_VERSION,
};

use serde::{Deserialize, Serialize};

use crate::cloners::{
    local_register_clone, nonlocal_register_clone, CloneOutput, MARGINAL_TOLERANCE,
};
use crate::error::{out_of_range, Error, Result};
use crate::network::clone_via_network;
use crate::qlin::{
    eigh, hermitian_eigenvalues, outer, partial_transpose, partial_transpose_matrix, CMatrix,
    DensityOperator, StateVector, SubsystemLayout, C64, POSITIVITY_TOLERANCE,
};
use crate::states::{bloch_ket, BlochQubit};

/// Residual (max-norm) up to which an operator counts as being in scaled form.
pub const SCALED_FORM_TOLERANCE: f64 = 1e-9;

/// Least-squares fit of `ρ_out ≈ s ρ_id + (1 − s)/M · 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub s: f64,
    /// Max-norm of `ρ_out − s ρ_id − (1 − s)/M · 1`.
    pub residual: f64,
}

impl ScalingFit {
    pub fn fits(&self) -> bool {
        self.residual <= SCALED_FORM_TOLERANCE
    }
}

/// Writing `A = ρ_out − 1/M` and `B = ρ_id − 1/M`, the minimizer of
/// `‖A − sB‖_F` is `s = ⟨B, A⟩ / ⟨B, B⟩`.
pub fn extract_scaling_factor(
    out: &DensityOperator,
    ideal: &DensityOperator,
) -> Result<ScalingFit> {
    if out.dim() != ideal.dim() {
        return Err(Error::DimensionMismatch {
            expected: ideal.dim(),
            found: out.dim(),
        });
    }
    let m = out.dim();
    let mixed = CMatrix::identity(m).scale(1.0 / m as f64);
    let a = out.matrix() - &mixed;
    let b = ideal.matrix() - &mixed;
    let bb = b.real_inner(&b);
    if bb < 1e-24 {
        return Err(Error::DegenerateFit);
    }
    let s = b.real_inner(&a) / bb;
    let residual = (&a - &b.scale(s)).max_abs();
    Ok(ScalingFit { s, residual })
}

/// `∫ dΩ ⟨Ψ|ρ_out(Ψ)|Ψ⟩` over the Bloch sphere.
pub fn mean_fidelity<F>(mut clone_marginal: F, grid: &SphereGrid) -> Result<f64>
where
    F: FnMut(&BlochQubit) -> Result<DensityOperator>,
{
    grid.average(|theta, phi| {
        let q = BlochQubit::new(theta, phi)?;
        let rho = clone_marginal(&q)?;
        bloch_ket(&q).expectation(rho.matrix())
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PptVerdict {
    pub separable: bool,
    pub min_eigenvalue: f64,
    /// Ascending spectrum of the partial transpose.
    pub eigenvalues: Vec<f64>,
}

/// Peres–Horodecki test on a two-qubit state: separable iff the partial
/// transpose on the second qubit has no eigenvalue below `−1e-10`.
pub fn ppt_separable(rho: &DensityOperator) -> Result<PptVerdict> {
    if rho.layout().dims() != [2, 2] {
        return Err(Error::InvalidLayout(format!(
            "PPT test needs a two-qubit layout, found {:?}",
            rho.layout().dims()
        )));
    }
    let eigenvalues = hermitian_eigenvalues(&partial_transpose(rho, 1)?)?;
    let min_eigenvalue = eigenvalues[0];
    Ok(PptVerdict {
        separable: min_eigenvalue >= -POSITIVITY_TOLERANCE,
        min_eigenvalue,
        eigenvalues,
    })
}

/// Maps a two-qubit matrix between the internal order `|00⟩,|01⟩,|10⟩,|11⟩`
/// and the printed order `|11⟩,|10⟩,|01⟩,|00⟩`. The map is an involution.
pub fn reverse_two_qubit_order(m: &CMatrix) -> CMatrix {
    m.permuted(&[3, 2, 1, 0])
}

/// Two-clone density matrix of the `1 → 1+n` cloner in the printed basis
/// order `|11⟩,|10⟩,|01⟩,|00⟩`.
pub fn clone_pair_density_printed(n: usize, q: &BlochQubit) -> Result<CMatrix> {
    if n == 0 {
        return out_of_range("n", 0.0, "n ≥ 1");
    }
    let (alpha, beta) = q.amplitudes();
    let nf = n as f64;
    let (a2, b2) = (alpha.norm_sqr(), beta.norm_sqr());
    let off = alpha.conj() * beta * ((nf + 3.0) / (nf + 1.0));
    let offc = off.conj();
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let top = C64::new(((3.0 * nf + 5.0) * b2 + (nf - 1.0) * a2) / (nf + 1.0), 0.0);
    let bottom = C64::new(((3.0 * nf + 5.0) * a2 + (nf - 1.0) * b2) / (nf + 1.0), 0.0);
    let rows = [
        [top, off, off, zero],
        [offc, one, one, off],
        [offc, one, one, off],
        [zero, offc, offc, bottom],
    ];
    Ok(CMatrix::from_fn(4, |i, j| rows[i][j] / 6.0))
}

/// [`clone_pair_density_printed`] converted to the internal basis order.
pub fn clone_pair_density_formula(n: usize, q: &BlochQubit) -> Result<DensityOperator> {
    let printed = clone_pair_density_printed(n, q)?;
    DensityOperator::new(
        SubsystemLayout::qubits(2),
        reverse_two_qubit_order(&printed),
    )
}

/// `{1/6, 1/6, 1/3 ± √(2(5+4n+n²)) / (6(n+1))}`, ascending.
pub fn pt_spectrum_formula(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let r = (2.0 * (5.0 + 4.0 * nf + nf * nf)).sqrt() / (6.0 * (nf + 1.0));
    let mut v = vec![1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0 + r, 1.0 / 3.0 - r];
    v.sort_by(f64::total_cmp);
    v
}

/// `s^{(n)} = 1/3 + 2/(3(n+1))`.
pub fn gm_scaling_formula(n: usize) -> f64 {
    1.0 / 3.0 + 2.0 / (3.0 * (n as f64 + 1.0))
}

/// `F = 2/3 + 1/(3(n+1))`.
pub fn gm_fidelity_formula(n: usize) -> f64 {
    2.0 / 3.0 + 1.0 / (3.0 * (n as f64 + 1.0))
}

/// `(1/3) ρ_id^T + (1/3) 1`.
pub fn idle_qubit_formula(q: &BlochQubit) -> DensityOperator {
    let ideal = outer(&bloch_ket(q));
    let mat = &ideal.matrix().transpose().scale(1.0 / 3.0) + &CMatrix::identity(2).scale(1.0 / 3.0);
    DensityOperator::new(SubsystemLayout::qubits(1), mat).expect("valid qubit state")
}

/// Largest deviation of any copier qubit from [`idle_qubit_formula`].
pub fn idle_qubit_check(joint: &CloneOutput, q: &BlochQubit) -> Result<f64> {
    if joint.copier_dims().iter().any(|&d| d != 2) {
        return Err(Error::InvalidLayout(format!(
            "idle-qubit law needs qubit copiers, found {:?}",
            joint.copier_dims()
        )));
    }
    let expect = idle_qubit_formula(q);
    let mut worst = 0.0_f64;
    for j in 0..joint.copier_dims().len() {
        worst = worst.max(joint.copier_part(j)?.max_deviation(&expect));
    }
    Ok(worst)
}

/// `ξ^{(n)} = (1/(n+1)) · 2(2n² + 7n + 6) / (3(n+2)²)`.
pub fn purity_xi(n: usize) -> f64 {
    let nf = n as f64;
    2.0 * (2.0 * nf * nf + 7.0 * nf + 6.0) / (3.0 * (nf + 2.0).powi(2) * (nf + 1.0))
}

/// `Tr ρ_copier²` of a cloner output.
pub fn purity_xi_simulated(joint: &CloneOutput) -> Result<f64> {
    Ok(crate::qlin::purity(&joint.copier_marginal()?))
}

/// Closed forms for the `M`-level cloner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MdimFormulas {
    pub s: f64,
    pub bures: f64,
    pub entropy_clone: f64,
    pub entropy_copier: f64,
}

pub fn mdim_formulas(m: usize) -> Result<MdimFormulas> {
    if m < 2 {
        return out_of_range("m", m as f64, "m ≥ 2");
    }
    let mf = m as f64;
    Ok(MdimFormulas {
        s: (mf + 2.0) / (2.0 * (mf + 1.0)),
        bures: std::f64::consts::SQRT_2 * (1.0 - ((mf + 3.0) / (2.0 * (mf + 1.0))).sqrt()).sqrt(),
        entropy_clone: (2.0 * (mf + 1.0)).ln() - (mf + 3.0) / (2.0 * (mf + 1.0)) * (mf + 3.0).ln(),
        entropy_copier: (mf + 1.0).ln() - 2.0 * std::f64::consts::LN_2 / (mf + 1.0),
    })
}

/// Copier state `(ρ_id^T + 1)/(M + 1)` of the `M`-level cloner.
pub fn mdim_copier_formula(phi: &StateVector) -> Result<DensityOperator> {
    let m = phi.dim();
    let ideal = outer(phi);
    let mat = (&ideal.matrix().transpose() + &CMatrix::identity(m)).scale(1.0 / (m as f64 + 1.0));
    DensityOperator::new(SubsystemLayout::single(m)?, mat)
}

/// `lim_{M→∞}` of the Bures distance, `√(2 − √2)`.
pub fn mdim_bures_limit() -> f64 {
    (2.0 - std::f64::consts::SQRT_2).sqrt()
}

/// How a two-qubit register is cloned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegisterMethod {
    /// One qubit cloner per register qubit.
    Local,
    /// One 4-level cloner for the whole register.
    Nonlocal,
}

/// Range of `α²` over which the cloned register stays inseparable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityInterval {
    pub lo: f64,
    pub hi: f64,
}

impl SeparabilityInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return out_of_range("interval", lo, "0 ≤ lo ≤ hi ≤ 1");
        }
        Ok(Self { lo, hi })
    }

    pub fn strictly_contains(&self, other: &Self) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }

    pub fn contains(&self, alpha2: f64) -> bool {
        (self.lo..=self.hi).contains(&alpha2)
    }
}

/// Clone-register density for `α = √(α²)`.
pub fn register_clone(method: RegisterMethod, alpha2: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&alpha2) {
        return out_of_range("alpha2", alpha2, "[0, 1]");
    }
    let alpha = alpha2.sqrt();
    match method {
        RegisterMethod::Local => local_register_clone(alpha),
        RegisterMethod::Nonlocal => nonlocal_register_clone(alpha),
    }
}

pub fn register_ppt(method: RegisterMethod, alpha2: f64) -> Result<PptVerdict> {
    ppt_separable(&register_clone(method, alpha2)?)
}

pub const BISECTION_RESOLUTION: f64 = 1e-8;
pub const BISECTION_MAX_ITERATIONS: usize = 60;

/// Bisects on `α²` for the separable/inseparable switch in `[0, 1/2]` and in
/// `[1/2, 1]`. The register at `α² = 1/2` must be inseparable and the
/// endpoints separable.
pub fn inseparability_boundary(method: RegisterMethod) -> Result<SeparabilityInterval> {
    let separable = |a2: f64| -> Result<bool> { Ok(register_ppt(method, a2)?.separable) };
    if separable(0.5)? || !separable(0.0)? || !separable(1.0)? {
        return Err(Error::InvalidLayout(
            "no inseparability interval around α² = 1/2".into(),
        ));
    }
    // (separable end, inseparable end)
    let bisect = |mut sep: f64, mut insep: f64| -> Result<f64> {
        for _ in 0..BISECTION_MAX_ITERATIONS {
            if (insep - sep).abs() <= BISECTION_RESOLUTION {
                break;
            }
            let mid = 0.5 * (sep + insep);
            if separable(mid)? {
                sep = mid;
            } else {
                insep = mid;
            }
        }
        Ok(0.5 * (sep + insep))
    };
    SeparabilityInterval::new(bisect(0.0, 0.5)?, bisect(1.0, 0.5)?)
}

/// Closed-form inseparability interval `1/2 ± √39/16` (local) and
/// `1/2 ± √2/3` (nonlocal).
pub fn inseparability_formula(method: RegisterMethod) -> SeparabilityInterval {
    let half_width = match method {
        RegisterMethod::Local => 39f64.sqrt() / 16.0,
        RegisterMethod::Nonlocal => 2f64.sqrt() / 3.0,
    };
    SeparabilityInterval {
        lo: 0.5 - half_width,
        hi: 0.5 + half_width,
    }
}

/// Closed-form clone register for `α|00⟩ + β|11⟩`: diagonal
/// `((a α² + 1)/q, r, r, (a β² + 1)/q)` and coherence `c αβ`, with
/// `(a, q, r, c) = (24, 36, 5/36, 4/9)` locally and `(6, 10, 1/10, 3/5)`
/// nonlocally.
pub fn register_clone_formula(method: RegisterMethod, alpha2: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&alpha2) {
        return out_of_range("alpha2", alpha2, "[0, 1]");
    }
    let beta2 = 1.0 - alpha2;
    let (a, q, r, c) = match method {
        RegisterMethod::Local => (24.0, 36.0, 5.0 / 36.0, 4.0 / 9.0),
        RegisterMethod::Nonlocal => (6.0, 10.0, 0.1, 0.6),
    };
    let coherence = c * (alpha2 * beta2).sqrt();
    let mut mat = CMatrix::from_diagonal(&[(a * alpha2 + 1.0) / q, r, r, (a * beta2 + 1.0) / q]);
    mat[(0, 3)] = C64::new(coherence, 0.0);
    mat[(3, 0)] = C64::new(coherence, 0.0);
    DensityOperator::new(SubsystemLayout::qubits(2), mat)
}

/// Copy–idle pair `ρ_{a1 b1}` of the single-copy network output.
pub fn copy_idle_density(q: &BlochQubit) -> Result<DensityOperator> {
    clone_via_network(q, 1)?.reduced(&[1, 2])
}

/// Ascending spectrum of the partial transpose (on `b1`) of [`copy_idle_density`].
pub fn rho_a1b1_pt_spectrum(q: &BlochQubit) -> Result<Vec<f64>> {
    let rho = copy_idle_density(q)?;
    let pt = partial_transpose_matrix(rho.matrix(), rho.layout(), 1)?;
    Ok(eigh(&pt)?.values)
}

/// Input-independent spectrum for real amplitudes:
/// `{(1−√17)/12, 1/6, (1+√17)/12, 2/3}`.
pub fn rho_a1b1_pt_spectrum_real() -> Vec<f64> {
    let r17 = 17f64.sqrt();
    vec![(1.0 - r17) / 12.0, 1.0 / 6.0, (1.0 + r17) / 12.0, 2.0 / 3.0]
}

/// Largest pairwise deviation among the clone marginals.
pub fn marginal_spread(joint: &CloneOutput) -> Result<f64> {
    let marginals = joint.clone_marginals()?;
    let mut worst = 0.0_f64;
    for (i, a) in marginals.iter().enumerate() {
        for b in &marginals[i + 1..] {
            worst = worst.max(a.max_deviation(b));
        }
    }
    Ok(worst)
}

/// `true` if every clone marginal agrees with every other.
pub fn marginals_equal(joint: &CloneOutput) -> Result<bool> {
    Ok(marginal_spread(joint)? <= MARGINAL_TOLERANCE)
}
