use serde::{Deserialize, Serialize, Serializer};

use super::{extract_scaling_factor, marginal_spread, ppt_separable, PptVerdict, RegisterMethod};
use crate::cloners::{
    gisin_massar_map, local_register_output, mdim_clone, network_clone_output,
    nonlocal_register_output, register_ideal, CloneOutput,
};
use crate::error::Result;
use crate::qlin::{
    bures_distance, outer, purity, von_neumann_entropy, CMatrix, DensityOperator, StateVector,
    SubsystemLayout, C64,
};
use crate::states::{bloch_ket, symmetric_amplitudes, BlochQubit};

pub const SCHEMA_VERSION: u32 = 1;
const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds to `digits` significant decimal digits. Non-finite values and zero
/// pass through unchanged.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 || digits == 0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

fn sig<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x, SIGNIFICANT_DIGITS))
}

fn sig_vec<S: Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|&x| round_sig(x, SIGNIFICANT_DIGITS)))
}

fn sig_opt<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_some(&round_sig(*x, SIGNIFICANT_DIGITS)),
        None => s.serialize_none(),
    }
}

/// Where the input state came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputSource {
    Explicit,
    Seed,
    Default,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSpec {
    pub source: InputSource,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "sig_opt"
    )]
    pub theta: Option<f64>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "sig_opt"
    )]
    pub phi: Option<f64>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        serialize_with = "sig_opt"
    )]
    pub alpha2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InputSpec {
    pub fn bloch(source: InputSource, q: &BlochQubit, seed: Option<u64>) -> Self {
        Self {
            source,
            theta: Some(q.theta()),
            phi: Some(q.phi()),
            alpha2: None,
            seed,
        }
    }

    pub fn ket(source: InputSource, seed: Option<u64>) -> Self {
        Self {
            source,
            theta: None,
            phi: None,
            alpha2: None,
            seed,
        }
    }

    pub fn register(source: InputSource, alpha2: f64) -> Self {
        Self {
            source,
            theta: None,
            phi: None,
            alpha2: Some(alpha2),
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairVerdict {
    pub label: String,
    pub separable: bool,
    #[serde(serialize_with = "sig")]
    pub min_pt_eigenvalue: f64,
}

impl PairVerdict {
    fn from_ppt(label: String, v: &PptVerdict) -> Self {
        Self {
            label,
            separable: v.separable,
            min_pt_eigenvalue: v.min_eigenvalue,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entropies {
    #[serde(serialize_with = "sig")]
    pub clone: f64,
    #[serde(serialize_with = "sig")]
    pub copier: f64,
}

/// Everything the command line reports about one cloning run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloneReport {
    pub schema_version: u32,
    pub cloner: String,
    pub n_or_m: usize,
    pub input: InputSpec,
    #[serde(serialize_with = "sig")]
    pub scaling_factor: f64,
    #[serde(serialize_with = "sig")]
    pub fit_residual: f64,
    pub scaled_form: bool,
    #[serde(serialize_with = "sig")]
    pub fidelity: f64,
    #[serde(serialize_with = "sig")]
    pub bures: f64,
    #[serde(serialize_with = "sig")]
    pub marginal_spread: f64,
    #[serde(serialize_with = "sig_vec")]
    pub pt_eigenvalues: Vec<f64>,
    pub separable: Vec<PairVerdict>,
    #[serde(serialize_with = "sig")]
    pub purity_xi: f64,
    pub entropies: Entropies,
}

struct Core {
    scaling_factor: f64,
    fit_residual: f64,
    scaled_form: bool,
    fidelity: f64,
    bures: f64,
    marginal_spread: f64,
}

fn core_metrics(
    out: &CloneOutput,
    clone: &DensityOperator,
    ideal_ket: &StateVector,
) -> Result<Core> {
    let ideal = outer(ideal_ket).with_layout(clone.layout().clone())?;
    let fit = extract_scaling_factor(clone, &ideal)?;
    Ok(Core {
        scaling_factor: fit.s,
        fit_residual: fit.residual,
        scaled_form: fit.fits(),
        fidelity: ideal_ket.expectation(clone.matrix())?,
        bures: bures_distance(clone, &ideal)?,
        marginal_spread: marginal_spread(out)?,
    })
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    cloner: &str,
    n_or_m: usize,
    input: InputSpec,
    core: Core,
    pt_eigenvalues: Vec<f64>,
    separable: Vec<PairVerdict>,
    copier: &DensityOperator,
    entropies: Entropies,
) -> CloneReport {
    CloneReport {
        schema_version: SCHEMA_VERSION,
        cloner: cloner.to_string(),
        n_or_m,
        input,
        scaling_factor: core.scaling_factor,
        fit_residual: core.fit_residual,
        scaled_form: core.scaled_form,
        fidelity: core.fidelity,
        bures: core.bures,
        marginal_spread: core.marginal_spread,
        pt_eigenvalues,
        separable,
        purity_xi: purity(copier),
        entropies,
    }
}

fn qubit_clone_report(
    cloner: &str,
    n: usize,
    q: &BlochQubit,
    out: &CloneOutput,
    input: InputSpec,
) -> Result<CloneReport> {
    let clone = out.clone_marginal(0)?;
    let core = core_metrics(out, &clone, &bloch_ket(q))?;
    let mut separable = Vec::new();
    let mut pt_eigenvalues = Vec::new();
    for i in 0..out.clone_count() {
        for j in i + 1..out.clone_count() {
            let v = ppt_separable(&out.clone_pair(i, j)?)?;
            if pt_eigenvalues.is_empty() {
                pt_eigenvalues = v.eigenvalues.clone();
            }
            separable.push(PairVerdict::from_ppt(format!("clones {i},{j}"), &v));
        }
    }
    let copier = out.copier_marginal()?;
    let entropies = Entropies {
        clone: von_neumann_entropy(&clone)?,
        copier: symmetric_entropy(&copier, out.copier_dims().len())?,
    };
    Ok(assemble(
        cloner,
        n,
        input,
        core,
        pt_eigenvalues,
        separable,
        &copier,
        entropies,
    ))
}

/// Entropy of an `n`-qubit state, computed on the symmetric subspace when the
/// state is supported there and on the full space otherwise.
fn symmetric_entropy(rho: &DensityOperator, n: usize) -> Result<f64> {
    if rho.dim() <= 16 {
        return von_neumann_entropy(rho);
    }
    let basis: Vec<Vec<f64>> = (0..=n).map(|k| symmetric_amplitudes(n, k)).collect();
    let m = rho.matrix();
    let d = rho.dim();
    let compressed = CMatrix::from_fn(n + 1, |k, l| {
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            if basis[k][i] == 0.0 {
                continue;
            }
            for j in 0..d {
                if basis[l][j] != 0.0 {
                    acc += m[(i, j)] * (basis[k][i] * basis[l][j]);
                }
            }
        }
        acc
    });
    if (compressed.trace().re - 1.0).abs() > 1e-10 {
        return von_neumann_entropy(rho);
    }
    let layout = SubsystemLayout::single(n + 1)?;
    match DensityOperator::new(layout, compressed) {
        Ok(small) => von_neumann_entropy(&small),
        Err(_) => von_neumann_entropy(rho),
    }
}

pub fn uqcm_report(q: &BlochQubit, input: InputSpec) -> Result<CloneReport> {
    qubit_clone_report("uqcm", 1, q, &network_clone_output(q, 1)?, input)
}

pub fn gm_report(q: &BlochQubit, n: usize, input: InputSpec) -> Result<CloneReport> {
    qubit_clone_report("gm", n, q, &gisin_massar_map(q, n)?, input)
}

pub fn mdim_report(phi: &StateVector, input: InputSpec) -> Result<CloneReport> {
    let out = mdim_clone(phi)?;
    let m = phi.dim();
    let clone = out.clone_marginal(0)?;
    let core = core_metrics(&out, &clone, phi)?;
    let (pt_eigenvalues, separable) = if m == 2 {
        let pair = out
            .clone_pair(0, 1)?
            .with_layout(SubsystemLayout::qubits(2))?;
        let v = ppt_separable(&pair)?;
        let verdict = PairVerdict::from_ppt("clones 0,1".into(), &v);
        (v.eigenvalues, vec![verdict])
    } else {
        (Vec::new(), Vec::new())
    };
    let copier = out.copier_marginal()?;
    let entropies = Entropies {
        clone: von_neumann_entropy(&clone)?,
        copier: von_neumann_entropy(&copier)?,
    };
    Ok(assemble(
        "mdim",
        m,
        input,
        core,
        pt_eigenvalues,
        separable,
        &copier,
        entropies,
    ))
}

pub fn register_report(
    method: RegisterMethod,
    alpha2: f64,
    input: InputSpec,
) -> Result<CloneReport> {
    let register = super::register_clone(method, alpha2)?;
    let ideal = register_ideal(alpha2.sqrt())?;
    let (out, cloner) = match method {
        RegisterMethod::Local => (local_register_output(alpha2.sqrt())?, "register-local"),
        RegisterMethod::Nonlocal => (
            nonlocal_register_output(alpha2.sqrt())?,
            "register-nonlocal",
        ),
    };
    let clone = register.with_layout(SubsystemLayout::single(4)?)?;
    let ideal4 = ideal.with_layout(SubsystemLayout::single(4)?)?;
    let core = core_metrics(&out, &clone, &ideal4)?;
    let v = ppt_separable(&register)?;
    let separable = vec![PairVerdict::from_ppt("clone register".into(), &v)];
    let copier = out.copier_marginal()?;
    let entropies = Entropies {
        clone: von_neumann_entropy(&clone)?,
        copier: von_neumann_entropy(&copier)?,
    };
    Ok(assemble(
        cloner,
        2,
        input,
        core,
        v.eigenvalues,
        separable,
        &copier,
        entropies,
    ))
}
