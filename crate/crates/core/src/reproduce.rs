//! The reproduction table: one row per headline result, each comparing a
//! reference value with the simulated one and folding every sub-check of
//! that result into a single worst-case deviation.

use serde::Serialize;

use crate::analysis::{
    clone_pair_density_formula, extract_scaling_factor, gm_fidelity_formula, gm_scaling_formula,
    idle_qubit_check, idle_qubit_formula, inseparability_boundary, inseparability_formula,
    marginal_spread, mdim_copier_formula, mdim_formulas, mean_fidelity, ppt_separable,
    pt_spectrum_formula, purity_xi, purity_xi_simulated, register_clone, register_clone_formula,
    rho_a1b1_pt_spectrum, rho_a1b1_pt_spectrum_real, RegisterMethod, SphereGrid,
};
use crate::cloners::{gisin_massar_map, mdim_clone, network_clone_output, uqcm_map};
use crate::error::Result;
use crate::network::{build_prep_circuit_1, clone_via_network, run_circuit};
use crate::qlin::{bures_distance, outer, von_neumann_entropy, StateVector, SubsystemLayout, C64};
use crate::states::{bloch_ket, haar_random_ket_with, seeded_rng, BlochQubit};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub name: String,
    /// Reference value of the headline quantity.
    pub reference: f64,
    /// Simulated value of the headline quantity.
    pub computed: f64,
    /// Worst deviation over every comparison folded into the row.
    pub delta: f64,
    pub tolerance: f64,
    pub pass: bool,
}

struct Tally {
    tolerance: f64,
    worst: f64,
    conditions: bool,
}

impl Tally {
    fn new(tolerance: f64) -> Self {
        Self {
            tolerance,
            worst: 0.0,
            conditions: true,
        }
    }

    fn compare(&mut self, expected: f64, got: f64) {
        self.deviation((expected - got).abs());
    }

    fn deviation(&mut self, dev: f64) {
        self.worst = if dev.is_nan() || self.worst.is_nan() {
            f64::NAN
        } else {
            self.worst.max(dev)
        };
    }

    /// Folds in a deviation judged against its own tolerance, rescaled to the
    /// row tolerance.
    fn deviation_at(&mut self, dev: f64, tolerance: f64) {
        self.deviation(dev * self.tolerance / tolerance);
    }

    fn require(&mut self, ok: bool) {
        self.conditions &= ok;
    }

    fn row(self, name: &str, reference: f64, computed: f64) -> Row {
        Row {
            name: name.to_string(),
            reference,
            computed,
            delta: self.worst,
            tolerance: self.tolerance,
            pass: self.conditions && self.worst <= self.tolerance,
        }
    }
}

fn random_qubits(seed: u64, count: usize) -> Vec<BlochQubit> {
    let mut rng = seeded_rng(seed);
    (0..count)
        .map(|_| BlochQubit::random_with(&mut rng))
        .collect()
}

pub(crate) fn std_dev(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
}

fn uqcm_scaling() -> Result<Row> {
    let mut t = Tally::new(1e-10);
    let mut s = f64::NAN;
    for q in random_qubits(101, 100) {
        let out = network_clone_output(&q, 1)?;
        let ideal = outer(&bloch_ket(&q));
        for j in 0..2 {
            let marginal = out.clone_marginal(j)?;
            let fit = extract_scaling_factor(&marginal, &ideal)?;
            t.compare(2.0 / 3.0, fit.s);
            t.deviation(fit.residual);
            t.compare(5.0 / 6.0, bloch_ket(&q).expectation(marginal.matrix())?);
            s = fit.s;
        }
    }
    Ok(t.row(
        "1→2 network: scaling factor 2/3 and fidelity 5/6",
        2.0 / 3.0,
        s,
    ))
}

fn prep_circuit() -> Result<Row> {
    let mut t = Tally::new(1e-12);
    let zero = StateVector::basis(4, 0)?.with_layout(SubsystemLayout::qubits(2))?;
    let out = run_circuit(&build_prep_circuit_1(), &zero)?;
    let r6 = 6f64.sqrt();
    let expect = [2.0 / r6, 1.0 / r6, 0.0, 1.0 / r6];
    for (a, e) in out.amps().iter().zip(expect) {
        t.deviation((a - C64::new(e, 0.0)).norm());
    }
    Ok(t.row(
        "preparation circuit: amplitudes (2,1,0,1)/√6",
        2.0 / r6,
        out.amps()[0].re,
    ))
}

fn network_equivalence() -> Result<Row> {
    let mut t = Tally::new(1e-10);
    let mut worst = 1.0_f64;
    for n in 1..=5 {
        for q in random_qubits(200 + n as u64, 20) {
            let net = clone_via_network(&q, n)?;
            let direct = gisin_massar_map(&q, n)?;
            let overlap = net.overlap(direct.joint())?;
            t.compare(1.0, overlap);
            worst = worst.min(overlap);
        }
    }
    Ok(t.row("network equals direct map, n = 1..5: |⟨·|·⟩|", 1.0, worst))
}

fn multi_copy_scaling() -> Result<Row> {
    let mut t = Tally::new(1e-10);
    let mut s = f64::NAN;
    for n in 1..=6 {
        for q in random_qubits(300 + n as u64, 5) {
            let out = gisin_massar_map(&q, n)?;
            let fit = extract_scaling_factor(&out.clone_marginal(0)?, &outer(&bloch_ket(&q)))?;
            t.compare(gm_scaling_formula(n), fit.s);
            t.deviation(fit.residual);
            t.deviation(marginal_spread(&out)?);
            s = fit.s;
        }
    }
    Ok(t.row(
        "1→1+n scaling 1/3 + 2/(3(n+1)), n = 1..6 (n = 6 shown)",
        gm_scaling_formula(6),
        s,
    ))
}

fn idle_law() -> Result<Row> {
    let mut t = Tally::new(1e-10);
    let mut shown = (f64::NAN, f64::NAN);
    for n in 1..=5 {
        for q in random_qubits(400 + n as u64, 5) {
            let out = network_clone_output(&q, n)?;
            t.deviation(idle_qubit_check(&out, &q)?);
            shown = (
                idle_qubit_formula(&q).matrix()[(0, 0)].re,
                out.copier_part(0)?.matrix()[(0, 0)].re,
            );
        }
    }
    Ok(t.row(
        "idle qubits equal ρ^T/3 + 1/3, n = 1..5: ⟨0|ρ|0⟩",
        shown.0,
        shown.1,
    ))
}

fn pt_spectra() -> Result<Row> {
    let mut t = Tally::new(1e-9);
    let mut shown = f64::NAN;
    for n in 1..=6 {
        let reference = pt_spectrum_formula(n);
        let mut samples: Vec<Vec<f64>> = vec![Vec::new(); 4];
        let (i, j) = (0, n);
        for q in random_qubits(500 + n as u64, 20) {
            let pair = gisin_massar_map(&q, n)?.clone_pair(i, j)?;
            t.deviation(pair.max_deviation(&clone_pair_density_formula(n, &q)?));
            let v = ppt_separable(&pair)?;
            for (k, (got, want)) in v.eigenvalues.iter().zip(&reference).enumerate() {
                t.compare(*want, *got);
                samples[k].push(*got);
            }
            t.require(v.separable == (n > 1));
            if n == 1 {
                shown = v.min_eigenvalue;
            }
        }
        for column in &samples {
            t.deviation_at(std_dev(column), 1e-10);
        }
    }
    Ok(t.row(
        "clone-pair PT spectrum, n = 1..6: min eigenvalue at n = 1",
        pt_spectrum_formula(1)[0],
        shown,
    ))
}

fn copy_idle_entanglement() -> Result<Row> {
    let mut t = Tally::new(1e-9);
    let reference = rho_a1b1_pt_spectrum_real();
    let mut shown = f64::NAN;
    for k in 0..=20 {
        let theta = std::f64::consts::PI * k as f64 / 20.0;
        for phi in [0.0, std::f64::consts::PI] {
            let got = rho_a1b1_pt_spectrum(&BlochQubit::new(theta, phi)?)?;
            for (g, r) in got.iter().zip(&reference) {
                t.compare(*r, *g);
            }
            shown = got[0];
        }
    }
    for i in 0..20 {
        for j in 0..20 {
            let theta = std::f64::consts::PI * (i as f64 + 0.5) / 20.0;
            let phi = std::f64::consts::TAU * j as f64 / 20.0;
            let got = rho_a1b1_pt_spectrum(&BlochQubit::new(theta, phi)?)?;
            t.require(got[0] < 0.0);
        }
    }
    Ok(t.row(
        "copy–idle pair PT spectrum: negative eigenvalue (1−√17)/12",
        reference[0],
        shown,
    ))
}

fn purity() -> Result<Row> {
    let mut t = Tally::new(1e-10);
    let mut shown = f64::NAN;
    for n in 1..=6 {
        let q = random_qubits(600 + n as u64, 1)[0];
        let xi = purity_xi_simulated(&network_clone_output(&q, n)?)?;
        t.compare(purity_xi(n), xi);
        t.require(xi >= 1.0 / (n as f64 + 1.0));
        if n == 1 {
            shown = xi;
        }
    }
    Ok(t.row("copier purity ξ, n = 1..6: ξ at n = 1", purity_xi(1), shown))
}

fn mdim() -> Result<Row> {
    let mut t = Tally::new(1e-9);
    let mut rng = seeded_rng(700);
    let mut shown = f64::NAN;
    for m in [2, 3, 4, 8, 16, 32, 64] {
        let phi = haar_random_ket_with(m, &mut rng)?;
        let out = mdim_clone(&phi)?;
        let f = mdim_formulas(m)?;
        let clone = out.clone_marginal(0)?;
        let copier = out.copier_marginal()?;
        let ideal = outer(&phi);
        let s = extract_scaling_factor(&clone, &ideal)?.s;
        t.compare(f.s, s);
        t.compare(f.bures, bures_distance(&clone, &ideal)?);
        t.compare(f.entropy_clone, von_neumann_entropy(&clone)?);
        t.compare(f.entropy_copier, von_neumann_entropy(&copier)?);
        t.deviation(copier.max_deviation(&mdim_copier_formula(&phi)?));
        if m == 2 {
            let q = BlochQubit::from_ket(&phi.with_layout(SubsystemLayout::qubits(1))?)?;
            let uqcm = uqcm_map(&q);
            let direct = mdim_clone(&bloch_ket(&q))?;
            let dev = direct
                .joint()
                .amps()
                .iter()
                .zip(uqcm.joint().amps())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            t.deviation(dev);
        }
        if m == 64 {
            shown = s;
        }
    }
    Ok(t.row(
        "M-level cloner, M = 2..64: scaling factor at M = 64",
        mdim_formulas(64)?.s,
        shown,
    ))
}

fn registers() -> Result<Row> {
    let mut t = Tally::new(1e-10);
    for k in 0..20 {
        let a2 = (k as f64 + 0.5) / 20.0;
        for method in [RegisterMethod::Local, RegisterMethod::Nonlocal] {
            let sim = register_clone(method, a2)?;
            t.deviation(sim.max_deviation(&register_clone_formula(method, a2)?));
        }
    }
    let local = inseparability_boundary(RegisterMethod::Local)?;
    let nonlocal = inseparability_boundary(RegisterMethod::Nonlocal)?;
    for (got, method) in [
        (local, RegisterMethod::Local),
        (nonlocal, RegisterMethod::Nonlocal),
    ] {
        let want = inseparability_formula(method);
        t.deviation_at((got.lo - want.lo).abs(), 1e-6);
        t.deviation_at((got.hi - want.hi).abs(), 1e-6);
    }
    t.require(nonlocal.strictly_contains(&local));
    Ok(t.row(
        "register cloning: densities and intervals (nonlocal lower end)",
        inseparability_formula(RegisterMethod::Nonlocal).lo,
        nonlocal.lo,
    ))
}

fn quadrature() -> Result<Row> {
    let mut t = Tally::new(1e-6);
    let grid = SphereGrid::default();
    let uqcm = mean_fidelity(|q| network_clone_output(q, 1)?.clone_marginal(0), &grid)?;
    t.compare(5.0 / 6.0, uqcm);
    for n in [2, 3] {
        let f = mean_fidelity(|q| gisin_massar_map(q, n)?.clone_marginal(0), &grid)?;
        t.compare(gm_fidelity_formula(n), f);
        t.compare((1.0 + gm_scaling_formula(n)) / 2.0, f);
    }
    Ok(t.row(
        "mean fidelity by sphere quadrature: 1→2 copier",
        5.0 / 6.0,
        uqcm,
    ))
}

fn universality() -> Result<Row> {
    let mut t = Tally::new(1e-10);
    let qubits = random_qubits(800, 100);
    let bures_of = |rho: &crate::qlin::DensityOperator, ket: &StateVector| -> Result<f64> {
        bures_distance(rho, &outer(ket).with_layout(rho.layout().clone())?)
    };
    let mut uqcm = Vec::new();
    for q in &qubits {
        uqcm.push(bures_of(
            &network_clone_output(q, 1)?.clone_marginal(0)?,
            &bloch_ket(q),
        )?);
    }
    t.deviation(std_dev(&uqcm));
    for n in 2..=6 {
        let mut d = Vec::new();
        for q in &qubits {
            d.push(bures_of(
                &gisin_massar_map(q, n)?.clone_marginal(0)?,
                &bloch_ket(q),
            )?);
        }
        t.deviation(std_dev(&d));
    }
    let mut rng = seeded_rng(801);
    for m in [3, 4, 8] {
        let mut d = Vec::new();
        for _ in 0..100 {
            let phi = haar_random_ket_with(m, &mut rng)?;
            d.push(bures_of(&mdim_clone(&phi)?.clone_marginal(0)?, &phi)?);
        }
        t.deviation(std_dev(&d));
    }
    let alphas: Vec<f64> = (0..100).map(|k| (k as f64 + 0.5) / 100.0).collect();
    let register_bures = |method: RegisterMethod| -> Result<Vec<f64>> {
        alphas
            .iter()
            .map(|&a2| {
                let ideal = crate::cloners::register_ideal(a2.sqrt())?;
                bures_of(&register_clone(method, a2)?, &ideal)
            })
            .collect()
    };
    t.deviation(std_dev(&register_bures(RegisterMethod::Nonlocal)?));
    t.require(std_dev(&register_bures(RegisterMethod::Local)?) > 1e-3);
    let mean = uqcm.iter().sum::<f64>() / uqcm.len() as f64;
    Ok(t.row(
        "Bures distance is input independent: 1→2 copier value",
        mdim_formulas(2)?.bures,
        mean,
    ))
}

/// Every row, in a fixed order.
pub fn run() -> Result<Vec<Row>> {
    Ok(vec![
        uqcm_scaling()?,
        prep_circuit()?,
        network_equivalence()?,
        multi_copy_scaling()?,
        idle_law()?,
        pt_spectra()?,
        copy_idle_entanglement()?,
        purity()?,
        mdim()?,
        registers()?,
        quadrature()?,
        universality()?,
    ])
}

pub fn all_pass(rows: &[Row]) -> bool {
    rows.iter().all(|r| r.pass)
}
