use std::io::Write;

use rayon::prelude::*;

use qclone::analysis::{
    extract_scaling_factor, gm_fidelity_formula, gm_report, mdim_formulas, mdim_report,
    register_ppt, register_report, uqcm_report, CloneReport, InputSource, InputSpec,
    RegisterMethod,
};
use qclone::cloners::{gisin_massar_map, mdim_clone, MAX_DIMENSION};
use qclone::network::{build_copy_stage, build_prep_circuit_1, MAX_COPIES};
use qclone::qlin::{bures_distance, outer, von_neumann_entropy, StateVector, SubsystemLayout, C64};
use qclone::states::{bloch_ket, haar_random_ket, BlochQubit};

use crate::cli::{
    CircuitKind, CloneArgs, Cloner, Command, DumpArgs, Method, ReproduceArgs, SweepCommand,
};
use crate::error::CliError;
use crate::output::{num, sink, write_csv, write_report, write_reproduce};

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Clone(args) => clone(args),
        Command::Reproduce(args) => reproduce(args),
        Command::Sweep(sweep_command) => sweep(sweep_command),
        Command::DumpCircuit(args) => dump_circuit(args),
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn qubit_input(args: &CloneArgs) -> Result<(BlochQubit, InputSpec), CliError> {
    if args.alpha2.is_some() {
        return Err(usage("--alpha2 applies only to register cloners"));
    }
    if args.theta.is_some() || args.phi.is_some() {
        let q = BlochQubit::new(
            args.theta.unwrap_or(std::f64::consts::FRAC_PI_2),
            args.phi.unwrap_or(0.0),
        )?;
        return Ok((q, InputSpec::bloch(InputSource::Explicit, &q, None)));
    }
    if let Some(seed) = args.seed {
        let q = BlochQubit::random(seed);
        return Ok((q, InputSpec::bloch(InputSource::Seed, &q, Some(seed))));
    }
    let q = BlochQubit::default();
    Ok((q, InputSpec::bloch(InputSource::Default, &q, None)))
}

/// Uniform superposition of the `m` basis states.
pub fn mdim_default_input(m: usize) -> Result<StateVector, CliError> {
    Ok(StateVector::normalized(
        SubsystemLayout::single(m)?,
        vec![C64::new(1.0, 0.0); m],
    )?)
}

fn check_dimension(m: usize) -> Result<(), CliError> {
    if (2..=MAX_DIMENSION).contains(&m) {
        Ok(())
    } else {
        Err(usage(format!(
            "dimension must be in 2..={MAX_DIMENSION}, got {m}"
        )))
    }
}

fn clone(args: CloneArgs) -> Result<(), CliError> {
    let report: CloneReport = match args.cloner {
        Cloner::Uqcm => {
            let (q, input) = qubit_input(&args)?;
            uqcm_report(&q, input)?
        }
        Cloner::Gm { n } => {
            if !(1..=MAX_COPIES).contains(&n) {
                return Err(usage(format!("n must be in 1..={MAX_COPIES}, got {n}")));
            }
            let (q, input) = qubit_input(&args)?;
            gm_report(&q, n, input)?
        }
        Cloner::Mdim { m } => {
            if args.theta.is_some() || args.phi.is_some() || args.alpha2.is_some() {
                return Err(usage("mdim takes only --seed for its input"));
            }
            check_dimension(m)?;
            match args.seed {
                Some(seed) => mdim_report(
                    &haar_random_ket(m, seed)?,
                    InputSpec::ket(InputSource::Seed, Some(seed)),
                )?,
                None => mdim_report(
                    &mdim_default_input(m)?,
                    InputSpec::ket(InputSource::Default, None),
                )?,
            }
        }
        Cloner::RegisterLocal | Cloner::RegisterNonlocal => {
            if args.theta.is_some() || args.phi.is_some() || args.seed.is_some() {
                return Err(usage("register cloners take only --alpha2 for their input"));
            }
            let method = if matches!(args.cloner, Cloner::RegisterLocal) {
                RegisterMethod::Local
            } else {
                RegisterMethod::Nonlocal
            };
            let (alpha2, source) = match args.alpha2 {
                Some(a) => (a, InputSource::Explicit),
                None => (0.5, InputSource::Default),
            };
            register_report(method, alpha2, InputSpec::register(source, alpha2))?
        }
    };
    let mut w = sink(args.out.output.as_deref())?;
    write_report(&report, args.out.format, &mut *w)
}

fn reproduce(args: ReproduceArgs) -> Result<(), CliError> {
    let rows = qclone::reproduce::run()?;
    let mut w = sink(args.output.as_deref())?;
    write_reproduce(&rows, args.format, &mut *w)?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        return Err(CliError::ChecksFailed {
            failed,
            total: rows.len(),
        });
    }
    Ok(())
}

fn mdim_scaling_row(m: usize) -> Result<Vec<String>, CliError> {
    let phi = mdim_default_input(m)?;
    let out = mdim_clone(&phi)?;
    let clone = out.clone_marginal(0)?;
    let ideal = outer(&phi);
    let f = mdim_formulas(m)?;
    Ok(vec![
        m.to_string(),
        num(f.s),
        num(extract_scaling_factor(&clone, &ideal)?.s),
        num(f.bures),
        num(bures_distance(&clone, &ideal)?),
        num(von_neumann_entropy(&clone)?),
        num(von_neumann_entropy(&out.copier_marginal()?)?),
    ])
}

fn negativity_row(method: RegisterMethod, alpha2: f64) -> Result<Vec<String>, CliError> {
    let v = register_ppt(method, alpha2)?;
    Ok(vec![
        num(alpha2),
        num(v.min_eigenvalue),
        v.separable.to_string(),
    ])
}

fn gm_fidelity_row(n: usize) -> Result<Vec<String>, CliError> {
    let q = BlochQubit::default();
    let out = gisin_massar_map(&q, n)?;
    let clone = out.clone_marginal(0)?;
    let psi = bloch_ket(&q);
    Ok(vec![
        n.to_string(),
        num(gm_fidelity_formula(n)),
        num(psi.expectation(clone.matrix())?),
        num(extract_scaling_factor(&clone, &outer(&psi))?.s),
    ])
}

type Rows = Result<Vec<Vec<String>>, CliError>;

fn sweep(command: SweepCommand) -> Result<(), CliError> {
    let (header, rows, output): (&[&str], Rows, _) = match command {
        SweepCommand::MdimScaling { m, output } => {
            check_dimension(m.start)?;
            check_dimension(m.stop)?;
            (
                &[
                    "m",
                    "s_formula",
                    "s",
                    "bures_formula",
                    "bures",
                    "entropy_clone",
                    "entropy_copier",
                ],
                m.values().into_par_iter().map(mdim_scaling_row).collect(),
                output,
            )
        }
        SweepCommand::RegisterNegativity {
            alpha2,
            method,
            output,
        } => {
            if alpha2.start < 0.0 || alpha2.stop > 1.0 {
                return Err(usage("α² sweep must stay within [0, 1]"));
            }
            let method = match method {
                Method::Local => RegisterMethod::Local,
                Method::Nonlocal => RegisterMethod::Nonlocal,
            };
            (
                &["alpha2", "min_pt_eigenvalue", "separable"],
                alpha2
                    .values()
                    .into_par_iter()
                    .map(|a2| negativity_row(method, a2))
                    .collect(),
                output,
            )
        }
        SweepCommand::GmFidelity { n, output } => {
            if n.start < 1 || n.stop > MAX_COPIES {
                return Err(usage(format!("n must be in 1..={MAX_COPIES}")));
            }
            (
                &["n", "fidelity_formula", "fidelity", "scaling_factor"],
                n.values().into_par_iter().map(gm_fidelity_row).collect(),
                output,
            )
        }
    };
    let rows = rows?;
    let mut w = sink(output.as_deref())?;
    write_csv(&mut *w, header, &rows)?;
    w.flush()?;
    Ok(())
}

fn dump_circuit(args: DumpArgs) -> Result<(), CliError> {
    let circuit = match (args.circuit, args.n) {
        (CircuitKind::Prep1, None) => build_prep_circuit_1(),
        (CircuitKind::Prep1, Some(_)) => return Err(usage("prep1 takes no --n")),
        (CircuitKind::Copy, Some(n)) => {
            if !(1..=MAX_COPIES).contains(&n) {
                return Err(usage(format!("n must be in 1..={MAX_COPIES}, got {n}")));
            }
            build_copy_stage(n)?
        }
        (CircuitKind::Copy, None) => return Err(usage("copy needs --n")),
    };
    let mut w = sink(args.output.as_deref())?;
    write!(w, "{circuit}")?;
    w.flush()?;
    Ok(())
}
