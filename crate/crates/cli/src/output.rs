use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use qclone::analysis::{round_sig, CloneReport};
use qclone::reproduce::Row;

use crate::cli::Format;
use crate::error::CliError;

pub const DIGITS: usize = 12;

pub fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            CliError::Output {
                path: p.display().to_string(),
                source: e,
            }
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Shortest decimal string of `x` rounded to 12 significant digits.
pub fn num(x: f64) -> String {
    let r = round_sig(x, DIGITS);
    if r == 0.0 {
        "0".to_string()
    } else if r.abs() < 1e-4 || r.abs() >= 1e15 {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn flatten(report: &CloneReport) -> Vec<(String, String)> {
    let mut rows = vec![
        (
            "schema_version".to_string(),
            report.schema_version.to_string(),
        ),
        ("cloner".into(), report.cloner.clone()),
        ("n_or_m".into(), report.n_or_m.to_string()),
    ];
    let input = &report.input;
    rows.push((
        "input.source".into(),
        serde_json::to_value(input.source)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default(),
    ));
    for (key, value) in [
        ("input.theta", input.theta),
        ("input.phi", input.phi),
        ("input.alpha2", input.alpha2),
    ] {
        if let Some(v) = value {
            rows.push((key.into(), num(v)));
        }
    }
    if let Some(seed) = input.seed {
        rows.push(("input.seed".into(), seed.to_string()));
    }
    for (key, value) in [
        ("scaling_factor", report.scaling_factor),
        ("fit_residual", report.fit_residual),
    ] {
        rows.push((key.into(), num(value)));
    }
    rows.push(("scaled_form".into(), report.scaled_form.to_string()));
    for (key, value) in [
        ("fidelity", report.fidelity),
        ("bures", report.bures),
        ("marginal_spread", report.marginal_spread),
    ] {
        rows.push((key.into(), num(value)));
    }
    for (k, v) in report.pt_eigenvalues.iter().enumerate() {
        rows.push((format!("pt_eigenvalues.{k}"), num(*v)));
    }
    for v in &report.separable {
        rows.push((format!("separable.{}", v.label), v.separable.to_string()));
        rows.push((
            format!("min_pt_eigenvalue.{}", v.label),
            num(v.min_pt_eigenvalue),
        ));
    }
    rows.push(("purity_xi".into(), num(report.purity_xi)));
    rows.push(("entropies.clone".into(), num(report.entropies.clone)));
    rows.push(("entropies.copier".into(), num(report.entropies.copier)));
    rows
}

fn write_table(w: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |w: &mut dyn Write, cells: &[String]| -> io::Result<()> {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &width)| format!("{c}{}", " ".repeat(width - c.chars().count())))
            .collect();
        writeln!(w, "{}", padded.join("  ").trim_end())
    };
    line(w, &header.iter().map(|h| h.to_string()).collect::<Vec<_>>())?;
    line(
        w,
        &widths.iter().map(|&n| "-".repeat(n)).collect::<Vec<_>>(),
    )?;
    for row in rows {
        line(w, row)?;
    }
    Ok(())
}

pub fn write_csv(w: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(header)?;
    for row in rows {
        csv.write_record(row)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn write_report(
    report: &CloneReport,
    format: Format,
    w: &mut dyn Write,
) -> Result<(), CliError> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, report)?;
            writeln!(w)?;
        }
        Format::Csv | Format::Table => {
            let rows: Vec<Vec<String>> = flatten(report)
                .into_iter()
                .map(|(k, v)| vec![k, v])
                .collect();
            if format == Format::Csv {
                write_csv(w, &["field", "value"], &rows)?;
            } else {
                write_table(w, &["field", "value"], &rows)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

const ROW_HEADER: [&str; 6] = [
    "check",
    "reference",
    "computed",
    "max_abs_delta",
    "tolerance",
    "pass",
];

pub fn write_reproduce(rows: &[Row], format: Format, w: &mut dyn Write) -> Result<(), CliError> {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.name.clone(),
                num(r.reference),
                num(r.computed),
                format!("{:.3e}", r.delta),
                format!("{:.0e}", r.tolerance),
                if r.pass { "PASS" } else { "FAIL" }.to_string(),
            ]
        })
        .collect();
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, rows)?;
            writeln!(w)?;
        }
        Format::Csv => write_csv(w, &ROW_HEADER, &cells)?,
        Format::Table => {
            write_table(w, &ROW_HEADER, &cells)?;
            let passed = rows.iter().filter(|r| r.pass).count();
            writeln!(w, "\n{passed}/{} checks passed", rows.len())?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip_at_twelve_digits() {
        assert_eq!(num(2.0 / 3.0), "0.666666666667");
        assert_eq!(num(0.0), "0");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(1e-17), "1e-17");
        assert_eq!(num(5.273559366971e-16), "5.27355936697e-16");
        assert_eq!(num(0.5), "0.5");
        for x in [std::f64::consts::PI, -0.0393446629, 123456.789] {
            let back: f64 = num(x).parse().unwrap();
            assert_eq!(back, round_sig(x, DIGITS));
        }
    }

    #[test]
    fn table_alignment() {
        let mut buf = Vec::new();
        let rows = vec![
            vec!["a".to_string(), "1".to_string()],
            vec!["long".into(), "2".into()],
        ];
        write_table(&mut buf, &["k", "v"], &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k     v");
        assert_eq!(lines[1], "----  -");
        assert_eq!(lines[3], "long  2");
    }
}
