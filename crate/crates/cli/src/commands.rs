use std::fs;
use std::io::Write;
use std::path::Path;

use minorweave::algebra::rational_to_string;
use minorweave::elliptope::{psi, psi_inverse, sample_vector, CorrelationMatrix, Marginal, PartialCorrelationVector, Psi};
use minorweave::minors::{MinorTable, SquareMatrix};
use minorweave::paths::{catalan_weight, for_each_catalan, for_each_schroder, schroder_weight};
use minorweave::reconstruct::{entry_formula, reconstruct_lower, reconstruct_symmetric, roundtrip_report, Method};
use minorweave::tilings::{enumerate_tilings, tiling_weight};
use rayon::prelude::*;
use serde_json::json;

use crate::{verify, Cli, Command, Failure, Format, Variant};

pub fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match &cli.command {
        Command::Paths { variant, n, from, to, count_only } => paths(out, cli.format, *variant, *n, *from, *to, *count_only),
        Command::Tilings { n, from, to, count_only } => tilings(out, cli.format, *n, *from, *to, *count_only),
        Command::Formula { n, i, j, method } => {
            let f = entry_formula(*n, *i, *j, (*method).into()).map_err(|e| usage(e.to_string()))?;
            match cli.format {
                Format::Text => writeln!(out, "{}", f.poly)?,
                Format::Json => writeln!(
                    out,
                    "{}",
                    json!({"n": f.n, "i": f.i, "j": f.j, "method": f.method, "terms": f.poly, "text": f.poly.to_string()})
                )?,
            }
            Ok(())
        }
        Command::Verify { suite, n, trials, seed } => verify::run(out, *suite, *n, *trials, *seed),
        Command::Reconstruct { table_file, matrix_file, method } => {
            reconstruct(out, table_file.as_deref(), matrix_file.as_deref(), (*method).into())
        }
        Command::Psi { rho_file } => {
            let v = PartialCorrelationVector::from_json(&read(rho_file)?).map_err(|e| usage(e.to_string()))?;
            let y = psi(&v).map_err(|e| Failure::Verification(e.to_string()))?;
            write_matrix(out, cli.format, &y)
        }
        Command::PsiInv { matrix_file } => {
            let y = CorrelationMatrix::from_json(&read(matrix_file)?).map_err(|e| usage(e.to_string()))?;
            let v = psi_inverse(&y).map_err(|e| usage(e.to_string()))?;
            match cli.format {
                Format::Json => writeln!(out, "{}", v.to_json())?,
                Format::Text => {
                    for ((i, j), r) in v.iter() {
                        writeln!(out, "{i},{j} {r}")?;
                    }
                }
            }
            Ok(())
        }
        Command::Sample { n, seed, count, low, high, point } => {
            let marginal = match point {
                Some(c) => Marginal::Point(*c),
                None => Marginal::Uniform { low: *low, high: *high },
            };
            sample_vector(*n, *seed, 0, marginal).map_err(|e| usage(e.to_string()))?;
            let map = Psi::new(*n);
            let samples: Vec<Result<CorrelationMatrix, String>> = (0..*count)
                .into_par_iter()
                .map(|stream| {
                    let v = sample_vector(*n, *seed, stream, marginal).map_err(|e| e.to_string())?;
                    map.apply(&v).map_err(|e| e.to_string())
                })
                .collect();
            for s in samples {
                write_matrix(out, cli.format, &s.map_err(Failure::Verification)?)?;
            }
            Ok(())
        }
    }
}

fn write_matrix(out: &mut dyn Write, format: Format, y: &CorrelationMatrix) -> Result<(), Failure> {
    match format {
        Format::Json => writeln!(out, "{}", y.to_json())?,
        Format::Text => writeln!(out, "{y}")?,
    }
    Ok(())
}

fn paths(
    out: &mut dyn Write,
    format: Format,
    variant: Variant,
    n: usize,
    from: usize,
    to: usize,
    count_only: bool,
) -> Result<(), Failure> {
    let mut count = 0u64;
    let mut result = Ok(());
    let mut emit = |record: serde_json::Value, text: String| {
        count += 1;
        if !count_only && result.is_ok() {
            result = match format {
                Format::Json => writeln!(out, "{record}"),
                Format::Text => writeln!(out, "{text}"),
            };
        }
    };
    let visited = match variant {
        Variant::Catalan => for_each_catalan(n, from, to, |c| {
            let weight = catalan_weight(&c).map(|w| w.to_string()).ok();
            let steps: Vec<String> = c.steps().iter().map(|s| s.to_string()).collect();
            let text = format!("{}\t{}", steps.join(","), weight.clone().unwrap_or_default());
            emit(json!({"n": c.n(), "start": c.start(), "steps": c.steps(), "weight": weight}), text);
        }),
        Variant::Schroder => for_each_schroder(n, from, to, |s| {
            let weight = schroder_weight(&s).to_string();
            let steps: Vec<String> = s.steps().iter().map(|s| s.to_string()).collect();
            let text = format!("{}\t{weight}", steps.join(","));
            emit(json!({"n": s.n(), "start": s.start(), "steps": s.steps(), "weight": weight}), text);
        }),
    };
    visited.map_err(|e| usage(e.to_string()))?;
    result?;
    if count_only {
        match format {
            Format::Json => writeln!(out, "{}", json!({ "count": count }))?,
            Format::Text => writeln!(out, "{count}")?,
        }
    }
    Ok(())
}

fn tilings(out: &mut dyn Write, format: Format, n: usize, a: usize, b: usize, count_only: bool) -> Result<(), Failure> {
    let all = enumerate_tilings(n, a, b).map_err(|e| usage(e.to_string()))?;
    if count_only {
        match format {
            Format::Json => writeln!(out, "{}", json!({ "count": all.len() }))?,
            Format::Text => writeln!(out, "{}", all.len())?,
        }
        return Ok(());
    }
    for t in &all {
        let weight = tiling_weight(t).to_string();
        match format {
            Format::Json => {
                let dominoes: serde_json::Value = serde_json::from_str(&t.to_json()).expect("tiling JSON");
                writeln!(out, "{}", json!({"n": n, "a": a, "b": b, "dominoes": dominoes, "weight": weight}))?
            }
            Format::Text => writeln!(out, "{}weight {weight}\n", t.render())?,
        }
    }
    Ok(())
}

fn reconstruct(
    out: &mut dyn Write,
    table_file: Option<&Path>,
    matrix_file: Option<&Path>,
    method: Method,
) -> Result<(), Failure> {
    if let Some(path) = matrix_file {
        let x = SquareMatrix::from_json(&read(path)?).map_err(|e| usage(e.to_string()))?;
        let report = roundtrip_report(&x);
        writeln!(out, "{}", serde_json::to_string(&report).expect("report serializes"))?;
        return if report.is_exact() {
            Ok(())
        } else {
            Err(Failure::Verification(format!(
                "{} obstructions, {} differing entries",
                report.obstructions.len(),
                report.diffs.len()
            )))
        };
    }
    let path = table_file.ok_or_else(|| usage("one of --table-file or --matrix-file is required"))?;
    let table = MinorTable::from_json(&read(path)?).map_err(|e| usage(e.to_string()))?;
    let n = table.n();
    match method {
        Method::Catalan => {
            let x = reconstruct_symmetric(&table, n).map_err(|e| Failure::Verification(e.to_string()))?;
            writeln!(out, "{}", x.to_json())?;
        }
        lower => {
            let entries = reconstruct_lower(&table, n, lower).map_err(|e| Failure::Verification(e.to_string()))?;
            let map: serde_json::Map<String, serde_json::Value> = entries
                .iter()
                .map(|((i, j), v)| (format!("{i},{j}"), json!(rational_to_string(v))))
                .collect();
            writeln!(out, "{}", serde_json::Value::Object(map))?;
        }
    }
    Ok(())
}
