//! Panel, score and truth CSV files.

use std::collections::HashMap;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use equiv_core::posterior::GeneObservation;

use crate::CliError;

pub const PANEL_HEADER: [&str; 3] = ["gene_id", "mean_log_ratio", "variance"];
pub const SPOT_TYPE: &str = "spot_type";

/// Fixed-width scientific notation used for every real in CSV output.
pub fn real(x: f64) -> String {
    format!("{x:.12e}")
}

/// Full round-trip precision, used where files are read back.
pub fn exact(x: f64) -> String {
    format!("{x:.17e}")
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    match e.position() {
        Some(pos) => CliError::Validation(format!("{}: line {}: {e}", path.display(), pos.line())),
        None => CliError::Io(format!("{}: {e}", path.display())),
    }
}

pub fn read_panel(path: &Path) -> Result<Vec<GeneObservation>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let header = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let columns: Vec<&str> = header.iter().collect();
    let with_spot = match columns.as_slice() {
        [a, b, c] if [*a, *b, *c] == PANEL_HEADER => false,
        [a, b, c, d] if [*a, *b, *c] == PANEL_HEADER && *d == SPOT_TYPE => true,
        _ => {
            return Err(CliError::Validation(format!(
                "{}: line 1: expected header `gene_id,mean_log_ratio,variance[,spot_type]`, got `{}`",
                path.display(),
                columns.join(",")
            )))
        }
    };

    let mut seen: HashMap<String, u64> = HashMap::new();
    let mut panel = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |msg: String| CliError::Validation(format!("{}: line {line}: {msg}", path.display()));
        let id = record[0].trim().to_string();
        if id.is_empty() {
            return Err(bad("empty gene_id".into()));
        }
        let number = |k: usize| -> Result<f64, CliError> {
            record[k]
                .trim()
                .parse::<f64>()
                .map_err(|_| bad(format!("`{}` is not a number: `{}`", PANEL_HEADER[k], &record[k])))
        };
        let y = number(1)?;
        let sigma2 = number(2)?;
        if !(sigma2 > 0.0) {
            return Err(bad(format!("variance must be > 0, got {sigma2}")));
        }
        let mut obs = GeneObservation::new(id.clone(), y, sigma2).map_err(|e| bad(e.to_string()))?;
        if with_spot {
            obs = obs.with_spot_type(record[3].trim());
        }
        if let Some(first) = seen.insert(id.clone(), line) {
            return Err(bad(format!("duplicate gene_id `{id}` (first on line {first})")));
        }
        panel.push(obs);
    }
    Ok(panel)
}

pub fn write_csv(path: &Path, comment: Option<&str>, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut file = File::create(path).map_err(io)?;
    if let Some(c) = comment {
        writeln!(file, "# {c}").map_err(io)?;
    }
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file);
    writer.write_record(header).map_err(|e| csv_error(path, e))?;
    for r in rows {
        writer.write_record(r).map_err(|e| csv_error(path, e))?;
    }
    writer.flush().map_err(io)
}

pub fn write_panel(path: &Path, panel: &[GeneObservation]) -> Result<(), CliError> {
    let with_spot = panel.iter().any(|g| g.spot_type.is_some());
    let mut header = PANEL_HEADER.to_vec();
    if with_spot {
        header.push(SPOT_TYPE);
    }
    let rows: Vec<Vec<String>> = panel
        .iter()
        .map(|g| {
            let mut r = vec![g.id.clone(), exact(g.y), exact(g.sigma2)];
            if with_spot {
                r.push(g.spot_type.clone().unwrap_or_default());
            }
            r
        })
        .collect();
    write_csv(path, None, &header, &rows)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
