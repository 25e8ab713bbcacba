//! Plain-text `key=value` hyperparameter files.
//!
//! ```text
//! pi1=...   pi2=...   pi3=...
//! mu1=...   mu2=...   mu3=...
//! tau2_1=... tau2_2=... tau2_3=...
//! loglik=...
//! ```
//!
//! One key per line. Blank lines and lines starting with `#` are skipped,
//! unknown keys are ignored. Reals are written with 18 significant digits so
//! a file reloads to the identical prior.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::em::FitResult;
use crate::error::{Error, Result};
use crate::posterior::{MixturePrior, COMPONENTS};

/// Hyperparameters plus whatever fit metadata the file carried.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSet {
    pub prior: MixturePrior,
    pub log_likelihood: Option<f64>,
    pub iterations: Option<usize>,
    pub converged: Option<bool>,
}

fn real(x: f64) -> String {
    format!("{x:.17e}")
}

pub fn format_prior(prior: &MixturePrior) -> String {
    let mut out = String::new();
    for (name, values) in [
        ("pi", prior.weights()),
        ("mu", prior.means()),
        ("tau2_", prior.variances()),
    ] {
        for (j, v) in values.iter().enumerate() {
            let _ = writeln!(out, "{name}{}={}", j + 1, real(*v));
        }
    }
    out
}

pub fn format_fit(fit: &FitResult) -> String {
    let mut out = format_prior(&fit.prior);
    let start: Vec<String> = fit.start_used.iter().map(|w| real(*w)).collect();
    let _ = writeln!(out, "loglik={}", real(fit.log_likelihood));
    let _ = writeln!(out, "iterations={}", fit.iterations);
    let _ = writeln!(out, "converged={}", fit.converged);
    let _ = writeln!(out, "start={}", start.join(","));
    out
}

pub fn parse(text: &str) -> Result<ParameterSet> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!("line {}: expected key=value, got `{line}`", n + 1))
        })?;
        if map.insert(key.trim().to_string(), (n + 1, value.trim().to_string())).is_some() {
            return Err(Error::InvalidParameter(format!(
                "line {}: duplicate key `{}`",
                n + 1,
                key.trim()
            )));
        }
    }
    let number = |key: &str| -> Result<f64> {
        let (line, v) = map
            .get(key)
            .ok_or_else(|| Error::InvalidParameter(format!("missing key `{key}`")))?;
        v.parse::<f64>()
            .map_err(|_| Error::InvalidParameter(format!("line {line}: `{key}` is not a number: `{v}`")))
    };
    let triple = |prefix: &str| -> Result<[f64; COMPONENTS]> {
        Ok([
            number(&format!("{prefix}1"))?,
            number(&format!("{prefix}2"))?,
            number(&format!("{prefix}3"))?,
        ])
    };
    let prior = MixturePrior::new(triple("pi")?, triple("mu")?, triple("tau2_")?)?;
    let log_likelihood = map.contains_key("loglik").then(|| number("loglik")).transpose()?;
    let iterations = match map.get("iterations") {
        Some((line, v)) => Some(v.parse::<usize>().map_err(|_| {
            Error::InvalidParameter(format!("line {line}: `iterations` is not an integer: `{v}`"))
        })?),
        None => None,
    };
    let converged = match map.get("converged") {
        Some((line, v)) => Some(v.parse::<bool>().map_err(|_| {
            Error::InvalidParameter(format!("line {line}: `converged` is not a boolean: `{v}`"))
        })?),
        None => None,
    };
    Ok(ParameterSet {
        prior,
        log_likelihood,
        iterations,
        converged,
    })
}
