//! Empirical-Bayes estimation of the mixture prior by expectation /
//! conditional maximization (ECM).
//!
//! Marginally `y_i ~ sum_j pi_j g_j(y_i)` with
//! `g_j(y) = N(y; mu_j, tau2_j + sigma2_i)`. One sweep computes the
//! responsibilities `gamma_ij` and then maximizes the expected complete-data
//! log-likelihood for the weights, then the means (holding the previous
//! variances), then each variance (holding the new means). The variance step
//! has no closed form under heteroscedastic `sigma2_i` and is solved on
//! `[0, tau2_upper]` with Brent's method.
//!
//! Starting values come from splitting the genes, sorted by `y`, into three
//! consecutive blocks sized by a trial weight vector. Every trial vector in
//! [`FitConfig::starts`] is run briefly, and the one with the highest
//! log-likelihood is iterated to the final tolerance.

use log::debug;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{blocked_sum, log_sum_exp};
use crate::optimize::{maximize_with_endpoints, BrentOptions};
use crate::posterior::{GeneObservation, MixturePrior, COMPONENTS};
use crate::stats::ln_normal_pdf;

/// Trial weight vectors for the multi-start screen: equal
/// weights, one dominant component, two dominant components.
pub const DEFAULT_STARTS: [[f64; COMPONENTS]; 7] = [
    [0.33, 0.33, 0.33],
    [0.8, 0.1, 0.1],
    [0.1, 0.8, 0.1],
    [0.1, 0.1, 0.8],
    [0.1, 0.45, 0.45],
    [0.45, 0.1, 0.45],
    [0.45, 0.45, 0.1],
];

/// Responsibilities `gamma_ij`; each row sums to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponsibilityMatrix {
    rows: Vec<[f64; COMPONENTS]>,
}

impl ResponsibilityMatrix {
    /// Wraps rows after checking that each is a probability vector (1e-10).
    pub fn from_rows(rows: Vec<[f64; COMPONENTS]>) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            let s: f64 = r.iter().sum();
            if r.iter().any(|&g| !(0.0..=1.0).contains(&g)) || (s - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidParameter(format!(
                    "responsibility row {i} is not a probability vector: {r:?}"
                )));
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[[f64; COMPONENTS]] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitConfig {
    /// Sweeps per start during the screen.
    pub screening_iters: usize,
    pub screening_tol: f64,
    pub final_tol: f64,
    /// Sweep budget for the final run.
    pub max_iters: usize,
    /// Upper end of the variance search; `None` means `max_i sigma2_i`.
    pub tau2_upper: Option<f64>,
    pub starts: Vec<[f64; COMPONENTS]>,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            screening_iters: 50,
            screening_tol: 1e-5,
            final_tol: 1e-10,
            max_iters: 5000,
            tau2_upper: None,
            starts: DEFAULT_STARTS.iter().map(|s| normalize_start(*s)).collect(),
        }
    }
}

/// Rescale a trial weight vector to sum to one.
pub fn normalize_start(start: [f64; COMPONENTS]) -> [f64; COMPONENTS] {
    let total: f64 = start.iter().sum();
    start.map(|w| w / total)
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.screening_iters == 0 || self.max_iters == 0 {
            return bad("iteration limits must be positive".into());
        }
        if !(self.screening_tol > 0.0 && self.final_tol > 0.0) {
            return bad("tolerances must be positive".into());
        }
        if self.final_tol > self.screening_tol {
            return bad(format!(
                "final tolerance {} exceeds screening tolerance {}",
                self.final_tol, self.screening_tol
            ));
        }
        if let Some(u) = self.tau2_upper {
            if !(u.is_finite() && u >= 0.0) {
                return bad(format!("variance upper bound must be >= 0, got {u}"));
            }
        }
        if self.starts.is_empty() {
            return bad("no starting weights".into());
        }
        for s in &self.starts {
            if s.iter().any(|&w| !(w.is_finite() && w >= 0.0))
                || (s.iter().sum::<f64>() - 1.0).abs() > 1e-9
            {
                return bad(format!("starting weights {s:?} do not sum to 1"));
            }
        }
        Ok(())
    }
}

/// Screen result for one trial weight vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StartOutcome {
    pub start: [f64; COMPONENTS],
    pub log_likelihood: Option<f64>,
    pub iterations: usize,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub prior: MixturePrior,
    pub log_likelihood: f64,
    pub iterations: usize,
    pub start_used: [f64; COMPONENTS],
    pub converged: bool,
    /// Observed log-likelihood at the initial values and after every sweep
    /// of the selected start.
    pub trace: Vec<f64>,
    pub screening: Vec<StartOutcome>,
}

/// `ln g_j(y) = ln N(y; mu, tau2 + sigma2)`.
pub fn ln_component_density(y: f64, sigma2: f64, mu: f64, tau2: f64) -> f64 {
    ln_normal_pdf(y, mu, tau2 + sigma2)
}

/// `sum_i ln sum_j pi_j g_j(y_i)`.
pub fn observed_log_likelihood(data: &[GeneObservation], prior: &MixturePrior) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::InvalidParameter("no observations".into()));
    }
    let rows: Vec<f64> = data
        .par_iter()
        .map(|g| log_sum_exp(&prior.component_log_terms(g.y, g.sigma2)))
        .collect();
    if let Some(index) = rows.iter().position(|v| !v.is_finite()) {
        return Err(Error::LikelihoodUnderflow { index });
    }
    Ok(blocked_sum(rows.len(), |i| [rows[i]])[0])
}

/// Expectation step: `gamma_ij = pi_j g_j(y_i) / sum_k pi_k g_k(y_i)`.
pub fn e_step(data: &[GeneObservation], prior: &MixturePrior) -> Result<ResponsibilityMatrix> {
    let rows: Vec<Option<[f64; COMPONENTS]>> = data
        .par_iter()
        .map(|g| {
            let terms = prior.component_log_terms(g.y, g.sigma2);
            let total = log_sum_exp(&terms);
            total.is_finite().then(|| terms.map(|t| (t - total).exp()))
        })
        .collect();
    let rows = rows
        .into_iter()
        .enumerate()
        .map(|(index, r)| r.ok_or(Error::LikelihoodUnderflow { index }))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResponsibilityMatrix { rows })
}

/// `pi_j = sum_i gamma_ij / sum_i sum_k gamma_ik`.
pub fn cm_step_weights(gamma: &ResponsibilityMatrix) -> [f64; COMPONENTS] {
    let sums = blocked_sum(gamma.len(), |i| gamma.rows[i]);
    let total: f64 = sums.iter().sum();
    sums.map(|s| s / total)
}

/// Precision-weighted means using the previous variances:
/// `mu_j = sum_i w_ij y_i / sum_i w_ij` with `w_ij = gamma_ij / (sigma2_i + tau2_j)`.
pub fn cm_step_means(
    data: &[GeneObservation],
    gamma: &ResponsibilityMatrix,
    tau2_prev: [f64; COMPONENTS],
) -> Result<[f64; COMPONENTS]> {
    check_lengths(data, gamma)?;
    let sums = blocked_sum(data.len(), |i| {
        let (g, r) = (&data[i], &gamma.rows[i]);
        let mut out = [0.0; 2 * COMPONENTS];
        for j in 0..COMPONENTS {
            let w = r[j] / (g.sigma2 + tau2_prev[j]);
            out[j] = w * g.y;
            out[COMPONENTS + j] = w;
        }
        out
    });
    let mut means = [0.0; COMPONENTS];
    for j in 0..COMPONENTS {
        let den = sums[COMPONENTS + j];
        if !(den > 0.0) {
            return Err(Error::ZeroResponsibility { component: j + 1 });
        }
        means[j] = sums[j] / den;
    }
    Ok(means)
}

/// Variance step: for each component, the maximizer over `[0, tau2_upper]` of
/// `sum_i gamma_ij ln g_j(y_i; mu_next_j, tau2)`.
///
/// `tau2_prev` only sets the reference point from which the objective is
/// measured and a fallback candidate; it does not change the maximizer.
pub fn cm_step_variances(
    data: &[GeneObservation],
    gamma: &ResponsibilityMatrix,
    mu_next: [f64; COMPONENTS],
    tau2_upper: f64,
    tau2_prev: [f64; COMPONENTS],
) -> Result<[f64; COMPONENTS]> {
    check_lengths(data, gamma)?;
    let mut out = [0.0; COMPONENTS];
    for j in 0..COMPONENTS {
        let rows: Vec<(f64, f64, f64)> = data
            .iter()
            .zip(&gamma.rows)
            .map(|(g, r)| (r[j], g.y, g.sigma2))
            .collect();
        out[j] = maximize_variance(&rows, mu_next[j], tau2_upper, tau2_prev[j]);
    }
    Ok(out)
}

fn check_lengths(data: &[GeneObservation], gamma: &ResponsibilityMatrix) -> Result<()> {
    if data.len() != gamma.len() {
        return Err(Error::InvalidParameter(format!(
            "{} observations but {} responsibility rows",
            data.len(),
            gamma.len()
        )));
    }
    Ok(())
}

/// `sum_i w_i [ln g(y_i; mu, tau2) - ln g(y_i; mu, reference)]`, written so
/// that no large terms cancel when `tau2` is close to `reference`.
pub fn variance_objective_gain(rows: &[(f64, f64, f64)], mu: f64, tau2: f64, reference: f64) -> f64 {
    let delta = tau2 - reference;
    blocked_sum(rows.len(), |i| {
        let (w, y, s2) = rows[i];
        if w == 0.0 {
            return [0.0];
        }
        let base = reference + s2;
        let r = y - mu;
        [w * (-0.5 * (delta / base).ln_1p() + 0.5 * r * r * delta / ((tau2 + s2) * base))]
    })[0]
}

/// Argmax of `sum_i w_i ln N(y_i; mu, tau2 + s2_i)` over `tau2 in [0, upper]`,
/// for rows `(w_i, y_i, s2_i)`.
pub fn maximize_variance(rows: &[(f64, f64, f64)], mu: f64, upper: f64, reference: f64) -> f64 {
    if !(upper > 0.0) {
        return 0.0;
    }
    let reference = if reference.is_finite() {
        reference.clamp(0.0, upper)
    } else {
        0.0
    };
    let best = maximize_with_endpoints(
        |t2| variance_objective_gain(rows, mu, t2, reference),
        0.0,
        upper,
        &[reference],
        &BrentOptions::default(),
    );
    best.x
}

/// Starting values from a trial weight vector: genes sorted by `y` are split
/// into consecutive blocks of `round(m pi_1)`, `round(m pi_2)` and the
/// remainder. Each block gives a sample mean and a likelihood-maximizing
/// variance on `[0, block max sigma2]` (capped by `tau2_upper` when given).
pub fn initialize(
    data: &[GeneObservation],
    start_weights: [f64; COMPONENTS],
    tau2_upper: Option<f64>,
) -> Result<MixturePrior> {
    let m = data.len();
    let weights = normalize_start(start_weights);
    let n1 = (m as f64 * weights[0]).round() as usize;
    let n2 = (m as f64 * weights[1]).round() as usize;
    let sizes = [n1, n2, m.saturating_sub(n1 + n2)];
    if let Some(b) = sizes.iter().position(|&n| n == 0) {
        return Err(Error::EmptyBlock {
            block: b + 1,
            m,
            weights,
        });
    }

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| data[a].y.total_cmp(&data[b].y));

    let mut means = [0.0; COMPONENTS];
    let mut variances = [0.0; COMPONENTS];
    let mut offset = 0;
    for j in 0..COMPONENTS {
        let block = &order[offset..offset + sizes[j]];
        offset += sizes[j];
        let rows: Vec<(f64, f64, f64)> = block
            .iter()
            .map(|&i| (1.0, data[i].y, data[i].sigma2))
            .collect();
        let n = rows.len() as f64;
        let mu = rows.iter().map(|r| r.1).sum::<f64>() / n;
        let mut upper = rows.iter().map(|r| r.2).fold(0.0, f64::max);
        if let Some(cap) = tau2_upper {
            upper = upper.min(cap);
        }
        let moment = rows.iter().map(|r| (r.1 - mu).powi(2) - r.2).sum::<f64>() / n;
        means[j] = mu;
        variances[j] = maximize_variance(&rows, mu, upper, moment);
    }
    MixturePrior::new(weights, means, variances)
}

/// One full ECM sweep from `prior`.
pub fn ecm_sweep(data: &[GeneObservation], prior: &MixturePrior, tau2_upper: f64) -> Result<MixturePrior> {
    let gamma = e_step(data, prior)?;
    let weights = cm_step_weights(&gamma);
    let means = cm_step_means(data, &gamma, prior.variances())?;
    let variances = cm_step_variances(data, &gamma, means, tau2_upper, prior.variances())?;
    MixturePrior::normalized(weights, means, variances)
}

/// Largest absolute change over all nine hyperparameters.
pub fn max_parameter_change(a: &MixturePrior, b: &MixturePrior) -> f64 {
    let pairs = [
        (a.weights(), b.weights()),
        (a.means(), b.means()),
        (a.variances(), b.variances()),
    ];
    pairs
        .iter()
        .flat_map(|(x, y)| x.iter().zip(y).map(|(u, v)| (u - v).abs()))
        .fold(0.0, f64::max)
}

struct Run {
    prior: MixturePrior,
    trace: Vec<f64>,
    iterations: usize,
    converged: bool,
}

fn iterate(
    data: &[GeneObservation],
    run: &mut Run,
    limit: usize,
    tol: f64,
    tau2_upper: f64,
) -> Result<()> {
    run.converged = false;
    for _ in 0..limit {
        let next = ecm_sweep(data, &run.prior, tau2_upper)?;
        let change = max_parameter_change(&run.prior, &next);
        run.prior = next;
        run.iterations += 1;
        run.trace.push(observed_log_likelihood(data, &run.prior)?);
        if change < tol {
            run.converged = true;
            break;
        }
    }
    Ok(())
}

/// Multi-start ECM fit.
///
/// A start whose initial blocks are empty, or whose screening run hits a
/// degenerate component, is recorded in [`FitResult::screening`] and skipped.
/// A final run that stops at `max_iters` is returned with `converged == false`.
pub fn fit(data: &[GeneObservation], config: &FitConfig) -> Result<FitResult> {
    config.validate()?;
    if data.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 observations, got {}",
            data.len()
        )));
    }
    let tau2_upper = config
        .tau2_upper
        .unwrap_or_else(|| data.iter().map(|g| g.sigma2).fold(0.0, f64::max));

    let mut screening = Vec::with_capacity(config.starts.len());
    let mut best: Option<(Run, [f64; COMPONENTS])> = None;
    for &start in &config.starts {
        let attempt = (|| -> Result<Run> {
            let prior = initialize(data, start, config.tau2_upper)?;
            let mut run = Run {
                trace: vec![observed_log_likelihood(data, &prior)?],
                prior,
                iterations: 0,
                converged: false,
            };
            iterate(data, &mut run, config.screening_iters, config.screening_tol, tau2_upper)?;
            Ok(run)
        })();
        match attempt {
            Ok(run) => {
                let ll = *run.trace.last().expect("trace is never empty");
                debug!("start {start:?}: loglik {ll} after {} sweeps", run.iterations);
                screening.push(StartOutcome {
                    start,
                    log_likelihood: Some(ll),
                    iterations: run.iterations,
                    failure: None,
                });
                let better = best
                    .as_ref()
                    .is_none_or(|(b, _)| ll > *b.trace.last().expect("trace is never empty"));
                if better {
                    best = Some((run, start));
                }
            }
            Err(e) => {
                debug!("start {start:?} failed: {e}");
                screening.push(StartOutcome {
                    start,
                    log_likelihood: None,
                    iterations: 0,
                    failure: Some(e.to_string()),
                });
            }
        }
    }

    let Some((mut run, start_used)) = best else {
        let reasons: Vec<String> = screening.iter().filter_map(|s| s.failure.clone()).collect();
        return Err(Error::NoUsableStart(reasons.join("; ")));
    };
    iterate(data, &mut run, config.max_iters, config.final_tol, tau2_upper)?;
    debug!(
        "final run from {start_used:?}: {} sweeps, converged = {}",
        run.iterations, run.converged
    );
    Ok(FitResult {
        prior: run.prior,
        log_likelihood: *run.trace.last().expect("trace is never empty"),
        iterations: run.iterations,
        start_used,
        converged: run.converged,
        trace: run.trace,
        screening,
    })
}
