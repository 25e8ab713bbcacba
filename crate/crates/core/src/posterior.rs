//! Posterior distribution of a gene's true mean log ratio under a
//! three-component normal mixture prior, and the posterior probability that
//! the true value lies inside the equivalence margin.
//!
//! With `y | theta ~ N(theta, sigma2)` and
//! `theta ~ sum_j pi_j N(mu_j, tau2_j)`, the posterior is again a normal
//! mixture. Component `j` has mean
//! `E_j = (y tau2_j + mu_j sigma2) / (tau2_j + sigma2)`, variance
//! `D_j^2 = sigma2 tau2_j / (tau2_j + sigma2)`, and weight proportional to
//! `pi_j N(y; mu_j, sigma2 + tau2_j)`.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::log_sum_exp;
use crate::stats::{ln_normal_pdf, normal_interval, EquivalenceSpec};

/// Number of mixture components in the prior.
pub const COMPONENTS: usize = 3;

const WEIGHT_SUM_TOL: f64 = 1e-12;

/// One gene's summary statistics: observed mean log ratio and its known variance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneObservation {
    pub id: String,
    pub y: f64,
    pub sigma2: f64,
    pub spot_type: Option<String>,
}

impl GeneObservation {
    pub fn new(id: impl Into<String>, y: f64, sigma2: f64) -> Result<Self> {
        let id = id.into();
        if !y.is_finite() {
            return Err(Error::InvalidObservation {
                id,
                reason: format!("mean log ratio must be finite, got {y}"),
            });
        }
        if !(sigma2.is_finite() && sigma2 > 0.0) {
            return Err(Error::InvalidObservation {
                id,
                reason: format!("variance must be finite and > 0, got {sigma2}"),
            });
        }
        Ok(Self {
            id,
            y,
            sigma2,
            spot_type: None,
        })
    }

    pub fn with_spot_type(mut self, spot_type: impl Into<String>) -> Self {
        self.spot_type = Some(spot_type.into());
        self
    }
}

/// Mixture prior `sum_j pi_j N(mu_j, tau2_j)` on the true effects.
///
/// A variance of zero is allowed and denotes a point mass at `mu_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MixturePrior {
    weights: [f64; COMPONENTS],
    means: [f64; COMPONENTS],
    variances: [f64; COMPONENTS],
}

impl MixturePrior {
    pub fn new(
        weights: [f64; COMPONENTS],
        means: [f64; COMPONENTS],
        variances: [f64; COMPONENTS],
    ) -> Result<Self> {
        for (j, &w) in weights.iter().enumerate() {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidPrior(format!("weight {} is {w}", j + 1)));
            }
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidPrior(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        for (j, &m) in means.iter().enumerate() {
            if !m.is_finite() {
                return Err(Error::InvalidPrior(format!("mean {} is {m}", j + 1)));
            }
        }
        for (j, &v) in variances.iter().enumerate() {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidPrior(format!("variance {} is {v}", j + 1)));
            }
        }
        Ok(Self {
            weights,
            means,
            variances,
        })
    }

    /// Like [`MixturePrior::new`] but rescales the weights to sum to one.
    pub fn normalized(
        weights: [f64; COMPONENTS],
        means: [f64; COMPONENTS],
        variances: [f64; COMPONENTS],
    ) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total.is_finite() && total > 0.0) {
            return Err(Error::InvalidPrior(format!("weights sum to {total}")));
        }
        Self::new(weights.map(|w| w / total), means, variances)
    }

    /// Hyperparameters fitted to a day-3 versus day-0 mouse stem cell panel
    /// (23,040 spots). The reported weights sum to 1.00007 after rounding and
    /// are rescaled here.
    pub fn stem_cell_reference() -> Self {
        Self::normalized(
            [0.03177, 0.3576, 0.6107],
            [-0.09135, -0.01845, 0.008169],
            [0.3558, 0.01958, 5.426e-12],
        )
        .expect("reference hyperparameters are valid")
    }

    pub fn weights(&self) -> [f64; COMPONENTS] {
        self.weights
    }

    pub fn means(&self) -> [f64; COMPONENTS] {
        self.means
    }

    pub fn variances(&self) -> [f64; COMPONENTS] {
        self.variances
    }

    /// Prior probability that `lo < theta < hi`.
    pub fn mass_between(&self, lo: f64, hi: f64) -> f64 {
        (0..COMPONENTS)
            .map(|j| {
                self.weights[j]
                    * component_interval(self.means[j], self.variances[j].sqrt(), lo, hi)
            })
            .sum()
    }

    /// Relabel components: component `k` of the result is component `perm[k]` of `self`.
    pub fn permuted(&self, perm: [usize; COMPONENTS]) -> Self {
        Self {
            weights: perm.map(|j| self.weights[j]),
            means: perm.map(|j| self.means[j]),
            variances: perm.map(|j| self.variances[j]),
        }
    }

    /// `ln pi_j + ln N(y; mu_j, sigma2 + tau2_j)` for each component.
    pub fn component_log_terms(&self, y: f64, sigma2: f64) -> [f64; COMPONENTS] {
        std::array::from_fn(|j| {
            if self.weights[j] == 0.0 {
                f64::NEG_INFINITY
            } else {
                self.weights[j].ln() + ln_normal_pdf(y, self.means[j], sigma2 + self.variances[j])
            }
        })
    }
}

/// `P(lo < X < hi)` for `X ~ N(mean, sd^2)`; `sd == 0` is a point mass, with
/// half the mass assigned when it sits exactly on an endpoint.
fn component_interval(mean: f64, sd: f64, lo: f64, hi: f64) -> f64 {
    if sd > 0.0 {
        normal_interval((lo - mean) / sd, (hi - mean) / sd)
    } else if mean > lo && mean < hi {
        1.0
    } else if (mean == lo || mean == hi) && lo < hi {
        0.5
    } else {
        0.0
    }
}

/// Log of the marginal density `f(y) = sum_j pi_j N(y; mu_j, sigma2 + tau2_j)`.
pub fn ln_marginal_density(obs: &GeneObservation, prior: &MixturePrior) -> f64 {
    log_sum_exp(&prior.component_log_terms(obs.y, obs.sigma2))
}

pub fn marginal_density(obs: &GeneObservation, prior: &MixturePrior) -> f64 {
    ln_marginal_density(obs, prior).exp()
}

/// Per-gene posterior constants.
///
/// `ln_a` is the log normalizer (the marginal density). `ln_b[j]` and
/// `ln_c[j]` are the logs of
/// `B_j = pi_j / (sqrt(2 pi sigma2) sqrt(2 pi tau2_j))` and
/// `C_j = exp(-(tau2_j y^2 + sigma2 mu_j^2) / (2 sigma2 tau2_j))`.
/// For a point-mass component (`tau2_j == 0`) they are `+inf` and `-inf`,
/// `d2[j] == 0` and `e[j] == mu_j`.
///
/// `mix_weights[j] = B_j C_j exp(E_j^2 / 2 D_j^2) sqrt(2 pi D_j^2) / A`,
/// which equals `pi_j N(y; mu_j, sigma2 + tau2_j) / A`. The second form is
/// the one evaluated: with tiny `tau2_j` the first cancels two exponents of
/// size `mu_j^2 / tau2_j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PosteriorDecomposition {
    pub ln_a: f64,
    pub ln_b: [f64; COMPONENTS],
    pub ln_c: [f64; COMPONENTS],
    pub d2: [f64; COMPONENTS],
    pub e: [f64; COMPONENTS],
    pub mix_weights: [f64; COMPONENTS],
}

impl PosteriorDecomposition {
    /// The normalizer `A`.
    pub fn a(&self) -> f64 {
        self.ln_a.exp()
    }

    /// Posterior probability of `lo < theta < hi`.
    pub fn interval_probability(&self, lo: f64, hi: f64) -> f64 {
        let p: f64 = (0..COMPONENTS)
            .filter(|&j| self.mix_weights[j] > 0.0)
            .map(|j| self.mix_weights[j] * component_interval(self.e[j], self.d2[j].sqrt(), lo, hi))
            .sum();
        p.clamp(0.0, 1.0)
    }

    /// Posterior mean `sum_j w_j E_j`.
    pub fn mean(&self) -> f64 {
        (0..COMPONENTS).map(|j| self.mix_weights[j] * self.e[j]).sum()
    }

    /// Density of the continuous part of the posterior at `theta`. Point-mass
    /// components contribute nothing here.
    pub fn density(&self, theta: f64) -> f64 {
        (0..COMPONENTS)
            .filter(|&j| self.d2[j] > 0.0 && self.mix_weights[j] > 0.0)
            .map(|j| self.mix_weights[j] * ln_normal_pdf(theta, self.e[j], self.d2[j]).exp())
            .sum()
    }
}

pub fn posterior_decomposition(obs: &GeneObservation, prior: &MixturePrior) -> PosteriorDecomposition {
    let (y, s2) = (obs.y, obs.sigma2);
    let terms = prior.component_log_terms(y, s2);
    let ln_a = log_sum_exp(&terms);
    let mut out = PosteriorDecomposition {
        ln_a,
        ln_b: [0.0; COMPONENTS],
        ln_c: [0.0; COMPONENTS],
        d2: [0.0; COMPONENTS],
        e: [0.0; COMPONENTS],
        mix_weights: [0.0; COMPONENTS],
    };
    for j in 0..COMPONENTS {
        let (pi, mu, t2) = (prior.weights[j], prior.means[j], prior.variances[j]);
        if t2 > 0.0 {
            out.ln_b[j] = pi.ln() - 0.5 * (2.0 * PI * s2).ln() - 0.5 * (2.0 * PI * t2).ln();
            out.ln_c[j] = -(t2 * y * y + s2 * mu * mu) / (2.0 * s2 * t2);
            out.d2[j] = s2 * t2 / (t2 + s2);
            out.e[j] = (y * t2 + mu * s2) / (t2 + s2);
        } else {
            out.ln_b[j] = if pi > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
            out.ln_c[j] = f64::NEG_INFINITY;
            out.d2[j] = 0.0;
            out.e[j] = mu;
        }
        out.mix_weights[j] = (terms[j] - ln_a).exp();
    }
    out
}

/// `P(-epsilon < theta < epsilon | y)`.
pub fn posterior_equivalence_probability(
    obs: &GeneObservation,
    prior: &MixturePrior,
    spec: &EquivalenceSpec,
) -> f64 {
    let eps = spec.epsilon();
    posterior_decomposition(obs, prior).interval_probability(-eps, eps)
}

/// Posterior equivalence probability of a fixed `y` along a grid of variances.
pub fn equivalence_curve(
    y: f64,
    prior: &MixturePrior,
    spec: &EquivalenceSpec,
    sigma2_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if sigma2_grid.is_empty() {
        return Err(Error::InvalidParameter("variance grid is empty".into()));
    }
    sigma2_grid
        .iter()
        .map(|&s2| {
            let obs = GeneObservation::new("curve", y, s2)?;
            Ok((s2, posterior_equivalence_probability(&obs, prior, spec)))
        })
        .collect()
}

/// Score every gene in parallel; output order follows `panel`.
pub fn score_panel(panel: &[GeneObservation], prior: &MixturePrior, spec: &EquivalenceSpec) -> Vec<f64> {
    panel
        .par_iter()
        .map(|g| posterior_equivalence_probability(g, prior, spec))
        .collect()
}
