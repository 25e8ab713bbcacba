//! Synthetic gene panels with known true effects.
//!
//! Gene `i` (zero-based) draws from its own ChaCha20 stream: the key is the
//! little-endian scenario seed padded with zeros to 32 bytes, and the stream
//! id is `i`. Draws are taken in this order:
//!
//! 1. `u` uniform: component `j` is the first with `u < pi_1 + ... + pi_j`
//! 2. `z1` normal: `theta = mu_j + sqrt(tau2_j) z1`
//! 3. the variance, per [`Sigma2Law`] (one uniform for `Uniform` and `Empirical`)
//! 4. `z2` normal: `y = theta + sqrt(sigma2) z2`
//!
//! A uniform is `(next_u64 >> 11) * 2^-53`; a normal is the Box-Muller cosine
//! branch `sqrt(-2 ln(1 - u1)) cos(2 pi u2)` from two uniforms.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use crate::em::{fit, FitConfig, FitResult};
use crate::error::{Error, Result};
use crate::posterior::{score_panel, GeneObservation, MixturePrior, COMPONENTS};
use crate::qvalue::q_value_at;
use crate::stats::EquivalenceSpec;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Sigma2Law {
    Constant(f64),
    Uniform { lo: f64, hi: f64 },
    /// Resampled uniformly with replacement.
    Empirical(Vec<f64>),
}

impl Sigma2Law {
    fn validate(&self) -> Result<()> {
        let ok = match self {
            Sigma2Law::Constant(v) => v.is_finite() && *v > 0.0,
            Sigma2Law::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && *lo > 0.0 && lo <= hi,
            Sigma2Law::Empirical(vs) => !vs.is_empty() && vs.iter().all(|v| v.is_finite() && *v > 0.0),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid variance law {self:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimScenario {
    pub m: usize,
    pub prior: MixturePrior,
    pub sigma2_law: Sigma2Law,
    pub seed: u64,
    pub epsilon: f64,
}

impl SimScenario {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidParameter("panel size must be >= 1".into()));
        }
        EquivalenceSpec::new(self.epsilon)?;
        self.sigma2_law.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruthRecord {
    pub theta: f64,
    pub component: usize,
    /// `|theta| < epsilon`.
    pub equivalent: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedPanel {
    pub observations: Vec<GeneObservation>,
    pub truth: Vec<TruthRecord>,
}

/// Per-gene random stream.
pub struct GeneStream(ChaCha20Rng);

impl GeneStream {
    pub fn new(seed: u64, gene: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        let mut rng = ChaCha20Rng::from_seed(key);
        rng.set_stream(gene);
        Self(rng)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn standard_normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
    }
}

pub fn gene_id(index: usize) -> String {
    format!("g{:07}", index + 1)
}

fn draw_gene(scn: &SimScenario, index: usize) -> (GeneObservation, TruthRecord) {
    let mut rng = GeneStream::new(scn.seed, index as u64);
    let weights = scn.prior.weights();
    let u = rng.uniform();
    let mut cumulative = 0.0;
    let mut component = COMPONENTS - 1;
    for (j, w) in weights.iter().enumerate() {
        cumulative += w;
        if u < cumulative {
            component = j;
            break;
        }
    }
    let theta = scn.prior.means()[component] + scn.prior.variances()[component].sqrt() * rng.standard_normal();
    let sigma2 = match &scn.sigma2_law {
        Sigma2Law::Constant(v) => *v,
        Sigma2Law::Uniform { lo, hi } => lo + (hi - lo) * rng.uniform(),
        Sigma2Law::Empirical(vs) => {
            let k = ((rng.uniform() * vs.len() as f64) as usize).min(vs.len() - 1);
            vs[k]
        }
    };
    let y = theta + sigma2.sqrt() * rng.standard_normal();
    let obs = GeneObservation::new(gene_id(index), y, sigma2).expect("simulated draws are finite");
    let truth = TruthRecord {
        theta,
        component,
        equivalent: theta.abs() < scn.epsilon,
    };
    (obs, truth)
}

/// Draw a panel; identical scenarios give bit-identical panels regardless of
/// thread count.
pub fn simulate(scn: &SimScenario) -> Result<SimulatedPanel> {
    scn.validate()?;
    let (observations, truth) = (0..scn.m).into_par_iter().map(|i| draw_gene(scn, i)).unzip();
    Ok(SimulatedPanel { observations, truth })
}

/// Which prior scores the simulated panel.
#[derive(Debug, Clone, PartialEq)]
pub enum ScoringPrior {
    /// The generating prior.
    Truth,
    /// A prior fitted to the simulated panel itself.
    Fitted(FitConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CalibrationRow {
    pub threshold: f64,
    pub q_hat: f64,
    /// Realized false discovery proportion `V(t) / R(t)`.
    pub fdp: f64,
    pub discoveries: usize,
    pub false_discoveries: usize,
    /// `sqrt(q_hat (1 - q_hat) / R(t))`.
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationReport {
    pub rows: Vec<CalibrationRow>,
    pub scoring_prior: MixturePrior,
    pub fit: Option<FitResult>,
}

/// Compare estimated q-values with the realized false discovery proportion.
/// Thresholds with no discoveries produce no row.
pub fn calibration_experiment(
    scn: &SimScenario,
    thresholds: &[f64],
    scoring: &ScoringPrior,
) -> Result<CalibrationReport> {
    let panel = simulate(scn)?;
    let spec = EquivalenceSpec::new(scn.epsilon)?;
    let (prior, fitted) = match scoring {
        ScoringPrior::Truth => (scn.prior, None),
        ScoringPrior::Fitted(cfg) => {
            let result = fit(&panel.observations, cfg)?;
            (result.prior, Some(result))
        }
    };
    let ps = score_panel(&panel.observations, &prior, &spec);

    let mut rows = Vec::new();
    for &t in thresholds {
        let q_hat = match q_value_at(t, &ps) {
            Ok(q) => q,
            Err(Error::EmptyDiscoverySet { .. }) => continue,
            Err(e) => return Err(e),
        };
        let (discoveries, false_discoveries) = ps
            .iter()
            .zip(&panel.truth)
            .filter(|(p, _)| **p >= t)
            .fold((0usize, 0usize), |(r, v), (_, truth)| (r + 1, v + usize::from(!truth.equivalent)));
        rows.push(CalibrationRow {
            threshold: t,
            q_hat,
            fdp: false_discoveries as f64 / discoveries as f64,
            discoveries,
            false_discoveries,
            std_error: (q_hat * (1.0 - q_hat) / discoveries as f64).sqrt(),
        });
    }
    Ok(CalibrationReport {
        rows,
        scoring_prior: prior,
        fit: fitted,
    })
}
