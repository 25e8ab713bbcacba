//! Numerical checks of the monotonicity theory behind posterior-based
//! q-values, and of the failure of the equivalence P-value.
//!
//! * Weighted second moments: for a symmetric positive `f`, numbers
//!   `-ell < a < b < ell`, `0 < c`, `ell < d` with `b - a = d - c`, the ratio
//!   `int_a^b x^2 f / int_a^b f` is strictly smaller than the same ratio on
//!   `[c, d]`.
//! * Interval conditioning: if `T | theta ~ N(theta, sigma2)` and
//!   `0 < ell < epsilon`, then `P(-epsilon < theta < epsilon | -ell < T < ell)`
//!   decreases in `sigma2` for any prior with mass strictly between 0 and 1
//!   inside the margin. Equivalently the odds `r(omega)`, `omega = 1/(2 sigma2)`,
//!   increase in `omega`.
//! * The P-value curves `P_U(se)`, which rise and fall for `|theta_hat| < epsilon`
//!   and tend to zero as `se` grows.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::posterior::MixturePrior;
use crate::quadrature::{integrate, integrate_with_breaks, QuadOptions};
use crate::sim::GeneStream;
use crate::stats::{equivalence_p_value, normal_interval, normal_pdf, EquivalenceSpec, EstimateSummary};

/// Components are truncated at this many standard deviations.
const TRUNCATION_SDS: f64 = 10.0;

/// Equality slack for monotonicity verdicts.
pub const MONOTONE_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalComponent {
    pub weight: f64,
    pub mean: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub location: f64,
    pub weight: f64,
}

/// A prior on `theta`: a finite normal mixture or a discrete distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum IntervalPrior {
    Mixture(Vec<NormalComponent>),
    Discrete(Vec<Atom>),
}

fn check_weights(weights: impl Iterator<Item = f64>) -> Result<()> {
    let mut total = 0.0;
    let mut n = 0;
    for w in weights {
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::InvalidPrior(format!("weight {w}")));
        }
        total += w;
        n += 1;
    }
    if n == 0 || (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidPrior(format!("weights sum to {total}, expected 1")));
    }
    Ok(())
}

impl IntervalPrior {
    pub fn mixture(components: Vec<NormalComponent>) -> Result<Self> {
        check_weights(components.iter().map(|c| c.weight))?;
        if components
            .iter()
            .any(|c| !c.mean.is_finite() || !(c.variance.is_finite() && c.variance >= 0.0))
        {
            return Err(Error::InvalidPrior("component mean/variance out of range".into()));
        }
        Ok(Self::Mixture(components))
    }

    pub fn discrete(atoms: Vec<Atom>) -> Result<Self> {
        check_weights(atoms.iter().map(|a| a.weight))?;
        if atoms.iter().any(|a| !a.location.is_finite()) {
            return Err(Error::InvalidPrior("atom location is not finite".into()));
        }
        Ok(Self::Discrete(atoms))
    }

    pub fn from_mixture_prior(prior: &MixturePrior) -> Self {
        let (w, m, v) = (prior.weights(), prior.means(), prior.variances());
        Self::Mixture(
            (0..w.len())
                .map(|j| NormalComponent {
                    weight: w[j],
                    mean: m[j],
                    variance: v[j],
                })
                .collect(),
        )
    }

    /// Prior probability of `-epsilon < theta < epsilon`.
    pub fn mass_inside(&self, epsilon: f64) -> f64 {
        self.mass_between(-epsilon, epsilon)
    }

    /// Prior probability of `lo < theta < hi`.
    pub fn mass_between(&self, lo: f64, hi: f64) -> f64 {
        match self {
            Self::Discrete(atoms) => atoms
                .iter()
                .filter(|a| a.location > lo && a.location < hi)
                .map(|a| a.weight)
                .sum(),
            Self::Mixture(cs) => cs
                .iter()
                .map(|c| {
                    let sd = c.variance.sqrt();
                    if sd > 0.0 {
                        c.weight * normal_interval((lo - c.mean) / sd, (hi - c.mean) / sd)
                    } else if c.mean > lo && c.mean < hi {
                        c.weight
                    } else {
                        0.0
                    }
                })
                .sum(),
        }
    }
}

// ----------------------------------------------------------------------------
// Weighted second moments
// ----------------------------------------------------------------------------

/// Which configuration of `[a, b]` and `[c, d]` a tuple falls in, after
/// reflecting so that `b > 0` and `|a| <= |b|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Lemma1Case {
    /// `b <= c`
    Disjoint,
    /// `c < b` and `|a| <= c`
    Overlap,
    /// `c < b` and `|a| > c`
    Straddle,
}

pub const LEMMA1_CASES: [Lemma1Case; 3] = [Lemma1Case::Disjoint, Lemma1Case::Overlap, Lemma1Case::Straddle];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma1Outcome {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub case: Lemma1Case,
}

pub fn lemma1_case(a: f64, b: f64, c: f64) -> Lemma1Case {
    let (a, b) = if b <= 0.0 || a.abs() > b.abs() { (-b, -a) } else { (a, b) };
    if b <= c {
        Lemma1Case::Disjoint
    } else if a.abs() <= c {
        Lemma1Case::Overlap
    } else {
        Lemma1Case::Straddle
    }
}

/// `int_lo^hi x^2 f / int_lo^hi f`.
pub fn second_moment_ratio<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<f64> {
    let opts = QuadOptions::new(1e-15, 1e-13);
    let num = integrate(|x| x * x * f(x), lo, hi, &opts)?;
    let den = integrate(f, lo, hi, &opts)?;
    if !(den.value > 0.0) {
        return Err(Error::HypothesisViolation(format!(
            "weight has no mass on [{lo}, {hi}]"
        )));
    }
    Ok(num.value / den.value)
}

/// Compare the weighted second moments over `[a, b]` and `[c, d]`.
pub fn lemma1_check<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, c: f64, d: f64, ell: f64) -> Result<Lemma1Outcome> {
    let all_finite = [a, b, c, d, ell].iter().all(|v| v.is_finite());
    let width_tol = 1e-12 * (b - a).abs().max(1.0);
    if !all_finite || !(-ell < a && a < b && b < ell) {
        return Err(Error::HypothesisViolation(format!(
            "need -ell < a < b < ell, got a = {a}, b = {b}, ell = {ell}"
        )));
    }
    if !(0.0 < c && ell < d) {
        return Err(Error::HypothesisViolation(format!(
            "need 0 < c and ell < d, got c = {c}, d = {d}, ell = {ell}"
        )));
    }
    if ((b - a) - (d - c)).abs() > width_tol {
        return Err(Error::HypothesisViolation(format!(
            "intervals differ in width: b - a = {}, d - c = {}",
            b - a,
            d - c
        )));
    }
    let lhs = second_moment_ratio(&f, a, b)?;
    let rhs = second_moment_ratio(&f, c, d)?;
    Ok(Lemma1Outcome {
        lhs,
        rhs,
        holds: lhs < rhs,
        case: lemma1_case(a, b, c),
    })
}

/// Tuple `(a, b, c, d, ell)` satisfying the hypotheses and landing in `case`,
/// drawn by rejection. Half the draws are mirrored to `(-b, -a)`.
pub fn sample_lemma1_tuple(case: Lemma1Case, rng: &mut GeneStream) -> (f64, f64, f64, f64, f64) {
    loop {
        let ell = 0.2 + 2.8 * rng.uniform();
        let b = ell * rng.uniform();
        if b <= 0.0 {
            continue;
        }
        let (a, c) = match case {
            Lemma1Case::Disjoint => {
                let a = -b + 2.0 * b * rng.uniform();
                let w = b - a;
                let floor = b.max(ell - w);
                (a, floor + 2.0 * rng.uniform())
            }
            Lemma1Case::Overlap => {
                let c = b * rng.uniform();
                (-c + 2.0 * c * rng.uniform(), c)
            }
            Lemma1Case::Straddle => {
                let c = b * rng.uniform();
                (-b + (b - c) * rng.uniform(), c)
            }
        };
        let d = c + (b - a);
        let valid = -ell < a && a < b && b < ell && c > 0.0 && d > ell && lemma1_case(a, b, c) == case;
        if !valid {
            continue;
        }
        return if rng.uniform() < 0.5 { (a, b, c, d, ell) } else { (-b, -a, c, d, ell) };
    }
}

// ----------------------------------------------------------------------------
// Interval conditioning
// ----------------------------------------------------------------------------

/// Probability that `-ell < T < ell` when the true value is `theta`.
fn window(theta: f64, ell: f64, sd: f64) -> f64 {
    normal_interval((-ell - theta) / sd, (ell - theta) / sd)
}

/// `(P(inside, window), P(outside, window))` joint masses.
fn joint_masses(prior: &IntervalPrior, epsilon: f64, ell: f64, sigma2: f64, opts: &QuadOptions) -> Result<(f64, f64)> {
    let sd = sigma2.sqrt();
    let (mut inside, mut outside) = (0.0, 0.0);
    let add_atom = |location: f64, weight: f64, inside: &mut f64, outside: &mut f64| {
        let m = weight * window(location, ell, sd);
        if location.abs() < epsilon {
            *inside += m;
        } else {
            *outside += m;
        }
    };
    match prior {
        IntervalPrior::Discrete(atoms) => {
            for a in atoms {
                add_atom(a.location, a.weight, &mut inside, &mut outside);
            }
        }
        IntervalPrior::Mixture(cs) => {
            for c in cs {
                if c.weight == 0.0 {
                    continue;
                }
                let tau = c.variance.sqrt();
                if tau == 0.0 {
                    add_atom(c.mean, c.weight, &mut inside, &mut outside);
                    continue;
                }
                // theta = mean + tau z, z in [-10, 10]
                let to_z = |theta: f64| ((theta - c.mean) / tau).clamp(-TRUNCATION_SDS, TRUNCATION_SDS);
                let integrand = |z: f64| normal_pdf(z) * window(c.mean + tau * z, ell, sd);
                let (e_lo, e_hi) = (to_z(-epsilon), to_z(epsilon));
                let breaks = [to_z(-ell), to_z(ell)];
                let piece = |lo: f64, hi: f64| -> Result<f64> {
                    if hi <= lo {
                        return Ok(0.0);
                    }
                    let mut pts = vec![lo];
                    pts.extend(breaks.iter().copied().filter(|&p| p > lo && p < hi));
                    pts.push(hi);
                    Ok(integrate_with_breaks(integrand, &pts, opts)?.value)
                };
                inside += c.weight * piece(e_lo, e_hi)?;
                outside += c.weight
                    * (piece(-TRUNCATION_SDS, e_lo)? + piece(e_hi, TRUNCATION_SDS)?);
            }
        }
    }
    Ok((inside, outside))
}

fn conditioning_quadrature() -> QuadOptions {
    QuadOptions::new(1e-300, 1e-12)
}

/// `P(-epsilon < theta < epsilon | -ell < T < ell)` with `T ~ N(theta, sigma2)`.
/// Unlike [`theorem2_posterior`] this accepts any `ell > 0`.
pub fn interval_conditioned_probability(
    prior: &IntervalPrior,
    epsilon: f64,
    ell: f64,
    sigma2: f64,
) -> Result<f64> {
    interval_conditioned_probability_with(prior, epsilon, ell, sigma2, &conditioning_quadrature())
}

pub fn interval_conditioned_probability_with(
    prior: &IntervalPrior,
    epsilon: f64,
    ell: f64,
    sigma2: f64,
    opts: &QuadOptions,
) -> Result<f64> {
    let (inside, outside) = conditioned_odds_parts(prior, epsilon, ell, sigma2, opts)?;
    Ok(inside / (inside + outside))
}

fn conditioned_odds_parts(
    prior: &IntervalPrior,
    epsilon: f64,
    ell: f64,
    sigma2: f64,
    opts: &QuadOptions,
) -> Result<(f64, f64)> {
    if !(epsilon > 0.0 && ell > 0.0 && sigma2.is_finite() && sigma2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need epsilon > 0, ell > 0, sigma2 > 0; got {epsilon}, {ell}, {sigma2}"
        )));
    }
    let mass = prior.mass_inside(epsilon);
    if !(mass > 0.0 && mass < 1.0) {
        return Err(Error::InvalidPrior(format!(
            "prior mass inside the margin is {mass}; it must lie strictly between 0 and 1"
        )));
    }
    let (inside, outside) = joint_masses(prior, epsilon, ell, sigma2, opts)?;
    if !(inside + outside > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "the window has zero probability at sigma2 = {sigma2}"
        )));
    }
    Ok((inside, outside))
}

fn window_of(spec: &EquivalenceSpec) -> Result<f64> {
    spec.ell()
        .ok_or_else(|| Error::InvalidParameter("the equivalence spec has no window half-width".into()))
}

pub fn theorem2_posterior(prior: &IntervalPrior, spec: &EquivalenceSpec, sigma2: f64) -> Result<f64> {
    interval_conditioned_probability(prior, spec.epsilon(), window_of(spec)?, sigma2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Sweep {
    /// `(sigma2, probability)` in grid order.
    pub points: Vec<(f64, f64)>,
    /// Posterior odds (inside / outside) in grid order; `+inf` when the
    /// outside mass underflows.
    pub odds: Vec<f64>,
    /// Every step satisfies `p[k+1] <= p[k] + MONOTONE_SLACK`.
    pub decreasing: bool,
    /// Steps `k` with `|p[k+1] - p[k]| <= MONOTONE_SLACK`.
    pub near_ties: Vec<usize>,
    /// Odds never increase with `sigma2` (relative slack `MONOTONE_SLACK`).
    pub odds_monotone: bool,
}

pub fn theorem2_sweep(prior: &IntervalPrior, spec: &EquivalenceSpec, sigma2_grid: &[f64]) -> Result<Theorem2Sweep> {
    let ell = window_of(spec)?;
    if sigma2_grid.is_empty() || sigma2_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter("variance grid must be nonempty and strictly ascending".into()));
    }
    let opts = conditioning_quadrature();
    let mut points = Vec::with_capacity(sigma2_grid.len());
    let mut odds = Vec::with_capacity(sigma2_grid.len());
    for &s2 in sigma2_grid {
        let (inside, outside) = conditioned_odds_parts(prior, spec.epsilon(), ell, s2, &opts)?;
        points.push((s2, inside / (inside + outside)));
        odds.push(if outside > 0.0 { inside / outside } else { f64::INFINITY });
    }
    let steps: Vec<(usize, f64)> = points.windows(2).enumerate().map(|(k, w)| (k, w[1].1 - w[0].1)).collect();
    Ok(Theorem2Sweep {
        decreasing: steps.iter().all(|&(_, d)| d <= MONOTONE_SLACK),
        near_ties: steps
            .iter()
            .filter(|(_, d)| d.abs() <= MONOTONE_SLACK)
            .map(|&(k, _)| k)
            .collect(),
        odds_monotone: odds
            .windows(2)
            .all(|w| w[1] == w[0] || w[1] <= w[0] * (1.0 + MONOTONE_SLACK)),
        points,
        odds,
    })
}

/// Random normal mixture with one to four components whose mass inside
/// `(-epsilon, epsilon)` lies in `[1e-6, 1 - 1e-6]` and whose mass inside
/// `(-ell, ell)` is at least `1e-6`, so the conditioning event stays
/// representable as `sigma2 -> 0`.
pub fn sample_mixture_prior(rng: &mut GeneStream, epsilon: f64, ell: f64) -> IntervalPrior {
    loop {
        let k = 1 + ((rng.uniform() * 4.0) as usize).min(3);
        let raw: Vec<f64> = (0..k).map(|_| 0.05 + rng.uniform()).collect();
        let total: f64 = raw.iter().sum();
        let mut comps: Vec<NormalComponent> = raw
            .iter()
            .map(|w| NormalComponent {
                weight: w / total,
                mean: 3.0 * epsilon * (2.0 * rng.uniform() - 1.0),
                variance: (10f64.ln() * (-4.0 + 4.6 * rng.uniform())).exp(),
            })
            .collect();
        let rest: f64 = comps[1..].iter().map(|c| c.weight).sum();
        comps[0].weight = 1.0 - rest;
        let Ok(prior) = IntervalPrior::mixture(comps) else {
            continue;
        };
        let mass = prior.mass_inside(epsilon);
        if (1e-6..=1.0 - 1e-6).contains(&mass) && prior.mass_between(-ell, ell) >= 1e-6 {
            return prior;
        }
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (l0, l1) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| {
            if k == 0 {
                lo
            } else if k == n - 1 {
                hi
            } else {
                (l0 + (l1 - l0) * k as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

// ----------------------------------------------------------------------------
// P-value pathology
// ----------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PValueCurve {
    pub theta_hat: f64,
    pub points: Vec<(f64, f64)>,
    pub max_p: f64,
    pub argmax_se: f64,
    /// `(se, p)` far beyond the plotted range.
    pub tail: Vec<(f64, f64)>,
}

/// Two standard errors that give the same P-value for `theta_hat = 0.5`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EqualPWitness {
    pub theta_hat: f64,
    pub se_low: f64,
    pub se_high: f64,
    pub p_low: f64,
    pub p_high: f64,
    /// Root of `P_U(se) = P_U(se_low)` above the curve's maximum.
    pub se_high_root: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathologyReport {
    pub epsilon: f64,
    pub curves: Vec<PValueCurve>,
    pub witness: EqualPWitness,
    pub assertions: Vec<Assertion>,
}

pub const PATHOLOGY_ESTIMATES: [f64; 3] = [0.5, 1.0, 2.0];
const SE_STEP: f64 = 0.01;
const SE_MAX: f64 = 40.0;

fn p_u(theta_hat: f64, se: f64, spec: &EquivalenceSpec) -> f64 {
    equivalence_p_value(&EstimateSummary::new(theta_hat, se).expect("positive se"), spec)
}

/// Root of `g` on `[lo, hi]` by bisection; `g(lo)` and `g(hi)` must differ in sign.
fn bisect<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64) -> Option<f64> {
    let (mut glo, ghi) = (g(lo), g(hi));
    if glo.signum() == ghi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm.signum() == glo.signum() {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// P-value curves against the standard error for `theta_hat` in {0.5, 1, 2},
/// the equal-P pair at `se` 0.3 and 8.28224, and verdicts on their shape.
pub fn pathology_report(spec: &EquivalenceSpec) -> PathologyReport {
    let n = (SE_MAX / SE_STEP).round() as usize;
    let grid: Vec<f64> = (1..=n).map(|k| k as f64 * SE_STEP).collect();
    let tail_se = [100.0, 1e3, 1e4, 1e6];
    let curves: Vec<PValueCurve> = PATHOLOGY_ESTIMATES
        .iter()
        .map(|&t| {
            let points: Vec<(f64, f64)> = grid.iter().map(|&se| (se, p_u(t, se, spec))).collect();
            let (argmax_se, max_p) = points
                .iter()
                .copied()
                .fold((f64::NAN, f64::NEG_INFINITY), |best, p| if p.1 > best.1 { p } else { best });
            PValueCurve {
                theta_hat: t,
                points,
                max_p,
                argmax_se,
                tail: tail_se.iter().map(|&se| (se, p_u(t, se, spec))).collect(),
            }
        })
        .collect();

    let (se_low, se_high) = (0.3, 8.28224);
    let p_low = p_u(0.5, se_low, spec);
    let p_high = p_u(0.5, se_high, spec);
    let peak = curves[0].argmax_se;
    let se_high_root = bisect(|se| p_u(0.5, se, spec) - p_low, peak, SE_MAX).unwrap_or(f64::NAN);
    let witness = EqualPWitness {
        theta_hat: 0.5,
        se_low,
        se_high,
        p_low,
        p_high,
        se_high_root,
    };

    let mut assertions = Vec::new();
    let inner = &curves[0];
    let first = inner.points[0].1;
    let last = inner.points[inner.points.len() - 1].1;
    assertions.push(Assertion::new(
        "interior_maximum",
        inner.max_p > first && inner.max_p > last,
        format!(
            "theta_hat = 0.5: max {:.6} at se = {:.2}; p(se = {SE_STEP}) = {first:.3e}, p(se = {SE_MAX}) = {last:.6}",
            inner.max_p, inner.argmax_se
        ),
    ));
    for c in &curves {
        let at20 = c.points.iter().find(|p| (p.0 - 20.0).abs() < 1e-9).map_or(f64::NAN, |p| p.1);
        let at_end = c.points[c.points.len() - 1].1;
        let far = c.tail[c.tail.len() - 1].1;
        let decreasing_tail = c
            .points
            .iter()
            .filter(|p| p.0 >= c.argmax_se)
            .collect::<Vec<_>>()
            .windows(2)
            .all(|w| w[1].1 <= w[0].1);
        assertions.push(Assertion::new(
            &format!("decays_to_zero_theta_{}", c.theta_hat),
            decreasing_tail && at_end < at20 && far < 1e-5,
            format!(
                "p(se = 20) = {at20:.6}, p(se = {SE_MAX}) = {at_end:.6}, p(se = 1e6) = {far:.3e}, decreasing past the maximum: {decreasing_tail}"
            ),
        ));
    }
    assertions.push(Assertion::new(
        "equal_p_at_different_se",
        se_high_root.is_finite() && (p_low - p_high).abs() < 5e-5 && (se_high_root - se_high).abs() < 1e-3,
        format!("p(0.3) = {p_low:.6}, p(8.28224) = {p_high:.6}, root = {se_high_root:.6}"),
    ));
    if spec.epsilon() == 1.0 {
        let p10 = p_u(0.5, 10.0, spec);
        assertions.push(Assertion::new(
            "reported_p_at_se_10",
            (p10 - 0.03969).abs() < 5e-5,
            format!("p(0.5, se = 10) = {p10:.6}, reported 0.03969"),
        ));
        assertions.push(Assertion::new(
            "reported_maximum",
            (inner.max_p - 0.24).abs() <= 0.01,
            format!("max {:.6}, reported about 0.24", inner.max_p),
        ));
        assertions.push(Assertion::new(
            "reported_equal_p",
            (p_low - 0.04779).abs() < 5e-5 && (p_high - 0.04779).abs() < 5e-5,
            format!("p(0.3) = {p_low:.6}, p(8.28224) = {p_high:.6}, reported 0.04779"),
        ));
    }

    PathologyReport {
        epsilon: spec.epsilon(),
        curves,
        witness,
        assertions,
    }
}
