//! Brute-force oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use equiv_core::posterior::{GeneObservation, MixturePrior};
use equiv_core::quadrature::{integrate_with_breaks, QuadOptions};
use equiv_core::sim::GeneStream;
use equiv_core::stats::normal_cdf;

fn ln_dnorm(x: f64, mean: f64, var: f64) -> f64 {
    let d = x - mean;
    -0.5 * (2.0 * std::f64::consts::PI * var).ln() - d * d / (2.0 * var)
}

fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// `P(-eps < theta < eps | y)` by integrating prior times likelihood over
/// `theta` component by component.
pub fn quadrature_posterior(y: f64, sigma2: f64, prior: &MixturePrior, eps: f64) -> f64 {
    let opts = QuadOptions::new(1e-16, 1e-12);
    let (mut ln_in, mut ln_all) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for j in 0..3 {
        let (w, mu, tau2) = (prior.weights()[j], prior.means()[j], prior.variances()[j]);
        if w == 0.0 {
            continue;
        }
        if tau2 == 0.0 {
            let ln_mass = w.ln() + ln_dnorm(y, mu, sigma2);
            ln_all = log_add(ln_all, ln_mass);
            if mu.abs() < eps {
                ln_in = log_add(ln_in, ln_mass);
            } else if mu.abs() == eps {
                ln_in = log_add(ln_in, ln_mass - std::f64::consts::LN_2);
            }
            continue;
        }
        let log_integrand = |t: f64| w.ln() + ln_dnorm(t, mu, tau2) + ln_dnorm(y, t, sigma2);
        // peak of the product, used only to place nodes and scale
        let mode = (y * tau2 + mu * sigma2) / (tau2 + sigma2);
        let width = 12.0 * tau2.sqrt().min(sigma2.sqrt());
        let shift = log_integrand(mode);
        let f = |t: f64| (log_integrand(t) - shift).exp();
        let (lo, hi) = (mode - width, mode + width);
        let mut pts = vec![lo];
        pts.extend([-eps, eps].into_iter().filter(|&p| p > lo && p < hi));
        pts.push(hi);
        let total = integrate_with_breaks(f, &pts, &opts).unwrap().value;
        let (a, b) = (lo.max(-eps), hi.min(eps));
        let inside = if a < b {
            integrate_with_breaks(f, &[a, b], &opts).unwrap().value
        } else {
            0.0
        };
        ln_all = log_add(ln_all, shift + total.ln());
        if inside > 0.0 {
            ln_in = log_add(ln_in, shift + inside.ln());
        }
    }
    (ln_in - ln_all).exp()
}

/// Prior mass in `(-eps, eps)`.
pub fn prior_mass(prior: &MixturePrior, eps: f64) -> f64 {
    (0..3)
        .map(|j| {
            let (w, mu, tau) = (prior.weights()[j], prior.means()[j], prior.variances()[j].sqrt());
            if tau == 0.0 {
                if mu.abs() < eps {
                    w
                } else {
                    0.0
                }
            } else {
                w * (normal_cdf((eps - mu) / tau) - normal_cdf((-eps - mu) / tau))
            }
        })
        .sum()
}

/// `sum_i ln sum_j pi_j N(y_i; mu_j, sigma2_i + tau2_j)` without any scaling.
pub fn naive_log_likelihood(data: &[GeneObservation], prior: &MixturePrior) -> f64 {
    data.iter()
        .map(|g| {
            (0..3)
                .map(|j| prior.weights()[j] * ln_dnorm(g.y, prior.means()[j], g.sigma2 + prior.variances()[j]).exp())
                .sum::<f64>()
                .ln()
        })
        .sum()
}

/// `sum_{p_i >= t} (1 - p_i) / #{p_i >= t}` by a direct loop.
pub fn naive_q_value(t: f64, ps: &[f64]) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for &p in ps {
        if p >= t {
            sum += 1.0 - p;
            n += 1;
        }
    }
    (n > 0).then(|| sum / n as f64)
}

/// Random prior for stress tests. With probability 0.25 a component's
/// variance is zero or below 1e-10.
pub fn random_prior(rng: &mut GeneStream) -> MixturePrior {
    let raw = [0.05 + rng.uniform(), 0.05 + rng.uniform(), 0.05 + rng.uniform()];
    let means = [0.0; 3].map(|_| -2.5 + 5.0 * rng.uniform());
    let variances = [0.0; 3].map(|_| {
        if rng.uniform() < 0.25 {
            match (rng.uniform() * 3.0) as usize {
                0 => 0.0,
                1 => 1e-12,
                _ => 1e-10 * rng.uniform(),
            }
        } else {
            (10f64).powf(-4.0 + 4.5 * rng.uniform())
        }
    });
    MixturePrior::normalized(raw, means, variances).unwrap()
}

pub fn log_uniform(rng: &mut GeneStream, lo: f64, hi: f64) -> f64 {
    (lo.ln() + (hi.ln() - lo.ln()) * rng.uniform()).exp()
}
