mod support;

use equiv_core::em::{
    cm_step_means, cm_step_variances, cm_step_weights, e_step, ecm_sweep, fit, initialize,
    max_parameter_change, maximize_variance, normalize_start, observed_log_likelihood, FitConfig,
    ResponsibilityMatrix, DEFAULT_STARTS,
};
use equiv_core::error::Error;
use equiv_core::posterior::{GeneObservation, MixturePrior};
use equiv_core::sim::{simulate, GeneStream, Sigma2Law, SimScenario};
use support::{log_uniform, naive_log_likelihood, random_prior};

fn obs(i: usize, y: f64, s2: f64) -> GeneObservation {
    GeneObservation::new(format!("g{i}"), y, s2).unwrap()
}

fn random_data(rng: &mut GeneStream, n: usize) -> Vec<GeneObservation> {
    (0..n)
        .map(|i| obs(i, -3.0 + 6.0 * rng.uniform(), log_uniform(rng, 1e-3, 1.0)))
        .collect()
}

fn ln_dnorm(x: f64, mean: f64, var: f64) -> f64 {
    -0.5 * (2.0 * std::f64::consts::PI * var).ln() - (x - mean).powi(2) / (2.0 * var)
}

fn objective(rows: &[(f64, f64, f64)], mu: f64, tau2: f64) -> f64 {
    rows.iter().map(|&(w, y, s2)| w * ln_dnorm(y, mu, tau2 + s2)).sum()
}

fn grid_argmax(rows: &[(f64, f64, f64)], mu: f64, upper: f64, n: usize) -> (f64, f64) {
    (0..=n)
        .map(|k| {
            let t = upper * k as f64 / n as f64;
            (t, objective(rows, mu, t))
        })
        .fold((f64::NAN, f64::NEG_INFINITY), |b, p| if p.1 > b.1 { p } else { b })
}

fn well_separated(m: usize, seed: u64) -> (SimScenario, Vec<GeneObservation>) {
    let scn = SimScenario {
        m,
        prior: MixturePrior::new([0.2, 0.3, 0.5], [-2.0, 0.0, 2.0], [0.04, 0.02, 0.05]).unwrap(),
        sigma2_law: Sigma2Law::Uniform { lo: 0.01, hi: 0.1 },
        seed,
        epsilon: 1.0,
    };
    let data = simulate(&scn).unwrap().observations;
    (scn, data)
}

#[test]
fn default_config_uses_the_seven_starts() {
    let cfg = FitConfig::default();
    assert_eq!(cfg.starts.len(), 7);
    for (s, raw) in cfg.starts.iter().zip(DEFAULT_STARTS) {
        assert_eq!(*s, normalize_start(raw));
    }
    assert_eq!(DEFAULT_STARTS[1], [0.8, 0.1, 0.1]);
}

#[test]
fn e_step_matches_bayes_rule() {
    let mut rng = GeneStream::new(31, 0);
    for _ in 0..50 {
        let prior = random_prior(&mut rng);
        // variances large enough that the direct sums stay away from underflow
        let data: Vec<GeneObservation> = (0..20)
            .map(|i| obs(i, -3.0 + 6.0 * rng.uniform(), log_uniform(&mut rng, 0.05, 1.0)))
            .collect();
        let g = e_step(&data, &prior).unwrap();
        for (o, r) in data.iter().zip(g.rows()) {
            let terms: Vec<f64> = (0..3)
                .map(|j| prior.weights()[j] * ln_dnorm(o.y, prior.means()[j], o.sigma2 + prior.variances()[j]).exp())
                .collect();
            let total: f64 = terms.iter().sum();
            for j in 0..3 {
                assert!((r[j] - terms[j] / total).abs() < 1e-12, "{prior:?} {o:?}: {r:?} vs {terms:?}");
            }
        }
        let ll = observed_log_likelihood(&data, &prior).unwrap();
        assert!((ll - naive_log_likelihood(&data, &prior)).abs() < 1e-9 * ll.abs().max(1.0));
    }
}

#[test]
fn weight_and_mean_steps_match_direct_arithmetic() {
    let mut rng = GeneStream::new(32, 0);
    let data = random_data(&mut rng, 300);
    let rows: Vec<[f64; 3]> = (0..300)
        .map(|_| {
            let r = [rng.uniform(), rng.uniform(), rng.uniform()];
            let s: f64 = r.iter().sum();
            r.map(|v| v / s)
        })
        .collect();
    let gamma = ResponsibilityMatrix::from_rows(rows.clone()).unwrap();
    let w = cm_step_weights(&gamma);
    let tau2 = [0.1, 0.0, 2.0];
    let mu = cm_step_means(&data, &gamma, tau2).unwrap();
    for j in 0..3 {
        let col: f64 = rows.iter().map(|r| r[j]).sum::<f64>() / 300.0;
        assert!((w[j] - col).abs() < 1e-14);
        let (mut num, mut den) = (0.0, 0.0);
        for (o, r) in data.iter().zip(&rows) {
            num += r[j] * o.y / (o.sigma2 + tau2[j]);
            den += r[j] / (o.sigma2 + tau2[j]);
        }
        assert!((mu[j] - num / den).abs() < 1e-12);
    }
    let zero = ResponsibilityMatrix::from_rows(vec![[1.0, 0.0, 0.0]; 300]).unwrap();
    assert!(matches!(
        cm_step_means(&data, &zero, tau2),
        Err(Error::ZeroResponsibility { component: 2 })
    ));
}

#[test]
fn variance_step_beats_dense_grid() {
    let mut rng = GeneStream::new(33, 0);
    for _ in 0..20 {
        let rows: Vec<(f64, f64, f64)> = (0..200)
            .map(|_| (rng.uniform(), -2.0 + 4.0 * rng.uniform(), log_uniform(&mut rng, 1e-3, 0.5)))
            .collect();
        let mu = -0.5 + rng.uniform();
        let upper = rows.iter().map(|r| r.2).fold(0.0, f64::max);
        let t = maximize_variance(&rows, mu, upper, 0.5 * upper);
        assert!((0.0..=upper).contains(&t));
        let (_, best) = grid_argmax(&rows, mu, upper, 10_000);
        assert!(objective(&rows, mu, t) >= best - 1e-9);
    }
}

#[test]
fn variance_step_examples() {
    let mut rng = GeneStream::new(34, 0);
    let data: Vec<GeneObservation> = (0..4000).map(|i| obs(i, 0.3 + rng.standard_normal() * (1.01f64).sqrt(), 0.01)).collect();
    let gamma = ResponsibilityMatrix::from_rows(vec![[1.0, 0.0, 0.0]; 4000]).unwrap();
    let mean = data.iter().map(|o| o.y).sum::<f64>() / 4000.0;
    let var = data.iter().map(|o| (o.y - mean).powi(2)).sum::<f64>() / 4000.0;
    let t = cm_step_variances(&data, &gamma, [mean, 0.0, 0.0], 10.0, [1.0; 3]).unwrap();
    assert!((t[0] - (var - 0.01)).abs() < 0.05 * (var - 0.01), "{} vs {}", t[0], var - 0.01);

    let flat: Vec<GeneObservation> = (0..50).map(|i| obs(i, 0.7, 0.2)).collect();
    let g = ResponsibilityMatrix::from_rows(vec![[0.2, 0.3, 0.5]; 50]).unwrap();
    assert_eq!(cm_step_variances(&flat, &g, [0.7; 3], 0.2, [0.1; 3]).unwrap(), [0.0; 3]);
}

#[test]
fn initialization_examples() {
    let data = vec![obs(0, 1.0, 1.0), obs(1, -1.0, 1.0), obs(2, 0.0, 1.0)];
    let p = initialize(&data, [1.0 / 3.0; 3], None).unwrap();
    assert_eq!(p.means(), [-1.0, 0.0, 1.0]);
    assert_eq!(p.variances(), [0.0; 3]);

    let data: Vec<GeneObservation> = (0..10).map(|i| obs(i, i as f64, 0.5)).collect();
    let p = initialize(&data, [0.8, 0.1, 0.1], None).unwrap();
    assert_eq!(p.means(), [3.5, 8.0, 9.0]);

    assert!(matches!(
        initialize(&data[..3], [0.8, 0.1, 0.1], None),
        Err(Error::EmptyBlock { .. })
    ));
}

#[test]
fn initial_variances_match_grid_search() {
    let (_, data) = well_separated(600, 4);
    let start = normalize_start(DEFAULT_STARTS[0]);
    let p = initialize(&data, start, None).unwrap();
    let mut sorted = data.clone();
    sorted.sort_by(|a, b| a.y.total_cmp(&b.y));
    let n1 = (600.0 * start[0]).round() as usize;
    let n2 = (600.0 * start[1]).round() as usize;
    let blocks = [&sorted[..n1], &sorted[n1..n1 + n2], &sorted[n1 + n2..]];
    for (j, block) in blocks.iter().enumerate() {
        let rows: Vec<(f64, f64, f64)> = block.iter().map(|o| (1.0, o.y, o.sigma2)).collect();
        let upper = rows.iter().map(|r| r.2).fold(0.0, f64::max);
        // coarse grid, then a fine grid around its best point
        let (t0, _) = grid_argmax(&rows, p.means()[j], upper, 10_000);
        let lo = (t0 - upper / 10_000.0).max(0.0);
        let hi = (t0 + upper / 10_000.0).min(upper);
        let (t, _) = (0..=20_000)
            .map(|k| {
                let t = lo + (hi - lo) * k as f64 / 20_000.0;
                (t, objective(&rows, p.means()[j], t))
            })
            .fold((f64::NAN, f64::NEG_INFINITY), |b, q| if q.1 > b.1 { q } else { b });
        assert!((p.variances()[j] - t).abs() < 1e-6, "block {j}: {} vs {t}", p.variances()[j]);
    }
    assert!(p.means()[0] <= p.means()[1] && p.means()[1] <= p.means()[2]);
}

#[test]
fn fit_recovers_well_separated_components() {
    let (scn, data) = well_separated(3000, 9);
    let r = fit(&data, &FitConfig::default()).unwrap();
    assert!(r.converged);
    assert!(r.trace.windows(2).all(|w| w[1] >= w[0] - 1e-8));
    let truth = scn.prior;
    for j in 0..3 {
        let k = (0..3)
            .min_by(|&a, &b| {
                (r.prior.means()[a] - truth.means()[j]).abs().total_cmp(&(r.prior.means()[b] - truth.means()[j]).abs())
            })
            .unwrap();
        assert!((r.prior.means()[k] - truth.means()[j]).abs() < 0.1);
        assert!((r.prior.weights()[k] - truth.weights()[j]).abs() < 0.05);
    }

    // fixed point
    let upper = data.iter().map(|o| o.sigma2).fold(0.0, f64::max);
    let again = ecm_sweep(&data, &r.prior, upper).unwrap();
    assert!(max_parameter_change(&again, &r.prior) < FitConfig::default().final_tol);

    // relabelling leaves the likelihood alone
    let ll = observed_log_likelihood(&data, &r.prior).unwrap();
    let swapped = observed_log_likelihood(&data, &r.prior.permuted([1, 2, 0])).unwrap();
    assert!((ll - swapped).abs() < 1e-9 * ll.abs());
}

#[test]
fn fit_preconditions_and_non_convergence() {
    let (_, data) = well_separated(300, 2);
    assert!(fit(&data[..2], &FitConfig::default()).is_err());
    let cfg = FitConfig {
        max_iters: 1,
        final_tol: 1e-300,
        ..FitConfig::default()
    };
    let r = fit(&data, &cfg).unwrap();
    assert!(!r.converged);
    let bad = FitConfig {
        final_tol: 1e-3,
        ..FitConfig::default()
    };
    assert!(fit(&data, &bad).is_err());
}
