//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#[path = "../../core/tests/support/mod.rs"]
#[allow(dead_code)]
mod support;

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use equiv_core::em::{fit, FitConfig};
use equiv_core::posterior::{posterior_equivalence_probability, GeneObservation, MixturePrior};
use equiv_core::qvalue::build_table;
use equiv_core::sim::{calibration_experiment, simulate, GeneStream, ScoringPrior, Sigma2Law, SimScenario};
use equiv_core::stats::{normal_pdf, EquivalenceSpec, EstimateSummary};
use equiv_core::verify::{
    lemma1_check, log_grid, pathology_report, sample_lemma1_tuple, sample_mixture_prior, theorem2_posterior,
    theorem2_sweep, Lemma1Case, LEMMA1_CASES,
};
use equiv_core::equivalence_p_value;
use support::{log_uniform, naive_q_value, quadrature_posterior, random_prior};

type Check = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn p_values() -> Check {
    let spec = EquivalenceSpec::new(1.0).map_err(|e| e.to_string())?;
    let cases = [(0.5, 10.0, 0.03969), (0.5, 0.3, 0.04779), (0.5, 8.28224, 0.04779)];
    let mut detail = Vec::new();
    let mut ok = true;
    for (theta, se, want) in cases {
        let got = equivalence_p_value(&EstimateSummary::new(theta, se).map_err(|e| e.to_string())?, &spec);
        ok &= (got - want).abs() <= 5e-5;
        detail.push(format!("P_U({theta}, {se}) = {got:.6}"));
    }
    ensure(ok, detail.join(", "))
}

fn pathology() -> Check {
    let spec = EquivalenceSpec::new(1.0).map_err(|e| e.to_string())?;
    let report = pathology_report(&spec);
    let curve = report
        .curves
        .iter()
        .find(|c| c.theta_hat == 0.5)
        .ok_or("no curve for theta_hat = 0.5")?;
    let first = curve.points.first().unwrap().0;
    let last = curve.points.last().unwrap().0;
    let interior = curve.argmax_se > first && curve.argmax_se < last;
    let at_40 = curve
        .points
        .iter()
        .find(|(se, _)| (*se - 40.0).abs() < 1e-9)
        .map(|p| p.1)
        .ok_or("grid does not reach se = 40")?;
    ensure(
        interior && (curve.max_p - 0.24).abs() <= 0.01 && at_40 < 0.01,
        format!("max {:.4} at se = {:.2}, P_U(se = 40) = {at_40:.5}", curve.max_p, curve.argmax_se),
    )
}

fn posterior_oracle() -> Check {
    let mut rng = GeneStream::new(7001, 0);
    let mut worst = 0.0f64;
    let mut tiny = 0;
    for _ in 0..1000 {
        let prior = random_prior(&mut rng);
        tiny += usize::from(prior.variances().iter().any(|&v| v <= 1e-10));
        let y = -4.0 + 8.0 * rng.uniform();
        let s2 = log_uniform(&mut rng, 1e-4, 10.0);
        let eps = 0.5 + rng.uniform();
        let spec = EquivalenceSpec::new(eps).map_err(|e| e.to_string())?;
        let obs = GeneObservation::new("x", y, s2).map_err(|e| e.to_string())?;
        let closed = posterior_equivalence_probability(&obs, &prior, &spec);
        worst = worst.max((closed - quadrature_posterior(y, s2, &prior, eps)).abs());
    }
    ensure(
        worst <= 1e-8 && tiny > 0,
        format!("max |closed - quadrature| = {worst:.2e} over 1000 instances, {tiny} with a variance <= 1e-10"),
    )
}

fn interval_monotonicity() -> Check {
    let spec = EquivalenceSpec::with_window(1.0, 0.5).map_err(|e| e.to_string())?;
    let grid = log_grid(1e-3, 1e3, 20);
    let (mut decreasing, mut limits, mut worst_limit) = (0, 0, 0.0f64);
    for k in 0..200u64 {
        let mut rng = GeneStream::new(4242, k);
        let prior = sample_mixture_prior(&mut rng, 1.0, 0.5);
        let sweep = theorem2_sweep(&prior, &spec, &grid).map_err(|e| e.to_string())?;
        decreasing += usize::from(sweep.decreasing);
        let small = theorem2_posterior(&prior, &spec, 1e-10).map_err(|e| e.to_string())?;
        let large = theorem2_posterior(&prior, &spec, 1e12).map_err(|e| e.to_string())?;
        let err = (small - 1.0).abs().max((large - prior.mass_inside(1.0)).abs());
        worst_limit = worst_limit.max(err);
        limits += usize::from(err < 1e-6);
    }
    ensure(
        decreasing == 200 && limits == 200,
        format!("{decreasing}/200 decreasing, {limits}/200 limits within 1e-6 (worst {worst_limit:.2e})"),
    )
}

fn second_moments() -> Check {
    let mut per_case = [0usize; 3];
    let mut violations = 0;
    let mut min_gap = f64::INFINITY;
    for k in 0..1000u64 {
        let case = LEMMA1_CASES[k as usize % 3];
        let mut rng = GeneStream::new(5150, k);
        let (a, b, c, d, ell) = sample_lemma1_tuple(case, &mut rng);
        let out = lemma1_check(normal_pdf, a, b, c, d, ell).map_err(|e| e.to_string())?;
        per_case[match out.case {
            Lemma1Case::Disjoint => 0,
            Lemma1Case::Overlap => 1,
            Lemma1Case::Straddle => 2,
        }] += 1;
        violations += usize::from(!out.holds);
        min_gap = min_gap.min(out.rhs - out.lhs);
    }
    ensure(
        violations == 0 && per_case.iter().all(|&n| n >= 333),
        format!("cases {per_case:?}, {violations} violations, smallest gap {min_gap:.3e}"),
    )
}

fn em_recovery() -> Check {
    let truth = MixturePrior::new([0.2, 0.3, 0.5], [-1.0, 0.0, 1.0], [0.25; 3]).map_err(|e| e.to_string())?;
    let scn = SimScenario {
        m: 5000,
        prior: truth,
        sigma2_law: Sigma2Law::Uniform { lo: 0.01, hi: 0.1 },
        seed: 42,
        epsilon: 1.0,
    };
    let data = simulate(&scn).map_err(|e| e.to_string())?.observations;
    let r = fit(&data, &FitConfig::default()).map_err(|e| e.to_string())?;
    let ascent = r.trace.windows(2).all(|w| w[1] >= w[0] - 1e-8);
    let mut ok = ascent && r.converged;
    let mut detail = Vec::new();
    for j in 0..3 {
        let k = (0..3)
            .min_by(|&a, &b| {
                (r.prior.means()[a] - truth.means()[j])
                    .abs()
                    .total_cmp(&(r.prior.means()[b] - truth.means()[j]).abs())
            })
            .unwrap();
        let dm = (r.prior.means()[k] - truth.means()[j]).abs();
        let dw = (r.prior.weights()[k] - truth.weights()[j]).abs();
        ok &= dm <= 0.1 && dw <= 0.05;
        detail.push(format!("mu {:.3} (|d| {dm:.3}), pi {:.3} (|d| {dw:.3})", r.prior.means()[k], r.prior.weights()[k]));
    }
    ensure(
        ok,
        format!(
            "converged {}, ascent {ascent}, tau2 {:.3?}; {}",
            r.converged,
            r.prior.variances(),
            detail.join("; ")
        ),
    )
}

fn random_scores(rng: &mut GeneStream) -> Vec<(String, f64)> {
    let n = 1 + (rng.uniform() * 500.0) as usize;
    (0..n)
        .map(|i| {
            let u = rng.uniform();
            let p = match (rng.uniform() * 5.0) as usize {
                0 => 1.0,
                1 => (u * 20.0).floor() / 20.0,
                2 => 1.0 - u * 1e-9,
                _ => u,
            };
            (format!("g{i:06}"), p)
        })
        .collect()
}

/// Mean of `1 - p` over `p >= t`, summed from the largest `p` down.
fn direct_q_value(t: f64, ps: &[f64]) -> f64 {
    let mut hits: Vec<f64> = ps.iter().copied().filter(|&p| p >= t).collect();
    hits.sort_by(|a, b| b.total_cmp(a));
    let mut sum = 0.0;
    for p in &hits {
        sum += 1.0 - p;
    }
    sum / hits.len() as f64
}

fn q_values() -> Check {
    let mut rng = GeneStream::new(808, 0);
    let (mut mismatches, mut non_monotone, mut worst_naive) = (0, 0, 0.0f64);
    for _ in 0..1000 {
        let scored = random_scores(&mut rng);
        let ps: Vec<f64> = scored.iter().map(|s| s.1).collect();
        let table = build_table(scored).map_err(|e| e.to_string())?;
        for r in table.rows() {
            mismatches += usize::from(r.q_value != direct_q_value(r.p_equiv, &ps));
            worst_naive = worst_naive.max((r.q_value - naive_q_value(r.p_equiv, &ps).unwrap()).abs());
        }
        non_monotone += usize::from(
            !table
                .rows()
                .windows(2)
                .all(|w| w[0].p_equiv >= w[1].p_equiv && w[0].q_value <= w[1].q_value),
        );
    }
    ensure(
        mismatches == 0 && non_monotone == 0 && worst_naive < 1e-12,
        format!("{mismatches} inexact rows, {non_monotone} non-monotone panels, unordered-sum gap {worst_naive:.1e}"),
    )
}

fn calibration() -> Check {
    let scn = SimScenario {
        m: 20_000,
        prior: MixturePrior::new([0.2, 0.3, 0.5], [-1.0, 0.0, 1.0], [0.25; 3]).map_err(|e| e.to_string())?,
        sigma2_law: Sigma2Law::Uniform { lo: 0.01, hi: 0.1 },
        seed: 42,
        epsilon: 1.0,
    };
    let thresholds = [0.5, 0.9, 0.99, 0.999];
    let report = calibration_experiment(&scn, &thresholds, &ScoringPrior::Truth).map_err(|e| e.to_string())?;
    let mut ok = report.rows.len() == thresholds.len();
    let mut detail = Vec::new();
    for row in &report.rows {
        ok &= row.discoveries > 0 && (row.q_hat - row.fdp).abs() < 3.0 * row.std_error;
        detail.push(format!(
            "t {}: q {:.5} fdp {:.5} (R {})",
            row.threshold, row.q_hat, row.fdp, row.discoveries
        ));
    }
    if report.rows.len() < thresholds.len() {
        detail.push("empty discovery set".into());
    }
    ensure(ok, detail.join("; "))
}

fn pipeline(dir: &Path) -> Result<Vec<Vec<u8>>, String> {
    let bin = env!("CARGO_BIN_EXE_equiv");
    let p = |name: &str| dir.join(name).to_str().unwrap().to_string();
    let steps: [Vec<String>; 3] = [
        ["simulate", "-o", &p("panel.csv"), "--truth", &p("truth.csv"), "--m", "1000", "--seed", "42"]
            .map(String::from)
            .to_vec(),
        ["fit", "-i", &p("panel.csv"), "-o", &p("fit.txt")].map(String::from).to_vec(),
        ["score", "-i", &p("panel.csv"), "-p", &p("fit.txt"), "-o", &p("scores.csv")]
            .map(String::from)
            .to_vec(),
    ];
    for args in &steps {
        let out = Command::new(bin).args(args).output().map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{}: {}", args[0], String::from_utf8_lossy(&out.stderr)));
        }
    }
    ["panel.csv", "truth.csv", "fit.txt", "scores.csv"]
        .iter()
        .map(|f| std::fs::read(dir.join(f)).map_err(|e| e.to_string()))
        .collect()
}

fn determinism() -> Check {
    let a = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let b = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    // the two runs write to different paths; fit files embed no paths
    let first = pipeline(a.path())?;
    let second = pipeline(b.path())?;
    let bytes: usize = first.iter().map(Vec::len).sum();
    ensure(first == second, format!("4 files, {bytes} bytes, identical: {}", first == second))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "equivalence P-value constants", budget: Duration::from_millis(1), run: p_values },
        Criterion { id: 2, name: "P-value pathology curve", budget: Duration::from_secs(1), run: pathology },
        Criterion { id: 3, name: "posterior closed form vs quadrature", budget: Duration::from_secs(30), run: posterior_oracle },
        Criterion { id: 4, name: "interval-conditioned monotonicity", budget: Duration::from_secs(60), run: interval_monotonicity },
        Criterion { id: 5, name: "weighted second-moment inequality", budget: Duration::from_secs(60), run: second_moments },
        Criterion { id: 6, name: "ECM recovery on simulated panel", budget: Duration::from_secs(120), run: em_recovery },
        Criterion { id: 7, name: "q-value table vs direct estimator", budget: Duration::from_secs(10), run: q_values },
        Criterion { id: 8, name: "oracle-prior calibration", budget: Duration::from_secs(60), run: calibration },
        Criterion { id: 9, name: "simulate/fit/score determinism", budget: Duration::from_secs(60), run: determinism },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.budget;
        let (passed, detail) = match outcome {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        if !passed {
            failed += 1;
        }
        println!(
            "criterion {} [{}] {}: {:.3?} (budget {:?}{}) {}",
            c.id,
            if passed { "PASS" } else { "FAIL" },
            c.name,
            elapsed,
            c.budget,
            if in_time { "" } else { ", over budget" },
            detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
