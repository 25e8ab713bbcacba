//! The `verify` subcommand: numerical checks plus figure data.

use std::collections::BTreeMap;
use std::path::Path;

use equiv_core::posterior::{equivalence_curve, score_panel, GeneObservation, MixturePrior};
use equiv_core::qvalue::build_table;
use equiv_core::sim::GeneStream;
use equiv_core::stats::{normal_pdf, EquivalenceSpec};
use equiv_core::verify::{
    lemma1_check, log_grid, pathology_report, sample_lemma1_tuple, sample_mixture_prior,
    theorem2_posterior, theorem2_sweep, Assertion, Atom, IntervalPrior, Lemma1Case, PathologyReport,
    LEMMA1_CASES,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::io::{real, write_csv, write_text};
use crate::CliError;

/// Stream offset separating prior draws from lemma draws.
const PRIOR_STREAMS: u64 = 1 << 32;

pub struct VerifySettings {
    pub epsilon: f64,
    pub ell: f64,
    pub seed: u64,
    pub lemma_draws: usize,
    pub priors: usize,
    pub grid_points: usize,
}

#[derive(Debug, Serialize)]
pub struct LemmaVerdict {
    pub draws: usize,
    pub per_case: BTreeMap<String, usize>,
    pub violations: usize,
    /// Smallest `rhs - lhs` over all draws.
    pub min_gap: f64,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct TheoremVerdict {
    pub priors: usize,
    pub grid: Vec<f64>,
    pub decreasing: usize,
    pub odds_monotone: usize,
    pub near_ties: usize,
    pub limits_ok: usize,
    pub reference_prior_decreasing: bool,
    pub two_atom_sequence: Vec<(f64, f64)>,
    pub two_atom_strict: bool,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct PathologyVerdict {
    pub assertions: Vec<Assertion>,
    pub max_p: f64,
    pub argmax_se: f64,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct Verdicts {
    pub epsilon: f64,
    pub ell: f64,
    pub seed: u64,
    pub pathology: PathologyVerdict,
    pub lemma1: LemmaVerdict,
    pub theorem2: TheoremVerdict,
    pub all_passed: bool,
}

fn case_name(c: Lemma1Case) -> String {
    format!("{c:?}").to_lowercase()
}

pub fn lemma_suite(seed: u64, draws: usize) -> Result<LemmaVerdict, CliError> {
    let outcomes = (0..draws)
        .into_par_iter()
        .map(|k| {
            let case = LEMMA1_CASES[k % LEMMA1_CASES.len()];
            let mut rng = GeneStream::new(seed, k as u64);
            let (a, b, c, d, ell) = sample_lemma1_tuple(case, &mut rng);
            lemma1_check(normal_pdf, a, b, c, d, ell)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut per_case = BTreeMap::new();
    for o in &outcomes {
        *per_case.entry(case_name(o.case)).or_insert(0) += 1;
    }
    let violations = outcomes.iter().filter(|o| !o.holds).count();
    Ok(LemmaVerdict {
        draws,
        per_case,
        violations,
        min_gap: outcomes.iter().map(|o| o.rhs - o.lhs).fold(f64::INFINITY, f64::min),
        passed: violations == 0,
    })
}

pub fn theorem_suite(
    spec: &EquivalenceSpec,
    seed: u64,
    priors: usize,
    grid_points: usize,
    reference: &MixturePrior,
) -> Result<(TheoremVerdict, Vec<Vec<String>>), CliError> {
    let grid = log_grid(1e-3, 1e3, grid_points);
    let eps = spec.epsilon();
    let results = (0..priors)
        .into_par_iter()
        .map(|k| {
            let mut rng = GeneStream::new(seed, PRIOR_STREAMS + k as u64);
            let prior = sample_mixture_prior(&mut rng, eps, spec.ell().unwrap_or(eps));
            let sweep = theorem2_sweep(&prior, spec, &grid)?;
            let small = theorem2_posterior(&prior, spec, 1e-10)?;
            let large = theorem2_posterior(&prior, spec, 1e12)?;
            let limits_ok = (small - 1.0).abs() < 1e-6 && (large - prior.mass_inside(eps)).abs() < 1e-6;
            Ok((sweep, limits_ok))
        })
        .collect::<Result<Vec<_>, equiv_core::Error>>()?;

    let mut rows = Vec::new();
    for (k, (sweep, _)) in results.iter().enumerate() {
        for (&(s2, p), odds) in sweep.points.iter().zip(&sweep.odds) {
            rows.push(vec![k.to_string(), real(s2), real(p), real(*odds)]);
        }
    }

    let reference_sweep = theorem2_sweep(&IntervalPrior::from_mixture_prior(reference), spec, &grid)?;
    let two_atoms = IntervalPrior::discrete(vec![
        Atom {
            location: 0.0,
            weight: 0.5,
        },
        Atom {
            location: 2.0 * eps,
            weight: 0.5,
        },
    ])?;
    let two_atom = theorem2_sweep(&two_atoms, spec, &[0.1, 0.5, 1.0, 2.0, 5.0, 10.0])?;
    let two_atom_strict = two_atom.points.windows(2).all(|w| w[1].1 < w[0].1);

    let decreasing = results.iter().filter(|(s, _)| s.decreasing).count();
    let odds_monotone = results.iter().filter(|(s, _)| s.odds_monotone).count();
    let limits_ok = results.iter().filter(|(_, l)| *l).count();
    let verdict = TheoremVerdict {
        priors,
        near_ties: results.iter().map(|(s, _)| s.near_ties.len()).sum(),
        passed: decreasing == priors
            && odds_monotone == priors
            && limits_ok == priors
            && reference_sweep.decreasing
            && two_atom_strict,
        grid,
        decreasing,
        odds_monotone,
        limits_ok,
        reference_prior_decreasing: reference_sweep.decreasing,
        two_atom_sequence: two_atom.points,
        two_atom_strict,
    };
    Ok((verdict, rows))
}

fn pathology_verdict(report: &PathologyReport) -> PathologyVerdict {
    PathologyVerdict {
        assertions: report.assertions.clone(),
        max_p: report.curves[0].max_p,
        argmax_se: report.curves[0].argmax_se,
        passed: report.assertions.iter().all(|a| a.passed),
    }
}

fn figure1_rows(report: &PathologyReport) -> Vec<Vec<String>> {
    report
        .curves
        .iter()
        .flat_map(|c| {
            c.points
                .iter()
                .chain(&c.tail)
                .map(move |&(se, p)| vec![real(c.theta_hat), real(se), real(p)])
        })
        .collect()
}

pub const FIGURE3_ESTIMATES: [f64; 8] = [-3.5, -2.5, -1.5, -0.5, 0.5, 1.5, 2.5, 3.5];

fn figure3_rows(prior: &MixturePrior, spec: &EquivalenceSpec) -> Result<Vec<Vec<String>>, CliError> {
    let grid = log_grid(1e-4, 10.0, 100);
    let mut rows = Vec::new();
    for y in FIGURE3_ESTIMATES {
        for (s2, p) in equivalence_curve(y, prior, spec, &grid)? {
            rows.push(vec![real(y), real(s2), real(p)]);
        }
    }
    Ok(rows)
}

fn figure4_rows(panel: &[GeneObservation], prior: &MixturePrior, spec: &EquivalenceSpec) -> Result<Vec<Vec<String>>, CliError> {
    let ps = score_panel(panel, prior, spec);
    let spot: BTreeMap<&str, &str> = panel
        .iter()
        .map(|g| (g.id.as_str(), g.spot_type.as_deref().unwrap_or("")))
        .collect();
    let table = build_table(panel.iter().map(|g| g.id.clone()).zip(ps).collect())?;
    Ok(table
        .rows()
        .iter()
        .map(|r| {
            vec![
                r.gene_id.clone(),
                spot[r.gene_id.as_str()].to_string(),
                real(r.p_equiv),
                real(r.q_value),
            ]
        })
        .collect())
}

pub fn run(
    settings: &VerifySettings,
    prior: &MixturePrior,
    panel: &[GeneObservation],
    out_dir: &Path,
) -> Result<Verdicts, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    let plain = EquivalenceSpec::new(settings.epsilon)?;
    let windowed = EquivalenceSpec::with_window(settings.epsilon, settings.ell)?;

    let report = pathology_report(&plain);
    write_csv(&out_dir.join("figure1.csv"), None, &["theta_hat", "se", "p_u"], &figure1_rows(&report))?;
    write_csv(&out_dir.join("figure3.csv"), None, &["y", "sigma2", "p_equiv"], &figure3_rows(prior, &plain)?)?;
    write_csv(
        &out_dir.join("figure4.csv"),
        None,
        &["gene_id", "spot_type", "p_equiv", "q_value"],
        &figure4_rows(panel, prior, &plain)?,
    )?;

    let lemma1 = lemma_suite(settings.seed, settings.lemma_draws)?;
    let (theorem2, rows) = theorem_suite(&windowed, settings.seed, settings.priors, settings.grid_points, prior)?;
    write_csv(&out_dir.join("theorem2.csv"), None, &["prior", "sigma2", "probability", "odds"], &rows)?;

    let pathology = pathology_verdict(&report);
    let verdicts = Verdicts {
        epsilon: settings.epsilon,
        ell: settings.ell,
        seed: settings.seed,
        all_passed: pathology.passed && lemma1.passed && theorem2.passed,
        pathology,
        lemma1,
        theorem2,
    };
    let json = serde_json::to_string_pretty(&verdicts).map_err(|e| CliError::Io(e.to_string()))?;
    write_text(&out_dir.join("verdicts.json"), &format!("{json}\n"))?;
    Ok(verdicts)
}
