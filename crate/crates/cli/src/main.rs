//! `equiv`: fit an empirical-Bayes mixture prior to a gene panel, score genes
//! by posterior probability of equivalence, rank them by q-value, and run the
//! numerical checks behind the method.
//!
//! Exit codes: 0 success, 1 invalid input, 2 fit did not converge,
//! 3 a verification verdict failed.

mod io;
mod verify_cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use equiv_core::em::{fit, normalize_start, FitConfig};
use equiv_core::paramfile::{format_fit, format_prior, parse};
use equiv_core::posterior::{score_panel, MixturePrior, COMPONENTS};
use equiv_core::qvalue::build_table;
use equiv_core::sim::{simulate, Sigma2Law, SimScenario};
use equiv_core::stats::{equivalence_p_value, EquivalenceSpec, EstimateSummary};
use log::info;

use crate::io::{read_panel, read_text, real, write_csv, write_panel, write_text};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] equiv_core::Error),
    #[error("fit stopped after {iterations} sweeps without converging; parameters written to {path}")]
    NotConverged { iterations: usize, path: String },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Io(_) | CliError::Core(_) => 1,
            CliError::NotConverged { .. } => 2,
            CliError::VerificationFailed(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(name = "equiv", version, about = "Equivalence ranking of gene panels by posterior probability and q-value")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the three-component mixture prior by multi-start ECM.
    Fit(FitArgs),
    /// Posterior probability of equivalence and q-value for every gene.
    Score(ScoreArgs),
    /// Frequentist equivalence P-values, for comparison only.
    Pvalue(PvalueArgs),
    /// Numerical checks and figure data.
    Verify(VerifyArgs),
    /// Simulate a panel with known true effects.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct FitArgs {
    /// Panel CSV: gene_id,mean_log_ratio,variance[,spot_type]
    #[arg(long, short)]
    input: PathBuf,
    /// Parameter file to write.
    #[arg(long, short)]
    output: PathBuf,
    /// Starting weight triples, `a,b,c;d,e,f;...` (rescaled to sum to one).
    #[arg(long)]
    starts: Option<String>,
    #[arg(long, default_value_t = 50)]
    screening_iters: usize,
    #[arg(long, default_value_t = 1e-5)]
    tol_screen: f64,
    #[arg(long, default_value_t = 1e-10)]
    tol_final: f64,
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    /// Upper end of the variance search (default: largest gene variance).
    #[arg(long)]
    tau2_upper: Option<f64>,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long, short)]
    input: PathBuf,
    /// Parameter file from `fit`.
    #[arg(long, short)]
    params: PathBuf,
    #[arg(long, short)]
    output: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
}

#[derive(Args)]
struct PvalueArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, short)]
    output: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Directory for figure CSVs and verdicts.json.
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    /// Half-width of the observation window.
    #[arg(long, default_value_t = 0.5)]
    ell: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    lemma_draws: usize,
    #[arg(long, default_value_t = 200)]
    priors: usize,
    #[arg(long, default_value_t = 20)]
    grid_points: usize,
    /// Prior for the figure data (default: the stem-cell reference fit).
    #[arg(long)]
    params: Option<PathBuf>,
    /// Panel for the q-value figure (default: simulated from the prior).
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Panel CSV to write.
    #[arg(long, short)]
    output: PathBuf,
    /// Truth CSV to write: gene_id,theta,component,equivalent
    #[arg(long)]
    truth: PathBuf,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Generating prior (default: the stem-cell reference fit).
    #[arg(long)]
    params: Option<PathBuf>,
    /// Constant gene variance; overrides the uniform range.
    #[arg(long)]
    sigma2: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    sigma2_lo: f64,
    #[arg(long, default_value_t = 0.1)]
    sigma2_hi: f64,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
}

fn parse_starts(text: &str) -> Result<Vec<[f64; COMPONENTS]>, CliError> {
    text.split(';')
        .map(|triple| {
            let vals: Vec<f64> = triple
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| CliError::Validation(format!("--starts: cannot parse `{triple}`")))?;
            let arr: [f64; COMPONENTS] = vals
                .try_into()
                .map_err(|_| CliError::Validation(format!("--starts: `{triple}` is not three numbers")))?;
            if arr.iter().any(|w| !(w.is_finite() && *w >= 0.0)) || !(arr.iter().sum::<f64>() > 0.0) {
                return Err(CliError::Validation(format!("--starts: `{triple}` is not a weight vector")));
            }
            Ok(normalize_start(arr))
        })
        .collect()
}

fn load_prior(path: Option<&PathBuf>) -> Result<MixturePrior, CliError> {
    match path {
        Some(p) => Ok(parse(&read_text(p)?)
            .map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?
            .prior),
        None => Ok(MixturePrior::stem_cell_reference()),
    }
}

fn cmd_fit(args: &FitArgs) -> Result<(), CliError> {
    let panel = read_panel(&args.input)?;
    if panel.len() < 3 {
        return Err(CliError::Validation(format!(
            "{}: need at least 3 genes, found {}",
            args.input.display(),
            panel.len()
        )));
    }
    let mut config = FitConfig {
        screening_iters: args.screening_iters,
        screening_tol: args.tol_screen,
        final_tol: args.tol_final,
        max_iters: args.max_iters,
        tau2_upper: args.tau2_upper,
        ..FitConfig::default()
    };
    if let Some(s) = &args.starts {
        config.starts = parse_starts(s)?;
    }
    config.validate()?;
    let result = fit(&panel, &config)?;
    info!(
        "loglik {} after {} sweeps from start {:?}",
        result.log_likelihood, result.iterations, result.start_used
    );
    write_text(&args.output, &format_fit(&result))?;
    if result.converged {
        Ok(())
    } else {
        Err(CliError::NotConverged {
            iterations: result.iterations,
            path: args.output.display().to_string(),
        })
    }
}

fn cmd_score(args: &ScoreArgs) -> Result<(), CliError> {
    let spec = EquivalenceSpec::new(args.epsilon)?;
    let prior = load_prior(Some(&args.params))?;
    let panel = read_panel(&args.input)?;
    if panel.is_empty() {
        return Err(CliError::Validation(format!("{}: panel has no genes", args.input.display())));
    }
    let ps = score_panel(&panel, &prior, &spec);
    let table = build_table(panel.iter().map(|g| g.id.clone()).zip(ps).collect())?;
    let rows: Vec<Vec<String>> = table
        .rows()
        .iter()
        .map(|r| vec![r.gene_id.clone(), real(r.p_equiv), real(r.q_value)])
        .collect();
    write_csv(&args.output, None, &["gene_id", "p_equiv", "q_value"], &rows)
}

fn cmd_pvalue(args: &PvalueArgs) -> Result<(), CliError> {
    let spec = EquivalenceSpec::new(args.epsilon)?;
    let panel = read_panel(&args.input)?;
    let rows = panel
        .iter()
        .map(|g| {
            let est = EstimateSummary::new(g.y, g.sigma2.sqrt())?;
            Ok(vec![
                g.id.clone(),
                real(g.y),
                real(est.se()),
                real(equivalence_p_value(&est, &spec)),
            ])
        })
        .collect::<Result<Vec<_>, equiv_core::Error>>()?;
    write_csv(
        &args.output,
        Some("p_u is not a valid evidence measure for equivalence: it tends to zero as the standard error grows"),
        &["gene_id", "theta_hat", "se", "p_u"],
        &rows,
    )
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let prior = load_prior(args.params.as_ref())?;
    let panel = match &args.input {
        Some(p) => read_panel(p)?,
        None => {
            simulate(&SimScenario {
                m: 5000,
                prior,
                sigma2_law: Sigma2Law::Uniform { lo: 0.01, hi: 0.1 },
                seed: args.seed,
                epsilon: args.epsilon,
            })?
            .observations
        }
    };
    if panel.is_empty() {
        return Err(CliError::Validation("panel has no genes".into()));
    }
    let settings = verify_cmd::VerifySettings {
        epsilon: args.epsilon,
        ell: args.ell,
        seed: args.seed,
        lemma_draws: args.lemma_draws,
        priors: args.priors,
        grid_points: args.grid_points,
    };
    let v = verify_cmd::run(&settings, &prior, &panel, &args.out_dir)?;
    let summary = format!(
        "pathology {}, lemma {} ({} draws), theorem {} ({} priors)",
        v.pathology.passed, v.lemma1.passed, v.lemma1.draws, v.theorem2.passed, v.theorem2.priors
    );
    if v.all_passed {
        info!("{summary}");
        Ok(())
    } else {
        Err(CliError::VerificationFailed(summary))
    }
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let prior = load_prior(args.params.as_ref())?;
    let sigma2_law = match args.sigma2 {
        Some(v) => Sigma2Law::Constant(v),
        None => Sigma2Law::Uniform {
            lo: args.sigma2_lo,
            hi: args.sigma2_hi,
        },
    };
    let scn = SimScenario {
        m: args.m,
        prior,
        sigma2_law,
        seed: args.seed,
        epsilon: args.epsilon,
    };
    let panel = simulate(&scn)?;
    write_panel(&args.output, &panel.observations)?;
    let rows: Vec<Vec<String>> = panel
        .observations
        .iter()
        .zip(&panel.truth)
        .map(|(g, t)| {
            vec![
                g.id.clone(),
                io::exact(t.theta),
                (t.component + 1).to_string(),
                t.equivalent.to_string(),
            ]
        })
        .collect();
    write_csv(&args.truth, None, &["gene_id", "theta", "component", "equivalent"], &rows)?;
    if args.params.is_none() {
        info!("generating prior:\n{}", format_prior(&prior));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Validation("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    match &cli.command {
        Command::Fit(a) => cmd_fit(a),
        Command::Score(a) => cmd_score(a),
        Command::Pvalue(a) => cmd_pvalue(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Simulate(a) => cmd_simulate(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
