//! `imdlab`: command-line front end for the voting-game analysis library.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use imd_core::elicitation::{aggregate_reports, QuestionnaireResponse};
use imd_core::equilibrium::{
    nonexistence_epsilon, secure_profile_epsilon, verify_epsilon_strong_bne,
};
use imd_core::impossibility::{counting_distributions, tvd_decay_experiment, DeviationExperiment};
use imd_core::majority::{
    exact_outcome, expected_shares, m_value, optimal_strategy, simulate_election, theta_maj,
    winning_probability_imd, MajorityVoteAnalysis,
};
use imd_core::mechanism::{ideal_threshold, run_mechanism, theta_star, Report};
use imd_core::model::InstanceFile;
use imd_core::{
    AgentType, Alternative, Configuration, Instance, Signal, SymmetricProfile, WorldState,
};

const SEED_ENV: &str = "IMDLAB_SEED";

#[derive(Parser)]
#[command(
    name = "imdlab",
    version,
    about = "Analysis toolkit for two-alternative voting games with antagonistic agent types"
)]
struct Cli {
    /// Output format for structured results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the majority-vote analysis of a configuration: M, both critical
    /// proportions, the optimal strategy, and its expected shares.
    Analyze {
        /// JSON configuration or instance file.
        #[arg(long)]
        config: PathBuf,
    },
    /// Compute or simulate election outcomes for an instance and profile.
    Election {
        #[arg(long)]
        instance: PathBuf,
        /// JSON file with per-type voting strategies.
        #[arg(long)]
        profile: PathBuf,
        /// Exact computation (default).
        #[arg(long, conflicts_with = "simulate")]
        exact: bool,
        /// Monte Carlo simulation instead of the exact engine.
        #[arg(long)]
        simulate: bool,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// RNG seed; falls back to IMDLAB_SEED, then 42.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Search coalition deviations for an epsilon-strong equilibrium verdict.
    EquilibriumCheck {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        profile: PathBuf,
        /// Numeric tolerance, or "auto" to derive it from the instance.
        #[arg(long, default_value = "auto")]
        epsilon: String,
        #[arg(long, default_value_t = 0.05)]
        grid: f64,
    },
    /// The anonymous threshold mechanism.
    Mechanism {
        #[command(subcommand)]
        command: MechanismCommand,
    },
    /// Turn questionnaire responses into mechanism reports.
    Elicit {
        /// CSV with columns pref_L,signal,peer_l,posterior_L,cf_peer_l,cf_posterior_L.
        #[arg(long)]
        responses: PathBuf,
        /// Write the derived reports as CSV (type,signal,threshold).
        #[arg(long)]
        emit_reports: Option<PathBuf>,
    },
    /// Exact TVD between the two deviation environments across sizes.
    ImpossibilityTvd {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        delta: f64,
        /// Comma-separated population sizes.
        #[arg(long, value_delimiter = ',')]
        n: Vec<u64>,
        /// Also write the table to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Re-run the registered worked examples and report pass/fail.
    Reproduce {
        /// One of: optimal-strategy, threshold, exante-utility,
        /// mechanism-running, elicitation-roundtrip, tvd-decay. Omit to run
        /// all.
        id: Option<String>,
    },
    /// Dump a count distribution as CSV (index,probability) to stdout.
    Dist {
        #[command(subcommand)]
        command: DistCommand,
    },
}

#[derive(Subcommand)]
enum MechanismCommand {
    /// Run the mechanism on a CSV of reports (type,signal,threshold).
    Run {
        #[arg(long)]
        reports: PathBuf,
    },
}

#[derive(Subcommand)]
enum DistCommand {
    Binomial {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: f64,
    },
    Gaussian {
        #[arg(long)]
        mean: f64,
        #[arg(long)]
        variance: f64,
    },
    /// h-report count distribution of one deviation environment.
    Counting {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        n: u64,
        /// Environment 1 or 2.
        #[arg(long, default_value_t = 1)]
        env: u8,
    },
}

type CliResult<T> = Result<T, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult<ExitCode> {
    match &cli.command {
        Command::Analyze { config } => cmd_analyze(config, cli.format).map(|_| ExitCode::SUCCESS),
        Command::Election {
            instance,
            profile,
            simulate,
            trials,
            seed,
            ..
        } => cmd_election(instance, profile, *simulate, *trials, *seed, cli.format)
            .map(|_| ExitCode::SUCCESS),
        Command::EquilibriumCheck {
            instance,
            profile,
            epsilon,
            grid,
        } => cmd_equilibrium(instance, profile, epsilon, *grid, cli.format)
            .map(|_| ExitCode::SUCCESS),
        Command::Mechanism {
            command: MechanismCommand::Run { reports },
        } => cmd_mechanism_run(reports, cli.format).map(|_| ExitCode::SUCCESS),
        Command::Elicit {
            responses,
            emit_reports,
        } => cmd_elicit(responses, emit_reports.as_deref(), cli.format).map(|_| ExitCode::SUCCESS),
        Command::ImpossibilityTvd {
            alpha,
            delta,
            n,
            csv,
        } => cmd_impossibility(*alpha, *delta, n, csv.as_deref(), cli.format)
            .map(|_| ExitCode::SUCCESS),
        Command::Reproduce { id } => cmd_reproduce(id.as_deref()),
        Command::Dist { command } => cmd_dist(command).map(|_| ExitCode::SUCCESS),
    }
}

fn read_to_string(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_instance_file(path: &Path) -> CliResult<InstanceFile> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

fn load_configuration(path: &Path) -> CliResult<Configuration> {
    load_instance_file(path)?
        .configuration()
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn load_instance(path: &Path) -> CliResult<Instance> {
    load_instance_file(path)?
        .instance()
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn load_profile(path: &Path) -> CliResult<SymmetricProfile> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var(SEED_ENV)
            .ok()
            .and_then(|v| v.parse::<u64>().ok())
    })
    .unwrap_or(42)
}

fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    println!("{text}");
    Ok(())
}

#[derive(Serialize)]
struct AnalyzeOutput {
    analysis: MajorityVoteAnalysis,
    theta_star: f64,
    threshold_dominance_holds: bool,
    ideal_threshold: f64,
}

fn cmd_analyze(config_path: &Path, format: Format) -> CliResult<()> {
    let config = load_configuration(config_path)?;
    let sm = config.signal_model();
    let analysis = MajorityVoteAnalysis::for_model(sm);
    let out = AnalyzeOutput {
        analysis,
        theta_star: theta_star(sm),
        threshold_dominance_holds: analysis.theta_maj >= theta_star(sm) - 1e-12,
        ideal_threshold: ideal_threshold(sm),
    };
    match format {
        Format::Json => print_json(&out),
        Format::Human => {
            println!("M                = {}", analysis.m_value);
            println!("theta_maj = 1/2M = {}", analysis.theta_maj);
            println!("theta*    = 1/(delta+1) = {}", out.theta_star);
            println!(
                "optimal strategy (delta_l, delta_h) = ({}, {})",
                analysis.optimal_strategy.delta_l(),
                analysis.optimal_strategy.delta_h()
            );
            println!(
                "shares at optimum (p_A^H, p_R^L) = ({}, {})",
                analysis.shares_at_optimum.0, analysis.shares_at_optimum.1
            );
            println!("mechanism threshold delta = {}", out.ideal_threshold);
            println!(
                "theta_maj >= theta*: {}",
                if out.threshold_dominance_holds { "yes" } else { "NO" }
            );
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ElectionOutput {
    lambda_a_h: f64,
    lambda_a_l: f64,
    imd_win_probability: f64,
}

fn cmd_election(
    instance_path: &Path,
    profile_path: &Path,
    simulate: bool,
    trials: u64,
    seed: Option<u64>,
    format: Format,
) -> CliResult<()> {
    let instance = load_instance(instance_path)?;
    let profile = load_profile(profile_path)?;
    let config = instance.configuration();
    if simulate {
        let seed = resolve_seed(seed);
        let result = simulate_election(&instance, &profile, trials, seed);
        match format {
            Format::Json => print_json(&result),
            Format::Human => {
                println!("trials = {} (seed {seed})", result.trials);
                println!("empirical lambda_A^H = {}", result.freq_a_given_h());
                println!("empirical lambda_A^L = {}", result.freq_a_given_l());
                Ok(())
            }
        }
    } else {
        let n = instance.n();
        let k = instance.majority_count();
        let out = ElectionOutput {
            lambda_a_h: exact_outcome(n, k, &profile, config, WorldState::H),
            lambda_a_l: exact_outcome(n, k, &profile, config, WorldState::L),
            imd_win_probability: winning_probability_imd(n, k, &profile, config),
        };
        match format {
            Format::Json => print_json(&out),
            Format::Human => {
                println!("lambda_A^H = {}", out.lambda_a_h);
                println!("lambda_A^L = {}", out.lambda_a_l);
                println!("Pr[informed majority decision wins] = {}", out.imd_win_probability);
                Ok(())
            }
        }
    }
}

fn cmd_equilibrium(
    instance_path: &Path,
    profile_path: &Path,
    epsilon: &str,
    grid: f64,
    format: Format,
) -> CliResult<()> {
    let instance = load_instance(instance_path)?;
    let profile = load_profile(profile_path)?;
    let config = instance.configuration();
    let sm = config.signal_model();
    let alpha = config.alpha();
    let m = m_value(sm);
    let b = instance.utility_bound();
    let n = instance.n();
    let eps = match epsilon {
        "auto" => {
            if alpha > theta_maj(sm) {
                secure_profile_epsilon(alpha, m, b, n)
            } else {
                nonexistence_epsilon(alpha, m, sm.mu(), b, n).max(0.0)
            }
        }
        other => other
            .parse::<f64>()
            .map_err(|_| format!("epsilon must be a number or \"auto\", got {other:?}"))?,
    };
    let verdict = verify_epsilon_strong_bne(&instance, &profile, eps, grid);
    match format {
        Format::Json => print_json(&verdict),
        Format::Human => {
            println!(
                "epsilon-strong equilibrium (epsilon = {eps}, grid {grid}): {}",
                if verdict.is_epsilon_equilibrium { "yes (no witness in searched families)" } else { "NO" }
            );
            if let Some(w) = &verdict.witness {
                println!("witness coalition: {:?}", w.coalition);
                println!(
                    "deviation: typeL (delta_l, delta_h) = ({}, {}); typeH = ({}, {})",
                    w.deviation.strategy_for_l.delta_l(),
                    w.deviation.strategy_for_l.delta_h(),
                    w.deviation.strategy_for_h.delta_l(),
                    w.deviation.strategy_for_h.delta_h()
                );
                println!(
                    "outcome shift: lambda_A^H {} -> {}, lambda_A^L {} -> {}",
                    w.outcome_from.lambda_a_h,
                    w.outcome_to.lambda_a_h,
                    w.outcome_from.lambda_a_l,
                    w.outcome_to.lambda_a_l
                );
                println!("gains: min {}, max {}", w.min_gain, w.max_gain);
            }
            Ok(())
        }
    }
}

fn parse_reports_csv(path: &Path) -> CliResult<Vec<Report>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| format!("cannot open {}: {e}", path.display()))?;
    let mut reports = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| format!("{} line {}: {e}", path.display(), i + 2))?;
        let ctx = |field: &str| format!("{} line {}: bad {field}", path.display(), i + 2);
        let declared_type = match row.get(0) {
            Some("L") => AgentType::TypeL,
            Some("H") => AgentType::TypeH,
            _ => return Err(ctx("type (want L or H)")),
        };
        let declared_signal = match row.get(1) {
            Some("l") => Signal::L,
            Some("h") => Signal::H,
            _ => return Err(ctx("signal (want l or h)")),
        };
        let threshold: f64 = row
            .get(2)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| ctx("threshold"))?;
        reports.push(
            Report::new(declared_type, declared_signal, threshold)
                .map_err(|e| format!("{} line {}: {e}", path.display(), i + 2))?,
        );
    }
    Ok(reports)
}

fn cmd_mechanism_run(reports_path: &Path, format: Format) -> CliResult<()> {
    let reports = parse_reports_csv(reports_path)?;
    let trace = run_mechanism(&reports).map_err(|e| e.to_string())?;
    match format {
        Format::Json => print_json(&trace),
        Format::Human => {
            println!("identified majority type: {:?}", trace.identified_majority);
            println!("collective threshold delta-hat = {}", trace.collective_threshold);
            println!("l-report frequency = {}", trace.l_frequency);
            println!("assessed state omega-hat = {:?}", trace.assessed_state);
            println!("output = {:?}", trace.output);
            Ok(())
        }
    }
}

fn parse_responses_csv(path: &Path) -> CliResult<Vec<QuestionnaireResponse>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| format!("cannot open {}: {e}", path.display()))?;
    let mut responses = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| format!("{} line {}: {e}", path.display(), i + 2))?;
        let ctx = |field: &str| format!("{} line {}: bad {field}", path.display(), i + 2);
        let preference_in_l = match row.get(0) {
            Some("A") => Alternative::A,
            Some("R") => Alternative::R,
            _ => return Err(ctx("pref_L (want A or R)")),
        };
        let declared_signal = match row.get(1) {
            Some("l") => Signal::L,
            Some("h") => Signal::H,
            _ => return Err(ctx("signal (want l or h)")),
        };
        let num = |idx: usize, name: &str| -> CliResult<f64> {
            row.get(idx).and_then(|v| v.parse().ok()).ok_or_else(|| ctx(name))
        };
        responses.push(QuestionnaireResponse {
            preference_in_l,
            declared_signal,
            peer_l_prediction: num(2, "peer_l")?,
            posterior_l: num(3, "posterior_L")?,
            counterfactual_peer_l_prediction: num(4, "cf_peer_l")?,
            counterfactual_posterior_l: num(5, "cf_posterior_L")?,
        });
    }
    Ok(responses)
}

fn cmd_elicit(responses_path: &Path, emit: Option<&Path>, format: Format) -> CliResult<()> {
    let responses = parse_responses_csv(responses_path)?;
    let agg = aggregate_reports(&responses).map_err(|e| e.to_string())?;
    if let Some(out_path) = emit {
        let mut wtr = csv::Writer::from_path(out_path)
            .map_err(|e| format!("cannot write {}: {e}", out_path.display()))?;
        wtr.write_record(["type", "signal", "threshold"]).map_err(|e| e.to_string())?;
        for r in &agg.reports {
            wtr.write_record([
                match r.declared_type {
                    AgentType::TypeL => "L",
                    AgentType::TypeH => "H",
                },
                match r.declared_signal {
                    Signal::L => "l",
                    Signal::H => "h",
                },
                &r.threshold_value.to_string(),
            ])
            .map_err(|e| e.to_string())?;
        }
        wtr.flush().map_err(|e| e.to_string())?;
    }
    match format {
        Format::Json => print_json(&agg),
        Format::Human => {
            println!("reports derived: {}", agg.reports.len());
            println!("responses excluded: {:?}", agg.excluded);
            println!(
                "recovered signal gaps consistent: {}",
                if agg.deltas_consistent { "yes" } else { "NO" }
            );
            if let Some(r) = agg.reports.first() {
                println!("first threshold delta-hat = {}", r.threshold_value);
            }
            Ok(())
        }
    }
}

fn cmd_impossibility(
    alpha: f64,
    delta: f64,
    n_values: &[u64],
    csv_path: Option<&Path>,
    format: Format,
) -> CliResult<()> {
    if n_values.is_empty() {
        return Err("at least one value for --n is required".into());
    }
    let rows = tvd_decay_experiment(alpha, delta, n_values).map_err(|e| e.to_string())?;
    if let Some(path) = csv_path {
        let mut wtr =
            csv::Writer::from_path(path).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
        wtr.write_record(["n", "tvd", "bound", "tvd_sqrt_n"]).map_err(|e| e.to_string())?;
        for r in &rows {
            wtr.write_record([
                r.n.to_string(),
                r.exact_tvd.to_string(),
                r.bound.to_string(),
                r.tvd_sqrt_n.to_string(),
            ])
            .map_err(|e| e.to_string())?;
        }
        wtr.flush().map_err(|e| e.to_string())?;
    }
    match format {
        Format::Json => print_json(&rows),
        Format::Human => {
            println!("{:>8} {:>14} {:>14} {:>12}", "n", "exact TVD", "bound", "TVD*sqrt(n)");
            for r in &rows {
                println!(
                    "{:>8} {:>14.8} {:>14.8} {:>12.6}",
                    r.n, r.exact_tvd, r.bound, r.tvd_sqrt_n
                );
            }
            Ok(())
        }
    }
}

fn cmd_dist(command: &DistCommand) -> CliResult<()> {
    let dist = match command {
        DistCommand::Binomial { n, p } => {
            imd_core::discrete::binomial(*n, *p).map_err(|e| e.to_string())?
        }
        DistCommand::Gaussian { mean, variance } => {
            imd_core::discrete::discretized_gaussian(*mean, *variance).map_err(|e| e.to_string())?
        }
        DistCommand::Counting { alpha, delta, n, env } => {
            let exp = DeviationExperiment::new(*alpha, *delta, *n).map_err(|e| e.to_string())?;
            let (c1, c2) = counting_distributions(&exp);
            match env {
                1 => c1,
                2 => c2,
                other => return Err(format!("--env must be 1 or 2, got {other}")),
            }
        }
    };
    println!("index,probability");
    for (i, p) in dist.probs().iter().enumerate() {
        println!("{},{}", dist.offset() + i as i64, p);
    }
    Ok(())
}

struct Check {
    id: &'static str,
    run: fn() -> (bool, String),
}

const CHECKS: &[Check] = &[
    Check { id: "optimal-strategy", run: reproduce_optimal_strategy },
    Check { id: "threshold", run: reproduce_threshold },
    Check { id: "exante-utility", run: reproduce_exante_utility },
    Check { id: "mechanism-running", run: reproduce_mechanism_running },
    Check { id: "elicitation-roundtrip", run: reproduce_elicitation_roundtrip },
    Check { id: "tvd-decay", run: reproduce_tvd_decay },
];

fn reference_model() -> imd_core::SignalModel {
    imd_core::SignalModel::new(0.5, 0.75, 0.5).unwrap()
}

fn reproduce_optimal_strategy() -> (bool, String) {
    let sm = reference_model();
    let s = optimal_strategy(&sm);
    let shares = expected_shares(&s, &sm);
    let pass = (s.delta_l() - 0.5).abs() < 1e-12
        && (s.delta_h() - 0.3).abs() < 1e-12
        && (shares.0 - 0.6).abs() < 1e-12
        && (shares.1 - 0.6).abs() < 1e-12;
    (
        pass,
        format!(
            "(delta_l*, delta_h*) = ({}, {}), shares ({}, {})",
            s.delta_l(),
            s.delta_h(),
            shares.0,
            shares.1
        ),
    )
}

fn reproduce_threshold() -> (bool, String) {
    let sm = reference_model();
    let tm = theta_maj(&sm);
    let ts = theta_star(&sm);
    let d = ideal_threshold(&sm);
    let pass = (tm - 5.0 / 6.0).abs() < 1e-12
        && (ts - 0.8).abs() < 1e-12
        && (d - 0.4).abs() < 1e-12
        && tm >= ts;
    (pass, format!("theta_maj {tm}, theta* {ts}, delta {d}"))
}

fn reproduce_exante_utility() -> (bool, String) {
    use imd_core::equilibrium::{utility_difference, OutcomeDistribution};
    use imd_core::UtilityFunction;
    let from = OutcomeDistribution::new(27.0 / 32.0, 0.5).unwrap();
    let to = OutcomeDistribution::new(7.0 / 27.0, 7.0 / 27.0).unwrap();
    let h = UtilityFunction::new(AgentType::TypeH, 0, 5, 1, 0).unwrap();
    let l = UtilityFunction::new(AgentType::TypeL, 1, 0, 0, 5).unwrap();
    let du_h = utility_difference(&h, &from, &to, 0.5);
    let du_l = utility_difference(&l, &from, &to, 0.5);
    let pass =
        (du_h - 535.0 / 1728.0).abs() < 1e-12 && (du_l - 2317.0 / 1728.0).abs() < 1e-12;
    (pass, format!("gains {du_h:.6} and {du_l:.6}"))
}

fn reproduce_mechanism_running() -> (bool, String) {
    let sm = reference_model();
    let d = ideal_threshold(&sm);
    let f_l = 0.84 * sm.p_l_given_l() + 0.16;
    let f_h = 0.84 * sm.p_l_given_h() + 0.16;
    let pass = (f_l - 0.58).abs() < 1e-12 && (f_h - 0.37).abs() < 1e-12 && f_h < d && d < f_l;
    (pass, format!("frequencies {f_h} / {f_l} straddle delta {d}"))
}

fn reproduce_elicitation_roundtrip() -> (bool, String) {
    use imd_core::elicitation::{recover_parameters, synthesize_response};
    let sm = reference_model();
    let l = synthesize_response(&sm, Signal::L, AgentType::TypeH);
    let h = synthesize_response(&sm, Signal::H, AgentType::TypeH);
    let p = match recover_parameters(&l) {
        Ok(p) => p,
        Err(e) => return (false, e.to_string()),
    };
    let pass = (l.peer_l_prediction - 5.0 / 12.0).abs() < 1e-12
        && (h.peer_l_prediction - 7.0 / 20.0).abs() < 1e-12
        && (p.delta - 0.25).abs() < 1e-12
        && (p.threshold - 0.4).abs() < 1e-12;
    (
        pass,
        format!(
            "peer predictions {:.6} / {:.6}, recovered delta {} threshold {}",
            l.peer_l_prediction, h.peer_l_prediction, p.delta, p.threshold
        ),
    )
}

fn reproduce_tvd_decay() -> (bool, String) {
    match tvd_decay_experiment(0.7, 0.25, &[400, 1600, 6400]) {
        Ok(rows) => {
            let decreasing =
                rows[0].exact_tvd > rows[1].exact_tvd && rows[1].exact_tvd > rows[2].exact_tvd;
            (
                decreasing,
                format!(
                    "TVD {:.6} > {:.6} > {:.6}",
                    rows[0].exact_tvd, rows[1].exact_tvd, rows[2].exact_tvd
                ),
            )
        }
        Err(e) => (false, e.to_string()),
    }
}

fn cmd_reproduce(id: Option<&str>) -> CliResult<ExitCode> {
    let selected: Vec<&Check> = match id {
        None => CHECKS.iter().collect(),
        Some(want) => {
            let found: Vec<&Check> = CHECKS.iter().filter(|c| c.id == want).collect();
            if found.is_empty() {
                let mut ids = String::new();
                for c in CHECKS {
                    let _ = write!(ids, "{} ", c.id);
                }
                return Err(format!("unknown id {want:?}; known ids: {}", ids.trim_end()));
            }
            found
        }
    };
    let mut all_pass = true;
    for check in selected {
        let (pass, detail) = (check.run)();
        println!(
            "{:<24} {} {detail}",
            check.id,
            if pass { "PASS" } else { "FAIL" }
        );
        all_pass &= pass;
    }
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
