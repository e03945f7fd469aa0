use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use aicon_tol::baselines::{baseline_scores, BaselineKind};
use aicon_tol::config::{Command, ConfigError, EvaluationConfig, HumanSource, ProblemSource, RunConfig};
use aicon_tol::domain::{format_problem_set, DomainError, Problem, NUM_POSITIONS};
use aicon_tol::harness::{
    baseline_scores_csv, evaluate, format_human_measures, model_scores_csv, Group, HarnessError, MeasureKind,
};
use aicon_tol::network::{evaluate_jacobians, ActionMatrix, GoalSpec};
use aicon_tol::solver::{
    enumerate_paths, legality_gate, path_gradients, score_problem_set, select_action, solve_problem, view_at_step,
    RunSpec, SolverError, SolverParams,
};

#[derive(Parser)]
#[command(name = "aicon-tol", version, about = "Tower of London solver, search baselines and rank-correlation evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Draw a problem set with a fixed number of problems per optimal-move count.
    Generate(GenerateArgs),
    /// Run the solver on every problem and write per-problem scores.
    Solve(SolveArgs),
    /// Write baseline difficulty scores.
    Baseline(BaselineArgs),
    /// Leave-two-out evaluation of the model and all baselines.
    Evaluate(EvaluateArgs),
    /// Print the network state and path gradients at one step of an episode.
    Inspect(InspectArgs),
    /// Write synthetic group measures.
    SynthHuman(SynthArgs),
}

#[derive(Args)]
struct ProblemArgs {
    /// Problem set as JSON lines.
    #[arg(long, value_name = "PATH", conflicts_with = "generate")]
    problems: Option<PathBuf>,
    /// Generate the default 24-problem set from this seed (the default is seed 0).
    #[arg(long, value_name = "SEED")]
    generate: Option<u64>,
}

impl ProblemArgs {
    fn source(&self) -> ProblemSource {
        match (&self.problems, self.generate) {
            (Some(p), _) => ProblemSource::File { path: p.display().to_string() },
            (None, seed) => ProblemSource::generated(seed.unwrap_or(0)),
        }
    }
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[arg(long, value_name = "K", default_value_t = 4)]
    max_depth: usize,
    /// Runs per problem; runs after the first perturb the initial estimates.
    #[arg(long, value_name = "K", default_value_t = 1)]
    runs: u32,
    /// Width of the uniform perturbation.
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
}

impl SolverArgs {
    fn params(&self) -> SolverParams {
        SolverParams { alpha: self.alpha, beta: self.beta, max_depth: self.max_depth, ..SolverParams::default() }
    }

    fn runs(&self, seed: u64) -> RunSpec {
        RunSpec { runs: self.runs, noise: self.noise, seed }
    }
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Repeat a run from a saved config.json; other run flags are ignored.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Problems per optimal-move count.
    #[arg(long, default_value_t = 3)]
    per_bin: usize,
    /// Largest optimal-move count.
    #[arg(long, default_value_t = 8)]
    max_moves: u32,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    problems: ProblemArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write one NDJSON trace per problem.
    #[arg(long)]
    trace: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct BaselineArgs {
    #[command(flatten)]
    problems: ProblemArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
#[group(id = "human_source", multiple = false)]
struct HumanArgs {
    /// Group measures CSV.
    #[arg(long, value_name = "PATH", group = "human_source")]
    human: Option<PathBuf>,
    /// Use synthetic group measures from this seed.
    #[arg(long, value_name = "SEED", group = "human_source")]
    synth: Option<u64>,
    #[arg(long, value_name = "F", default_value_t = 0.05)]
    synth_noise: f64,
}

impl HumanArgs {
    fn source(&self) -> Option<HumanSource> {
        match (&self.human, self.synth) {
            (Some(p), _) => Some(HumanSource::File { path: p.display().to_string() }),
            (None, Some(seed)) => Some(HumanSource::Synthetic { seed, noise: self.synth_noise }),
            (None, None) => None,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Success,
    Moves,
    Both,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    problems: ProblemArgs,
    #[command(flatten)]
    human: HumanArgs,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, value_name = "N", default_value_t = 120)]
    splits: usize,
    #[arg(long, value_name = "S", default_value_t = 0)]
    seed: u64,
    /// Grid step for alpha and beta.
    #[arg(long, value_name = "STEP", default_value_t = 0.05)]
    grid: f64,
    #[arg(long, value_enum, default_value_t = MeasureArg::Both)]
    measure: MeasureArg,
    /// Comma-separated subset of healthy,pd,mci,stroke.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    groups: Option<Vec<String>>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct InspectArgs {
    #[command(flatten)]
    problems: ProblemArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Problem id.
    #[arg(long)]
    problem: String,
    /// Number of moves executed before the inspected decision.
    #[arg(long, default_value_t = 0)]
    step: u32,
    /// Append the full partial-derivative dump as CSV.
    #[arg(long)]
    jacobians: bool,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    problems: ProblemArgs,
    #[arg(long, value_name = "SEED", default_value_t = 0)]
    synth: u64,
    #[arg(long, value_name = "F", default_value_t = 0.05)]
    synth_noise: f64,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug)]
enum CliError {
    /// Bad flags, inputs or configuration: exit code 2.
    Config(String),
    /// Failure while running: exit code 1.
    Runtime(String),
}

impl From<DomainError> for CliError {
    fn from(e: DomainError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::InvalidParams(_) => CliError::Config(e.to_string()),
            SolverError::World(_) => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Solver(s) => s.into(),
            HarnessError::DegenerateInput(_) | HarnessError::LengthMismatch { .. } => CliError::Runtime(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::Runtime(format!("{}: {e}", parent.display())))?;
    }
    fs::write(&path, contents).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

fn resolve(out: &OutArgs, command: Command, build: impl FnOnce() -> Result<RunConfig, CliError>) -> Result<RunConfig, CliError> {
    match &out.config {
        Some(path) => {
            let config = RunConfig::load(path)?;
            if config.command != command {
                return Err(CliError::Config(format!(
                    "{} was written by `{}`, not `{}`",
                    path.display(),
                    config.command.name(),
                    command.name()
                )));
            }
            Ok(config)
        }
        None => build(),
    }
}

fn parse_groups(list: &Option<Vec<String>>) -> Result<Vec<Group>, CliError> {
    match list {
        None => Ok(Group::ALL.to_vec()),
        Some(names) => names.iter().map(|n| n.trim().parse::<Group>().map_err(CliError::Config)).collect(),
    }
}

fn execute(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    config.params.validate()?;
    let problems = config.problems.load()?;
    match config.command {
        Command::Generate => {
            write(out, "problems.jsonl", &format_problem_set(&problems))?;
        }
        Command::Solve => {
            let scores = score_problem_set(&problems, &config.params, &config.runs)?;
            write(out, "model_scores.csv", &model_scores_csv(&scores))?;
            if config.trace {
                for p in &problems {
                    let result = solve_problem(p, &config.params, None)?;
                    let mut text = String::new();
                    for step in &result.trace {
                        text.push_str(&step.to_json_line());
                        text.push('\n');
                    }
                    write(out, &format!("traces/{}.ndjson", p.id), &text)?;
                }
            }
        }
        Command::Baseline => {
            let sets: Vec<_> = BaselineKind::ALL.iter().map(|&k| baseline_scores(&problems, k)).collect();
            let ids: Vec<String> = problems.iter().map(|p| p.id.clone()).collect();
            write(out, "baseline_scores.csv", &baseline_scores_csv(&ids, &sets))?;
        }
        Command::SynthHuman => {
            let source = config.human.as_ref().ok_or_else(|| CliError::Config("config has no human source".into()))?;
            let humans = source.load(&problems, &config.params)?;
            write(out, "human_measures.csv", &format_human_measures(&humans))?;
        }
        Command::Evaluate => {
            let source = config
                .human
                .as_ref()
                .ok_or_else(|| CliError::Config("evaluate needs --human PATH or --synth SEED".into()))?;
            let eval = config.evaluation.clone().unwrap_or_default();
            let humans = source.load(&problems, &config.params)?;
            eprintln!("evaluating {} problems over {} splits", problems.len(), eval.splits);
            let report = evaluate(&problems, &humans, &source.describe(), &eval.settings(&config.params, &config.runs))?;
            let ids: Vec<String> = problems.iter().map(|p| p.id.clone()).collect();
            write(out, "problems.jsonl", &format_problem_set(&problems))?;
            write(out, "human_measures.csv", &format_human_measures(&humans))?;
            write(out, "report.json", &report.to_json())?;
            write(out, "report.txt", &report.to_text())?;
            write(out, "summary.csv", &report.summary_csv())?;
            write(out, "breakdown.csv", &report.breakdown_csv())?;
            write(out, "splits.csv", &report.splits_csv())?;
            write(out, "model_scores.csv", &model_scores_csv(&report.model_scores))?;
            write(out, "baseline_scores.csv", &baseline_scores_csv(&ids, &report.baseline_scores))?;
        }
    }
    write(out, "config.json", &config.to_json())?;
    eprintln!("wrote {}", out.display());
    Ok(())
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter().map(|e| format!("{e:.4}")).collect::<Vec<_>>().join(" ")
}

fn inspect(args: &InspectArgs) -> Result<String, CliError> {
    let params = args.solver.params();
    params.validate()?;
    let problems = args.problems.source().load()?;
    let problem: &Problem = problems
        .iter()
        .find(|p| p.id == args.problem)
        .ok_or_else(|| CliError::Config(format!("no problem with id {:?}", args.problem)))?;
    let view = view_at_step(problem, &params, args.step)?.ok_or_else(|| {
        let taken = solve_problem(problem, &params, None).map(|r| r.moves_taken).unwrap_or(0);
        CliError::Runtime(format!("step {} is out of range: the episode ends after {taken} moves", args.step))
    })?;
    let goal = GoalSpec::new(&problem.goal)
        .with_theta_correct(params.theta_correct)
        .with_empty_row_activation(params.empty_row_activation);
    let paths = enumerate_paths(params.max_depth);
    let grads = path_gradients(&view.x, &view.m, &view.f, &goal, &params, &paths);

    let mut out = String::new();
    let _ = writeln!(out, "problem {}: {} -> {} ({} moves optimal)", problem.id, problem.start, problem.goal, problem.optimal_moves);
    let _ = writeln!(out, "step {}: {}", view.step, view.state);
    let _ = writeln!(out, "x (rows = positions, columns = red yellow blue)");
    for (i, row) in view.x.rows().iter().enumerate() {
        let _ = writeln!(out, "  {i}: {}", fmt_vec(row));
    }
    let _ = writeln!(out, "m: {}", fmt_vec(&view.m));
    let _ = writeln!(out, "f: {}", fmt_vec(&view.f));
    let _ = writeln!(out, "lambda: {}", fmt_vec(&goal.activation(&view.x)));
    let gate = legality_gate(&view.x, params.theta_legal);
    let legal: Vec<String> = (0..NUM_POSITIONS)
        .flat_map(|i| (0..NUM_POSITIONS).map(move |j| (i, j)))
        .filter(|&(i, j)| gate[i][j])
        .map(|(i, j)| format!("({i},{j})"))
        .collect();
    let _ = writeln!(out, "gated moves: {}", legal.join(" "));
    for (p, g) in paths.iter().zip(&grads) {
        let _ = writeln!(out, "{p}");
        for row in g {
            let _ = writeln!(out, "  {}", row.iter().map(|e| format!("{e:>10.3e}")).collect::<Vec<_>>().join(" "));
        }
    }
    match select_action(&view.x, &view.m, &view.f, &goal, &params, &paths) {
        Ok(c) => {
            let _ = writeln!(out, "selected: {} via {} (depth {}), gradient {:.6e}", c.mv, c.path.label, c.path.depth(), c.gradient_value);
        }
        Err(stalled) => {
            let _ = writeln!(out, "selected: none, {stalled}");
        }
    }
    if args.jacobians {
        let jac = evaluate_jacobians(&view.x, &ActionMatrix::uniform(params.probe_scale), &view.m, &view.f, &goal, params.gains());
        out.push_str(&jac.to_csv());
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Cmd::Generate(a) => {
            let config = resolve(&a.out, Command::Generate, || {
                let bins = (1..=a.max_moves).map(|k| (k, a.per_bin)).collect();
                Ok(RunConfig::new(Command::Generate, ProblemSource::Generate { seed: a.seed, bins }))
            })?;
            execute(&config, &a.out.out)
        }
        Cmd::Solve(a) => {
            let config = resolve(&a.out, Command::Solve, || {
                let mut c = RunConfig::new(Command::Solve, a.problems.source());
                c.params = a.solver.params();
                c.runs = a.solver.runs(a.seed);
                c.trace = a.trace;
                Ok(c)
            })?;
            execute(&config, &a.out.out)
        }
        Cmd::Baseline(a) => {
            let config = resolve(&a.out, Command::Baseline, || Ok(RunConfig::new(Command::Baseline, a.problems.source())))?;
            execute(&config, &a.out.out)
        }
        Cmd::SynthHuman(a) => {
            let config = resolve(&a.out, Command::SynthHuman, || {
                let mut c = RunConfig::new(Command::SynthHuman, a.problems.source());
                c.params = SolverParams::with_gains(a.alpha, a.beta);
                c.human = Some(HumanSource::Synthetic { seed: a.synth, noise: a.synth_noise });
                Ok(c)
            })?;
            execute(&config, &a.out.out)
        }
        Cmd::Evaluate(a) => {
            let config = resolve(&a.out, Command::Evaluate, || {
                let mut c = RunConfig::new(Command::Evaluate, a.problems.source());
                c.params = a.solver.params();
                c.runs = a.solver.runs(a.seed);
                c.human = Some(a.human.source().ok_or_else(|| CliError::Config("evaluate needs --human PATH or --synth SEED".into()))?);
                let measures = match a.measure {
                    MeasureArg::Success => vec![MeasureKind::SuccessRate],
                    MeasureArg::Moves => vec![MeasureKind::AdditionalMoves],
                    MeasureArg::Both => MeasureKind::ALL.to_vec(),
                };
                c.evaluation = Some(EvaluationConfig {
                    grid_step: a.grid,
                    splits: a.splits,
                    seed: a.seed,
                    measures,
                    groups: parse_groups(&a.groups)?,
                    baselines: BaselineKind::ALL.to_vec(),
                });
                Ok(c)
            })?;
            execute(&config, &a.out.out)
        }
        Cmd::Inspect(a) => {
            print!("{}", inspect(&a)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
