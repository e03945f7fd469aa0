//! Rank-correlation evaluation against human difficulty measures.

mod breakdown;
mod fit;
mod kendall;
mod measures;
mod report;
mod splits;

pub use breakdown::{classify_difficulty, split_difficulty_breakdown, Breakdown, BreakdownRow, Bucket, DifficultySplit};
pub use fit::{
    baseline_heldout, fit_on_table, fit_params, leave_two_out, BaselineEvaluation, FitResult, Grid, ModelEvaluation, ScoreTable,
    SplitRecord,
};
pub use kendall::{heldout_pair_tau, kendall_tau_b, orient_measure, MeasureKind};
pub use measures::{
    format_human_measures, load_human_measures, normalized_ranks, parse_human_measures, save_human_measures,
    synthesize_human_measures, synthetic_model_weight, Group, GroupMeasures, ProblemMeasure,
};
pub use report::{baseline_scores_csv, disclosure, model_scores_csv, EvalReport};
pub use splits::{make_split_plan, pair_universe, SplitPlan};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::{baseline_scores, BaselineKind};
use crate::domain::Problem;
use crate::solver::{score_problem_set, RunSpec, SolverError, SolverParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarnessError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("{requested} splits requested but only {available} pairs exist")]
    TooManySplits { requested: usize, available: usize },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("coverage error: {0}")]
    Coverage(String),
    #[error("missing group: {0}")]
    MissingGroup(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Everything `evaluate` needs besides the problems and human measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalSettings {
    /// Non-gain parameters for every grid point, and both gains for the
    /// reported unfitted model scores.
    pub params: SolverParams,
    pub runs: RunSpec,
    pub grid_step: f64,
    pub splits: usize,
    pub seed: u64,
    pub measures: Vec<MeasureKind>,
    pub groups: Vec<Group>,
    pub baselines: Vec<BaselineKind>,
}

impl Default for EvalSettings {
    fn default() -> Self {
        EvalSettings {
            params: SolverParams::default(),
            runs: RunSpec::default(),
            grid_step: 0.05,
            splits: 120,
            seed: 0,
            measures: MeasureKind::ALL.to_vec(),
            groups: Group::ALL.to_vec(),
            baselines: BaselineKind::ALL.to_vec(),
        }
    }
}

/// Runs the model and every baseline through one shared split plan.
///
/// `humans` must hold all four groups; `settings.groups` only restricts what
/// is reported.
pub fn evaluate(
    problems: &[Problem],
    humans: &[GroupMeasures],
    human_source: &str,
    settings: &EvalSettings,
) -> Result<EvalReport, HarnessError> {
    let ids: Vec<String> = problems.iter().map(|p| p.id.clone()).collect();
    for h in humans {
        let covered: Vec<&str> = h.problems.iter().map(|p| p.problem_id.as_str()).collect();
        if covered != ids.iter().map(|s| s.as_str()).collect::<Vec<_>>() {
            return Err(HarnessError::Coverage(format!("{} measures do not match the problem set", h.group)));
        }
    }
    let grid = Grid::with_step(settings.grid_step)?;
    let plan = make_split_plan(problems.len(), settings.splits, settings.seed)?;
    let table = ScoreTable::build(problems, &settings.params, &settings.runs, &grid)?;
    let model_scores = score_problem_set(problems, &settings.params, &settings.runs)?;
    let baseline_sets: Vec<_> = settings.baselines.iter().map(|&k| baseline_scores(problems, k)).collect();

    let selected: Vec<&GroupMeasures> = Group::ALL
        .iter()
        .filter(|g| settings.groups.contains(g))
        .map(|g| humans.iter().find(|h| h.group == *g).ok_or_else(|| HarnessError::MissingGroup(g.name().into())))
        .collect::<Result<_, _>>()?;
    let measures: Vec<MeasureKind> = MeasureKind::ALL.into_iter().filter(|m| settings.measures.contains(m)).collect();

    let mut model = Vec::new();
    let mut baselines = Vec::new();
    for h in &selected {
        for &kind in &measures {
            model.push(leave_two_out(&ids, &table, h, kind, &plan));
            for b in &baseline_sets {
                baselines.push(baseline_heldout(b.kind.name(), &b.scores, h, kind, &plan));
            }
        }
    }
    let breakdown = split_difficulty_breakdown(&plan, humans, &model, &baselines)?;
    Ok(EvalReport {
        disclosure: disclosure(human_source),
        human_source: human_source.to_string(),
        problem_ids: ids,
        grid,
        split_plan: plan,
        model,
        baselines,
        breakdown,
        model_scores,
        baseline_scores: baseline_sets,
    })
}
