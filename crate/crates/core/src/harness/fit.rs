use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::Problem;
use crate::solver::{score_problem_set, ModelScores, RunSpec, SolverParams};

use super::kendall::{heldout_pair_tau, kendall_tau_b, MeasureKind};
use super::measures::{Group, GroupMeasures};
use super::splits::SplitPlan;
use super::HarnessError;

/// Candidate `(alpha, beta)` values for the grid search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl Grid {
    /// `{step, 2·step, ..., 1}` on both axes.
    pub fn with_step(step: f64) -> Result<Self, HarnessError> {
        let count = (1.0 / step).round();
        if !(step > 0.0 && step <= 1.0) || ((count * step) - 1.0).abs() > 1e-9 {
            return Err(HarnessError::InvalidArgument(format!("grid step {step} must divide 1 evenly")));
        }
        let values: Vec<f64> = (1..=count as usize).map(|k| (k as f64 * step * 1e9).round() / 1e9).collect();
        Ok(Grid { alphas: values.clone(), betas: values })
    }

    pub fn single(alpha: f64, beta: f64) -> Self {
        Grid { alphas: vec![alpha], betas: vec![beta] }
    }

    /// Points in search order: alpha outer, beta inner.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.alphas.iter().flat_map(|&a| self.betas.iter().map(move |&b| (a, b))).collect()
    }
}

/// Model scores at every grid point, computed once and reused across splits.
#[derive(Debug, Clone)]
pub struct ScoreTable {
    pub points: Vec<(f64, f64)>,
    pub scores: Vec<Vec<f64>>,
}

impl ScoreTable {
    pub fn build(problems: &[Problem], base: &SolverParams, runs: &RunSpec, grid: &Grid) -> Result<Self, HarnessError> {
        let points = grid.points();
        if points.is_empty() {
            return Err(HarnessError::InvalidArgument("empty grid".into()));
        }
        let scores = points
            .par_iter()
            .map(|&(alpha, beta)| {
                let params = SolverParams { alpha, beta, ..*base };
                score_problem_set(problems, &params, runs).map(|s: ModelScores| s.additional_moves())
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ScoreTable { points, scores })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub alpha: f64,
    pub beta: f64,
    pub train_tau: f64,
}

/// τ-b with an undefined (constant-input) correlation counted as 0.
fn tau_or_zero(u: &[f64], v: &[f64]) -> f64 {
    kendall_tau_b(u, v).unwrap_or(0.0)
}

/// Grid point maximizing τ-b on the problems in `subset`; ties go to the
/// smaller alpha, then the smaller beta.
pub fn fit_on_table(table: &ScoreTable, subset: &[usize], human: &[f64]) -> FitResult {
    let target: Vec<f64> = subset.iter().map(|&i| human[i]).collect();
    let mut best: Option<FitResult> = None;
    for (&(alpha, beta), scores) in table.points.iter().zip(&table.scores) {
        let model: Vec<f64> = subset.iter().map(|&i| scores[i]).collect();
        let tau = tau_or_zero(&model, &target);
        if best.is_none_or(|b| tau > b.train_tau) {
            best = Some(FitResult { alpha, beta, train_tau: tau });
        }
    }
    best.expect("grid is nonempty")
}

/// Exhaustive grid search over all problems.
pub fn fit_params(
    problems: &[Problem],
    human: &GroupMeasures,
    kind: MeasureKind,
    grid: &Grid,
    base: &SolverParams,
    runs: &RunSpec,
) -> Result<FitResult, HarnessError> {
    let table = ScoreTable::build(problems, base, runs, grid)?;
    let all: Vec<usize> = (0..problems.len()).collect();
    Ok(fit_on_table(&table, &all, &human.oriented(kind)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitRecord {
    pub heldout: (String, String),
    pub alpha: f64,
    pub beta: f64,
    pub train_tau: f64,
    pub pair_tau: i8,
    /// The fitted model scored the held-out problems equally.
    pub model_tie: bool,
}

/// Leave-two-out result for the fitted model on one group and measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelEvaluation {
    pub group: Group,
    pub measure: MeasureKind,
    pub train_tau: f64,
    pub test_tau_mean: f64,
    /// Mean pair τ over splits where the model did not tie.
    pub test_tau_mean_untied: Option<f64>,
    pub splits: Vec<SplitRecord>,
}

/// Held-out result for a parameter-free scorer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineEvaluation {
    pub baseline: String,
    pub group: Group,
    pub measure: MeasureKind,
    pub test_tau_mean: f64,
    pub pair_taus: Vec<i8>,
}

fn mean_i8(values: impl Iterator<Item = i8>) -> Option<f64> {
    let (sum, n) = values.fold((0i64, 0usize), |(s, n), v| (s + v as i64, n + 1));
    (n > 0).then(|| sum as f64 / n as f64)
}

/// Fits on all but each held-out pair and scores the pair with the fitted point.
pub fn leave_two_out(
    ids: &[String],
    table: &ScoreTable,
    human: &GroupMeasures,
    kind: MeasureKind,
    plan: &SplitPlan,
) -> ModelEvaluation {
    let oriented = human.oriented(kind);
    let splits: Vec<SplitRecord> = plan
        .splits
        .par_iter()
        .map(|&(a, b)| {
            let train: Vec<usize> = (0..ids.len()).filter(|&i| i != a && i != b).collect();
            let fit = fit_on_table(table, &train, &oriented);
            let k = table.points.iter().position(|&p| p == (fit.alpha, fit.beta)).expect("fit comes from the table");
            let model = (table.scores[k][a], table.scores[k][b]);
            SplitRecord {
                heldout: (ids[a].clone(), ids[b].clone()),
                alpha: fit.alpha,
                beta: fit.beta,
                train_tau: fit.train_tau,
                pair_tau: heldout_pair_tau(model, (oriented[a], oriented[b])),
                model_tie: model.0 == model.1,
            }
        })
        .collect();
    let train_tau = splits.iter().map(|s| s.train_tau).sum::<f64>() / splits.len() as f64;
    ModelEvaluation {
        group: human.group,
        measure: kind,
        train_tau,
        test_tau_mean: mean_i8(splits.iter().map(|s| s.pair_tau)).unwrap_or(0.0),
        test_tau_mean_untied: mean_i8(splits.iter().filter(|s| !s.model_tie).map(|s| s.pair_tau)),
        splits,
    }
}

/// Scores every held-out pair directly; there is nothing to fit.
pub fn baseline_heldout(name: &str, scores: &[f64], human: &GroupMeasures, kind: MeasureKind, plan: &SplitPlan) -> BaselineEvaluation {
    let oriented = human.oriented(kind);
    let pair_taus: Vec<i8> =
        plan.splits.iter().map(|&(a, b)| heldout_pair_tau((scores[a], scores[b]), (oriented[a], oriented[b]))).collect();
    BaselineEvaluation {
        baseline: name.to_string(),
        group: human.group,
        measure: kind,
        test_tau_mean: mean_i8(pair_taus.iter().copied()).unwrap_or(0.0),
        pair_taus,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid() {
        let g = Grid::with_step(0.05).unwrap();
        assert_eq!(g.alphas.len(), 20);
        assert_eq!(g.alphas[0], 0.05);
        assert_eq!(g.alphas[19], 1.0);
        assert_eq!(g.alphas[2], 0.15);
        assert!(Grid::with_step(0.3).is_err());
        assert_eq!(g.points()[1], (0.05, 0.1));
    }

    #[test]
    fn ties_prefer_small_alpha_then_beta() {
        let table = ScoreTable {
            points: vec![(0.1, 0.2), (0.1, 0.3), (0.2, 0.1)],
            scores: vec![vec![1.0, 2.0, 3.0], vec![1.0, 3.0, 2.0], vec![1.0, 2.0, 3.0]],
        };
        let fit = fit_on_table(&table, &[0, 1, 2], &[0.0, 1.0, 2.0]);
        assert_eq!((fit.alpha, fit.beta, fit.train_tau), (0.1, 0.2, 1.0));
    }
}
