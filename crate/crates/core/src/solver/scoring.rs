use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{Problem, NUM_POSITIONS};
use crate::network::Vec6;

use super::episode::solve_problem;
use super::{SolverError, SolverParams};

/// How many runs to average per problem and how to perturb them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSpec {
    pub runs: u32,
    /// Width of the uniform noise on the initial movable and free estimates.
    pub noise: f64,
    pub seed: u64,
}

impl Default for RunSpec {
    fn default() -> Self {
        RunSpec { runs: 1, noise: 0.05, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemScore {
    pub id: String,
    pub optimal_moves: u32,
    pub runs: u32,
    pub solved_runs: u32,
    pub success_rate: f64,
    /// Mean over runs with unsolved runs charged `step_cap − optimal`.
    pub additional_moves: f64,
    /// Mean over solved runs only.
    pub additional_moves_solved: Option<f64>,
}

/// Per-problem model difficulty, in problem-set order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelScores {
    pub problems: Vec<ProblemScore>,
}

impl ModelScores {
    pub fn get(&self, id: &str) -> Option<&ProblemScore> {
        self.problems.iter().find(|p| p.id == id)
    }

    pub fn additional_moves(&self) -> Vec<f64> {
        self.problems.iter().map(|p| p.additional_moves).collect()
    }

    pub fn success_rates(&self) -> Vec<f64> {
        self.problems.iter().map(|p| p.success_rate).collect()
    }
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Noise for run `run` of problem `id`; run 0 is never perturbed.
fn perturbation(id: &str, run: u32, spec: &RunSpec) -> Option<(Vec6, Vec6)> {
    if run == 0 || spec.noise == 0.0 {
        return None;
    }
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&spec.seed.to_le_bytes());
    seed[8..16].copy_from_slice(&fnv1a(id).to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(seed);
    rng.set_stream(run as u64);
    let half = spec.noise / 2.0;
    let mut draw = || -> Vec6 { std::array::from_fn(|_| rng.gen_range(-half..=half)) };
    let dm = draw();
    let df = draw();
    debug_assert_eq!(dm.len(), NUM_POSITIONS);
    Some((dm, df))
}

pub fn score_problem(problem: &Problem, params: &SolverParams, spec: &RunSpec) -> Result<ProblemScore, SolverError> {
    if spec.runs == 0 {
        return Err(SolverError::InvalidParams("runs must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&spec.noise) {
        return Err(SolverError::InvalidParams(format!("noise {} outside [0,1]", spec.noise)));
    }
    let mut solved = 0u32;
    let mut imputed = 0.0;
    let mut solved_sum = 0.0;
    for run in 0..spec.runs {
        let result = solve_problem(problem, params, perturbation(&problem.id, run, spec))?;
        imputed += result.imputed_additional_moves(problem.optimal_moves) as f64;
        if let Some(extra) = result.additional_moves(problem.optimal_moves) {
            solved += 1;
            solved_sum += extra as f64;
        }
    }
    let runs = spec.runs as f64;
    Ok(ProblemScore {
        id: problem.id.clone(),
        optimal_moves: problem.optimal_moves,
        runs: spec.runs,
        solved_runs: solved,
        success_rate: solved as f64 / runs,
        additional_moves: imputed / runs,
        additional_moves_solved: (solved > 0).then(|| solved_sum / solved as f64),
    })
}

/// Scores every problem; problems run in parallel and results keep input order.
pub fn score_problem_set(problems: &[Problem], params: &SolverParams, spec: &RunSpec) -> Result<ModelScores, SolverError> {
    if problems.is_empty() {
        return Err(SolverError::InvalidParams("empty problem set".into()));
    }
    params.validate()?;
    let problems = problems.par_iter().map(|p| score_problem(p, params, spec)).collect::<Result<Vec<_>, _>>()?;
    Ok(ModelScores { problems })
}
