use serde_json::json;

use crate::domain::{apply_move, encode_soft, BoardState, DomainError, Move, Problem, SoftState};
use crate::network::{exposed_beads, goal_cost, supported_empty, EstimatorVector, GoalSpec, Vec6};

use super::paths::enumerate_paths;
use super::select::{select_action, ActionChoice};
use super::{SolverError, SolverParams};

/// The physical board as seen by the solver: it can only be sensed and acted on.
pub trait World {
    fn sense(&mut self) -> BoardState;
    fn execute(&mut self, mv: Move) -> Result<(), DomainError>;
}

/// A plain board that applies moves with the discrete rules.
#[derive(Debug, Clone)]
pub struct Board {
    state: BoardState,
}

impl Board {
    pub fn new(state: BoardState) -> Self {
        Board { state }
    }

    pub fn state(&self) -> BoardState {
        self.state
    }
}

impl World for Board {
    fn sense(&mut self) -> BoardState {
        self.state
    }

    fn execute(&mut self, mv: Move) -> Result<(), DomainError> {
        self.state = apply_move(&self.state, mv)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Solved,
    Stalled,
    StepCap,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Solved => "solved",
            Outcome::Stalled => "stalled",
            Outcome::StepCap => "step_cap",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub step: u32,
    pub state: BoardState,
    pub choice: ActionChoice,
    pub cost_before: f64,
    pub cost_after: f64,
}

impl TraceStep {
    /// One NDJSON record.
    pub fn to_json_line(&self) -> String {
        json!({
            "step": self.step,
            "state": self.state.to_string(),
            "move": [self.choice.mv.from.index(), self.choice.mv.to.index()],
            "path": self.choice.path.label,
            "path_word": self.choice.path.word(),
            "depth": self.choice.path.depth(),
            "gradient_value": self.choice.gradient_value,
            "g_before": self.cost_before,
            "g_after": self.cost_after,
        })
        .to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult {
    pub outcome: Outcome,
    pub moves_taken: u32,
    pub step_cap: u32,
    pub trace: Vec<TraceStep>,
}

impl EpisodeResult {
    pub fn solved(&self) -> bool {
        self.outcome == Outcome::Solved
    }

    pub fn additional_moves(&self, optimal_moves: u32) -> Option<u32> {
        self.solved().then(|| self.moves_taken - optimal_moves)
    }

    /// Additional moves with unsolved runs charged `step_cap − optimal`.
    pub fn imputed_additional_moves(&self, optimal_moves: u32) -> u32 {
        self.additional_moves(optimal_moves).unwrap_or(self.step_cap.saturating_sub(optimal_moves))
    }
}

/// Runs the sense/estimate/select/act loop until the goal is sensed, the
/// gradient stalls, or `step_cap` moves have been executed.
///
/// `perturbation` is added to the initial movable and free estimates.
pub fn run_episode(
    world: &mut impl World,
    goal: &BoardState,
    step_cap: u32,
    params: &SolverParams,
    perturbation: Option<(Vec6, Vec6)>,
) -> Result<EpisodeResult, SolverError> {
    run_episode_observed(world, goal, step_cap, params, perturbation, |_| {})
}

/// Network values at a decision point, after the estimator update and before selection.
#[derive(Debug, Clone, PartialEq)]
pub struct StepView {
    /// Number of moves executed so far.
    pub step: u32,
    pub state: BoardState,
    pub x: SoftState,
    pub m: Vec6,
    pub f: Vec6,
}

/// [`run_episode`] that reports every decision point to `observe`.
pub fn run_episode_observed(
    world: &mut impl World,
    goal: &BoardState,
    step_cap: u32,
    params: &SolverParams,
    perturbation: Option<(Vec6, Vec6)>,
    mut observe: impl FnMut(&StepView),
) -> Result<EpisodeResult, SolverError> {
    params.validate()?;
    let paths = enumerate_paths(params.max_depth);
    let spec = GoalSpec::new(goal)
        .with_theta_correct(params.theta_correct)
        .with_empty_row_activation(params.empty_row_activation);

    let x0 = encode_soft(&world.sense());
    let (mut m0, mut f0) = (exposed_beads(&x0), supported_empty(&x0));
    if let Some((dm, df)) = perturbation {
        for i in 0..m0.len() {
            m0[i] += dm[i];
            f0[i] += df[i];
        }
    }
    let mut m = EstimatorVector::new(m0, params.beta);
    let mut f = EstimatorVector::new(f0, params.alpha);

    let mut trace = Vec::new();
    let mut moves = 0;
    loop {
        let state = world.sense();
        if state == *goal {
            return Ok(EpisodeResult { outcome: Outcome::Solved, moves_taken: moves, step_cap, trace });
        }
        if moves >= step_cap {
            return Ok(EpisodeResult { outcome: Outcome::StepCap, moves_taken: moves, step_cap, trace });
        }
        let x = encode_soft(&state);
        m = m.step(&exposed_beads(&x));
        f = f.step(&supported_empty(&x));
        observe(&StepView { step: moves, state, x, m: m.v, f: f.v });
        let choice = match select_action(&x, &m.v, &f.v, &spec, params, &paths) {
            Ok(c) => c,
            Err(_) => return Ok(EpisodeResult { outcome: Outcome::Stalled, moves_taken: moves, step_cap, trace }),
        };
        let cost_before = goal_cost(&x, &spec);
        world.execute(choice.mv)?;
        moves += 1;
        let cost_after = goal_cost(&encode_soft(&world.sense()), &spec);
        trace.push(TraceStep { step: moves, state, choice, cost_before, cost_after });
    }
}

/// One run on a plain board with the default step cap for the problem.
pub fn solve_problem(problem: &Problem, params: &SolverParams, perturbation: Option<(Vec6, Vec6)>) -> Result<EpisodeResult, SolverError> {
    let mut board = Board::new(problem.start);
    run_episode(&mut board, &problem.goal, params.step_cap(problem.optimal_moves), params, perturbation)
}

/// The network values at decision `step` of an unperturbed run, or `None` if
/// the episode ends before reaching it.
pub fn view_at_step(problem: &Problem, params: &SolverParams, step: u32) -> Result<Option<StepView>, SolverError> {
    let mut board = Board::new(problem.start);
    let mut found = None;
    run_episode_observed(&mut board, &problem.goal, params.step_cap(problem.optimal_moves), params, None, |v| {
        if v.step == step {
            found = Some(v.clone());
        }
    })?;
    Ok(found)
}
