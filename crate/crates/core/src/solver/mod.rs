//! Gradient-path composition, steepest-gradient action selection and the
//! closed-loop episode runner.

mod episode;
mod paths;
mod scoring;
mod select;

pub use episode::{
    run_episode, run_episode_observed, solve_problem, view_at_step, Board, EpisodeResult, Outcome, StepView, TraceStep, World,
};
pub use paths::{enumerate_paths, path_gradient, Detour, Edge, PathDescriptor};
pub use scoring::{score_problem, score_problem_set, ModelScores, ProblemScore, RunSpec};
pub use select::{legality_gate, path_gradients, select_action, ActionChoice, Stalled};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::DomainError;
use crate::network::{EstimatorGains, DEFAULT_THETA_CORRECT};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid solver parameters: {0}")]
    InvalidParams(String),
    #[error("world rejected move: {0}")]
    World(#[from] DomainError),
}

/// Free and structural parameters of the solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverParams {
    /// Gain of the free estimator.
    pub alpha: f64,
    /// Gain of the movable estimator.
    pub beta: f64,
    pub max_depth: usize,
    pub theta_legal: f64,
    pub theta_correct: f64,
    /// Weight of goal-empty rows in the goal cost.
    pub empty_row_activation: f64,
    /// Per-entry weight of the uniform probe action at which the inner
    /// legal-move factors are evaluated.
    pub probe_scale: f64,
    /// Step cap is `step_cap_factor · optimal_moves + step_cap_offset`.
    pub step_cap_factor: u32,
    pub step_cap_offset: u32,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            alpha: 0.5,
            beta: 0.5,
            max_depth: 4,
            theta_legal: 0.5,
            theta_correct: DEFAULT_THETA_CORRECT,
            empty_row_activation: 0.0,
            probe_scale: 0.2,
            step_cap_factor: 3,
            step_cap_offset: 10,
        }
    }
}

impl SolverParams {
    pub fn with_gains(alpha: f64, beta: f64) -> Self {
        SolverParams { alpha, beta, ..Self::default() }
    }

    pub fn gains(&self) -> EstimatorGains {
        EstimatorGains { alpha: self.alpha, beta: self.beta }
    }

    pub fn step_cap(&self, optimal_moves: u32) -> u32 {
        self.step_cap_factor * optimal_moves + self.step_cap_offset
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let unit_open = |v: f64| v > 0.0 && v < 1.0;
        let bad = |what: &str| Err(SolverError::InvalidParams(what.to_string()));
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(&format!("alpha {} outside (0,1]", self.alpha));
        }
        if !(self.beta > 0.0 && self.beta <= 1.0) {
            return bad(&format!("beta {} outside (0,1]", self.beta));
        }
        if !unit_open(self.theta_legal) {
            return bad(&format!("theta_legal {} outside (0,1)", self.theta_legal));
        }
        if !unit_open(self.theta_correct) {
            return bad(&format!("theta_correct {} outside (0,1)", self.theta_correct));
        }
        if !(0.0..=1.0).contains(&self.empty_row_activation) {
            return bad(&format!("empty_row_activation {} outside [0,1]", self.empty_row_activation));
        }
        if !(self.probe_scale > 0.0 && self.probe_scale <= 1.0) {
            return bad(&format!("probe_scale {} outside (0,1]", self.probe_scale));
        }
        if self.step_cap_factor == 0 && self.step_cap_offset == 0 {
            return bad("step cap is zero");
        }
        Ok(())
    }
}
