//! The discrete Tower of London world and its soft encoding.

mod board;
mod problem;
mod soft;

pub use board::{
    apply_move, enumerate_states, legal_moves, state_space, BoardState, Color, Move, PositionIndex,
    StateSpace, NUM_COLORS, NUM_POSITIONS,
};
pub(crate) use board::{ABOVE, BELOW, BOTTOM};
pub use problem::{
    default_bin_counts, distance_table, format_problem_set, generate_problem_set, load_problem_set,
    parse_problem_set, save_problem_set, shortest_distance, state_graph_diameter, Problem,
};
pub use soft::{decode_state, encode_soft, SoftState, DEFAULT_DECODE_THRESHOLD};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("position index {0} out of range 0..6")]
    InvalidPosition(usize),
    #[error("invalid move ({from},{to})")]
    InvalidMove { from: usize, to: usize },
    #[error("invalid board state: {0}")]
    InvalidState(String),
    #[error("illegal move ({from},{to}) in state {state}")]
    IllegalMove { from: usize, to: usize, state: BoardState },
    #[error("ambiguous soft state: {0}")]
    AmbiguousState(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("cannot draw {requested} problems with {optimal_moves} optimal moves: only {available} exist")]
    Unsatisfiable { optimal_moves: u32, requested: usize, available: usize },
    #[error("io error: {0}")]
    Io(String),
}
