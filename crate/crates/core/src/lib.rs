#![allow(clippy::needless_range_loop)]

//! Tower of London planning by active interconnections between recursive estimators.

pub mod domain;
pub mod network;
pub mod solver;
pub mod baselines;
pub mod harness;
pub mod config;
