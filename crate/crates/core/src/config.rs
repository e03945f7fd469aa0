//! Serializable experiment configuration written as `config.json` next to
//! every output so a run can be repeated exactly.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domain::{default_bin_counts, generate_problem_set, load_problem_set, DomainError, Problem};
use crate::baselines::BaselineKind;
use crate::harness::{
    load_human_measures, synthesize_human_measures, EvalSettings, Group, GroupMeasures, HarnessError, MeasureKind,
};
use crate::solver::{RunSpec, SolverParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSource {
    File { path: String },
    Generate { seed: u64, bins: BTreeMap<u32, usize> },
}

impl ProblemSource {
    pub fn generated(seed: u64) -> Self {
        ProblemSource::Generate { seed, bins: default_bin_counts() }
    }

    pub fn load(&self) -> Result<Vec<Problem>, DomainError> {
        match self {
            ProblemSource::File { path } => load_problem_set(path),
            ProblemSource::Generate { seed, bins } => generate_problem_set(*seed, bins),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum HumanSource {
    File { path: String },
    /// Synthetic groups built from the model at `params` (gains from the run
    /// configuration) and bidirectional BFS.
    Synthetic { seed: u64, noise: f64 },
}

impl HumanSource {
    pub fn load(&self, problems: &[Problem], params: &SolverParams) -> Result<Vec<GroupMeasures>, HarnessError> {
        match self {
            HumanSource::File { path } => load_human_measures(path, problems),
            HumanSource::Synthetic { seed, noise } => synthesize_human_measures(problems, params, *seed, *noise),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            HumanSource::File { path } => format!("loaded from {path}"),
            HumanSource::Synthetic { seed, noise } => {
                format!("SYNTHETIC stand-in data (seed {seed}, noise {noise}), not real participants")
            }
        }
    }
}

/// Evaluation settings other than the solver parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluationConfig {
    pub grid_step: f64,
    pub splits: usize,
    pub seed: u64,
    pub measures: Vec<MeasureKind>,
    pub groups: Vec<Group>,
    pub baselines: Vec<BaselineKind>,
}

impl Default for EvaluationConfig {
    fn default() -> Self {
        let d = EvalSettings::default();
        EvaluationConfig {
            grid_step: d.grid_step,
            splits: d.splits,
            seed: d.seed,
            measures: d.measures,
            groups: d.groups,
            baselines: d.baselines,
        }
    }
}

impl EvaluationConfig {
    pub fn settings(&self, params: &SolverParams, runs: &RunSpec) -> EvalSettings {
        EvalSettings {
            params: *params,
            runs: *runs,
            grid_step: self.grid_step,
            splits: self.splits,
            seed: self.seed,
            measures: self.measures.clone(),
            groups: self.groups.clone(),
            baselines: self.baselines.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Generate,
    Solve,
    Baseline,
    Evaluate,
    SynthHuman,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Generate => "generate",
            Command::Solve => "solve",
            Command::Baseline => "baseline",
            Command::Evaluate => "evaluate",
            Command::SynthHuman => "synth-human",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub tool_version: String,
    pub command: Command,
    pub problems: ProblemSource,
    pub params: SolverParams,
    pub runs: RunSpec,
    pub human: Option<HumanSource>,
    pub evaluation: Option<EvaluationConfig>,
    pub trace: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Read { path: String, message: String },
    #[error("config was written by version {found}, this is {expected}")]
    Version { found: String, expected: String },
}

impl RunConfig {
    pub fn new(command: Command, problems: ProblemSource) -> Self {
        RunConfig {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            problems,
            params: SolverParams::default(),
            runs: RunSpec::default(),
            human: None,
            evaluation: None,
            trace: false,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let err = |message: String| ConfigError::Read { path: path.display().to_string(), message };
        let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
        let config = Self::from_json(&text).map_err(|e| err(e.to_string()))?;
        if config.tool_version != env!("CARGO_PKG_VERSION") {
            return Err(ConfigError::Version { found: config.tool_version, expected: env!("CARGO_PKG_VERSION").into() });
        }
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut c = RunConfig::new(Command::Evaluate, ProblemSource::generated(4));
        c.human = Some(HumanSource::Synthetic { seed: 2, noise: 0.05 });
        c.evaluation = Some(EvaluationConfig::default());
        assert_eq!(RunConfig::from_json(&c.to_json()).unwrap(), c);
    }
}
