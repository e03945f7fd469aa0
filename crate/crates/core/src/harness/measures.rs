use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::baselines::{baseline_scores, BaselineKind};
use crate::domain::Problem;
use crate::solver::{score_problem_set, RunSpec, SolverParams};

use super::kendall::{orient_measure, MeasureKind};
use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    Healthy,
    Pd,
    Mci,
    Stroke,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::Healthy, Group::Pd, Group::Mci, Group::Stroke];

    pub fn name(self) -> &'static str {
        match self {
            Group::Healthy => "healthy",
            Group::Pd => "pd",
            Group::Mci => "mci",
            Group::Stroke => "stroke",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Group {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Group::ALL.into_iter().find(|g| g.name() == s).ok_or_else(|| format!("unknown group {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemMeasure {
    pub problem_id: String,
    pub success_rate: f64,
    pub avg_additional_moves: f64,
}

/// One group's measures, one entry per problem in problem-set order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupMeasures {
    pub group: Group,
    pub problems: Vec<ProblemMeasure>,
}

impl GroupMeasures {
    pub fn raw(&self, kind: MeasureKind) -> Vec<f64> {
        self.problems
            .iter()
            .map(|p| match kind {
                MeasureKind::SuccessRate => p.success_rate,
                MeasureKind::AdditionalMoves => p.avg_additional_moves,
            })
            .collect()
    }

    /// Difficulty-oriented values (larger is harder).
    pub fn oriented(&self, kind: MeasureKind) -> Vec<f64> {
        orient_measure(kind, &self.raw(kind))
    }
}

#[derive(Debug, Deserialize, Serialize)]
struct MeasureRow {
    group: String,
    problem_id: String,
    success_rate: f64,
    avg_additional_moves: f64,
    practice: u8,
}

/// Parses the human-measure CSV against the evaluated problem set.
///
/// Practice rows are dropped. Every group must cover every problem exactly once.
pub fn parse_human_measures(text: &str, problems: &[Problem]) -> Result<Vec<GroupMeasures>, HarnessError> {
    let index: HashMap<&str, usize> = problems.iter().enumerate().map(|(i, p)| (p.id.as_str(), i)).collect();
    let mut cells: BTreeMap<Group, Vec<Option<ProblemMeasure>>> =
        Group::ALL.into_iter().map(|g| (g, vec![None; problems.len()])).collect();
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| HarnessError::Parse { line: 1, message: e.to_string() })?.clone();
    let expected = ["group", "problem_id", "success_rate", "avg_additional_moves", "practice"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(HarnessError::Parse { line: 1, message: format!("header must be `{}`", expected.join(",")) });
    }
    for record in reader.records() {
        let record = record.map_err(|e| HarnessError::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let row: MeasureRow =
            record.deserialize(Some(&headers)).map_err(|e| HarnessError::Parse { line, message: e.to_string() })?;
        let parse_err = |message: String| HarnessError::Parse { line, message };
        let group: Group = row.group.parse().map_err(parse_err)?;
        if row.practice == 1 {
            continue;
        }
        if row.practice != 0 {
            return Err(HarnessError::Parse { line, message: format!("practice must be 0 or 1, got {}", row.practice) });
        }
        let &slot = index.get(row.problem_id.as_str()).ok_or_else(|| {
            HarnessError::Coverage(format!("{group}: problem {:?} is not in the problem set", row.problem_id))
        })?;
        if !(0.0..=1.0).contains(&row.success_rate) {
            return Err(HarnessError::Parse {
                line,
                message: format!("{group}/{}: success_rate {} outside [0,1]", row.problem_id, row.success_rate),
            });
        }
        if !(row.avg_additional_moves >= 0.0 && row.avg_additional_moves.is_finite()) {
            return Err(HarnessError::Parse {
                line,
                message: format!("{group}/{}: avg_additional_moves {} is negative", row.problem_id, row.avg_additional_moves),
            });
        }
        let cell = &mut cells.get_mut(&group).expect("all groups present")[slot];
        if cell.is_some() {
            return Err(HarnessError::Parse { line, message: format!("duplicate row for {group}/{}", row.problem_id) });
        }
        *cell = Some(ProblemMeasure {
            problem_id: row.problem_id,
            success_rate: row.success_rate,
            avg_additional_moves: row.avg_additional_moves,
        });
    }
    cells
        .into_iter()
        .map(|(group, row)| {
            let problems = row
                .into_iter()
                .zip(problems)
                .map(|(cell, p)| cell.ok_or_else(|| HarnessError::Coverage(format!("missing {group}/{}", p.id))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(GroupMeasures { group, problems })
        })
        .collect()
}

pub fn load_human_measures(path: impl AsRef<Path>, problems: &[Problem]) -> Result<Vec<GroupMeasures>, HarnessError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    parse_human_measures(&text, problems)
}

pub fn format_human_measures(groups: &[GroupMeasures]) -> String {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    for g in groups {
        for p in &g.problems {
            writer
                .serialize(MeasureRow {
                    group: g.group.name().into(),
                    problem_id: p.problem_id.clone(),
                    success_rate: p.success_rate,
                    avg_additional_moves: p.avg_additional_moves,
                    practice: 0,
                })
                .expect("in-memory csv write");
        }
    }
    String::from_utf8(writer.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
}

pub fn save_human_measures(groups: &[GroupMeasures], path: impl AsRef<Path>) -> Result<(), HarnessError> {
    let path = path.as_ref();
    fs::write(path, format_human_measures(groups)).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}

/// Ranks scaled to `[0,1]`, ties sharing their average rank.
pub fn normalized_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    if n < 2 {
        return vec![0.5; n];
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start;
        while end + 1 < n && values[order[end + 1]] == values[order[start]] {
            end += 1;
        }
        let avg = (start + end) as f64 / 2.0;
        for &k in &order[start..=end] {
            ranks[k] = avg / (n - 1) as f64;
        }
        start = end + 1;
    }
    ranks
}

/// Weight of the model ordering in each synthetic group's latent difficulty;
/// the remainder comes from the bidirectional BFS ordering.
pub fn synthetic_model_weight(group: Group) -> f64 {
    match group {
        Group::Healthy => 0.0,
        Group::Pd => 1.0,
        Group::Mci => 0.9,
        Group::Stroke => 0.8,
    }
}

/// Synthetic stand-in for the clinical dataset.
///
/// Each group's latent difficulty blends the rank-normalized model ordering at
/// `params` with the rank-normalized bidirectional BFS ordering, plus uniform
/// noise of half-width `noise`. Success rate falls and additional moves grow
/// linearly with it.
pub fn synthesize_human_measures(
    problems: &[Problem],
    params: &SolverParams,
    seed: u64,
    noise: f64,
) -> Result<Vec<GroupMeasures>, HarnessError> {
    if !(0.0..=1.0).contains(&noise) {
        return Err(HarnessError::InvalidArgument(format!("noise {noise} outside [0,1]")));
    }
    let model = normalized_ranks(&score_problem_set(problems, params, &RunSpec::default())?.additional_moves());
    let bfs = normalized_ranks(&baseline_scores(problems, BaselineKind::BfsBidirectional).scores);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(Group::ALL
        .into_iter()
        .map(|group| {
            let w = synthetic_model_weight(group);
            let problems = problems
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    let jitter = if noise > 0.0 { rng.gen_range(-noise..=noise) } else { 0.0 };
                    let d = ((w * model[i] + (1.0 - w) * bfs[i] + jitter + noise) / (1.0 + 2.0 * noise)).clamp(0.0, 1.0);
                    ProblemMeasure {
                        problem_id: p.id.clone(),
                        success_rate: 1.0 - 0.6 * d,
                        avg_additional_moves: 4.0 * d,
                    }
                })
                .collect();
            GroupMeasures { group, problems }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{default_bin_counts, generate_problem_set};

    #[test]
    fn ranks_with_ties() {
        assert_eq!(normalized_ranks(&[3.0, 1.0, 2.0]), [1.0, 0.0, 0.5]);
        assert_eq!(normalized_ranks(&[1.0, 1.0, 2.0, 0.0]), [0.5, 0.5, 1.0, 0.0]);
    }

    #[test]
    fn practice_rows_are_dropped() {
        let problems = generate_problem_set(3, &[(1, 2)].into_iter().collect()).unwrap();
        let mut text = String::from("group,problem_id,success_rate,avg_additional_moves,practice\n");
        for g in Group::ALL {
            text.push_str(&format!("{g},x9,0.1,2,1\n"));
            for p in &problems {
                text.push_str(&format!("{g},{},0.9,0.5,0\n", p.id));
            }
        }
        let groups = parse_human_measures(&text, &problems).unwrap();
        assert_eq!(groups.len(), 4);
        assert!(groups.iter().all(|g| g.problems.len() == 2));
    }

    #[test]
    fn synthetic_round_trip() {
        let problems = generate_problem_set(5, &default_bin_counts()).unwrap();
        let groups = synthesize_human_measures(&problems, &SolverParams::default(), 1, 0.05).unwrap();
        let back = parse_human_measures(&format_human_measures(&groups), &problems).unwrap();
        assert_eq!(back, groups);
    }
}
