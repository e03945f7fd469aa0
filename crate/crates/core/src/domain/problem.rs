use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::OnceLock;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::board::{state_space, BoardState};
use super::DomainError;

/// A start/goal pair with its shortest solution length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub id: String,
    pub start: BoardState,
    pub goal: BoardState,
    pub optimal_moves: u32,
}

impl Problem {
    /// Builds a problem, computing `optimal_moves` from the state graph.
    pub fn new(id: impl Into<String>, start: BoardState, goal: BoardState) -> Result<Self, DomainError> {
        let id = id.into();
        if start == goal {
            return Err(DomainError::Validation(format!("problem {id}: start equals goal")));
        }
        let optimal_moves = shortest_distance(&start, &goal);
        Ok(Problem { id, start, goal, optimal_moves })
    }

    /// Checks the stored `optimal_moves` against the state graph.
    pub fn validate(&self) -> Result<(), DomainError> {
        if self.start == self.goal {
            return Err(DomainError::Validation(format!("problem {}: start equals goal", self.id)));
        }
        let truth = shortest_distance(&self.start, &self.goal);
        if truth != self.optimal_moves {
            return Err(DomainError::Validation(format!(
                "problem {}: optimal_moves is {} but the shortest solution takes {truth}",
                self.id, self.optimal_moves
            )));
        }
        Ok(())
    }
}

/// Shortest move count between two states (the graph is connected).
pub fn shortest_distance(start: &BoardState, goal: &BoardState) -> u32 {
    let space = state_space();
    distance_table()[space.index_of(start)][space.index_of(goal)]
}

/// All-pairs shortest move counts indexed by canonical state order.
pub fn distance_table() -> &'static Vec<Vec<u32>> {
    static TABLE: OnceLock<Vec<Vec<u32>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let space = state_space();
        (0..space.len())
            .map(|src| {
                let mut dist = vec![u32::MAX; space.len()];
                dist[src] = 0;
                let mut queue = VecDeque::from([src]);
                while let Some(u) = queue.pop_front() {
                    for &(_, v) in space.neighbors(u) {
                        if dist[v] == u32::MAX {
                            dist[v] = dist[u] + 1;
                            queue.push_back(v);
                        }
                    }
                }
                dist
            })
            .collect()
    })
}

/// Largest shortest-path length in the state graph.
pub fn state_graph_diameter() -> u32 {
    distance_table().iter().flatten().copied().max().unwrap_or(0)
}

#[derive(Serialize, Deserialize)]
struct ProblemRecord {
    id: String,
    start: Vec<String>,
    goal: Vec<String>,
    optimal_moves: u32,
}

pub fn parse_problem_set(text: &str) -> Result<Vec<Problem>, DomainError> {
    let mut problems = Vec::new();
    let mut ids = HashSet::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let record: ProblemRecord = serde_json::from_str(trimmed)
            .map_err(|e| DomainError::Parse { line: line_no, message: e.to_string() })?;
        let field = |name: &str, cells: &[String]| {
            BoardState::from_cells(cells).map_err(|e| DomainError::Parse {
                line: line_no,
                message: format!("field `{name}`: {e}"),
            })
        };
        let start = field("start", &record.start)?;
        let goal = field("goal", &record.goal)?;
        if !ids.insert(record.id.clone()) {
            return Err(DomainError::Parse {
                line: line_no,
                message: format!("duplicate problem id {:?}", record.id),
            });
        }
        let problem = Problem { id: record.id, start, goal, optimal_moves: record.optimal_moves };
        problem.validate()?;
        problems.push(problem);
    }
    if problems.is_empty() {
        return Err(DomainError::Parse { line: 0, message: "problem set contains no problems".into() });
    }
    Ok(problems)
}

pub fn load_problem_set(path: impl AsRef<Path>) -> Result<Vec<Problem>, DomainError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| DomainError::Io(format!("{}: {e}", path.display())))?;
    parse_problem_set(&text)
}

pub fn format_problem_set(problems: &[Problem]) -> String {
    let mut out = String::from("# Tower of London problem set: id, start, goal, optimal_moves\n");
    for p in problems {
        let record = ProblemRecord {
            id: p.id.clone(),
            start: p.start.to_cells().iter().map(|s| s.to_string()).collect(),
            goal: p.goal.to_cells().iter().map(|s| s.to_string()).collect(),
            optimal_moves: p.optimal_moves,
        };
        out.push_str(&serde_json::to_string(&record).expect("record serializes"));
        out.push('\n');
    }
    out
}

pub fn save_problem_set(problems: &[Problem], path: impl AsRef<Path>) -> Result<(), DomainError> {
    let path = path.as_ref();
    let mut file = fs::File::create(path).map_err(|e| DomainError::Io(format!("{}: {e}", path.display())))?;
    file.write_all(format_problem_set(problems).as_bytes())
        .map_err(|e| DomainError::Io(format!("{}: {e}", path.display())))
}

/// Three problems per optimal-move bin from 1 to 8: 24 in total.
pub fn default_bin_counts() -> BTreeMap<u32, usize> {
    (1..=8).map(|k| (k, 3)).collect()
}

/// Draws `count` distinct start/goal pairs uniformly from each optimal-move bin.
///
/// Problems are emitted bin by bin in ascending move count and named `p01`, `p02`, ...
pub fn generate_problem_set(seed: u64, bin_counts: &BTreeMap<u32, usize>) -> Result<Vec<Problem>, DomainError> {
    let space = state_space();
    let table = distance_table();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut problems = Vec::new();
    for (&moves, &count) in bin_counts {
        if count == 0 {
            continue;
        }
        let pairs: Vec<(usize, usize)> = (0..space.len())
            .flat_map(|s| (0..space.len()).map(move |g| (s, g)))
            .filter(|&(s, g)| s != g && table[s][g] == moves)
            .collect();
        if count > pairs.len() {
            return Err(DomainError::Unsatisfiable { optimal_moves: moves, requested: count, available: pairs.len() });
        }
        let mut picked = sample(&mut rng, pairs.len(), count).into_vec();
        picked.sort_unstable();
        for idx in picked {
            let (s, g) = pairs[idx];
            problems.push(Problem {
                id: String::new(),
                start: space.states()[s],
                goal: space.states()[g],
                optimal_moves: moves,
            });
        }
    }
    let width = problems.len().to_string().len().max(2);
    for (i, p) in problems.iter_mut().enumerate() {
        p.id = format!("p{:0width$}", i + 1);
    }
    Ok(problems)
}
