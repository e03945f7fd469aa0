//! Search-based and descriptive difficulty baselines.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::domain::{state_space, BoardState, Move, Problem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsResult {
    pub optimal_moves: u32,
    /// States dequeued and expanded, up to and including the one whose
    /// expansion discovers the goal.
    pub visited: u32,
    pub path: Vec<Move>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BidirectionalResult {
    pub optimal_moves: u32,
    /// States expanded from the start side.
    pub visited_start: u32,
    /// States expanded from the goal side.
    pub visited_goal: u32,
    pub visited_avg: f64,
    pub path: Vec<Move>,
}

const UNSEEN: usize = usize::MAX;

fn walk_back(parent: &[(usize, Option<Move>)], mut node: usize) -> Vec<Move> {
    let mut moves = Vec::new();
    while let (p, Some(mv)) = parent[node] {
        moves.push(mv);
        node = p;
    }
    moves.reverse();
    moves
}

/// Breadth-first search with the goal test at discovery; neighbours are
/// expanded in `(from, to)` order.
pub fn bfs_solve(start: &BoardState, goal: &BoardState) -> BfsResult {
    if start == goal {
        return BfsResult { optimal_moves: 0, visited: 1, path: Vec::new() };
    }
    let space = state_space();
    let (s, g) = (space.index_of(start), space.index_of(goal));
    let mut parent = vec![(UNSEEN, None); space.len()];
    parent[s] = (s, None);
    let mut queue = VecDeque::from([s]);
    let mut visited = 0;
    while let Some(u) = queue.pop_front() {
        visited += 1;
        for &(mv, v) in space.neighbors(u) {
            if parent[v].0 != UNSEEN {
                continue;
            }
            parent[v] = (u, Some(mv));
            if v == g {
                let path = walk_back(&parent, g);
                return BfsResult { optimal_moves: path.len() as u32, visited, path };
            }
            queue.push_back(v);
        }
    }
    unreachable!("the state graph is connected")
}

struct Side {
    parent: Vec<(usize, Option<Move>)>,
    depth: Vec<u32>,
    frontier: Vec<usize>,
    expanded: u32,
}

impl Side {
    fn new(root: usize, n: usize) -> Self {
        let mut parent = vec![(UNSEEN, None); n];
        parent[root] = (root, None);
        let mut depth = vec![u32::MAX; n];
        depth[root] = 0;
        Side { parent, depth, frontier: vec![root], expanded: 0 }
    }

    fn seen(&self, v: usize) -> bool {
        self.parent[v].0 != UNSEEN
    }

    /// Expands the whole current layer and returns the newly discovered states.
    fn expand_layer(&mut self) -> Vec<usize> {
        let space = state_space();
        let mut next = Vec::new();
        for &u in &self.frontier {
            for &(mv, v) in space.neighbors(u) {
                if !self.seen(v) {
                    self.parent[v] = (u, Some(mv));
                    self.depth[v] = self.depth[u] + 1;
                    next.push(v);
                }
            }
        }
        self.expanded += self.frontier.len() as u32;
        self.frontier = next.clone();
        next
    }
}

/// Alternating layer-by-layer search from both ends, start side first,
/// stopping once the two searches have discovered a common state.
pub fn bidirectional_bfs(start: &BoardState, goal: &BoardState) -> BidirectionalResult {
    if start == goal {
        return BidirectionalResult { optimal_moves: 0, visited_start: 1, visited_goal: 1, visited_avg: 1.0, path: Vec::new() };
    }
    let space = state_space();
    let (s, g) = (space.index_of(start), space.index_of(goal));
    let mut fwd = Side::new(s, space.len());
    let mut bwd = Side::new(g, space.len());
    let mut forward_turn = true;
    loop {
        let (active, other) = if forward_turn { (&mut fwd, &bwd) } else { (&mut bwd, &fwd) };
        let fresh = active.expand_layer();
        let meet = fresh
            .iter()
            .copied()
            .filter(|&v| other.seen(v))
            .min_by_key(|&v| active.depth[v] + other.depth[v]);
        if let Some(v) = meet {
            let mut path = walk_back(&fwd.parent, v);
            // the goal side stores moves pointing towards the goal root; reverse them
            let mut node = v;
            while let (p, Some(mv)) = bwd.parent[node] {
                path.push(mv.reversed());
                node = p;
            }
            let visited_avg = (fwd.expanded + bwd.expanded) as f64 / 2.0;
            return BidirectionalResult {
                optimal_moves: path.len() as u32,
                visited_start: fwd.expanded,
                visited_goal: bwd.expanded,
                visited_avg,
                path,
            };
        }
        forward_turn = !forward_turn;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineKind {
    OptimalMoves,
    BfsFromStart,
    BfsFromGoal,
    BfsBidirectional,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 4] =
        [BaselineKind::OptimalMoves, BaselineKind::BfsFromStart, BaselineKind::BfsFromGoal, BaselineKind::BfsBidirectional];

    pub fn name(self) -> &'static str {
        match self {
            BaselineKind::OptimalMoves => "optimal_moves",
            BaselineKind::BfsFromStart => "bfs_from_start",
            BaselineKind::BfsFromGoal => "bfs_from_goal",
            BaselineKind::BfsBidirectional => "bfs_bidirectional",
        }
    }
}

impl fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaselineKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        BaselineKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown baseline {s:?}"))
    }
}

/// Per-problem difficulty under one baseline, in problem-set order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineScores {
    pub kind: BaselineKind,
    pub ids: Vec<String>,
    pub scores: Vec<f64>,
}

pub fn baseline_score(problem: &Problem, kind: BaselineKind) -> f64 {
    match kind {
        BaselineKind::OptimalMoves => problem.optimal_moves as f64,
        BaselineKind::BfsFromStart => bfs_solve(&problem.start, &problem.goal).visited as f64,
        BaselineKind::BfsFromGoal => bfs_solve(&problem.goal, &problem.start).visited as f64,
        BaselineKind::BfsBidirectional => bidirectional_bfs(&problem.start, &problem.goal).visited_avg,
    }
}

pub fn baseline_scores(problems: &[Problem], kind: BaselineKind) -> BaselineScores {
    BaselineScores {
        kind,
        ids: problems.iter().map(|p| p.id.clone()).collect(),
        scores: problems.iter().map(|p| baseline_score(p, kind)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{apply_move, shortest_distance, Color::*};

    fn replay(start: &BoardState, path: &[Move]) -> BoardState {
        path.iter().fold(*start, |s, &mv| apply_move(&s, mv).unwrap())
    }

    #[test]
    fn trivial_pairs() {
        let s = state_space().states()[3];
        assert_eq!(bfs_solve(&s, &s), BfsResult { optimal_moves: 0, visited: 1, path: vec![] });
        let b = bidirectional_bfs(&s, &s);
        assert_eq!((b.optimal_moves, b.visited_avg), (0, 1.0));
    }

    #[test]
    fn diagram_pair() {
        let s = BoardState::from_pegs(&[Red], &[], &[Yellow, Blue]).unwrap();
        let g = BoardState::from_pegs(&[Blue], &[], &[Red, Yellow]).unwrap();
        let r = bfs_solve(&s, &g);
        assert_eq!(r.optimal_moves, 5);
        assert_eq!(replay(&s, &r.path), g);
        let b = bidirectional_bfs(&s, &g);
        assert_eq!(b.optimal_moves, 5);
        assert_eq!(replay(&s, &b.path), g);
    }

    #[test]
    fn paths_are_valid_everywhere() {
        let states = state_space().states();
        for s in states {
            for g in states {
                let r = bfs_solve(s, g);
                assert_eq!(replay(s, &r.path), *g);
                assert_eq!(r.optimal_moves, shortest_distance(s, g));
                let b = bidirectional_bfs(s, g);
                assert_eq!(replay(s, &b.path), *g);
                assert_eq!(b.optimal_moves, r.optimal_moves);
            }
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for k in BaselineKind::ALL {
            assert_eq!(k.name().parse::<BaselineKind>().unwrap(), k);
        }
        assert!("astar".parse::<BaselineKind>().is_err());
    }
}
