use std::fmt;

use crate::domain::{NUM_COLORS, NUM_POSITIONS};
use crate::network::{JacobianSet, Mat6};

const N: usize = NUM_POSITIONS;
const C: usize = NUM_COLORS;

/// One detour of a gradient path through an estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detour {
    Free,
    Movable,
}

impl Detour {
    fn other(self) -> Detour {
        match self {
            Detour::Free => Detour::Movable,
            Detour::Movable => Detour::Free,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Detour::Free => 'F',
            Detour::Movable => 'M',
        }
    }
}

/// Network edge traversed by a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Edge {
    GoalToState,
    StateToAction,
    StateToFree,
    FreeToState,
    StateToMovable,
    MovableToState,
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Edge::GoalToState => "G->X",
            Edge::StateToAction => "X->A",
            Edge::StateToFree => "X->F",
            Edge::FreeToState => "F->X",
            Edge::StateToMovable => "X->M",
            Edge::MovableToState => "M->X",
        })
    }
}

/// A gradient path from the goal cost to the action.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathDescriptor {
    /// `p1`, `p2`, ... in enumeration order.
    pub label: String,
    /// Detours in the order they are taken starting from the goal.
    pub detours: Vec<Detour>,
}

impl PathDescriptor {
    pub fn depth(&self) -> usize {
        self.detours.len()
    }

    pub fn factors(&self) -> Vec<Edge> {
        let mut edges = vec![Edge::GoalToState];
        for d in &self.detours {
            match d {
                Detour::Free => edges.extend([Edge::StateToFree, Edge::FreeToState]),
                Detour::Movable => edges.extend([Edge::StateToMovable, Edge::MovableToState]),
            }
        }
        edges.push(Edge::StateToAction);
        edges
    }

    /// Short form such as `FMF`; the direct path is `-`.
    pub fn word(&self) -> String {
        if self.detours.is_empty() {
            "-".into()
        } else {
            self.detours.iter().map(|d| d.letter()).collect()
        }
    }
}

impl fmt::Display for PathDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors: Vec<String> = self.factors().iter().map(|e| e.to_string()).collect();
        write!(f, "{} [{}]", self.label, factors.join(" "))
    }
}

/// The direct path plus, per depth, the alternating chain starting with F and
/// the one starting with M.
pub fn enumerate_paths(max_depth: usize) -> Vec<PathDescriptor> {
    let mut words = vec![Vec::new()];
    for depth in 1..=max_depth {
        for first in [Detour::Free, Detour::Movable] {
            let mut word = Vec::with_capacity(depth);
            let mut d = first;
            for _ in 0..depth {
                word.push(d);
                d = d.other();
            }
            words.push(word);
        }
    }
    words
        .into_iter()
        .enumerate()
        .map(|(n, detours)| PathDescriptor { label: format!("p{}", n + 1), detours })
        .collect()
}

/// Contracts the path's factors, goal side first, into `∂g/∂a`.
///
/// Each F detour carries the free gain and each M detour the movable gain.
pub fn path_gradient(jac: &JacobianSet, path: &PathDescriptor) -> Mat6 {
    let mut v = jac.dg_dx.0;
    for detour in &path.detours {
        let (dx_dv, dv_dx, gain) = match detour {
            Detour::Free => (&jac.dx_df, &jac.df_dx, jac.free_gain),
            Detour::Movable => (&jac.dx_dm, &jac.dm_dx, jac.movable_gain),
        };
        let mut s = [0.0; N];
        for (i, row) in v.iter().enumerate() {
            for (c, &vc) in row.iter().enumerate() {
                if vc != 0.0 {
                    for (q, sq) in s.iter_mut().enumerate() {
                        *sq += vc * dx_dv[i][c][q];
                    }
                }
            }
        }
        let mut next = [[0.0; C]; N];
        for (q, &sq) in s.iter().enumerate() {
            if sq != 0.0 {
                for (k, row) in next.iter_mut().enumerate() {
                    for (c, e) in row.iter_mut().enumerate() {
                        *e += gain * sq * dv_dx[q][k][c];
                    }
                }
            }
        }
        v = next;
    }
    let mut grad = [[0.0; N]; N];
    for (i, row) in v.iter().enumerate() {
        for (c, &vc) in row.iter().enumerate() {
            if vc != 0.0 {
                for (k, g) in grad.iter_mut().enumerate() {
                    for (l, e) in g.iter_mut().enumerate() {
                        *e += vc * jac.dx_da[i][c][k][l];
                    }
                }
            }
        }
    }
    grad
}
