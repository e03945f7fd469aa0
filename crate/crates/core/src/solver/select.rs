use std::fmt;

use crate::domain::{Move, SoftState, NUM_POSITIONS};
use crate::network::{evaluate_jacobians, exposed_beads, supported_empty, ActionMatrix, GoalSpec, Mat6, StructuralMask, Vec6};

use super::paths::{path_gradient, PathDescriptor};
use super::SolverParams;

const N: usize = NUM_POSITIONS;
const TIE_TOLERANCE: f64 = 1e-12;

/// A move proposed by the steepest gated gradient entry.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionChoice {
    pub mv: Move,
    pub path: PathDescriptor,
    pub gradient_value: f64,
}

/// No path proposes a cost-reducing legal move.
#[derive(Debug, Clone, PartialEq)]
pub struct Stalled {
    /// The gated entry closest to being selected.
    pub closest: Option<ActionChoice>,
}

impl fmt::Display for Stalled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.closest {
            Some(c) => write!(f, "stalled: closest entry {} via {} is {:.3e}", c.mv, c.path.label, c.gradient_value),
            None => write!(f, "stalled: no gated entries"),
        }
    }
}

impl std::error::Error for Stalled {}

/// `gate[i][j]` is true where `m̂_i · f̂_j ≥ θ_legal` on the sensed state.
pub fn legality_gate(x: &SoftState, theta_legal: f64) -> [[bool; N]; N] {
    let (m, f) = (exposed_beads(x), supported_empty(x));
    let p = StructuralMask::new().transfer();
    std::array::from_fn(|i| std::array::from_fn(|j| p[i][j] > 0.0 && m[i] * f[j] >= theta_legal))
}

/// Per-path `∂g/∂a` at the current network values.
pub fn path_gradients(x: &SoftState, m: &Vec6, f: &Vec6, goal: &GoalSpec, params: &SolverParams, paths: &[PathDescriptor]) -> Vec<Mat6> {
    let probe = ActionMatrix::uniform(params.probe_scale);
    let jac = evaluate_jacobians(x, &probe, m, f, goal, params.gains());
    paths.iter().map(|p| path_gradient(&jac, p)).collect()
}

/// Picks the most negative gated gradient entry over all paths.
///
/// Ties within `1e-12` go to the earlier path (lower depth), then to the
/// lexicographically smaller `(from, to)`.
pub fn select_action(
    x: &SoftState,
    m: &Vec6,
    f: &Vec6,
    goal: &GoalSpec,
    params: &SolverParams,
    paths: &[PathDescriptor],
) -> Result<ActionChoice, Stalled> {
    let gate = legality_gate(x, params.theta_legal);
    let grads = path_gradients(x, m, f, goal, params, paths);
    let mut best: Option<(f64, usize, usize, usize)> = None;
    for (p, g) in grads.iter().enumerate() {
        for i in 0..N {
            for j in 0..N {
                if !gate[i][j] {
                    continue;
                }
                let v = g[i][j];
                if best.is_none_or(|(b, ..)| v < b - TIE_TOLERANCE) {
                    best = Some((v, p, i, j));
                }
            }
        }
    }
    let choice = best.map(|(v, p, i, j)| ActionChoice {
        mv: Move::new(i, j).expect("gate excludes the diagonal"),
        path: paths[p].clone(),
        gradient_value: v,
    });
    match choice {
        Some(c) if c.gradient_value < -TIE_TOLERANCE => Ok(c),
        closest => Err(Stalled { closest }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{encode_soft, enumerate_states, legal_moves};
    use crate::solver::enumerate_paths;

    #[test]
    fn gate_matches_discrete_legality() {
        for s in enumerate_states() {
            let gate = legality_gate(&encode_soft(&s), 0.5);
            let mut gated: Vec<Move> = Vec::new();
            for i in 0..N {
                for j in 0..N {
                    if gate[i][j] {
                        gated.push(Move::new(i, j).unwrap());
                    }
                }
            }
            assert_eq!(gated, legal_moves(&s), "{s}");
        }
    }

    #[test]
    fn at_target_stalls() {
        let s = enumerate_states()[7];
        let x = encode_soft(&s);
        let goal = GoalSpec::new(&s);
        let r = select_action(&x, &exposed_beads(&x), &supported_empty(&x), &goal, &SolverParams::default(), &enumerate_paths(4));
        let stalled = r.unwrap_err();
        assert_eq!(stalled.closest.unwrap().gradient_value, 0.0);
    }
}
