#![allow(clippy::needless_range_loop)]

use aicon_tol::domain::*;
use aicon_tol::network::*;
use aicon_tol::solver::*;

fn one_move_pairs() -> Vec<(BoardState, BoardState, Move)> {
    let mut out = Vec::new();
    for s in enumerate_states() {
        for mv in legal_moves(&s) {
            out.push((s, apply_move(&s, mv).unwrap(), mv));
        }
    }
    out
}

#[test]
fn direct_path_points_at_the_solving_move() {
    let params = SolverParams::default();
    let paths = enumerate_paths(params.max_depth);
    for (s, g, mv) in one_move_pairs() {
        let x = encode_soft(&s);
        let goal = GoalSpec::new(&g);
        let (m, f) = (exposed_beads(&x), supported_empty(&x));
        let grads = path_gradients(&x, &m, &f, &goal, &params, &paths);
        let target = grads[0][mv.from.index()][mv.to.index()];
        for i in 0..6 {
            for j in 0..6 {
                if (i, j) != (mv.from.index(), mv.to.index()) {
                    assert!(grads[0][i][j] > target, "{s} -> {g}: ({i},{j}) {} vs {target}", grads[0][i][j]);
                }
            }
        }
        let choice = select_action(&x, &m, &f, &goal, &params, &paths).unwrap();
        assert_eq!((choice.mv, choice.path.label.as_str()), (mv, "p1"));
    }
}

#[test]
fn path_enumeration_counts() {
    assert_eq!(enumerate_paths(0).len(), 1);
    assert_eq!(enumerate_paths(3).len(), 7);
    let words: Vec<String> = enumerate_paths(2).iter().map(|p| p.to_string()).collect();
    assert_eq!(words[1], "p2 [G->X X->F F->X X->A]");
    assert_eq!(words[2], "p3 [G->X X->M M->X X->A]");
}

/// The pair from the network diagram: red alone on the first peg, yellow under
/// blue on the third; the goal puts blue on the first peg and yellow on red.
#[test]
fn diagram_problem_first_step() {
    use Color::*;
    let start = BoardState::from_pegs(&[Red], &[], &[Yellow, Blue]).unwrap();
    let goal = BoardState::from_pegs(&[Blue], &[], &[Red, Yellow]).unwrap();
    let problem = Problem::new("fig", start, goal).unwrap();
    assert_eq!(problem.optimal_moves, 5);

    let result = solve_problem(&problem, &SolverParams::default(), None).unwrap();
    let first = &result.trace[0];
    // Red sits on a cell the goal gives to blue and that row is active, so the
    // direct path already rewards clearing it.
    assert_eq!(first.choice.path.label, "p1");
    assert_eq!(first.choice.mv, Move::new(0, 1).unwrap());
    assert!(first.cost_after < first.cost_before);
    assert!(result.trace.iter().any(|t| t.choice.path.depth() >= 1), "no subgoal step in the episode");
}

#[test]
fn at_target_every_path_is_flat() {
    let params = SolverParams::default();
    let paths = enumerate_paths(params.max_depth);
    for s in enumerate_states() {
        let x = encode_soft(&s);
        let grads = path_gradients(&x, &exposed_beads(&x), &supported_empty(&x), &GoalSpec::new(&s), &params, &paths);
        assert!(grads.iter().flatten().flatten().all(|&v| v == 0.0));
    }
}

#[test]
fn episodes_are_deterministic() {
    let problems = generate_problem_set(0, &default_bin_counts()).unwrap();
    for p in &problems {
        let a = solve_problem(p, &SolverParams::default(), None).unwrap();
        let b = solve_problem(p, &SolverParams::default(), None).unwrap();
        assert_eq!(a, b);
    }
}
