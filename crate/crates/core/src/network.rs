//! The differentiable estimator network.
//!
//! Three recursive estimators (state `x`, movable `m`, free `f`) are linked by
//! three active interconnections:
//!
//! * exposed beads: `m̂_i = occ_i · Π_{j above i} (1 − occ_j)`
//! * supported empty fields: `f̂_i = (1 − occ_i) · s_i`, with `s_i = 1` on peg
//!   bottoms and `occ_below(i)` elsewhere
//! * legal move constraint: bead mass flows from `i` to `j` with weight
//!   `w_ij = a_ij · m_i · f_j · P_ij`
//!
//! and a smart-goal cost `g` over `x`. Every map is polynomial, so all partial
//! derivatives used for gradient-path composition are exact.

use std::fmt::Write as _;

use crate::domain::{
    encode_soft, BoardState, Color, Move, SoftState, ABOVE, BELOW, BOTTOM, NUM_COLORS, NUM_POSITIONS,
};

pub type Vec6 = [f64; NUM_POSITIONS];
pub type Mat6 = [[f64; NUM_POSITIONS]; NUM_POSITIONS];

const N: usize = NUM_POSITIONS;
const C: usize = NUM_COLORS;

/// Static peg geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuralMask {
    /// `upward[i][j] = 1` iff `j` is above `i` on the same peg.
    pub upward: Mat6,
    /// `bottom[i] = 1` iff `i` is a peg bottom.
    pub bottom: Vec6,
}

impl StructuralMask {
    pub fn new() -> Self {
        let mut upward = [[0.0; N]; N];
        for (i, row) in upward.iter_mut().enumerate() {
            for &j in ABOVE[i] {
                row[j] = 1.0;
            }
        }
        let bottom = BOTTOM.map(|b| if b { 1.0 } else { 0.0 });
        StructuralMask { upward, bottom }
    }

    /// Transfer mask: 0 on the diagonal and wherever the target sits on the source.
    pub fn transfer(&self) -> Mat6 {
        let mut p = [[1.0; N]; N];
        for i in 0..N {
            for j in 0..N {
                if i == j || self.upward[i][j] > 0.0 {
                    p[i][j] = 0.0;
                }
            }
        }
        p
    }
}

impl Default for StructuralMask {
    fn default() -> Self {
        StructuralMask::new()
    }
}

fn transfer_mask() -> &'static Mat6 {
    static P: std::sync::OnceLock<Mat6> = std::sync::OnceLock::new();
    P.get_or_init(|| StructuralMask::new().transfer())
}

pub fn occupancy(x: &SoftState) -> Vec6 {
    std::array::from_fn(|i| x.row_sum(i))
}

fn exposed_from_occ(occ: &Vec6) -> Vec6 {
    std::array::from_fn(|i| occ[i] * ABOVE[i].iter().map(|&j| 1.0 - occ[j]).product::<f64>())
}

fn support(occ: &Vec6, i: usize) -> f64 {
    match BELOW[i] {
        None => 1.0,
        Some(b) => occ[b as usize],
    }
}

/// Exposed Beads interconnection.
pub fn exposed_beads(x: &SoftState) -> Vec6 {
    exposed_from_occ(&occupancy(x))
}

/// Supported Empty Fields interconnection.
pub fn supported_empty(x: &SoftState) -> Vec6 {
    let occ = occupancy(x);
    std::array::from_fn(|i| (1.0 - occ[i]) * support(&occ, i))
}

/// A recursive estimator over the six positions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorVector {
    pub v: Vec6,
    pub gain: f64,
}

impl EstimatorVector {
    pub fn new(v: Vec6, gain: f64) -> Self {
        debug_assert!(gain > 0.0 && gain <= 1.0, "gain {gain} outside (0,1]");
        EstimatorVector { v: v.map(|e| e.clamp(0.0, 1.0)), gain }
    }

    pub fn step(&self, computed: &Vec6) -> Self {
        estimator_step(self, computed)
    }
}

/// `v' = clamp(v + gain · (computed − v))`.
pub fn estimator_step(e: &EstimatorVector, computed: &Vec6) -> EstimatorVector {
    let v = std::array::from_fn(|i| (e.v[i] + e.gain * (computed[i] - e.v[i])).clamp(0.0, 1.0));
    EstimatorVector { v, gain: e.gain }
}

/// Soft from-position × to-position action.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionMatrix(pub Mat6);

impl ActionMatrix {
    pub fn zeros() -> Self {
        ActionMatrix([[0.0; N]; N])
    }

    pub fn one_hot(mv: Move) -> Self {
        let mut a = Self::zeros();
        a.0[mv.from.index()][mv.to.index()] = 1.0;
        a
    }

    /// Uniform action of weight `scale` on every structurally possible transfer.
    pub fn uniform(scale: f64) -> Self {
        let p = transfer_mask();
        ActionMatrix(std::array::from_fn(|i| std::array::from_fn(|j| scale * p[i][j])))
    }

    /// Entries clamped to `[0,1]` with a zero diagonal.
    pub fn new(mut a: Mat6) -> Self {
        for (i, row) in a.iter_mut().enumerate() {
            for v in row.iter_mut() {
                *v = v.clamp(0.0, 1.0);
            }
            row[i] = 0.0;
        }
        ActionMatrix(a)
    }
}

fn weight(a: &ActionMatrix, m: &Vec6, f: &Vec6, i: usize, j: usize) -> f64 {
    a.0[i][j] * m[i] * f[j] * transfer_mask()[i][j]
}

/// Legal move constraint before clamping. Column sums of `x` are conserved exactly.
pub fn legal_move_transfer(x: &SoftState, a: &ActionMatrix, m: &Vec6, f: &Vec6) -> SoftState {
    let mut out = *x;
    for i in 0..N {
        for j in 0..N {
            let w = weight(a, m, f, i, j);
            if w == 0.0 {
                continue;
            }
            for c in 0..C {
                let moved = w * x[(i, c)];
                out[(i, c)] -= moved;
                out[(j, c)] += moved;
            }
        }
    }
    out
}

/// Legal move constraint: transfer bead mass along the action, then clamp to `[0,1]`.
pub fn legal_move_update(x: &SoftState, a: &ActionMatrix, m: &Vec6, f: &Vec6) -> SoftState {
    legal_move_transfer(x, a, m, f).clamp_unit()
}

/// Default placement-correctness threshold for the smart goal.
pub const DEFAULT_THETA_CORRECT: f64 = 0.9;

/// Target configuration with state-dependent row activation.
#[derive(Debug, Clone, PartialEq)]
pub struct GoalSpec {
    pub target: SoftState,
    pub theta_correct: f64,
    /// Activation of rows left empty by the goal.
    pub empty_row_activation: f64,
    /// Per-row weights; all 1 unless a caller wants explicit level weighting.
    pub level_weights: Vec6,
}

impl GoalSpec {
    pub fn new(goal: &BoardState) -> Self {
        GoalSpec {
            target: encode_soft(goal),
            theta_correct: DEFAULT_THETA_CORRECT,
            empty_row_activation: 0.0,
            level_weights: [1.0; N],
        }
    }

    pub fn with_theta_correct(mut self, theta: f64) -> Self {
        self.theta_correct = theta;
        self
    }

    pub fn with_empty_row_activation(mut self, value: f64) -> Self {
        self.empty_row_activation = value;
        self
    }

    fn goal_occupied(&self, i: usize) -> bool {
        self.target.row_sum(i) > 0.5
    }

    fn placed(&self, x: &SoftState, j: usize) -> bool {
        let overlap: f64 = (0..C).map(|c| x[(j, c)] * self.target[(j, c)]).sum();
        overlap >= self.theta_correct
    }

    /// Smart-goal activation `λ(x)`: a goal-occupied row is active once every
    /// goal bead below it on its peg is correctly placed.
    pub fn activation(&self, x: &SoftState) -> Vec6 {
        std::array::from_fn(|i| {
            if !self.goal_occupied(i) {
                return self.empty_row_activation;
            }
            let mut below = BELOW[i];
            while let Some(b) = below {
                let b = b as usize;
                if self.goal_occupied(b) && !self.placed(x, b) {
                    return 0.0;
                }
                below = BELOW[b];
            }
            1.0
        })
    }
}

/// `g = ½ Σ_i w_i λ_i ‖x_i − t_i‖²` with `λ` taken as given.
pub fn goal_cost_with_activation(x: &SoftState, goal: &GoalSpec, lambda: &Vec6) -> f64 {
    0.5 * (0..N)
        .map(|i| {
            let sq: f64 = (0..C).map(|c| (x[(i, c)] - goal.target[(i, c)]).powi(2)).sum();
            goal.level_weights[i] * lambda[i] * sq
        })
        .sum::<f64>()
}

pub fn goal_cost(x: &SoftState, goal: &GoalSpec) -> f64 {
    goal_cost_with_activation(x, goal, &goal.activation(x))
}

/// Gains of the free (`alpha`) and movable (`beta`) estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorGains {
    pub alpha: f64,
    pub beta: f64,
}

/// Tensor of `∂x/∂a`, indexed `[i][c][k][l]`.
pub type StateByAction = [[Mat6; C]; N];
/// Tensor of `∂x/∂v` for a 6-vector `v`, indexed `[i][c][q]`.
pub type StateByVector = [[Vec6; C]; N];
/// Tensor of `∂v/∂x` for a 6-vector `v`, indexed `[q][k][c]`.
pub type VectorByState = [[[f64; C]; N]; N];

/// All partial derivatives needed for gradient-path composition, evaluated at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianSet {
    pub dg_dx: SoftState,
    pub dx_da: Box<StateByAction>,
    pub dm_dx: VectorByState,
    pub df_dx: VectorByState,
    pub dx_dm: StateByVector,
    pub dx_df: StateByVector,
    /// `∂m'/∂m̂` of the movable estimator update.
    pub movable_gain: f64,
    /// `∂f'/∂f̂` of the free estimator update.
    pub free_gain: f64,
    /// The frozen smart-goal activation used for `dg_dx`.
    pub activation: Vec6,
}

/// Analytic partials of the network maps at `(x, a, m, f)`.
///
/// `dx_*` differentiate [`legal_move_transfer`] (the pre-clamp map); `dg_dx`
/// holds `λ` fixed at `goal.activation(x)`.
pub fn evaluate_jacobians(
    x: &SoftState,
    a: &ActionMatrix,
    m: &Vec6,
    f: &Vec6,
    goal: &GoalSpec,
    gains: EstimatorGains,
) -> JacobianSet {
    let p = transfer_mask();
    let occ = occupancy(x);
    let lambda = goal.activation(x);

    let mut dg_dx = SoftState::zeros();
    for i in 0..N {
        let scale = goal.level_weights[i] * lambda[i];
        for c in 0..C {
            dg_dx[(i, c)] = scale * (x[(i, c)] - goal.target[(i, c)]);
        }
    }

    let mut dx_da: Box<StateByAction> = Box::new([[[[0.0; N]; N]; C]; N]);
    for k in 0..N {
        for l in 0..N {
            let w = p[k][l] * m[k] * f[l];
            if w == 0.0 {
                continue;
            }
            for c in 0..C {
                let moved = w * x[(k, c)];
                dx_da[k][c][k][l] -= moved;
                dx_da[l][c][k][l] += moved;
            }
        }
    }

    let mut dx_dm = [[[0.0; N]; C]; N];
    let mut dx_df = [[[0.0; N]; C]; N];
    for i in 0..N {
        let out_rate: f64 = (0..N).map(|j| a.0[i][j] * p[i][j] * f[j]).sum();
        for c in 0..C {
            dx_dm[i][c][i] -= out_rate * x[(i, c)];
            for q in 0..N {
                // bead mass arriving at i from q
                dx_dm[i][c][q] += a.0[q][i] * p[q][i] * f[i] * x[(q, c)];
                // bead mass leaving i towards q
                dx_df[i][c][q] -= a.0[i][q] * p[i][q] * m[i] * x[(i, c)];
            }
            let in_flow: f64 = (0..N).map(|j| a.0[j][i] * p[j][i] * m[j] * x[(j, c)]).sum();
            dx_df[i][c][i] += in_flow;
        }
    }

    let mut dm_docc = [[0.0; N]; N];
    let mut df_docc = [[0.0; N]; N];
    for q in 0..N {
        dm_docc[q][q] = ABOVE[q].iter().map(|&j| 1.0 - occ[j]).product();
        for &k in ABOVE[q] {
            dm_docc[q][k] = -occ[q] * ABOVE[q].iter().filter(|&&j| j != k).map(|&j| 1.0 - occ[j]).product::<f64>();
        }
        df_docc[q][q] = -support(&occ, q);
        if let Some(b) = BELOW[q] {
            df_docc[q][b as usize] = 1.0 - occ[q];
        }
    }
    let spread = |d: &Mat6| -> VectorByState { std::array::from_fn(|q| std::array::from_fn(|k| [d[q][k]; C])) };

    JacobianSet {
        dg_dx,
        dx_da,
        dm_dx: spread(&dm_docc),
        df_dx: spread(&df_docc),
        dx_dm,
        dx_df,
        movable_gain: gains.beta,
        free_gain: gains.alpha,
        activation: lambda,
    }
}

fn x_label(i: usize, c: usize) -> String {
    format!("x[{i};{}]", Color::ALL[c].name())
}

impl JacobianSet {
    /// Flattened dump as CSV with columns `tensor,row,col,value`; row and col
    /// name the output and input coordinates.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tensor,row,col,value\n");
        let mut push = |t: &str, r: String, c: String, v: f64| {
            let _ = writeln!(out, "{t},{r},{c},{v}");
        };
        for i in 0..N {
            for c in 0..C {
                push("dg_dx", "g".into(), x_label(i, c), self.dg_dx[(i, c)]);
            }
        }
        for i in 0..N {
            for c in 0..C {
                for k in 0..N {
                    for l in 0..N {
                        push("dx_da", x_label(i, c), format!("a[{k};{l}]"), self.dx_da[i][c][k][l]);
                    }
                }
            }
        }
        for (name, t, v) in [("dm_dx", &self.dm_dx, "m"), ("df_dx", &self.df_dx, "f")] {
            for q in 0..N {
                for k in 0..N {
                    for c in 0..C {
                        push(name, format!("{v}[{q}]"), x_label(k, c), t[q][k][c]);
                    }
                }
            }
        }
        for (name, t, v) in [("dx_dm", &self.dx_dm, "m"), ("dx_df", &self.dx_df, "f")] {
            for i in 0..N {
                for c in 0..C {
                    for q in 0..N {
                        push(name, x_label(i, c), format!("{v}[{q}]"), t[i][c][q]);
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{apply_move, enumerate_states, legal_moves, BoardState, Color::*, PositionIndex};

    fn occ_state(occ: Vec6) -> SoftState {
        // put all occupancy mass in the red column; only row sums matter here
        let mut x = SoftState::zeros();
        for i in 0..N {
            x[(i, 0)] = occ[i];
        }
        x
    }

    fn diagram_pair() -> (BoardState, BoardState) {
        (
            BoardState::from_pegs(&[Red], &[], &[Yellow, Blue]).unwrap(),
            BoardState::from_pegs(&[Blue], &[], &[Red, Yellow]).unwrap(),
        )
    }

    #[test]
    fn occupancy_cases() {
        let (s, _) = diagram_pair();
        assert_eq!(occupancy(&encode_soft(&s)), [1.0, 0.0, 0.0, 1.0, 1.0, 0.0]);
        assert_eq!(occupancy(&SoftState::zeros()), [0.0; 6]);
        let third = occupancy(&SoftState::filled(1.0 / 3.0));
        assert!(third.iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn exposed_cases() {
        assert_eq!(exposed_beads(&occ_state([1.0, 0.0, 0.0, 1.0, 1.0, 0.0])), [1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        assert_eq!(exposed_beads(&occ_state([0.0, 0.0, 0.0, 1.0, 1.0, 1.0])), [0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let m = exposed_beads(&occ_state([0.0, 0.0, 0.0, 1.0, 0.5, 0.0]));
        assert!((m[3] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn supported_cases() {
        assert_eq!(supported_empty(&occ_state([1.0, 0.0, 0.0, 1.0, 1.0, 0.0])), [0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(supported_empty(&SoftState::zeros()), StructuralMask::new().bottom);
    }

    #[test]
    fn discrete_consistency() {
        for s in enumerate_states() {
            let x = encode_soft(&s);
            let (m, f) = (exposed_beads(&x), supported_empty(&x));
            for p in PositionIndex::ALL {
                assert_eq!(m[p.index()].round() == 1.0, s.is_movable(p), "{s} m at {p}");
                assert_eq!(f[p.index()].round() == 1.0, s.is_free(p), "{s} f at {p}");
            }
        }
    }

    #[test]
    fn estimator_steps() {
        let e = EstimatorVector::new([0.0; 6], 1.0);
        let target = [0.2, 0.4, 0.6, 0.8, 1.0, 0.0];
        assert_eq!(e.step(&target).v, target);
        let half = EstimatorVector::new([0.0; 6], 0.5).step(&[1.0; 6]);
        assert_eq!(half.v, [0.5; 6]);
        let mut e = EstimatorVector::new([0.0; 6], 0.3);
        let mut prev = 1.0;
        for _ in 0..20 {
            e = e.step(&[1.0; 6]);
            let err = 1.0 - e.v[0];
            assert!((err - 0.7 * prev).abs() < 1e-12);
            prev = err;
        }
    }

    #[test]
    fn null_action_leaves_state() {
        let (s, _) = diagram_pair();
        let x = encode_soft(&s);
        let y = legal_move_update(&x, &ActionMatrix::zeros(), &exposed_beads(&x), &supported_empty(&x));
        assert_eq!(x, y);
    }

    #[test]
    fn one_hot_legal_actions_reproduce_moves() {
        for s in enumerate_states() {
            let x = encode_soft(&s);
            let (m, f) = (exposed_beads(&x), supported_empty(&x));
            for from in 0..6 {
                for to in 0..6 {
                    if from == to {
                        continue;
                    }
                    let mv = Move::new(from, to).unwrap();
                    let y = legal_move_update(&x, &ActionMatrix::one_hot(mv), &m, &f);
                    if legal_moves(&s).contains(&mv) {
                        assert_eq!(y, encode_soft(&apply_move(&s, mv).unwrap()));
                    } else {
                        assert_eq!(y, x, "illegal {mv} changed {s}");
                    }
                }
            }
        }
    }

    #[test]
    fn transfer_conserves_columns() {
        let x = SoftState([[0.3, 0.1, 0.2], [0.1, 0.5, 0.0], [0.2, 0.1, 0.3], [0.1, 0.1, 0.1], [0.2, 0.0, 0.2], [0.1, 0.2, 0.1]]);
        let a = ActionMatrix::uniform(0.4);
        let y = legal_move_transfer(&x, &a, &[0.7; 6], &[0.6; 6]);
        for c in 0..3 {
            assert!((x.column_sum(c) - y.column_sum(c)).abs() < 1e-14);
        }
    }

    #[test]
    fn diagram_pair_activation() {
        let (s, g) = diagram_pair();
        let goal = GoalSpec::new(&g);
        let x = encode_soft(&s);
        let lambda = goal.activation(&x);
        assert_eq!((lambda[0], lambda[3], lambda[4]), (1.0, 1.0, 0.0));
        assert!(goal_cost(&x, &goal) > 0.0);
    }

    #[test]
    fn goal_soundness() {
        for gs in enumerate_states() {
            let goal = GoalSpec::new(&gs);
            for s in enumerate_states() {
                let g = goal_cost(&encode_soft(&s), &goal);
                if s == gs {
                    assert_eq!(g, 0.0);
                } else {
                    assert!(g > 0.0, "{s} vs goal {gs}");
                }
            }
        }
    }

    #[test]
    fn moving_toward_target_lowers_cost() {
        let (s, g) = diagram_pair();
        let goal = GoalSpec::new(&g);
        let x = encode_soft(&s);
        let lambda = goal.activation(&x);
        let mut prev = goal_cost_with_activation(&x, &goal, &lambda);
        for step in 1..=4 {
            let t = step as f64 / 4.0;
            let mut y = x;
            for i in 0..6 {
                if lambda[i] > 0.0 {
                    for c in 0..3 {
                        y[(i, c)] = (1.0 - t) * x[(i, c)] + t * goal.target[(i, c)];
                    }
                }
            }
            let now = goal_cost_with_activation(&y, &goal, &lambda);
            assert!(now < prev);
            prev = now;
        }
        assert_eq!(prev, 0.0);
    }

    #[test]
    fn null_action_kills_estimator_coupling() {
        let (s, g) = diagram_pair();
        let x = encode_soft(&s);
        let gains = EstimatorGains { alpha: 0.5, beta: 0.5 };
        let jac = evaluate_jacobians(&x, &ActionMatrix::zeros(), &exposed_beads(&x), &supported_empty(&x), &GoalSpec::new(&g), gains);
        assert!(jac.dx_dm.iter().flatten().flatten().all(|&v| v == 0.0));
        assert!(jac.dx_df.iter().flatten().flatten().all(|&v| v == 0.0));
        assert!(jac.dx_da.iter().flatten().flatten().flatten().any(|&v| v != 0.0));
    }

    #[test]
    fn gradient_vanishes_at_target() {
        let (_, g) = diagram_pair();
        let x = encode_soft(&g);
        let jac = evaluate_jacobians(&x, &ActionMatrix::uniform(0.2), &exposed_beads(&x), &supported_empty(&x), &GoalSpec::new(&g), EstimatorGains { alpha: 1.0, beta: 1.0 });
        assert!(jac.dg_dx.rows().iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn csv_dump_has_every_entry() {
        let (s, g) = diagram_pair();
        let x = encode_soft(&s);
        let jac = evaluate_jacobians(&x, &ActionMatrix::uniform(0.2), &exposed_beads(&x), &supported_empty(&x), &GoalSpec::new(&g), EstimatorGains { alpha: 0.5, beta: 0.5 });
        let rows = jac.to_csv().lines().count() - 1;
        assert_eq!(rows, 18 + 18 * 36 + 2 * 6 * 18 + 2 * 18 * 6);
    }
}
