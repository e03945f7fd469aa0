//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's board rules.

#![allow(dead_code)]

use aicon_tol::domain::{BoardState, Color};

/// Pegs hold 1, 2 and 3 beads.
pub const CAPACITY: [usize; 3] = [1, 2, 3];

/// Flat position of `(peg, level)`: pegs are laid out bottom to top, peg 1 first.
pub fn position(peg: usize, level: usize) -> usize {
    [0, 1, 3][peg] + level
}

/// Color code (0 red, 1 yellow, 2 blue) at each of the six positions.
pub type Cells = [Option<u8>; 6];

fn height(cells: &Cells, peg: usize) -> usize {
    (0..CAPACITY[peg]).take_while(|&l| cells[position(peg, l)].is_some()).count()
}

fn settled(cells: &Cells) -> bool {
    (0..3).all(|peg| (height(cells, peg)..CAPACITY[peg]).all(|l| cells[position(peg, l)].is_none()))
}

/// Every placement of three distinct beads into six cells, kept when no bead floats.
pub fn brute_force_states() -> Vec<Cells> {
    let mut out = Vec::new();
    for r in 0..6 {
        for y in 0..6 {
            for b in 0..6 {
                if r == y || y == b || r == b {
                    continue;
                }
                let mut cells = [None; 6];
                cells[r] = Some(0);
                cells[y] = Some(1);
                cells[b] = Some(2);
                if settled(&cells) {
                    out.push(cells);
                }
            }
        }
    }
    out
}

/// `(from, to, successor)` for every top bead moved onto another peg with room.
pub fn brute_force_moves(cells: &Cells) -> Vec<(usize, usize, Cells)> {
    let mut out = Vec::new();
    for a in 0..3 {
        let ha = height(cells, a);
        if ha == 0 {
            continue;
        }
        let from = position(a, ha - 1);
        for b in 0..3 {
            let hb = height(cells, b);
            if a == b || hb == CAPACITY[b] {
                continue;
            }
            let to = position(b, hb);
            let mut next = *cells;
            next[to] = next[from].take();
            out.push((from, to, next));
        }
    }
    out
}

/// Top bead of each peg.
pub fn brute_force_movable(cells: &Cells) -> [bool; 6] {
    let mut out = [false; 6];
    for peg in 0..3 {
        let h = height(cells, peg);
        if h > 0 {
            out[position(peg, h - 1)] = true;
        }
    }
    out
}

/// Lowest empty slot of each peg that is not full.
pub fn brute_force_free(cells: &Cells) -> [bool; 6] {
    let mut out = [false; 6];
    for peg in 0..3 {
        let h = height(cells, peg);
        if h < CAPACITY[peg] {
            out[position(peg, h)] = true;
        }
    }
    out
}

pub fn cells_of(state: &BoardState) -> Cells {
    state.occupants().map(|o| o.map(|c| c.code() as u8))
}

pub fn state_of(cells: &Cells) -> BoardState {
    BoardState::from_occupants(cells.map(|o| o.map(|c| Color::from_code(c as usize).unwrap()))).unwrap()
}

/// All-pairs shortest move counts over `states` by Floyd–Warshall.
pub fn floyd_warshall(states: &[Cells]) -> Vec<Vec<u32>> {
    const INF: u32 = u32::MAX / 4;
    let n = states.len();
    let mut d = vec![vec![INF; n]; n];
    for (i, s) in states.iter().enumerate() {
        d[i][i] = 0;
        for (_, _, t) in brute_force_moves(s) {
            let j = states.iter().position(|u| *u == t).unwrap();
            d[i][j] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// τ-b by its textbook definition over all pairs.
pub fn tau_b_reference(u: &[f64], v: &[f64]) -> f64 {
    let (mut c, mut d, mut tu, mut tv) = (0.0f64, 0.0, 0.0, 0.0);
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            let (a, b) = (u[i] - u[j], v[i] - v[j]);
            match (a == 0.0, b == 0.0) {
                (true, true) => {}
                (true, false) => tu += 1.0,
                (false, true) => tv += 1.0,
                _ if a * b > 0.0 => c += 1.0,
                _ => d += 1.0,
            }
        }
    }
    (c - d) / ((c + d + tu) * (c + d + tv)).sqrt()
}

/// Sum over pairs of the concordance sign, ties counting 0, divided by the number of pairs.
pub fn mean_pair_concordance(model: &[f64], human: &[f64]) -> f64 {
    let (mut sum, mut n) = (0.0, 0.0);
    for i in 0..model.len() {
        for j in i + 1..model.len() {
            let p = (model[i] - model[j]) * (human[i] - human[j]);
            sum += if p > 0.0 { 1.0 } else if p < 0.0 { -1.0 } else { 0.0 };
            n += 1.0;
        }
    }
    sum / n
}
