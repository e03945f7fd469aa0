use std::ops::{Index, IndexMut};

use super::board::{BoardState, Color, PositionIndex, NUM_COLORS, NUM_POSITIONS};
use super::DomainError;

/// Default threshold for reading a discrete board off a soft state.
pub const DEFAULT_DECODE_THRESHOLD: f64 = 0.5;

/// Soft board encoding: rows are positions, columns one-hot bead colors.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SoftState(pub [[f64; NUM_COLORS]; NUM_POSITIONS]);

impl SoftState {
    pub fn zeros() -> Self {
        SoftState([[0.0; NUM_COLORS]; NUM_POSITIONS])
    }

    pub fn filled(value: f64) -> Self {
        SoftState([[value; NUM_COLORS]; NUM_POSITIONS])
    }

    pub fn rows(&self) -> &[[f64; NUM_COLORS]; NUM_POSITIONS] {
        &self.0
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.0[i].iter().sum()
    }

    pub fn column_sum(&self, c: usize) -> f64 {
        self.0.iter().map(|r| r[c]).sum()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().flatten().sum()
    }

    pub fn clamp_unit(mut self) -> Self {
        for v in self.0.iter_mut().flatten() {
            *v = v.clamp(0.0, 1.0);
        }
        self
    }

    /// Entry-wise row-major view as 18 values.
    pub fn flat(&self) -> [f64; NUM_POSITIONS * NUM_COLORS] {
        let mut out = [0.0; NUM_POSITIONS * NUM_COLORS];
        for (i, row) in self.0.iter().enumerate() {
            out[i * NUM_COLORS..(i + 1) * NUM_COLORS].copy_from_slice(row);
        }
        out
    }
}

impl Index<(usize, usize)> for SoftState {
    type Output = f64;
    fn index(&self, (i, c): (usize, usize)) -> &f64 {
        &self.0[i][c]
    }
}

impl IndexMut<(usize, usize)> for SoftState {
    fn index_mut(&mut self, (i, c): (usize, usize)) -> &mut f64 {
        &mut self.0[i][c]
    }
}

pub fn encode_soft(state: &BoardState) -> SoftState {
    let mut x = SoftState::zeros();
    for p in PositionIndex::ALL {
        if let Some(c) = state.occupant(p) {
            x[(p.index(), c.code())] = 1.0;
        }
    }
    x
}

/// Reads the discrete board off `x`: each color goes to the single row whose
/// entry exceeds `threshold`.
pub fn decode_state(x: &SoftState, threshold: f64) -> Result<BoardState, DomainError> {
    let mut occupant = [None; NUM_POSITIONS];
    for color in Color::ALL {
        let rows: Vec<usize> =
            (0..NUM_POSITIONS).filter(|&i| x[(i, color.code())] > threshold).collect();
        let row = match rows.as_slice() {
            [row] => *row,
            [] => {
                return Err(DomainError::AmbiguousState(format!(
                    "no entry above {threshold} for {}",
                    color.name()
                )))
            }
            _ => {
                return Err(DomainError::AmbiguousState(format!(
                    "{} entries above {threshold} for {}",
                    rows.len(),
                    color.name()
                )))
            }
        };
        if let Some(other) = occupant[row] {
            let other: Color = other;
            return Err(DomainError::AmbiguousState(format!(
                "position {row} claimed by both {} and {}",
                other.name(),
                color.name()
            )));
        }
        occupant[row] = Some(color);
    }
    BoardState::from_occupants(occupant).map_err(|e| DomainError::AmbiguousState(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::board::enumerate_states;
    use Color::*;

    #[test]
    fn diagram_start_encoding() {
        let s = BoardState::from_pegs(&[Red], &[], &[Yellow, Blue]).unwrap();
        let x = encode_soft(&s);
        let mut expected = SoftState::zeros();
        expected[(0, 0)] = 1.0;
        expected[(3, 1)] = 1.0;
        expected[(4, 2)] = 1.0;
        assert_eq!(x, expected);
    }

    #[test]
    fn diagram_goal_encoding() {
        let g = BoardState::from_pegs(&[Blue], &[], &[Red, Yellow]).unwrap();
        let x = encode_soft(&g);
        assert_eq!((x[(0, 2)], x[(3, 0)], x[(4, 1)]), (1.0, 1.0, 1.0));
        assert_eq!(x.total(), 3.0);
    }

    #[test]
    fn row_sums_are_occupancy() {
        for s in enumerate_states() {
            let x = encode_soft(&s);
            for p in PositionIndex::ALL {
                assert_eq!(x.row_sum(p.index()), if s.is_occupied(p) { 1.0 } else { 0.0 });
            }
            assert_eq!(x.total(), 3.0);
        }
    }

    #[test]
    fn decode_round_trip() {
        for s in enumerate_states() {
            assert_eq!(decode_state(&encode_soft(&s), DEFAULT_DECODE_THRESHOLD).unwrap(), s);
        }
    }

    #[test]
    fn decode_nothing_above_threshold() {
        let x = SoftState::filled(0.4);
        assert!(matches!(decode_state(&x, 0.5), Err(DomainError::AmbiguousState(_))));
    }

    #[test]
    fn decode_duplicate_color() {
        let s = BoardState::from_pegs(&[Red], &[], &[Yellow, Blue]).unwrap();
        let mut x = encode_soft(&s);
        x[(1, 0)] = 0.9;
        x[(0, 0)] = 0.9;
        assert!(matches!(decode_state(&x, 0.5), Err(DomainError::AmbiguousState(_))));
    }

    #[test]
    fn decode_floating_bead() {
        let mut x = SoftState::zeros();
        x[(0, 0)] = 1.0;
        x[(1, 1)] = 1.0;
        x[(5, 2)] = 1.0;
        assert!(matches!(decode_state(&x, 0.5), Err(DomainError::AmbiguousState(_))));
    }

    #[test]
    fn decode_near_discrete() {
        let s = BoardState::from_pegs(&[], &[Blue, Red], &[Yellow]).unwrap();
        let mut x = encode_soft(&s);
        for v in x.0.iter_mut().flatten() {
            *v = if *v > 0.5 { *v - 0.03 } else { *v + 0.02 };
        }
        assert_eq!(decode_state(&x, DEFAULT_DECODE_THRESHOLD).unwrap(), s);
    }
}
