//! Discrete Tower of London board: three pegs of capacity 1, 2 and 3 holding
//! three distinct beads.
//!
//! Positions are numbered bottom-up, peg by peg:
//!
//! ```text
//!                 5
//!         2       4
//!   0     1       3
//! ```

use std::fmt;
use std::sync::OnceLock;

use super::DomainError;

/// Number of board positions.
pub const NUM_POSITIONS: usize = 6;
/// Number of bead colors.
pub const NUM_COLORS: usize = 3;

/// Index of a board position in `0..6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PositionIndex(u8);

impl PositionIndex {
    pub const ALL: [PositionIndex; NUM_POSITIONS] = [
        PositionIndex(0),
        PositionIndex(1),
        PositionIndex(2),
        PositionIndex(3),
        PositionIndex(4),
        PositionIndex(5),
    ];

    pub fn new(index: usize) -> Result<Self, DomainError> {
        if index < NUM_POSITIONS {
            Ok(PositionIndex(index as u8))
        } else {
            Err(DomainError::InvalidPosition(index))
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Peg number (0, 1 or 2) the position belongs to.
    pub fn peg(self) -> usize {
        PEG_OF[self.index()]
    }

    /// Level on its peg, 0 being the bottom.
    pub fn level(self) -> usize {
        LEVEL_OF[self.index()]
    }

    pub fn is_bottom(self) -> bool {
        BOTTOM[self.index()]
    }

    /// The position directly below on the same peg, if any.
    pub fn below(self) -> Option<PositionIndex> {
        BELOW[self.index()].map(PositionIndex)
    }

    /// The position directly above on the same peg, if any.
    pub fn directly_above(self) -> Option<PositionIndex> {
        DIRECTLY_ABOVE[self.index()].map(PositionIndex)
    }

    /// All positions above this one on the same peg, bottom-up.
    pub fn above(self) -> &'static [usize] {
        ABOVE[self.index()]
    }
}

impl fmt::Display for PositionIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

const PEG_OF: [usize; NUM_POSITIONS] = [0, 1, 1, 2, 2, 2];
const LEVEL_OF: [usize; NUM_POSITIONS] = [0, 0, 1, 0, 1, 2];
pub(crate) const BOTTOM: [bool; NUM_POSITIONS] = [true, true, false, true, false, false];
pub(crate) const BELOW: [Option<u8>; NUM_POSITIONS] = [None, None, Some(1), None, Some(3), Some(4)];
const DIRECTLY_ABOVE: [Option<u8>; NUM_POSITIONS] = [None, Some(2), None, Some(4), Some(5), None];
pub(crate) const ABOVE: [&[usize]; NUM_POSITIONS] = [&[], &[2], &[], &[4, 5], &[5], &[]];

/// Bead color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    Red = 0,
    Yellow = 1,
    Blue = 2,
}

impl Color {
    pub const ALL: [Color; NUM_COLORS] = [Color::Red, Color::Yellow, Color::Blue];

    #[inline]
    pub fn code(self) -> usize {
        self as usize
    }

    pub fn from_code(code: usize) -> Option<Color> {
        Color::ALL.get(code).copied()
    }

    /// Single-letter tag used in problem files.
    pub fn letter(self) -> char {
        match self {
            Color::Red => 'R',
            Color::Yellow => 'Y',
            Color::Blue => 'B',
        }
    }

    pub fn from_letter(letter: &str) -> Option<Color> {
        match letter {
            "R" => Some(Color::Red),
            "Y" => Some(Color::Yellow),
            "B" => Some(Color::Blue),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Yellow => "yellow",
            Color::Blue => "blue",
        }
    }
}

/// A move of the top bead at `from` onto the free slot `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    pub from: PositionIndex,
    pub to: PositionIndex,
}

impl Move {
    pub fn new(from: usize, to: usize) -> Result<Self, DomainError> {
        if from == to {
            return Err(DomainError::InvalidMove { from, to });
        }
        Ok(Move { from: PositionIndex::new(from)?, to: PositionIndex::new(to)? })
    }

    pub fn reversed(self) -> Move {
        Move { from: self.to, to: self.from }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.from, self.to)
    }
}

/// A legal discrete board configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoardState {
    occupant: [Option<Color>; NUM_POSITIONS],
}

impl BoardState {
    /// Builds a state from per-position occupants, checking the board invariants.
    pub fn from_occupants(occupant: [Option<Color>; NUM_POSITIONS]) -> Result<Self, DomainError> {
        let mut seen = [false; NUM_COLORS];
        for c in occupant.iter().flatten() {
            if seen[c.code()] {
                return Err(DomainError::InvalidState(format!("color {} appears twice", c.name())));
            }
            seen[c.code()] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(DomainError::InvalidState(format!(
                "color {} is missing",
                Color::ALL[missing].name()
            )));
        }
        for p in PositionIndex::ALL {
            if occupant[p.index()].is_some() {
                if let Some(b) = p.below() {
                    if occupant[b.index()].is_none() {
                        return Err(DomainError::InvalidState(format!(
                            "position {p} is occupied but {b} below it is empty"
                        )));
                    }
                }
            }
        }
        Ok(BoardState { occupant })
    }

    /// Builds a state from peg stacks listed bottom-up, e.g. `([Red], [], [Yellow, Blue])`.
    pub fn from_pegs(peg1: &[Color], peg2: &[Color], peg3: &[Color]) -> Result<Self, DomainError> {
        let bases = [(0usize, 1usize, peg1), (1, 2, peg2), (3, 3, peg3)];
        let mut occupant = [None; NUM_POSITIONS];
        for (peg, (base, capacity, beads)) in bases.into_iter().enumerate() {
            if beads.len() > capacity {
                return Err(DomainError::InvalidState(format!(
                    "peg {} holds {} beads but has capacity {capacity}",
                    peg + 1,
                    beads.len()
                )));
            }
            for (level, &c) in beads.iter().enumerate() {
                occupant[base + level] = Some(c);
            }
        }
        BoardState::from_occupants(occupant)
    }

    #[inline]
    pub fn occupant(&self, p: PositionIndex) -> Option<Color> {
        self.occupant[p.index()]
    }

    pub fn occupants(&self) -> &[Option<Color>; NUM_POSITIONS] {
        &self.occupant
    }

    pub fn is_occupied(&self, p: PositionIndex) -> bool {
        self.occupant[p.index()].is_some()
    }

    pub fn position_of(&self, color: Color) -> PositionIndex {
        let i = self
            .occupant
            .iter()
            .position(|&o| o == Some(color))
            .expect("every color is on the board");
        PositionIndex(i as u8)
    }

    /// True when `p` holds a bead with nothing on top of it.
    pub fn is_movable(&self, p: PositionIndex) -> bool {
        self.is_occupied(p) && p.above().iter().all(|&j| self.occupant[j].is_none())
    }

    /// True when `p` is empty and supported (peg bottom or occupied below).
    pub fn is_free(&self, p: PositionIndex) -> bool {
        !self.is_occupied(p) && p.below().is_none_or(|b| self.is_occupied(b))
    }

    pub fn is_legal(&self, mv: Move) -> bool {
        self.is_movable(mv.from)
            && self.is_free(mv.to)
            && mv.to.below() != Some(mv.from)
            && mv.from != mv.to
    }

    /// Compact text form: six cells in position order, `-` for empty.
    pub fn to_cells(&self) -> [&'static str; NUM_POSITIONS] {
        self.occupant.map(|o| match o {
            None => "-",
            Some(Color::Red) => "R",
            Some(Color::Yellow) => "Y",
            Some(Color::Blue) => "B",
        })
    }

    pub fn from_cells<S: AsRef<str>>(cells: &[S]) -> Result<Self, DomainError> {
        if cells.len() != NUM_POSITIONS {
            return Err(DomainError::InvalidState(format!(
                "expected {NUM_POSITIONS} cells, got {}",
                cells.len()
            )));
        }
        let mut occupant = [None; NUM_POSITIONS];
        for (i, cell) in cells.iter().enumerate() {
            let cell = cell.as_ref();
            occupant[i] = match cell {
                "-" => None,
                other => Some(Color::from_letter(other).ok_or_else(|| {
                    DomainError::InvalidState(format!("unknown cell value {other:?}"))
                })?),
            };
        }
        BoardState::from_occupants(occupant)
    }
}

impl fmt::Display for BoardState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let peg = |range: std::ops::Range<usize>| -> String {
            self.occupant[range].iter().flatten().map(|c| c.letter()).collect()
        };
        write!(f, "A:[{}] B:[{}] C:[{}]", peg(0..1), peg(1..3), peg(3..6))
    }
}

/// Moves `(i, j)` where `i` holds an uncovered bead and `j` is an empty,
/// supported slot not resting on `i` itself; lexicographic by `(from, to)`.
pub fn legal_moves(state: &BoardState) -> Vec<Move> {
    let mut moves = Vec::with_capacity(4);
    for from in PositionIndex::ALL {
        if !state.is_movable(from) {
            continue;
        }
        for to in PositionIndex::ALL {
            let mv = Move { from, to };
            if from != to && state.is_legal(mv) {
                moves.push(mv);
            }
        }
    }
    moves
}

pub fn apply_move(state: &BoardState, mv: Move) -> Result<BoardState, DomainError> {
    if !state.is_legal(mv) {
        return Err(DomainError::IllegalMove { from: mv.from.index(), to: mv.to.index(), state: *state });
    }
    let mut occupant = state.occupant;
    occupant[mv.to.index()] = occupant[mv.from.index()].take();
    Ok(BoardState { occupant })
}

/// All 36 legal states in canonical order (ordering of the occupant array).
pub fn enumerate_states() -> Vec<BoardState> {
    state_space().states.clone()
}

/// The state graph induced by [`legal_moves`], built once.
pub struct StateSpace {
    states: Vec<BoardState>,
    neighbors: Vec<Vec<(Move, usize)>>,
}

impl StateSpace {
    pub fn states(&self) -> &[BoardState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, state: &BoardState) -> usize {
        self.states.binary_search(state).expect("state space contains every legal state")
    }

    /// Successors of state `i` in legal-move order.
    pub fn neighbors(&self, i: usize) -> &[(Move, usize)] {
        &self.neighbors[i]
    }
}

pub fn state_space() -> &'static StateSpace {
    static SPACE: OnceLock<StateSpace> = OnceLock::new();
    SPACE.get_or_init(|| {
        let mut states = Vec::with_capacity(36);
        for r in 0..NUM_POSITIONS {
            for y in 0..NUM_POSITIONS {
                for b in 0..NUM_POSITIONS {
                    if r == y || r == b || y == b {
                        continue;
                    }
                    let mut occupant = [None; NUM_POSITIONS];
                    occupant[r] = Some(Color::Red);
                    occupant[y] = Some(Color::Yellow);
                    occupant[b] = Some(Color::Blue);
                    if let Ok(s) = BoardState::from_occupants(occupant) {
                        states.push(s);
                    }
                }
            }
        }
        // The derived ordering sorts by occupant array, which keeps binary search valid.
        states.sort();
        let neighbors = states
            .iter()
            .map(|s| {
                legal_moves(s)
                    .into_iter()
                    .map(|mv| {
                        let next = apply_move(s, mv).expect("legal move");
                        (mv, states.binary_search(&next).expect("closed under moves"))
                    })
                    .collect()
            })
            .collect();
        StateSpace { states, neighbors }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Color::*;

    fn mv(a: usize, b: usize) -> Move {
        Move::new(a, b).unwrap()
    }

    #[test]
    fn full_tower_only_top_bead_moves() {
        let s = BoardState::from_pegs(&[], &[], &[Red, Yellow, Blue]).unwrap();
        assert_eq!(legal_moves(&s), vec![mv(5, 0), mv(5, 1)]);
    }

    #[test]
    fn one_bead_per_peg() {
        let s = BoardState::from_pegs(&[Red], &[Yellow], &[Blue]).unwrap();
        // 1->2 and 3->4 would leave the moved bead floating.
        assert_eq!(legal_moves(&s), vec![mv(0, 2), mv(0, 4), mv(1, 4), mv(3, 2)]);
    }

    #[test]
    fn legal_move_oracle_agrees() {
        // Brute force: try every (from,to), relocate, and check the result is a valid board.
        for s in enumerate_states() {
            let mut brute = Vec::new();
            for from in 0..6 {
                for to in 0..6 {
                    if from == to {
                        continue;
                    }
                    let mut occ = *s.occupants();
                    let covered = ABOVE[from].iter().any(|&j| occ[j].is_some());
                    if occ[from].is_none() || occ[to].is_some() || covered {
                        continue;
                    }
                    occ[to] = occ[from].take();
                    if BoardState::from_occupants(occ).is_ok() {
                        brute.push(mv(from, to));
                    }
                }
            }
            assert_eq!(legal_moves(&s), brute, "{s}");
        }
    }

    #[test]
    fn apply_relocates() {
        let s = BoardState::from_pegs(&[Red], &[], &[Yellow, Blue]).unwrap();
        let t = apply_move(&s, mv(4, 1)).unwrap();
        assert_eq!(t, BoardState::from_pegs(&[Red], &[Blue], &[Yellow]).unwrap());
        assert_eq!(apply_move(&t, mv(1, 4)).unwrap(), s);
    }

    #[test]
    fn apply_from_empty_is_illegal() {
        let s = BoardState::from_pegs(&[], &[], &[Red, Yellow, Blue]).unwrap();
        assert!(matches!(apply_move(&s, mv(0, 1)), Err(DomainError::IllegalMove { .. })));
    }

    #[test]
    fn move_counts_in_range() {
        for s in enumerate_states() {
            let n = legal_moves(&s).len();
            assert!((2..=8).contains(&n), "{s} has {n} moves");
        }
    }

    #[test]
    fn invalid_states_rejected() {
        assert!(BoardState::from_pegs(&[Red, Yellow], &[Blue], &[]).is_err());
        assert!(BoardState::from_pegs(&[Red], &[Red], &[Blue]).is_err());
        assert!(BoardState::from_cells(&["R", "-", "Y", "-", "-", "B"]).is_err());
        assert!(BoardState::from_cells(&["R", "Y"]).is_err());
    }

    #[test]
    fn cells_round_trip() {
        for s in enumerate_states() {
            assert_eq!(BoardState::from_cells(&s.to_cells()).unwrap(), s);
        }
    }

    #[test]
    fn layout_relations() {
        let p = |i| PositionIndex::new(i).unwrap();
        assert_eq!(p(2).below(), Some(p(1)));
        assert_eq!(p(5).below(), Some(p(4)));
        assert_eq!(p(3).above(), &[4, 5]);
        assert_eq!(p(1).above(), &[2]);
        assert!(p(0).is_bottom() && p(1).is_bottom() && p(3).is_bottom());
        assert_eq!((p(4).peg(), p(4).level()), (2, 1));
    }
}
