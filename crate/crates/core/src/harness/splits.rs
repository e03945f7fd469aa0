use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::HarnessError;

/// Held-out pairs, given as indices into the problem set with `first < second`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub seed: u64,
    pub n: usize,
    pub splits: Vec<(usize, usize)>,
}

/// All unordered pairs of `0..n` in lexicographic order.
pub fn pair_universe(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Draws `n` distinct held-out pairs uniformly; the plan lists them in
/// lexicographic order.
pub fn make_split_plan(num_problems: usize, n: usize, seed: u64) -> Result<SplitPlan, HarnessError> {
    let universe = pair_universe(num_problems);
    if n > universe.len() {
        return Err(HarnessError::TooManySplits { requested: n, available: universe.len() });
    }
    if n == 0 {
        return Err(HarnessError::InvalidArgument("split count must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = sample(&mut rng, universe.len(), n).into_vec();
    picked.sort_unstable();
    Ok(SplitPlan { seed, n, splits: picked.into_iter().map(|k| universe[k]).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_universe() {
        assert_eq!(pair_universe(24).len(), 276);
        let plan = make_split_plan(24, 276, 3).unwrap();
        assert_eq!(plan.splits, pair_universe(24));
    }

    #[test]
    fn bounds_and_determinism() {
        assert!(matches!(make_split_plan(24, 277, 0), Err(HarnessError::TooManySplits { requested: 277, available: 276 })));
        assert_eq!(make_split_plan(24, 120, 5).unwrap(), make_split_plan(24, 120, 5).unwrap());
        assert_ne!(make_split_plan(24, 120, 5).unwrap(), make_split_plan(24, 120, 6).unwrap());
    }
}
