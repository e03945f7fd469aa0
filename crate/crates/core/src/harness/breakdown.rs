use serde::{Deserialize, Serialize};

use super::fit::{BaselineEvaluation, ModelEvaluation};
use super::kendall::MeasureKind;
use super::measures::{Group, GroupMeasures};
use super::splits::SplitPlan;
use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bucket {
    EasyEasy,
    EasyHard,
    HardHard,
    /// Used alone when the median split leaves one side empty.
    All,
}

impl Bucket {
    pub fn name(self) -> &'static str {
        match self {
            Bucket::EasyEasy => "easy_easy",
            Bucket::EasyHard => "easy_hard",
            Bucket::HardHard => "hard_hard",
            Bucket::All => "all",
        }
    }
}

/// Easy/hard labels from the cross-group mean success rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifficultySplit {
    /// Median of the cross-group mean success rates.
    pub cut: f64,
    /// `easy[i]` iff problem `i` has mean success rate strictly above `cut`.
    pub easy: Vec<bool>,
    pub degenerate: bool,
}

impl DifficultySplit {
    pub fn bucket(&self, a: usize, b: usize) -> Bucket {
        if self.degenerate {
            return Bucket::All;
        }
        match (self.easy[a], self.easy[b]) {
            (true, true) => Bucket::EasyEasy,
            (false, false) => Bucket::HardHard,
            _ => Bucket::EasyHard,
        }
    }
}

pub fn classify_difficulty(humans: &[GroupMeasures]) -> Result<DifficultySplit, HarnessError> {
    for g in Group::ALL {
        if !humans.iter().any(|h| h.group == g) {
            return Err(HarnessError::MissingGroup(g.name().into()));
        }
    }
    let n = humans[0].problems.len();
    let means: Vec<f64> = (0..n)
        .map(|i| humans.iter().map(|h| h.problems[i].success_rate).sum::<f64>() / humans.len() as f64)
        .collect();
    let mut sorted = means.clone();
    sorted.sort_by(f64::total_cmp);
    let cut = if n % 2 == 1 { sorted[n / 2] } else { (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0 };
    let easy: Vec<bool> = means.iter().map(|&m| m > cut).collect();
    let easy_count = easy.iter().filter(|&&e| e).count();
    let degenerate = easy_count == 0 || easy_count == n;
    Ok(DifficultySplit { cut, easy, degenerate })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakdownRow {
    pub scorer: String,
    pub group: Group,
    pub measure: MeasureKind,
    pub bucket: Bucket,
    pub pairs: usize,
    pub mean_tau: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Breakdown {
    pub split: DifficultySplit,
    pub rows: Vec<BreakdownRow>,
}

fn bucket_rows(
    scorer: &str,
    group: Group,
    measure: MeasureKind,
    taus: &[i8],
    plan: &SplitPlan,
    split: &DifficultySplit,
) -> Vec<BreakdownRow> {
    let buckets: &[Bucket] =
        if split.degenerate { &[Bucket::All] } else { &[Bucket::EasyEasy, Bucket::EasyHard, Bucket::HardHard] };
    buckets
        .iter()
        .filter_map(|&bucket| {
            let vals: Vec<i8> = plan
                .splits
                .iter()
                .zip(taus)
                .filter(|((a, b), _)| split.bucket(*a, *b) == bucket)
                .map(|(_, &t)| t)
                .collect();
            (!vals.is_empty()).then(|| BreakdownRow {
                scorer: scorer.to_string(),
                group,
                measure,
                bucket,
                pairs: vals.len(),
                mean_tau: vals.iter().map(|&t| t as f64).sum::<f64>() / vals.len() as f64,
            })
        })
        .collect()
}

/// Mean held-out pair τ per easy/hard bucket for every scorer, group and measure.
pub fn split_difficulty_breakdown(
    plan: &SplitPlan,
    humans: &[GroupMeasures],
    models: &[ModelEvaluation],
    baselines: &[BaselineEvaluation],
) -> Result<Breakdown, HarnessError> {
    let split = classify_difficulty(humans)?;
    let mut rows = Vec::new();
    for m in models {
        let taus: Vec<i8> = m.splits.iter().map(|s| s.pair_tau).collect();
        rows.extend(bucket_rows("aicon", m.group, m.measure, &taus, plan, &split));
    }
    for b in baselines {
        rows.extend(bucket_rows(&b.baseline, b.group, b.measure, &b.pair_taus, plan, &split));
    }
    Ok(Breakdown { split, rows })
}
