use serde::{Deserialize, Serialize};

use super::HarnessError;

/// Kendall's τ-b with tie correction, `O(n²)` over all pairs.
pub fn kendall_tau_b(u: &[f64], v: &[f64]) -> Result<f64, HarnessError> {
    if u.len() != v.len() {
        return Err(HarnessError::LengthMismatch { left: u.len(), right: v.len() });
    }
    if u.len() < 2 {
        return Err(HarnessError::DegenerateInput(format!("need at least 2 values, got {}", u.len())));
    }
    let (mut concordant, mut discordant, mut ties_u, mut ties_v) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            let du = u[i].partial_cmp(&u[j]).ok_or_else(|| HarnessError::DegenerateInput("NaN in input".into()))?;
            let dv = v[i].partial_cmp(&v[j]).ok_or_else(|| HarnessError::DegenerateInput("NaN in input".into()))?;
            match (du.is_eq(), dv.is_eq()) {
                (true, true) => {}
                (true, false) => ties_u += 1,
                (false, true) => ties_v += 1,
                (false, false) if du == dv => concordant += 1,
                (false, false) => discordant += 1,
            }
        }
    }
    let cd = (concordant + discordant) as f64;
    let denom = ((cd + ties_u as f64) * (cd + ties_v as f64)).sqrt();
    if cd + ties_u as f64 == 0.0 {
        return Err(HarnessError::DegenerateInput("first vector is constant".into()));
    }
    if cd + ties_v as f64 == 0.0 {
        return Err(HarnessError::DegenerateInput("second vector is constant".into()));
    }
    Ok((concordant - discordant) as f64 / denom)
}

/// Concordance sign of a held-out pair: 1, −1, or 0 when either side ties.
pub fn heldout_pair_tau(model: (f64, f64), human: (f64, f64)) -> i8 {
    let m = model.1 - model.0;
    let h = human.1 - human.0;
    if m == 0.0 || h == 0.0 {
        0
    } else if (m > 0.0) == (h > 0.0) {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    SuccessRate,
    AdditionalMoves,
}

impl MeasureKind {
    pub const ALL: [MeasureKind; 2] = [MeasureKind::SuccessRate, MeasureKind::AdditionalMoves];

    pub fn name(self) -> &'static str {
        match self {
            MeasureKind::SuccessRate => "success_rate",
            MeasureKind::AdditionalMoves => "additional_moves",
        }
    }
}

/// Orients a human measure so that larger means harder.
pub fn orient_measure(kind: MeasureKind, values: &[f64]) -> Vec<f64> {
    match kind {
        MeasureKind::SuccessRate => values.iter().map(|v| -v).collect(),
        MeasureKind::AdditionalMoves => values.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listed_values() {
        assert!((kendall_tau_b(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]).unwrap() - 1.0).abs() < 1e-12);
        assert!((kendall_tau_b(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-12);
        let t = kendall_tau_b(&[1.0, 2.0, 2.0, 3.0], &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((t - 5.0 / 30f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(kendall_tau_b(&[1.0, 1.0], &[1.0, 2.0]), Err(HarnessError::DegenerateInput(_))));
        assert!(matches!(kendall_tau_b(&[1.0, 2.0], &[3.0, 3.0]), Err(HarnessError::DegenerateInput(_))));
        assert!(matches!(kendall_tau_b(&[1.0], &[1.0]), Err(HarnessError::DegenerateInput(_))));
        assert!(matches!(kendall_tau_b(&[1.0, 2.0], &[1.0]), Err(HarnessError::LengthMismatch { .. })));
    }

    #[test]
    fn pair_signs() {
        assert_eq!(heldout_pair_tau((2.0, 5.0), (0.1, 0.9)), 1);
        assert_eq!(heldout_pair_tau((5.0, 2.0), (0.1, 0.9)), -1);
        assert_eq!(heldout_pair_tau((3.0, 3.0), (0.1, 0.9)), 0);
        assert_eq!(heldout_pair_tau((2.0, 3.0), (0.4, 0.4)), 0);
    }

    #[test]
    fn orientation() {
        assert_eq!(orient_measure(MeasureKind::SuccessRate, &[1.0, 0.5]), [-1.0, -0.5]);
        assert_eq!(orient_measure(MeasureKind::AdditionalMoves, &[1.0, 0.5]), [1.0, 0.5]);
    }
}
