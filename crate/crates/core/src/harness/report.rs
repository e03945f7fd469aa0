use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::baselines::BaselineScores;
use crate::solver::ModelScores;

use super::breakdown::Breakdown;
use super::fit::{BaselineEvaluation, Grid, ModelEvaluation};
use super::splits::SplitPlan;

/// Evaluation results for one problem set and one source of human measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub disclosure: Vec<String>,
    pub human_source: String,
    pub problem_ids: Vec<String>,
    pub grid: Grid,
    pub split_plan: SplitPlan,
    pub model: Vec<ModelEvaluation>,
    pub baselines: Vec<BaselineEvaluation>,
    pub breakdown: Breakdown,
    /// Model scores at the configured (unfitted) parameters.
    pub model_scores: ModelScores,
    pub baseline_scores: Vec<BaselineScores>,
}

pub fn disclosure(human_source: &str) -> Vec<String> {
    vec![
        format!("Human measures: {human_source}."),
        "The clinical patient dataset used for the published human comparison is not distributed with this software,".into(),
        "so published human tau values are not reproducible from this output. Holders of that dataset can supply it as CSV".into(),
        "(group,problem_id,success_rate,avg_additional_moves,practice) via --human to run the full comparison.".into(),
    ]
}

fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        parts.join("  ").trim_end().to_string()
    };
    out.push_str(&line(header.to_vec()));
    out.push('\n');
    out.push_str(&line(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().iter().map(|s| s.as_str()).collect()));
    out.push('\n');
    for r in rows {
        out.push_str(&line(r.iter().map(|s| s.as_str()).collect()));
        out.push('\n');
    }
}

fn f3(v: f64) -> String {
    format!("{v:.3}")
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for line in &self.disclosure {
            let _ = writeln!(out, "# {line}");
        }
        let _ = writeln!(
            out,
            "\n{} problems, {} held-out splits (seed {}), grid {}x{}\n",
            self.problem_ids.len(),
            self.split_plan.n,
            self.split_plan.seed,
            self.grid.alphas.len(),
            self.grid.betas.len()
        );
        let mut rows = Vec::new();
        for m in &self.model {
            rows.push(vec![
                "aicon".into(),
                m.group.name().into(),
                m.measure.name().into(),
                f3(m.train_tau),
                f3(m.test_tau_mean),
                m.test_tau_mean_untied.map_or("-".into(), f3),
            ]);
        }
        for b in &self.baselines {
            rows.push(vec![
                b.baseline.clone(),
                b.group.name().into(),
                b.measure.name().into(),
                "-".into(),
                f3(b.test_tau_mean),
                "-".into(),
            ]);
        }
        out.push_str("Held-out rank agreement\n\n");
        table(&mut out, &["scorer", "group", "measure", "train_tau", "test_tau", "test_tau_untied"], &rows);
        let split = &self.breakdown.split;
        let _ = writeln!(
            out,
            "\nDifficulty breakdown (easy = mean success rate above {:.4}{})\n",
            split.cut,
            if split.degenerate { "; degenerate split, single bucket" } else { "" }
        );
        let rows: Vec<Vec<String>> = self
            .breakdown
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.scorer.clone(),
                    r.group.name().into(),
                    r.measure.name().into(),
                    r.bucket.name().into(),
                    r.pairs.to_string(),
                    f3(r.mean_tau),
                ]
            })
            .collect();
        table(&mut out, &["scorer", "group", "measure", "bucket", "pairs", "mean_tau"], &rows);
        out
    }

    /// One row per bar of a summary plot.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("scorer,group,measure,set,tau\n");
        for m in &self.model {
            let _ = writeln!(out, "aicon,{},{},train,{}", m.group.name(), m.measure.name(), m.train_tau);
            let _ = writeln!(out, "aicon,{},{},test,{}", m.group.name(), m.measure.name(), m.test_tau_mean);
        }
        for b in &self.baselines {
            let _ = writeln!(out, "{},{},{},test,{}", b.baseline, b.group.name(), b.measure.name(), b.test_tau_mean);
        }
        out
    }

    /// One row per bar of a difficulty-breakdown plot.
    pub fn breakdown_csv(&self) -> String {
        let mut out = String::from("scorer,group,measure,bucket,pairs,mean_tau,cut,degenerate\n");
        let split = &self.breakdown.split;
        for r in &self.breakdown.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.scorer,
                r.group.name(),
                r.measure.name(),
                r.bucket.name(),
                r.pairs,
                r.mean_tau,
                split.cut,
                split.degenerate
            );
        }
        out
    }

    pub fn splits_csv(&self) -> String {
        let mut out = String::from("group,measure,split,heldout_a,heldout_b,alpha,beta,train_tau,pair_tau,model_tie\n");
        for m in &self.model {
            for (k, s) in m.splits.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{k},{},{},{},{},{},{},{}",
                    m.group.name(),
                    m.measure.name(),
                    s.heldout.0,
                    s.heldout.1,
                    s.alpha,
                    s.beta,
                    s.train_tau,
                    s.pair_tau,
                    s.model_tie
                );
            }
        }
        out
    }
}

/// Per-problem model scores with both averaging conventions.
pub fn model_scores_csv(scores: &ModelScores) -> String {
    let mut out =
        String::from("problem_id,optimal_moves,runs,solved_runs,success_rate,additional_moves_imputed,additional_moves_solved_only\n");
    for p in &scores.problems {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.id,
            p.optimal_moves,
            p.runs,
            p.solved_runs,
            p.success_rate,
            p.additional_moves,
            p.additional_moves_solved.map_or(String::new(), |v| v.to_string())
        );
    }
    out
}

pub fn baseline_scores_csv(problem_ids: &[String], scores: &[BaselineScores]) -> String {
    let mut out = String::from("problem_id");
    for s in scores {
        let _ = write!(out, ",{}", s.kind.name());
    }
    out.push('\n');
    for (i, id) in problem_ids.iter().enumerate() {
        out.push_str(id);
        for s in scores {
            let _ = write!(out, ",{}", s.scores[i]);
        }
        out.push('\n');
    }
    out
}
