//! Relative length and corpus-level run summaries.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pruning::{PruneResult, Strategy};
use crate::statement::{Snippet, StatementCategory};

/// Relative length: kept tokens over original tokens. Errors when the
/// original count is zero.
pub fn relative_length(before: usize, after: usize) -> Result<f64> {
    if before == 0 {
        return Err(Error::EmptyInput {
            message: "relative length of an empty snippet".into(),
        });
    }
    debug_assert!(after <= before);
    Ok(after as f64 / before as f64)
}

/// Aggregates over one pruning run.
///
/// Two relative-length aggregations are reported: `mean_rl_macro` averages
/// the per-record ratios, `mean_rl_micro` is the token-weighted ratio
/// recomputed from the totals. Per-category retention is the fraction of
/// statements of each category that survived with at least one token, and
/// is filled only for runs that select statements (the attention strategy).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub strategy: Strategy,
    pub records: u64,
    pub tokens_before: u64,
    pub tokens_after: u64,
    pub mean_rl_macro: f64,
    pub mean_rl_micro: f64,
    pub category_retention: BTreeMap<StatementCategory, f64>,
    pub wall_time_ms: u64,
}

impl RunSummary {
    /// Human-readable table.
    pub fn render(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "strategy        {}", self.strategy);
        let _ = writeln!(out, "records         {}", self.records);
        let _ = writeln!(out, "tokens before   {}", self.tokens_before);
        let _ = writeln!(out, "tokens after    {}", self.tokens_after);
        let _ = writeln!(out, "mean RL (macro) {:.4}", self.mean_rl_macro);
        let _ = writeln!(out, "mean RL (micro) {:.4}", self.mean_rl_micro);
        let _ = writeln!(out, "wall time       {} ms", self.wall_time_ms);
        if !self.category_retention.is_empty() {
            let _ = writeln!(out, "statement retention by category:");
            let mut rows: Vec<(StatementCategory, f64)> = self
                .category_retention
                .iter()
                .map(|(k, v)| (*k, *v))
                .collect();
            rows.sort_by(|a, b| {
                b.1.partial_cmp(&a.1)
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then_with(|| a.0.cmp(&b.0))
            });
            for (cat, frac) in rows {
                let _ = writeln!(out, "  {:<22} {:.3}", cat.as_str(), frac);
            }
        }
        out
    }
}

/// Mergeable partial aggregate for [`RunSummary`]. Order of observation
/// and merge does not change the result beyond floating-point rounding.
#[derive(Debug, Default, Clone)]
pub struct SummaryBuilder {
    records: u64,
    tokens_before: u64,
    tokens_after: u64,
    rl_sum: f64,
    // category -> (statements retained, statements seen)
    categories: BTreeMap<StatementCategory, (u64, u64)>,
}

impl SummaryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fold in one pruned record.
    pub fn observe(&mut self, snippet: &Snippet, result: &PruneResult) {
        self.records += 1;
        self.tokens_before += snippet.token_count() as u64;
        self.tokens_after += result.kept.len() as u64;
        self.rl_sum += result.relative_length;

        if let Some(selected) = &result.selected_statements {
            let selected: std::collections::HashSet<usize> = selected.iter().copied().collect();
            for statement in &snippet.statements {
                let slot = self.categories.entry(statement.category).or_insert((0, 0));
                slot.1 += 1;
                let has_kept_token = selected.contains(&statement.ordinal)
                    && kept_overlaps(&result.kept, statement.start, statement.end);
                if has_kept_token {
                    slot.0 += 1;
                }
            }
        }
    }

    pub fn merge(&mut self, other: SummaryBuilder) {
        self.records += other.records;
        self.tokens_before += other.tokens_before;
        self.tokens_after += other.tokens_after;
        self.rl_sum += other.rl_sum;
        for (cat, (retained, seen)) in other.categories {
            let slot = self.categories.entry(cat).or_insert((0, 0));
            slot.0 += retained;
            slot.1 += seen;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.records == 0
    }

    /// Finish the aggregate. An empty stream is an error; use
    /// [`SummaryBuilder::finish_allow_empty`] to get a zeroed summary
    /// instead.
    pub fn finish(self, strategy: Strategy, wall_time_ms: u64) -> Result<RunSummary> {
        if self.is_empty() {
            return Err(Error::EmptyInput {
                message: "no records to summarize".into(),
            });
        }
        Ok(self.finish_allow_empty(strategy, wall_time_ms))
    }

    pub fn finish_allow_empty(self, strategy: Strategy, wall_time_ms: u64) -> RunSummary {
        let records = self.records;
        RunSummary {
            strategy,
            records,
            tokens_before: self.tokens_before,
            tokens_after: self.tokens_after,
            mean_rl_macro: if records == 0 {
                0.0
            } else {
                self.rl_sum / records as f64
            },
            mean_rl_micro: if self.tokens_before == 0 {
                0.0
            } else {
                self.tokens_after as f64 / self.tokens_before as f64
            },
            category_retention: self
                .categories
                .into_iter()
                .filter(|(_, (_, seen))| *seen > 0)
                .map(|(cat, (retained, seen))| (cat, retained as f64 / seen as f64))
                .collect(),
            wall_time_ms,
        }
    }
}

fn kept_overlaps(kept: &[usize], start: usize, end: usize) -> bool {
    // kept is sorted ascending.
    let from = kept.partition_point(|&i| i < start);
    kept.get(from).is_some_and(|&i| i < end)
}

/// Summarize a batch of (snippet, result) pairs matched by id.
pub fn summarize_run<'a>(
    pairs: impl IntoIterator<Item = (&'a Snippet, &'a PruneResult)>,
    strategy: Strategy,
    wall_time_ms: u64,
) -> Result<RunSummary> {
    let mut builder = SummaryBuilder::new();
    for (snippet, result) in pairs {
        builder.observe(snippet, result);
    }
    builder.finish(strategy, wall_time_ms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::Language;

    fn result_keeping(snippet: &Snippet, kept: Vec<usize>) -> PruneResult {
        let n = snippet.token_count();
        PruneResult {
            relative_length: kept.len() as f64 / n as f64,
            selected_statements: Some((0..snippet.statements.len()).collect()),
            kept,
        }
    }

    #[test]
    fn relative_length_values() {
        assert_eq!(relative_length(100, 60).unwrap(), 0.60);
        let rl = relative_length(118, 60).unwrap();
        assert_eq!((rl * 10_000.0).round(), 5085.0);
        assert_eq!(relative_length(7, 7).unwrap(), 1.0);
        assert!(relative_length(0, 0).is_err());
    }

    #[test]
    fn macro_mean_averages_records() {
        let a = Snippet::parse("a", Language::Java, "f(); g(); h(); k();").unwrap();
        let b = Snippet::parse("b", Language::Java, "x(); y();").unwrap();
        let na = a.token_count();
        let nb = b.token_count();
        let ra = result_keeping(&a, (0..na / 2).collect());
        let rb = result_keeping(&b, (0..(nb * 7 / 10)).collect());
        let summary = summarize_run([(&a, &ra), (&b, &rb)], Strategy::Frequency, 0).unwrap();
        let want = (ra.relative_length + rb.relative_length) / 2.0;
        assert!((summary.mean_rl_macro - want).abs() < 1e-12);
        let micro = (ra.kept.len() + rb.kept.len()) as f64 / (na + nb) as f64;
        assert!((summary.mean_rl_micro - micro).abs() < 1e-12);
    }

    #[test]
    fn empty_stream_errors_unless_allowed() {
        let builder = SummaryBuilder::new();
        assert!(builder.clone().finish(Strategy::Dropout, 0).is_err());
        let summary = builder.finish_allow_empty(Strategy::Dropout, 0);
        assert_eq!(summary.records, 0);
    }

    #[test]
    fn merge_is_order_free() {
        let a = Snippet::parse("a", Language::Java, "f(); g();").unwrap();
        let b = Snippet::parse("b", Language::Java, "return x;").unwrap();
        let ra = result_keeping(&a, vec![0, 1, 2]);
        let rb = result_keeping(&b, vec![0, 1]);

        let mut left = SummaryBuilder::new();
        left.observe(&a, &ra);
        let mut right = SummaryBuilder::new();
        right.observe(&b, &rb);

        let mut ab = left.clone();
        ab.merge(right.clone());
        let mut ba = right;
        ba.merge(left);

        let s1 = ab.finish(Strategy::Attention, 0).unwrap();
        let s2 = ba.finish(Strategy::Attention, 0).unwrap();
        assert_eq!(s1.records, s2.records);
        assert!((s1.mean_rl_macro - s2.mean_rl_macro).abs() < 1e-12);
        assert_eq!(s1.category_retention, s2.category_retention);
    }

    #[test]
    fn retention_counts_partial_statements() {
        let s = Snippet::parse("a", Language::Java, "int x = 0; return x;").unwrap();
        // Keep one token of the first statement, none of the second, with
        // only statement 0 selected.
        let r = PruneResult {
            kept: vec![0],
            selected_statements: Some(vec![0]),
            relative_length: 1.0 / s.token_count() as f64,
        };
        let summary = summarize_run([(&s, &r)], Strategy::Attention, 0).unwrap();
        assert_eq!(
            summary.category_retention[&StatementCategory::VariableDeclaration],
            1.0
        );
        assert_eq!(summary.category_retention[&StatementCategory::Return], 0.0);
    }
}
