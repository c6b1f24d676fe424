//! The three simplification strategies.
//!
//! Each strategy reduces a snippet to at most `L` tokens (dropout in
//! expectation, the others exactly) and always preserves original token
//! order: the result is a subsequence of the input.
//!
//! * Dropout keeps each token independently with probability `L/|C|`,
//!   seeded per record so corpus order cannot change per-record results.
//! * Frequency keeps the occurrences whose corpus frequency ranks highest,
//!   ties broken by earlier position.
//! * Attention runs in two phases: statements are chosen by a 0-1 knapsack
//!   (values from min-max-scaled statement attention times statement
//!   length, weights from token counts, capacity `L` plus the longest
//!   statement), then tokens are greedily removed from the lowest-attention
//!   surviving statement until the budget holds.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::attention::{
    statement_attention, statement_attention_from_weights, CategoryAttentionTable,
    TokenAttentionDict,
};
use crate::error::{Error, Result};
use crate::statement::Snippet;

/// Which simplification strategy to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Dropout,
    Frequency,
    Attention,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dropout" => Ok(Strategy::Dropout),
            "frequency" => Ok(Strategy::Frequency),
            "attention" => Ok(Strategy::Attention),
            other => Err(format!("unknown strategy {other:?}")),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Dropout => "dropout",
            Strategy::Frequency => "frequency",
            Strategy::Attention => "attention",
        })
    }
}

/// Token budget: an absolute length or a fraction of the input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// Keep at most this many tokens.
    Tokens(usize),
    /// Keep this fraction of the input, in (0, 1].
    Relative(f64),
}

impl Target {
    /// The absolute budget for a snippet of `token_count` tokens. A
    /// relative target becomes `max(1, floor(rho * |C|))`.
    pub fn budget(self, token_count: usize) -> usize {
        match self {
            Target::Tokens(l) => l,
            Target::Relative(rho) => ((rho * token_count as f64).floor() as usize).max(1),
        }
    }

    pub fn validate(self) -> Result<()> {
        match self {
            Target::Tokens(l) if l >= 1 => Ok(()),
            Target::Relative(rho) if rho > 0.0 && rho <= 1.0 => Ok(()),
            Target::Tokens(_) => Err(Error::InvalidConfig {
                message: "target length must be at least 1".into(),
            }),
            Target::Relative(rho) => Err(Error::InvalidConfig {
                message: format!("relative length {rho} outside (0, 1]"),
            }),
        }
    }
}

/// Where the attention strategy reads raw statement attention from:
/// computed from token weights, or looked up in the per-category table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttentionSource {
    #[default]
    Token,
    Category,
}

impl std::str::FromStr for AttentionSource {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "token" => Ok(AttentionSource::Token),
            "category" => Ok(AttentionSource::Category),
            other => Err(format!("unknown attention source {other:?}")),
        }
    }
}

/// Full configuration for a pruning run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PruneConfig {
    pub strategy: Strategy,
    pub target: Target,
    /// Seed for the dropout generator; ignored by the other strategies.
    pub seed: u64,
    #[serde(default)]
    pub attention_source: AttentionSource,
    /// Keep the statement-attention ordering fixed during greedy token
    /// pruning instead of recomputing it after every removal.
    #[serde(default)]
    pub freeze_attention: bool,
    /// Shield `;` and `}` from greedy token pruning while a statement
    /// still has unprotected tokens.
    #[serde(default)]
    pub protect_delimiters: bool,
}

impl PruneConfig {
    pub fn new(strategy: Strategy, target: Target) -> Self {
        PruneConfig {
            strategy,
            target,
            seed: 0,
            attention_source: AttentionSource::Token,
            freeze_attention: false,
            protect_delimiters: false,
        }
    }

    /// Short hex digest identifying this configuration in output files.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let hash = Sha256::digest(canonical.as_bytes());
        hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// Outcome of pruning one snippet: the retained token indices (strictly
/// increasing), the statement ordinals chosen by the knapsack phase when
/// the attention strategy ran, and the relative length `|kept| / |C|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruneResult {
    pub kept: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selected_statements: Option<Vec<usize>>,
    pub relative_length: f64,
}

impl PruneResult {
    fn new(kept: Vec<usize>, selected: Option<Vec<usize>>, token_count: usize) -> Self {
        let relative_length = if token_count == 0 {
            1.0
        } else {
            kept.len() as f64 / token_count as f64
        };
        PruneResult {
            kept,
            selected_statements: selected,
            relative_length,
        }
    }

    fn keep_all(snippet: &Snippet, with_selection: bool) -> Self {
        let selected = with_selection.then(|| (0..snippet.statements.len()).collect::<Vec<_>>());
        Self::new(
            (0..snippet.token_count()).collect(),
            selected,
            snippet.token_count(),
        )
    }

    /// Texts of the retained tokens, in original order.
    pub fn kept_texts<'a>(&self, snippet: &'a Snippet) -> Vec<&'a str> {
        self.kept
            .iter()
            .map(|&i| snippet.tokens[i].text.as_str())
            .collect()
    }
}

/// Deterministic per-record generator: the stream depends only on
/// `(seed, record id)`, never on corpus position, so parallel and serial
/// runs agree.
fn record_rng(seed: u64, id: &str) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update([0x1f]);
    hasher.update(id.as_bytes());
    ChaCha8Rng::from_seed(hasher.finalize().into())
}

/// Random word dropout: keep each token independently with probability
/// `min(1, L/|C|)`. Snippets already within budget pass through unchanged.
pub fn dropout_prune(snippet: &Snippet, budget: usize, seed: u64) -> PruneResult {
    let n = snippet.token_count();
    if n <= budget {
        return PruneResult::keep_all(snippet, false);
    }
    let p = budget as f64 / n as f64;
    let mut rng = record_rng(seed, &snippet.id);
    let kept: Vec<usize> = (0..n).filter(|_| rng.random::<f64>() < p).collect();
    PruneResult::new(kept, None, n)
}

/// Frequency filtering: keep exactly `min(L, |C|)` occurrences, choosing
/// the tokens whose corpus frequency ranks highest; ties at the cut go to
/// earlier positions.
pub fn frequency_prune(snippet: &Snippet, budget: usize, dict: &TokenAttentionDict) -> PruneResult {
    let n = snippet.token_count();
    let k = budget.min(n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| {
        (
            std::cmp::Reverse(dict.frequency(&snippet.tokens[i].text)),
            i,
        )
    });
    let mut kept = order[..k].to_vec();
    kept.sort_unstable();
    PruneResult::new(kept, None, n)
}

/// Scale raw statement attentions into knapsack values: min-max normalize
/// over the snippet's statements, then multiply by statement length. When
/// all attentions are equal the normalization factor is 1, so values
/// reduce to statement lengths.
pub fn scale_statement_values(attentions: &[f64], lengths: &[usize]) -> Vec<f64> {
    debug_assert_eq!(attentions.len(), lengths.len());
    let min = attentions.iter().copied().fold(f64::INFINITY, f64::min);
    let max = attentions.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    attentions
        .iter()
        .zip(lengths)
        .map(|(&a, &len)| {
            let factor = if max == min {
                1.0
            } else {
                (a - min) / (max - min)
            };
            factor * len as f64
        })
        .collect()
}

/// Knapsack capacity for a budget and a longest statement: the budget
/// enlarged by the longest statement, tolerating one extra selection for
/// the token-pruning phase to trim.
pub fn knapsack_capacity(budget: usize, max_statement_len: usize) -> usize {
    budget + max_statement_len
}

/// 0-1 knapsack by dynamic programming over capacity.
///
/// Returns the item indices (ascending) of a subset maximizing total value
/// under the weight capacity. Among equal-value optima the subset that is
/// lexicographically earliest by index wins, which pins results across
/// runs and platforms. Values must be non-negative, weights positive.
pub fn knapsack_select(values: &[f64], weights: &[usize], capacity: usize) -> Vec<usize> {
    let n = values.len();
    debug_assert_eq!(n, weights.len());
    debug_assert!(values.iter().all(|v| *v >= 0.0));
    debug_assert!(weights.iter().all(|w| *w > 0));
    if n == 0 {
        return Vec::new();
    }
    let cols = capacity + 1;
    // dp[i][w]: best value using items i.. with capacity w. Suffix order
    // lets reconstruction walk the items front to back, which is what the
    // lexicographic tie-break needs.
    let mut dp = vec![0.0f64; (n + 1) * cols];
    for i in (0..n).rev() {
        let (head, tail) = dp.split_at_mut((i + 1) * cols);
        let row = &mut head[i * cols..];
        let next = &tail[..cols];
        for w in 0..cols {
            let mut best = next[w];
            if weights[i] <= w {
                let take = values[i] + next[w - weights[i]];
                if take > best {
                    best = take;
                }
            }
            row[w] = best;
        }
    }

    let mut selected = Vec::new();
    let mut w = capacity;
    for i in 0..n {
        let skip = dp[(i + 1) * cols + w];
        if weights[i] > w {
            continue;
        }
        let take = values[i] + dp[(i + 1) * cols + (w - weights[i])];
        // Strictly better: take. Tie: taking item i keeps the subset
        // lexicographically earliest unless the remainder would add
        // nothing at all, in which case stopping earlier is the smaller
        // subset.
        if take > skip || (take == skip && skip > 0.0) {
            selected.push(i);
            w -= weights[i];
        }
    }
    selected
}

/// Greedy token pruning: repeatedly locate the selected statement with the
/// lowest current attention and remove its lowest-weight token, until at
/// most `budget` tokens remain. Statement attention is recomputed after
/// every removal unless `freeze_attention` is set; a statement emptied of
/// tokens drops out of the selection. Returns the kept token indices in
/// original order.
pub fn greedy_token_prune(
    snippet: &Snippet,
    selected: &[usize],
    dict: &TokenAttentionDict,
    budget: usize,
    freeze_attention: bool,
    protect_delimiters: bool,
) -> Vec<usize> {
    let mut live: Vec<Vec<usize>> = selected
        .iter()
        .map(|&s| snippet.statements[s].range().collect())
        .collect();
    let weight_of = |i: usize| dict.weight(&snippet.tokens[i].text);
    let mut total: usize = live.iter().map(Vec::len).sum();

    let attention_of = |indices: &[usize]| {
        let weights: Vec<f64> = indices.iter().map(|&i| weight_of(i)).collect();
        statement_attention_from_weights(&weights)
    };
    let mut attn: Vec<f64> = live.iter().map(|idx| attention_of(idx)).collect();

    while total > budget {
        let mut target_stmt = usize::MAX;
        let mut min_attn = f64::INFINITY;
        for (s, indices) in live.iter().enumerate() {
            if !indices.is_empty() && attn[s] < min_attn {
                min_attn = attn[s];
                target_stmt = s;
            }
        }
        if target_stmt == usize::MAX {
            break; // nothing left to remove
        }

        let indices = &mut live[target_stmt];
        let protected = |i: usize| matches!(snippet.tokens[i].text.as_str(), ";" | "}");
        let candidates: Vec<usize> = if protect_delimiters {
            let unprotected: Vec<usize> =
                indices.iter().copied().filter(|&i| !protected(i)).collect();
            if unprotected.is_empty() {
                indices.clone()
            } else {
                unprotected
            }
        } else {
            indices.clone()
        };
        let victim = candidates
            .iter()
            .copied()
            .min_by(|&a, &b| {
                weight_of(a)
                    .partial_cmp(&weight_of(b))
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(a.cmp(&b))
            })
            .expect("non-empty statement");
        indices.retain(|&i| i != victim);
        total -= 1;

        if indices.is_empty() {
            attn[target_stmt] = f64::INFINITY;
        } else if !freeze_attention {
            attn[target_stmt] = attention_of(indices);
        }
    }

    let mut kept: Vec<usize> = live.into_iter().flatten().collect();
    kept.sort_unstable();
    kept
}

/// Which phases of the attention strategy to run. `Both` is the full
/// algorithm; the single-phase modes exist for ablation sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttentionPhases {
    #[default]
    Both,
    StatementsOnly,
    TokensOnly,
}

/// Attention-based pruning: statement selection by knapsack, then greedy
/// token pruning down to the budget. Snippets already within budget pass
/// through unchanged.
pub fn attention_prune(
    snippet: &Snippet,
    dict: &TokenAttentionDict,
    table: Option<&CategoryAttentionTable>,
    budget: usize,
    source: AttentionSource,
    freeze_attention: bool,
    protect_delimiters: bool,
) -> PruneResult {
    attention_prune_phases(
        snippet,
        dict,
        table,
        budget,
        source,
        freeze_attention,
        protect_delimiters,
        AttentionPhases::Both,
    )
}

#[allow(clippy::too_many_arguments)]
pub fn attention_prune_phases(
    snippet: &Snippet,
    dict: &TokenAttentionDict,
    table: Option<&CategoryAttentionTable>,
    budget: usize,
    source: AttentionSource,
    freeze_attention: bool,
    protect_delimiters: bool,
    phases: AttentionPhases,
) -> PruneResult {
    let n = snippet.token_count();
    if n <= budget {
        return PruneResult::keep_all(snippet, true);
    }

    if phases == AttentionPhases::TokensOnly {
        // Drop the lowest-weight tokens directly until the budget holds.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            dict.weight(&snippet.tokens[b].text)
                .partial_cmp(&dict.weight(&snippet.tokens[a].text))
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        let mut kept = order[..budget.min(n)].to_vec();
        kept.sort_unstable();
        return PruneResult::new(kept, None, n);
    }

    let lengths: Vec<usize> = snippet.statements.iter().map(|s| s.len()).collect();
    let raw: Vec<f64> = snippet
        .statements
        .iter()
        .map(|s| {
            let token_derived = || statement_attention(&snippet.tokens[s.range()], dict);
            match source {
                AttentionSource::Token => token_derived(),
                // Statements of a category absent from the table (rare
                // categories are excluded at build time) fall back to the
                // token-derived value.
                AttentionSource::Category => table
                    .and_then(|t| t.get(s.category))
                    .unwrap_or_else(token_derived),
            }
        })
        .collect();
    let values = scale_statement_values(&raw, &lengths);
    let capacity = knapsack_capacity(budget, lengths.iter().copied().max().unwrap_or(0));
    let selected = knapsack_select(&values, &lengths, capacity);

    let kept = match phases {
        AttentionPhases::StatementsOnly => {
            let mut kept: Vec<usize> = selected
                .iter()
                .flat_map(|&s| snippet.statements[s].range())
                .collect();
            kept.sort_unstable();
            kept
        }
        _ => greedy_token_prune(
            snippet,
            &selected,
            dict,
            budget,
            freeze_attention,
            protect_delimiters,
        ),
    };
    PruneResult::new(kept, Some(selected), n)
}

/// One line of a pruned-output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrunedRecord {
    pub id: String,
    pub kept: Vec<usize>,
    pub tokens: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selected_statements: Option<Vec<usize>>,
    pub relative_length: f64,
    pub strategy: Strategy,
    pub config_digest: String,
}

impl PrunedRecord {
    pub fn new(snippet: &Snippet, result: &PruneResult, config: &PruneConfig) -> Self {
        PrunedRecord {
            id: snippet.id.clone(),
            kept: result.kept.clone(),
            tokens: result
                .kept
                .iter()
                .map(|&i| snippet.tokens[i].text.clone())
                .collect(),
            selected_statements: result.selected_statements.clone(),
            relative_length: result.relative_length,
            strategy: config.strategy,
            config_digest: config.digest(),
        }
    }
}

/// A configured pruning run over immutable dictionaries.
pub struct Pruner<'a> {
    pub config: PruneConfig,
    pub dict: Option<&'a TokenAttentionDict>,
    pub table: Option<&'a CategoryAttentionTable>,
}

impl<'a> Pruner<'a> {
    pub fn new(config: PruneConfig) -> Self {
        Pruner {
            config,
            dict: None,
            table: None,
        }
    }

    pub fn with_dict(mut self, dict: &'a TokenAttentionDict) -> Self {
        self.dict = Some(dict);
        self
    }

    pub fn with_table(mut self, table: &'a CategoryAttentionTable) -> Self {
        self.table = Some(table);
        self
    }

    /// Check that the dictionaries the configured strategy needs are
    /// present.
    pub fn validate(&self) -> Result<()> {
        self.config.target.validate()?;
        match self.config.strategy {
            Strategy::Dropout => Ok(()),
            Strategy::Frequency => {
                if self.dict.is_none() {
                    return Err(Error::MissingDictionary {
                        strategy: "frequency",
                        what: "a token dictionary",
                    });
                }
                Ok(())
            }
            Strategy::Attention => {
                if self.dict.is_none() {
                    return Err(Error::MissingDictionary {
                        strategy: "attention",
                        what: "a token dictionary",
                    });
                }
                if self.table.is_none() {
                    return Err(Error::MissingDictionary {
                        strategy: "attention",
                        what: "a category attention table",
                    });
                }
                Ok(())
            }
        }
    }

    pub fn prune(&self, snippet: &Snippet) -> Result<PruneResult> {
        self.prune_phases(snippet, AttentionPhases::Both)
    }

    pub fn prune_phases(&self, snippet: &Snippet, phases: AttentionPhases) -> Result<PruneResult> {
        self.validate()?;
        let budget = self.config.target.budget(snippet.token_count());
        Ok(match self.config.strategy {
            Strategy::Dropout => dropout_prune(snippet, budget, self.config.seed),
            Strategy::Frequency => frequency_prune(snippet, budget, self.dict.expect("validated")),
            Strategy::Attention => attention_prune_phases(
                snippet,
                self.dict.expect("validated"),
                self.table,
                budget,
                self.config.attention_source,
                self.config.freeze_attention,
                self.config.protect_delimiters,
                phases,
            ),
        })
    }
}
