//! Attention ingestion and aggregation.
//!
//! Attention arrives as data exported from an external model; this crate
//! never runs one. An export file carries, per record, either a per-token
//! `received` vector (already averaged over layers, heads, and query
//! positions) or a raw `tensor` stack that [`reduce_attention_tensor`]
//! collapses. From the exports we build two corpus-level artifacts: a
//! token dictionary (mean received weight and occurrence count per token
//! text) and a per-category statement attention table.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Lines, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexer::{Language, Token};
use crate::statement::{Snippet, StatementCategory};

/// Row-sum tolerance for ingested attention matrices.
pub const ROW_SUM_TOLERANCE: f64 = 1e-4;

/// One record of an attention export file.
///
/// `tokens` must equal the lexer output for the same record after
/// delexicalization; alignment from model subwords to these tokens is the
/// exporter's responsibility. Exactly one of `received` and `tensor` is
/// required.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttentionExportRecord {
    pub id: String,
    pub tokens: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub received: Option<Vec<f64>>,
    /// layers x heads x n x n row-stochastic matrices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor: Option<Vec<Vec<Vec<Vec<f64>>>>>,
}

impl AttentionExportRecord {
    /// The per-token received vector: taken verbatim or reduced from the
    /// tensor stack. Errors if lengths disagree with the token list or a
    /// weight is negative.
    pub fn received_vector(&self) -> Result<Vec<f64>> {
        let received = match (&self.received, &self.tensor) {
            (Some(v), _) => v.clone(),
            (None, Some(stack)) => reduce_attention_tensor(stack)?,
            (None, None) => {
                return Err(Error::MalformedRecord {
                    line: 0,
                    message: format!(
                        "record {}: neither \"received\" nor \"tensor\" present",
                        self.id
                    ),
                })
            }
        };
        if received.len() != self.tokens.len() {
            return Err(Error::LengthMismatch {
                id: self.id.clone(),
                tokens: self.tokens.len(),
                received: received.len(),
            });
        }
        if let Some(bad) = received.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::MalformedRecord {
                line: 0,
                message: format!("record {}: invalid received weight {bad}", self.id),
            });
        }
        Ok(received)
    }
}

/// Collapse a stack of per-layer, per-head attention matrices into the
/// per-token received vector.
///
/// For token `j`, the result is the mean over layers `l`, heads `h`, and
/// query rows `i` of `stack[l][h][i][j]`. Every matrix must be `n x n`
/// with non-negative entries and rows summing to 1 within
/// [`ROW_SUM_TOLERANCE`]; the output then sums to 1 within the same
/// tolerance because the mean of row-stochastic matrices is row-stochastic.
pub fn reduce_attention_tensor(stack: &[Vec<Vec<Vec<f64>>>]) -> Result<Vec<f64>> {
    if stack.is_empty() || stack[0].is_empty() {
        return Err(Error::DimensionMismatch {
            message: "empty layer or head axis".into(),
        });
    }
    let n = stack[0][0].len();
    if n == 0 {
        return Err(Error::DimensionMismatch {
            message: "zero-length token axis".into(),
        });
    }
    let mut sums = vec![0.0f64; n];
    let mut matrices = 0usize;
    for (l, layer) in stack.iter().enumerate() {
        if layer.len() != stack[0].len() {
            return Err(Error::DimensionMismatch {
                message: format!(
                    "layer {l} has {} heads, layer 0 has {}",
                    layer.len(),
                    stack[0].len()
                ),
            });
        }
        for (h, matrix) in layer.iter().enumerate() {
            if matrix.len() != n {
                return Err(Error::DimensionMismatch {
                    message: format!(
                        "matrix at layer {l} head {h} has {} rows, expected {n}",
                        matrix.len()
                    ),
                });
            }
            for (i, row) in matrix.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::DimensionMismatch {
                        message: format!(
                            "row {i} at layer {l} head {h} has {} columns, expected {n}",
                            row.len()
                        ),
                    });
                }
                let mut row_sum = 0.0;
                for (j, &a) in row.iter().enumerate() {
                    if a < 0.0 {
                        return Err(Error::DimensionMismatch {
                            message: format!(
                                "negative weight {a} at layer {l} head {h} position ({i},{j})"
                            ),
                        });
                    }
                    row_sum += a;
                    sums[j] += a;
                }
                if (row_sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                    return Err(Error::RowSumViolation {
                        row: i,
                        sum: row_sum,
                        tolerance: ROW_SUM_TOLERANCE,
                    });
                }
            }
            matrices += 1;
        }
    }
    let denom = (matrices * n) as f64;
    for s in &mut sums {
        *s /= denom;
    }
    Ok(sums)
}

/// Per-token aggregate in the dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TokenStats {
    pub mean: f64,
    pub count: u64,
}

/// Corpus-level map from token text to mean received attention.
///
/// Out-of-vocabulary lookups return `fallback_weight`, the global minimum
/// mean in the dictionary, so unknown tokens sort first for pruning.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TokenAttentionDict {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<Language>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub fallback_weight: f64,
    pub entries: BTreeMap<String, TokenStats>,
}

impl TokenAttentionDict {
    /// Mean received weight for a token text, or the fallback for OOV.
    pub fn weight(&self, text: &str) -> f64 {
        self.entries
            .get(text)
            .map(|s| s.mean)
            .unwrap_or(self.fallback_weight)
    }

    /// Corpus occurrence count for a token text; 0 for OOV.
    pub fn frequency(&self, text: &str) -> u64 {
        self.entries.get(text).map(|s| s.count).unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries ranked by descending mean weight (ties by token text), the
    /// data underlying token-importance rankings.
    pub fn ranked(&self) -> Vec<(&str, &TokenStats)> {
        let mut out: Vec<(&str, &TokenStats)> =
            self.entries.iter().map(|(k, v)| (k.as_str(), v)).collect();
        out.sort_by(|a, b| {
            b.1.mean
                .partial_cmp(&a.1.mean)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.0.cmp(b.0))
        });
        out
    }

    pub fn to_file(&self, path: impl AsRef<Path>) -> Result<()> {
        write_json(path, self)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        read_json(path)
    }
}

/// Streaming, mergeable accumulator for [`TokenAttentionDict`].
///
/// Shards built over disjoint parts of a corpus merge into the same
/// dictionary (up to floating-point rounding) as a single pass over the
/// concatenated stream.
#[derive(Debug, Default, Clone)]
pub struct DictBuilder {
    sums: BTreeMap<String, (f64, u64)>,
    language: Option<Language>,
    source: Option<String>,
}

impl DictBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_metadata(language: Option<Language>, source: Option<String>) -> Self {
        DictBuilder {
            sums: BTreeMap::new(),
            language,
            source,
        }
    }

    /// Record one observation of `text` receiving `weight`.
    pub fn observe(&mut self, text: &str, weight: f64) {
        match self.sums.entry(text.to_string()) {
            Entry::Occupied(mut e) => {
                let (sum, count) = e.get_mut();
                *sum += weight;
                *count += 1;
            }
            Entry::Vacant(e) => {
                e.insert((weight, 1));
            }
        }
    }

    /// Ingest one export record.
    pub fn observe_record(&mut self, record: &AttentionExportRecord) -> Result<()> {
        let received = record.received_vector()?;
        for (text, weight) in record.tokens.iter().zip(received) {
            self.observe(text, weight);
        }
        Ok(())
    }

    /// Ingest one export record after checking that its token texts equal
    /// the parsed (delexicalized) tokens for the same record.
    pub fn observe_aligned(
        &mut self,
        record: &AttentionExportRecord,
        expected: &[Token],
    ) -> Result<()> {
        if record.tokens.len() != expected.len() {
            return Err(Error::LengthMismatch {
                id: record.id.clone(),
                tokens: expected.len(),
                received: record.tokens.len(),
            });
        }
        for (position, (got, want)) in record.tokens.iter().zip(expected).enumerate() {
            if *got != want.text {
                return Err(Error::TokenMismatch {
                    id: record.id.clone(),
                    position,
                    expected: want.text.clone(),
                    found: got.clone(),
                });
            }
        }
        self.observe_record(record)
    }

    /// Fold another shard into this one.
    pub fn merge(&mut self, other: DictBuilder) {
        for (text, (sum, count)) in other.sums {
            match self.sums.entry(text) {
                Entry::Occupied(mut e) => {
                    let (s, c) = e.get_mut();
                    *s += sum;
                    *c += count;
                }
                Entry::Vacant(e) => {
                    e.insert((sum, count));
                }
            }
        }
    }

    pub fn finish(self) -> TokenAttentionDict {
        let entries: BTreeMap<String, TokenStats> = self
            .sums
            .into_iter()
            .map(|(text, (sum, count))| {
                (
                    text,
                    TokenStats {
                        mean: sum / count as f64,
                        count,
                    },
                )
            })
            .collect();
        let fallback_weight = entries
            .values()
            .map(|s| s.mean)
            .fold(f64::INFINITY, f64::min);
        TokenAttentionDict {
            language: self.language,
            source: self.source,
            fallback_weight: if fallback_weight.is_finite() {
                fallback_weight
            } else {
                0.0
            },
            entries,
        }
    }
}

/// Build a token dictionary from an export record stream.
pub fn build_token_dict<I>(records: I) -> Result<TokenAttentionDict>
where
    I: IntoIterator<Item = Result<AttentionExportRecord>>,
{
    let mut builder = DictBuilder::new();
    for record in records {
        builder.observe_record(&record?)?;
    }
    Ok(builder.finish())
}

/// Softmax over a weight slice. Stable under shifts; uniform for equal
/// inputs; sums to 1.
pub fn softmax(weights: &[f64]) -> Vec<f64> {
    let max = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = weights.iter().map(|w| (w - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

/// Statement attention from raw per-token weights: the softmax-weighted
/// mean of the weights themselves. The result always lies between the
/// smallest and largest input weight and is invariant to token order.
pub fn statement_attention_from_weights(weights: &[f64]) -> f64 {
    let w = softmax(weights);
    weights.iter().zip(w).map(|(a, wt)| a * wt).sum()
}

/// Statement attention for a token slice under a dictionary: dictionary
/// weights (fallback for OOV) combined by [`statement_attention_from_weights`].
pub fn statement_attention(tokens: &[Token], dict: &TokenAttentionDict) -> f64 {
    let weights: Vec<f64> = tokens.iter().map(|t| dict.weight(&t.text)).collect();
    statement_attention_from_weights(&weights)
}

/// Default observation floor below which a category is left out of the
/// attention table.
pub const DEFAULT_CATEGORY_MIN_COUNT: u64 = 50;

/// Mean statement attention per category, over a classified corpus.
/// Categories observed fewer than `min_count` times are absent.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CategoryAttentionTable {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<Language>,
    pub min_count: u64,
    pub entries: BTreeMap<StatementCategory, f64>,
}

impl CategoryAttentionTable {
    pub fn get(&self, category: StatementCategory) -> Option<f64> {
        self.entries.get(&category).copied()
    }

    /// Categories ranked by descending mean attention.
    pub fn ranked(&self) -> Vec<(StatementCategory, f64)> {
        let mut out: Vec<(StatementCategory, f64)> =
            self.entries.iter().map(|(k, v)| (*k, *v)).collect();
        out.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.0.cmp(&b.0))
        });
        out
    }

    pub fn to_file(&self, path: impl AsRef<Path>) -> Result<()> {
        write_json(path, self)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        read_json(path)
    }
}

/// Accumulator for [`CategoryAttentionTable`], mergeable like [`DictBuilder`].
#[derive(Debug, Default, Clone)]
pub struct CategoryTableBuilder {
    sums: BTreeMap<StatementCategory, (f64, u64)>,
    language: Option<Language>,
}

impl CategoryTableBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_language(language: Language) -> Self {
        CategoryTableBuilder {
            sums: BTreeMap::new(),
            language: Some(language),
        }
    }

    pub fn observe_snippet(&mut self, snippet: &Snippet, dict: &TokenAttentionDict) {
        for statement in &snippet.statements {
            let a = statement_attention(&snippet.tokens[statement.range()], dict);
            let slot = self.sums.entry(statement.category).or_insert((0.0, 0));
            slot.0 += a;
            slot.1 += 1;
        }
    }

    pub fn merge(&mut self, other: CategoryTableBuilder) {
        for (cat, (sum, count)) in other.sums {
            let slot = self.sums.entry(cat).or_insert((0.0, 0));
            slot.0 += sum;
            slot.1 += count;
        }
    }

    pub fn finish(self, min_count: u64) -> CategoryAttentionTable {
        let entries = self
            .sums
            .into_iter()
            .filter(|(_, (_, count))| *count >= min_count)
            .map(|(cat, (sum, count))| (cat, sum / count as f64))
            .collect();
        CategoryAttentionTable {
            language: self.language,
            min_count,
            entries,
        }
    }
}

/// Build the per-category table from classified snippets.
pub fn build_category_table<'a>(
    snippets: impl IntoIterator<Item = &'a Snippet>,
    dict: &TokenAttentionDict,
    min_count: u64,
) -> CategoryAttentionTable {
    let mut builder = CategoryTableBuilder::new();
    for snippet in snippets {
        builder.observe_snippet(snippet, dict);
    }
    builder.finish(min_count)
}

/// Streaming reader over an attention export file.
pub struct ExportReader<R> {
    lines: Lines<BufReader<R>>,
    line_no: usize,
}

impl ExportReader<File> {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(ExportReader {
            lines: BufReader::new(file).lines(),
            line_no: 0,
        })
    }
}

impl<R: Read> ExportReader<R> {
    pub fn new(reader: R) -> Self {
        ExportReader {
            lines: BufReader::new(reader).lines(),
            line_no: 0,
        }
    }
}

impl<R: Read> Iterator for ExportReader<R> {
    type Item = Result<AttentionExportRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(line) => line,
                Err(e) => {
                    return Some(Err(Error::Io {
                        path: "<export>".into(),
                        source: e,
                    }))
                }
            };
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            return Some(
                serde_json::from_str(&line).map_err(|e| Error::MalformedRecord {
                    line: self.line_no,
                    message: e.to_string(),
                }),
            );
        }
    }
}

/// Write export records, one JSON record per line.
pub fn write_exports<'a>(
    path: impl AsRef<Path>,
    records: impl IntoIterator<Item = &'a AttentionExportRecord>,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = BufWriter::new(file);
    for record in records {
        let line = serde_json::to_string(record).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        writeln!(out, "{line}").map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    out.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut out, value).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    out.write_all(b"\n")
        .and_then(|_| out.flush())
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn read_json<T: for<'de> Deserialize<'de>>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_reader(BufReader::new(file)).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}
