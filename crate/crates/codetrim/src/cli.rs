//! Command-line pipeline: parse corpora, build dictionaries, prune, report.
//!
//! Every flag can also be set through an environment variable with the
//! `CODETRIM_` prefix (`CODETRIM_JOBS`, `CODETRIM_STRICT`, ...); explicit
//! flags win. All randomness funnels through `--seed`.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::attention::{
    build_category_table, AttentionExportRecord, CategoryAttentionTable, DictBuilder, ExportReader,
    TokenAttentionDict, DEFAULT_CATEGORY_MIN_COUNT,
};
use crate::corpus::CorpusReader;
use crate::error::{Error, Result};
use crate::lexer::Language;
use crate::metrics::{RunSummary, SummaryBuilder};
use crate::pruning::{
    AttentionPhases, AttentionSource, PruneConfig, PrunedRecord, Pruner, Strategy, Target,
};
use crate::statement::{read_snippet_cache, write_snippet_cache, Snippet, StatementCategory};

#[derive(Debug, Parser)]
#[command(
    name = "codetrim",
    about = "Prune Java/Python code to a token budget",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for record-parallel stages (default: all cores).
    #[arg(long, global = true, env = "CODETRIM_JOBS")]
    pub jobs: Option<usize>,

    /// Fail on the first malformed or mismatched record instead of
    /// skipping it with a warning.
    #[arg(long, global = true, env = "CODETRIM_STRICT")]
    pub strict: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tokenize, delexicalize, split, and classify a corpus into a
    /// snippet cache; prints a category histogram.
    Parse {
        /// Corpus file: one JSON record per line with id, language, code.
        #[arg(long, env = "CODETRIM_INPUT")]
        input: PathBuf,
        /// Snippet cache to write.
        #[arg(long, env = "CODETRIM_OUTPUT")]
        output: PathBuf,
        /// Only process records of this language.
        #[arg(long, env = "CODETRIM_LANGUAGE")]
        language: Option<Language>,
    },
    /// Build the token dictionary and the category attention table from an
    /// attention export aligned with a snippet cache.
    BuildDict {
        /// Attention export file (JSON lines with id, tokens,
        /// received|tensor).
        #[arg(long)]
        exports: PathBuf,
        /// Snippet cache produced by `parse`.
        #[arg(long)]
        cache: PathBuf,
        /// Token dictionary file to write.
        #[arg(long)]
        dict: PathBuf,
        /// Category attention table file to write.
        #[arg(long)]
        category_table: PathBuf,
        /// Categories observed fewer times than this stay out of the table.
        #[arg(long, default_value_t = DEFAULT_CATEGORY_MIN_COUNT)]
        min_count: u64,
    },
    /// Statement-category histogram of a snippet cache.
    ClassifyStats {
        #[arg(long)]
        cache: PathBuf,
        /// Also write the histogram as JSON.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Prune every snippet in a cache to the target budget.
    Prune(PruneArgs),
    /// Ranked attention data: top/bottom tokens and the category table.
    Stats {
        #[arg(long)]
        dict: PathBuf,
        #[arg(long)]
        category_table: Option<PathBuf>,
        /// How many tokens from each end of the ranking to print.
        #[arg(long, default_value_t = 25)]
        top: usize,
        /// Also write the full ranking as JSON.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a relative-length grid (optionally ablated) and report
    /// per-budget aggregates.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct PruneArgs {
    /// Snippet cache produced by `parse`.
    #[arg(long, env = "CODETRIM_CACHE")]
    pub cache: PathBuf,
    /// Pruned-output file to write.
    #[arg(long, env = "CODETRIM_OUTPUT")]
    pub output: PathBuf,
    #[arg(long, env = "CODETRIM_STRATEGY")]
    pub strategy: Strategy,
    /// Absolute token budget.
    #[arg(long, conflicts_with = "relative_length")]
    pub target_length: Option<usize>,
    /// Relative budget in (0, 1].
    #[arg(long)]
    pub relative_length: Option<f64>,
    /// Seed for the dropout generator.
    #[arg(long, default_value_t = 0, env = "CODETRIM_SEED")]
    pub seed: u64,
    /// Token dictionary (frequency and attention strategies).
    #[arg(long, env = "CODETRIM_DICT")]
    pub dict: Option<PathBuf>,
    /// Category attention table (attention strategy).
    #[arg(long, env = "CODETRIM_CATEGORY_TABLE")]
    pub category_table: Option<PathBuf>,
    /// Raw statement attention source for the knapsack phase.
    #[arg(long, default_value = "token")]
    pub attention_source: AttentionSource,
    /// Do not recompute statement attention during greedy token pruning.
    #[arg(long)]
    pub freeze_attention: bool,
    /// Shield ';' and '}' from greedy token pruning.
    #[arg(long)]
    pub protect_delimiters: bool,
    /// Write the run summary as JSON here as well.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub cache: PathBuf,
    /// Directory for the per-budget pruned outputs and the sweep summary.
    #[arg(long)]
    pub output_dir: PathBuf,
    #[arg(long, default_value = "attention")]
    pub strategy: Strategy,
    /// Comma-separated relative lengths, largest to smallest.
    #[arg(
        long,
        default_value = "0.9,0.8,0.7,0.6,0.5,0.4,0.3",
        value_delimiter = ','
    )]
    pub grid: Vec<f64>,
    #[arg(long, default_value_t = 0, env = "CODETRIM_SEED")]
    pub seed: u64,
    #[arg(long)]
    pub dict: Option<PathBuf>,
    #[arg(long)]
    pub category_table: Option<PathBuf>,
    #[arg(long, default_value = "token")]
    pub attention_source: AttentionSource,
    #[arg(long)]
    pub freeze_attention: bool,
    #[arg(long)]
    pub protect_delimiters: bool,
    /// Ablation: run only the knapsack statement-selection phase.
    #[arg(long, conflicts_with = "tokens_only")]
    pub statements_only: bool,
    /// Ablation: skip statement selection and drop lowest-weight tokens.
    #[arg(long)]
    pub tokens_only: bool,
}

/// Entry point used by the binary and by integration tests.
pub fn run(cli: Cli) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidConfig {
            message: format!("cannot build thread pool: {e}"),
        })?;
    let strict = cli.strict;
    pool.install(|| match cli.command {
        Command::Parse {
            input,
            output,
            language,
        } => cmd_parse(&input, &output, language, strict),
        Command::BuildDict {
            exports,
            cache,
            dict,
            category_table,
            min_count,
        } => cmd_build_dict(&exports, &cache, &dict, &category_table, min_count, strict),
        Command::ClassifyStats { cache, output } => cmd_classify_stats(&cache, output.as_deref()),
        Command::Prune(args) => cmd_prune(&args, strict).map(|_| ()),
        Command::Stats {
            dict,
            category_table,
            top,
            output,
        } => cmd_stats(&dict, category_table.as_deref(), top, output.as_deref()),
        Command::Sweep(args) => cmd_sweep(&args, strict),
    })
}

fn warn_or_fail(strict: bool, err: Error) -> Result<()> {
    if strict {
        Err(err)
    } else {
        eprintln!("warning: {err} (record skipped)");
        Ok(())
    }
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|source| Error::Io {
                path: parent.to_path_buf(),
                source,
            })?;
        }
    }
    Ok(())
}

/// Stream a corpus through lex + delexicalize + split + classify and write
/// the snippet cache. Prints the statement-category histogram.
pub fn cmd_parse(
    input: &Path,
    output: &Path,
    language: Option<Language>,
    strict: bool,
) -> Result<()> {
    let mut records = Vec::new();
    let mut seen_ids: std::collections::HashSet<String> = std::collections::HashSet::new();
    let mut reader = CorpusReader::open(input, language)?;
    while let Some(item) = reader.next() {
        match item {
            Ok(record) => {
                if !seen_ids.insert(record.id.clone()) {
                    warn_or_fail(
                        strict,
                        Error::MalformedRecord {
                            line: reader.line_number(),
                            message: format!("duplicate record id {:?}", record.id),
                        },
                    )?;
                    continue;
                }
                records.push(record);
            }
            Err(err) => warn_or_fail(strict, err)?,
        }
    }

    let parsed: Vec<Result<Snippet>> = records.par_iter().map(Snippet::from_record).collect();
    let mut snippets = Vec::with_capacity(parsed.len());
    for (record, result) in records.iter().zip(parsed) {
        match result {
            Ok(snippet) => snippets.push(snippet),
            Err(err) => warn_or_fail(
                strict,
                Error::Record {
                    id: record.id.clone(),
                    message: err.to_string(),
                },
            )?,
        }
    }

    ensure_parent(output)?;
    write_snippet_cache(output, &snippets)?;

    let histogram = category_histogram(&snippets);
    let total: u64 = histogram.values().sum();
    println!("{} records -> {}", snippets.len(), output.display());
    println!("{total} statements by category:");
    for (category, count) in ranked_histogram(&histogram) {
        println!("  {:<22} {count}", category.as_str());
    }
    Ok(())
}

fn category_histogram(snippets: &[Snippet]) -> BTreeMap<StatementCategory, u64> {
    let mut histogram = BTreeMap::new();
    for snippet in snippets {
        for statement in &snippet.statements {
            *histogram.entry(statement.category).or_insert(0u64) += 1;
        }
    }
    histogram
}

fn ranked_histogram(histogram: &BTreeMap<StatementCategory, u64>) -> Vec<(StatementCategory, u64)> {
    let mut rows: Vec<(StatementCategory, u64)> = histogram.iter().map(|(k, v)| (*k, *v)).collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows
}

/// Build the token dictionary and category table from exports + cache.
pub fn cmd_build_dict(
    exports: &Path,
    cache: &Path,
    dict_out: &Path,
    table_out: &Path,
    min_count: u64,
    strict: bool,
) -> Result<()> {
    let snippets = read_snippet_cache(cache)?;
    let by_id: HashMap<&str, &Snippet> = snippets.iter().map(|s| (s.id.as_str(), s)).collect();
    let language = snippets.first().map(|s| s.language);

    let mut export_records: Vec<AttentionExportRecord> = Vec::new();
    for item in ExportReader::open(exports)? {
        match item {
            Ok(record) => export_records.push(record),
            Err(err) => warn_or_fail(strict, err)?,
        }
    }

    // Shardable build: chunks aggregate independently and merge at the end,
    // which equals a single pass up to floating-point rounding.
    let chunk = export_records
        .len()
        .div_ceil(rayon::current_num_threads().max(1))
        .max(1);
    let shards: Vec<Result<DictBuilder>> = export_records
        .par_chunks(chunk)
        .map(|records| {
            let mut builder = DictBuilder::new();
            let mut failures: Vec<Error> = Vec::new();
            for record in records {
                let outcome = match by_id.get(record.id.as_str()) {
                    Some(snippet) => builder.observe_aligned(record, &snippet.tokens),
                    None => Err(Error::UnknownRecord {
                        id: record.id.clone(),
                    }),
                };
                if let Err(err) = outcome {
                    failures.push(err);
                }
            }
            if strict {
                if let Some(err) = failures.into_iter().next() {
                    return Err(err);
                }
            } else {
                for err in failures {
                    eprintln!("warning: {err} (record skipped)");
                }
            }
            Ok(builder)
        })
        .collect();

    let mut merged = DictBuilder::with_metadata(language, Some(exports.display().to_string()));
    for shard in shards {
        merged.merge(shard?);
    }
    let dict = merged.finish();

    let table = build_category_table(&snippets, &dict, min_count);
    ensure_parent(dict_out)?;
    ensure_parent(table_out)?;
    dict.to_file(dict_out)?;
    table.to_file(table_out)?;
    println!(
        "dictionary: {} tokens (fallback {:.3e}) -> {}",
        dict.len(),
        dict.fallback_weight,
        dict_out.display()
    );
    println!(
        "category table: {} categories (min count {min_count}) -> {}",
        table.entries.len(),
        table_out.display()
    );
    Ok(())
}

/// Category histogram of an existing cache.
pub fn cmd_classify_stats(cache: &Path, output: Option<&Path>) -> Result<()> {
    let snippets = read_snippet_cache(cache)?;
    let histogram = category_histogram(&snippets);
    let rows = ranked_histogram(&histogram);
    let total: u64 = histogram.values().sum();
    println!(
        "{} snippets, {} statements by category:",
        snippets.len(),
        total
    );
    for (category, count) in &rows {
        println!(
            "  {:<22} {:>8}  {:.2}%",
            category.as_str(),
            count,
            100.0 * *count as f64 / total.max(1) as f64
        );
    }
    if let Some(path) = output {
        let as_map: BTreeMap<&str, u64> = rows.iter().map(|(c, n)| (c.as_str(), *n)).collect();
        write_json_file(path, &as_map)?;
    }
    Ok(())
}

/// Apply one strategy to every snippet in the cache. Returns the summary.
pub fn cmd_prune(args: &PruneArgs, strict: bool) -> Result<RunSummary> {
    let started = Instant::now();
    let target = match (args.target_length, args.relative_length) {
        (Some(l), None) => Target::Tokens(l),
        (None, Some(rho)) => Target::Relative(rho),
        (None, None) => {
            return Err(Error::InvalidConfig {
                message: "one of --target-length or --relative-length is required".into(),
            })
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let mut config = PruneConfig::new(args.strategy, target);
    config.seed = args.seed;
    config.attention_source = args.attention_source;
    config.freeze_attention = args.freeze_attention;
    config.protect_delimiters = args.protect_delimiters;

    let dict = args
        .dict
        .as_ref()
        .map(TokenAttentionDict::from_file)
        .transpose()?;
    let table = args
        .category_table
        .as_ref()
        .map(CategoryAttentionTable::from_file)
        .transpose()?;

    let snippets = read_snippet_cache(&args.cache)?;
    let summary = prune_to_file(
        &snippets,
        &config,
        dict.as_ref(),
        table.as_ref(),
        AttentionPhases::Both,
        &args.output,
        strict,
        started,
    )?;

    if let Some(path) = &args.summary {
        write_json_file(path, &summary)?;
    }
    print!("{}", summary.render());
    Ok(summary)
}

#[allow(clippy::too_many_arguments)]
fn prune_to_file(
    snippets: &[Snippet],
    config: &PruneConfig,
    dict: Option<&TokenAttentionDict>,
    table: Option<&CategoryAttentionTable>,
    phases: AttentionPhases,
    output: &Path,
    strict: bool,
    started: Instant,
) -> Result<RunSummary> {
    let mut pruner = Pruner::new(config.clone());
    if let Some(d) = dict {
        pruner = pruner.with_dict(d);
    }
    if let Some(t) = table {
        pruner = pruner.with_table(t);
    }
    pruner.validate()?;
    ensure_parent(output)?;

    let results: Vec<Result<PrunedRecord>> = snippets
        .par_iter()
        .map(|snippet| {
            pruner
                .prune_phases(snippet, phases)
                .map(|result| PrunedRecord::new(snippet, &result, config))
        })
        .collect();

    let file = File::create(output).map_err(|source| Error::Io {
        path: output.to_path_buf(),
        source,
    })?;
    let mut out = BufWriter::new(file);
    let mut builder = SummaryBuilder::new();
    for (snippet, result) in snippets.iter().zip(results) {
        let record = result?;
        let line = serde_json::to_string(&record).map_err(|source| Error::Json {
            path: output.to_path_buf(),
            source,
        })?;
        writeln!(out, "{line}").map_err(|source| Error::Io {
            path: output.to_path_buf(),
            source,
        })?;
        builder.observe(
            snippet,
            &crate::pruning::PruneResult {
                kept: record.kept,
                selected_statements: record.selected_statements,
                relative_length: record.relative_length,
            },
        );
    }
    out.flush().map_err(|source| Error::Io {
        path: output.to_path_buf(),
        source,
    })?;

    let wall = started.elapsed().as_millis() as u64;
    if strict {
        builder.finish(config.strategy, wall)
    } else {
        Ok(builder.finish_allow_empty(config.strategy, wall))
    }
}

/// Ranked attention data behind token and category importance reports.
pub fn cmd_stats(
    dict_path: &Path,
    table_path: Option<&Path>,
    top: usize,
    output: Option<&Path>,
) -> Result<()> {
    let dict = TokenAttentionDict::from_file(dict_path)?;
    let ranked = dict.ranked();
    println!(
        "{} tokens; top {top} by mean received attention:",
        ranked.len()
    );
    for (text, stats) in ranked.iter().take(top) {
        println!("  {:<24} {:.4e}  (count {})", text, stats.mean, stats.count);
    }
    println!("bottom {top}:");
    for (text, stats) in ranked.iter().rev().take(top) {
        println!("  {:<24} {:.4e}  (count {})", text, stats.mean, stats.count);
    }
    if let Some(path) = table_path {
        let table = CategoryAttentionTable::from_file(path)?;
        println!("statement categories by mean attention:");
        for (category, mean) in table.ranked() {
            println!("  {:<22} {:.4e}", category.as_str(), mean);
        }
    }
    if let Some(path) = output {
        #[derive(serde::Serialize)]
        struct RankedOut<'a> {
            tokens: Vec<(&'a str, f64, u64)>,
        }
        let payload = RankedOut {
            tokens: ranked.iter().map(|(t, s)| (*t, s.mean, s.count)).collect(),
        };
        write_json_file(path, &payload)?;
    }
    Ok(())
}

/// Relative-length grid runs, optionally ablated to a single phase.
pub fn cmd_sweep(args: &SweepArgs, strict: bool) -> Result<()> {
    if args.grid.is_empty() {
        return Err(Error::InvalidConfig {
            message: "empty sweep grid".into(),
        });
    }
    std::fs::create_dir_all(&args.output_dir).map_err(|source| Error::Io {
        path: args.output_dir.clone(),
        source,
    })?;
    let phases = if args.statements_only {
        AttentionPhases::StatementsOnly
    } else if args.tokens_only {
        AttentionPhases::TokensOnly
    } else {
        AttentionPhases::Both
    };
    if phases != AttentionPhases::Both && args.strategy != Strategy::Attention {
        return Err(Error::InvalidConfig {
            message: "ablation flags apply to the attention strategy only".into(),
        });
    }

    let dict = args
        .dict
        .as_ref()
        .map(TokenAttentionDict::from_file)
        .transpose()?;
    let table = args
        .category_table
        .as_ref()
        .map(CategoryAttentionTable::from_file)
        .transpose()?;
    let snippets = read_snippet_cache(&args.cache)?;

    let mut rows: Vec<(f64, RunSummary)> = Vec::new();
    for &rho in &args.grid {
        let started = Instant::now();
        let mut config = PruneConfig::new(args.strategy, Target::Relative(rho));
        config.seed = args.seed;
        config.attention_source = args.attention_source;
        config.freeze_attention = args.freeze_attention;
        config.protect_delimiters = args.protect_delimiters;
        let output = args.output_dir.join(format!(
            "pruned_{}_rl{:03}.jsonl",
            args.strategy,
            (rho * 100.0).round() as u32
        ));
        let summary = prune_to_file(
            &snippets,
            &config,
            dict.as_ref(),
            table.as_ref(),
            phases,
            &output,
            strict,
            started,
        )?;
        rows.push((rho, summary));
    }

    println!("rho    mean RL (macro)  mean RL (micro)  tokens kept");
    for (rho, summary) in &rows {
        println!(
            "{rho:<5.2}  {:<15.4}  {:<15.4}  {}",
            summary.mean_rl_macro, summary.mean_rl_micro, summary.tokens_after
        );
    }
    let summary_path = args.output_dir.join("sweep_summary.json");
    let payload: Vec<serde_json::Value> = rows
        .iter()
        .map(|(rho, s)| {
            serde_json::json!({
                "relative_length": rho,
                "summary": s,
            })
        })
        .collect();
    write_json_file(&summary_path, &payload)?;
    Ok(())
}

fn write_json_file<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    ensure_parent(path)?;
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
