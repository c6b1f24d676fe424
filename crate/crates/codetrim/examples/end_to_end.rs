//! The whole file-based pipeline in one run: write a corpus, parse it into
//! a snippet cache, ingest attention exports, build both dictionaries,
//! prune with every strategy, and print the summaries.
//!
//! This drives the same functions the `codetrim` binary uses, so the
//! files it leaves behind match the CLI formats exactly.
//!
//! Usage:
//!   cargo run --example end_to_end

use std::fs;

use codetrim::attention::{write_exports, AttentionExportRecord};
use codetrim::cli::{cmd_build_dict, cmd_parse, cmd_prune, PruneArgs};
use codetrim::pruning::{AttentionSource, Strategy};
use codetrim::statement::read_snippet_cache;

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let corpus = dir.path().join("corpus.jsonl");
    fs::write(
        &corpus,
        concat!(
            r#"{"id":"a","language":"java","code":"public int add(int a, int b) { int sum = a + b; return sum; }","comment":"Adds."}"#,
            "\n",
            r#"{"id":"b","language":"java","code":"public void run() { init(); for (int i = 0; i < 3; i++) { step(i); } done(); }"}"#,
            "\n",
            r#"{"id":"c","language":"python","code":"def fetch(url): resp = requests.get(url) return resp"}"#,
            "\n",
        ),
    )?;

    // 1. parse: corpus -> snippet cache (+ histogram on stdout).
    let cache = dir.path().join("cache.jsonl");
    cmd_parse(&corpus, &cache, None, true)?;

    // 2. exports would normally come from a model run; here we synthesize
    //    received vectors favoring keywords.
    let snippets = read_snippet_cache(&cache)?;
    let exports: Vec<AttentionExportRecord> = snippets
        .iter()
        .map(|snippet| {
            let raw: Vec<f64> = snippet
                .tokens
                .iter()
                .map(|t| match t.kind {
                    codetrim::lexer::TokenKind::Keyword => 0.03,
                    codetrim::lexer::TokenKind::Identifier => 0.01,
                    _ => 0.002,
                })
                .collect();
            let total: f64 = raw.iter().sum();
            AttentionExportRecord {
                id: snippet.id.clone(),
                tokens: snippet.tokens.iter().map(|t| t.text.clone()).collect(),
                received: Some(raw.into_iter().map(|w| w / total).collect()),
                tensor: None,
            }
        })
        .collect();
    let exports_path = dir.path().join("exports.jsonl");
    write_exports(&exports_path, &exports)?;

    // 3. build-dict: exports + cache -> token dictionary + category table.
    let dict = dir.path().join("dict.json");
    let table = dir.path().join("table.json");
    cmd_build_dict(&exports_path, &cache, &dict, &table, 1, true)?;

    // 4. prune with each strategy at 60% relative length.
    for strategy in [Strategy::Dropout, Strategy::Frequency, Strategy::Attention] {
        println!("\n=== {strategy} ===");
        let args = PruneArgs {
            cache: cache.clone(),
            output: dir.path().join(format!("pruned_{strategy}.jsonl")),
            strategy,
            target_length: None,
            relative_length: Some(0.6),
            seed: 7,
            dict: Some(dict.clone()),
            category_table: Some(table.clone()),
            attention_source: AttentionSource::Token,
            freeze_attention: false,
            protect_delimiters: false,
            summary: None,
        };
        cmd_prune(&args, true)?;
    }

    println!("\nartifacts under {}:", dir.path().display());
    let mut names: Vec<String> = fs::read_dir(dir.path())?
        .map(|entry| entry.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    for name in names {
        println!("  {name}");
    }
    Ok(())
}
