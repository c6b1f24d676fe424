//! End-to-end pipeline tests through the real binary: file formats,
//! strictness, exit codes, and flag/environment handling.

mod common;

use std::path::Path;
use std::process::{Command, Output};

use codetrim::attention::{write_exports, CategoryAttentionTable, TokenAttentionDict};
use codetrim::pruning::PrunedRecord;
use codetrim::statement::read_snippet_cache;

use common::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_codetrim"))
}

fn ok(output: &Output) -> &Output {
    assert!(
        output.status.success(),
        "expected success, stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

fn read_pruned(path: &Path) -> Vec<PrunedRecord> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|line| serde_json::from_str(line).unwrap())
        .collect()
}

#[test]
fn full_pipeline_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");

    let parse = bin()
        .args(["parse", "--input"])
        .arg(corpus_path())
        .arg("--output")
        .arg(&cache)
        .arg("--strict")
        .output()
        .unwrap();
    ok(&parse);
    let stdout = String::from_utf8_lossy(&parse.stdout);
    assert!(
        stdout.contains("statements by category"),
        "stdout: {stdout}"
    );

    let snippets = read_snippet_cache(&cache).unwrap();
    assert_eq!(snippets.len(), 19);

    // Function invocations outnumber method signatures on the Java side of
    // the fixture corpus, mirroring the expected class ordering.
    let mut invocations = 0u32;
    let mut signatures = 0u32;
    for snippet in snippets
        .iter()
        .filter(|s| s.language == codetrim::lexer::Language::Java)
    {
        for statement in &snippet.statements {
            match statement.category {
                codetrim::statement::StatementCategory::FunctionInvocation => invocations += 1,
                codetrim::statement::StatementCategory::MethodSignature => signatures += 1,
                _ => {}
            }
        }
    }
    assert!(
        invocations >= signatures,
        "{invocations} invocations vs {signatures} signatures"
    );

    // Parsing again produces a byte-identical cache.
    let cache2 = dir.path().join("cache2.jsonl");
    ok(&bin()
        .args(["parse", "--input"])
        .arg(corpus_path())
        .arg("--output")
        .arg(&cache2)
        .output()
        .unwrap());
    assert_eq!(
        std::fs::read(&cache).unwrap(),
        std::fs::read(&cache2).unwrap()
    );

    // Dictionary build from planted exports.
    let exports_path = dir.path().join("exports.jsonl");
    let exports: Vec<_> = snippets.iter().map(planted_export).collect();
    write_exports(&exports_path, &exports).unwrap();
    let dict_path = dir.path().join("dict.json");
    let table_path = dir.path().join("table.json");
    ok(&bin()
        .args(["build-dict", "--exports"])
        .arg(&exports_path)
        .arg("--cache")
        .arg(&cache)
        .arg("--dict")
        .arg(&dict_path)
        .arg("--category-table")
        .arg(&table_path)
        .args(["--min-count", "1", "--strict"])
        .output()
        .unwrap());

    let dict = TokenAttentionDict::from_file(&dict_path).unwrap();
    assert!(dict.len() > 50);
    let table = CategoryAttentionTable::from_file(&table_path).unwrap();
    assert!(!table.entries.is_empty());
    // Every token in the dictionary carries the planted mean.
    for (text, stats) in &dict.entries {
        let planted: f64 = planted_weight(text)
            / snippets
                .iter()
                .find_map(|s| {
                    s.tokens.iter().any(|t| &t.text == text).then(|| {
                        s.tokens
                            .iter()
                            .map(|t| planted_weight(&t.text))
                            .sum::<f64>()
                    })
                })
                .unwrap();
        assert!(
            (stats.mean - planted).abs() < 1e-9 || stats.count > 1,
            "unexpected mean for {text}"
        );
    }

    // Prune with each strategy.
    for strategy in ["dropout", "frequency", "attention"] {
        let out = dir.path().join(format!("pruned_{strategy}.jsonl"));
        let summary_path = dir.path().join(format!("summary_{strategy}.json"));
        ok(&bin()
            .args(["prune", "--cache"])
            .arg(&cache)
            .arg("--output")
            .arg(&out)
            .args(["--strategy", strategy, "--relative-length", "0.6"])
            .arg("--dict")
            .arg(&dict_path)
            .arg("--category-table")
            .arg(&table_path)
            .arg("--summary")
            .arg(&summary_path)
            .output()
            .unwrap());
        let records = read_pruned(&out);
        assert_eq!(records.len(), snippets.len());
        for (record, snippet) in records.iter().zip(&snippets) {
            assert_eq!(record.id, snippet.id);
            assert!(record.kept.windows(2).all(|w| w[0] < w[1]));
            assert_eq!(record.kept.len(), record.tokens.len());
            assert!(!record.config_digest.is_empty());
            for (&idx, text) in record.kept.iter().zip(&record.tokens) {
                assert_eq!(&snippet.tokens[idx].text, text);
            }
        }
        assert!(summary_path.exists());
    }

    // Ranked stats render from the dictionary.
    let stats = ok(&bin()
        .args(["stats", "--dict"])
        .arg(&dict_path)
        .arg("--category-table")
        .arg(&table_path)
        .args(["--top", "5"])
        .output()
        .unwrap())
    .stdout
    .clone();
    let stats = String::from_utf8_lossy(&stats);
    assert!(stats.contains("top 5"), "stats output: {stats}");
    assert!(
        stats.contains("statement categories"),
        "stats output: {stats}"
    );

    // classify-stats agrees with the cache.
    let classify = ok(&bin()
        .args(["classify-stats", "--cache"])
        .arg(&cache)
        .output()
        .unwrap())
    .stdout
    .clone();
    let classify = String::from_utf8_lossy(&classify);
    assert!(classify.contains("method_signature"));
}

#[test]
fn sweep_grid_and_ablations() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    ok(&bin()
        .args(["parse", "--input"])
        .arg(corpus_path())
        .arg("--output")
        .arg(&cache)
        .output()
        .unwrap());
    let snippets = read_snippet_cache(&cache).unwrap();
    let exports: Vec<_> = snippets.iter().map(planted_export).collect();
    let exports_path = dir.path().join("exports.jsonl");
    write_exports(&exports_path, &exports).unwrap();
    let dict_path = dir.path().join("dict.json");
    let table_path = dir.path().join("table.json");
    ok(&bin()
        .args(["build-dict", "--exports"])
        .arg(&exports_path)
        .arg("--cache")
        .arg(&cache)
        .arg("--dict")
        .arg(&dict_path)
        .arg("--category-table")
        .arg(&table_path)
        .args(["--min-count", "1"])
        .output()
        .unwrap());

    let sweep_dir = dir.path().join("sweep");
    ok(&bin()
        .args(["sweep", "--cache"])
        .arg(&cache)
        .arg("--output-dir")
        .arg(&sweep_dir)
        .arg("--dict")
        .arg(&dict_path)
        .arg("--category-table")
        .arg(&table_path)
        .args(["--grid", "0.9,0.6,0.3"])
        .output()
        .unwrap());
    assert!(sweep_dir.join("sweep_summary.json").exists());

    // Kept counts shrink with the budget, per record.
    let by_rho: Vec<Vec<PrunedRecord>> = ["090", "060", "030"]
        .iter()
        .map(|tag| read_pruned(&sweep_dir.join(format!("pruned_attention_rl{tag}.jsonl"))))
        .collect();
    for ((wide, mid), tight) in by_rho[0].iter().zip(&by_rho[1]).zip(&by_rho[2]) {
        assert!(wide.kept.len() >= mid.kept.len());
        assert!(mid.kept.len() >= tight.kept.len());
    }

    // Ablated sweeps run and stay within sane bounds.
    for flag in ["--statements-only", "--tokens-only"] {
        let ab_dir = dir.path().join(format!("sweep{flag}"));
        ok(&bin()
            .args(["sweep", "--cache"])
            .arg(&cache)
            .arg("--output-dir")
            .arg(&ab_dir)
            .arg("--dict")
            .arg(&dict_path)
            .arg("--category-table")
            .arg(&table_path)
            .args(["--grid", "0.6", flag])
            .output()
            .unwrap());
        let records = read_pruned(&ab_dir.join("pruned_attention_rl060.jsonl"));
        for record in &records {
            assert!(record.kept.windows(2).all(|w| w[0] < w[1]));
        }
        if flag == "--tokens-only" {
            // Token-only pruning hits the budget exactly.
            for (record, snippet) in records.iter().zip(&snippets) {
                let budget = ((0.6 * snippet.token_count() as f64).floor() as usize).max(1);
                assert_eq!(record.kept.len(), budget.min(snippet.token_count()));
            }
        }
    }

    // Ablation flags reject non-attention strategies.
    let bad = bin()
        .args(["sweep", "--cache"])
        .arg(&cache)
        .arg("--output-dir")
        .arg(dir.path().join("bad"))
        .args(["--strategy", "dropout", "--statements-only"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn strictness_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.jsonl");
    std::fs::write(
        &corpus,
        concat!(
            r#"{"id":"good","language":"java","code":"int a = 0;"}"#,
            "\n",
            r#"{"id":"bad","language":"lisp","code":"(cons 1 2)"}"#,
            "\n",
            r#"{"id":"tail","language":"java","code":"return 1;"}"#,
            "\n",
        ),
    )
    .unwrap();
    let cache = dir.path().join("cache.jsonl");

    // Lenient: warn to stderr, keep the good records, exit 0.
    let lenient = bin()
        .args(["parse", "--input"])
        .arg(&corpus)
        .arg("--output")
        .arg(&cache)
        .output()
        .unwrap();
    ok(&lenient);
    let stderr = String::from_utf8_lossy(&lenient.stderr);
    assert!(stderr.contains("line 2"), "stderr: {stderr}");
    assert_eq!(read_snippet_cache(&cache).unwrap().len(), 2);

    // Strict: nonzero exit, message names the offending line.
    let strict = bin()
        .args(["parse", "--input"])
        .arg(&corpus)
        .arg("--output")
        .arg(dir.path().join("cache_strict.jsonl"))
        .arg("--strict")
        .output()
        .unwrap();
    assert_eq!(strict.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&strict.stderr);
    assert!(
        stderr.contains("line 2") && stderr.contains("lisp"),
        "stderr: {stderr}"
    );

    // Missing input file: input-error exit class.
    let missing = bin()
        .args(["parse", "--input"])
        .arg(dir.path().join("nope.jsonl"))
        .arg("--output")
        .arg(dir.path().join("out.jsonl"))
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));

    // Attention without dictionaries: input-error exit class.
    let no_dict = bin()
        .args(["prune", "--cache"])
        .arg(&cache)
        .arg("--output")
        .arg(dir.path().join("pruned.jsonl"))
        .args(["--strategy", "attention", "--relative-length", "0.6"])
        .output()
        .unwrap();
    assert_eq!(no_dict.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&no_dict.stderr);
    assert!(stderr.contains("token dictionary"), "stderr: {stderr}");
}

#[test]
fn build_dict_reports_mismatches_by_id() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    ok(&bin()
        .args(["parse", "--input"])
        .arg(corpus_path())
        .arg("--output")
        .arg(&cache)
        .output()
        .unwrap());
    let snippets = read_snippet_cache(&cache).unwrap();

    // Corrupt one export's token list.
    let mut exports: Vec<_> = snippets.iter().map(planted_export).collect();
    exports[3].tokens[0] = "corrupted".into();
    let exports_path = dir.path().join("exports.jsonl");
    write_exports(&exports_path, &exports).unwrap();

    let strict = bin()
        .args(["build-dict", "--exports"])
        .arg(&exports_path)
        .arg("--cache")
        .arg(&cache)
        .arg("--dict")
        .arg(dir.path().join("dict.json"))
        .arg("--category-table")
        .arg(dir.path().join("table.json"))
        .args(["--min-count", "1", "--strict"])
        .output()
        .unwrap();
    assert_eq!(strict.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&strict.stderr);
    assert!(
        stderr.contains(&exports[3].id),
        "error does not name the record id: {stderr}"
    );

    // Lenient run skips the bad record but keeps the rest.
    let lenient = bin()
        .args(["build-dict", "--exports"])
        .arg(&exports_path)
        .arg("--cache")
        .arg(&cache)
        .arg("--dict")
        .arg(dir.path().join("dict2.json"))
        .arg("--category-table")
        .arg(dir.path().join("table2.json"))
        .args(["--min-count", "1"])
        .output()
        .unwrap();
    ok(&lenient);
    let stderr = String::from_utf8_lossy(&lenient.stderr);
    assert!(stderr.contains(&exports[3].id));
}

#[test]
fn environment_variables_mirror_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    ok(&bin()
        .args(["parse", "--input"])
        .arg(corpus_path())
        .arg("--output")
        .arg(&cache)
        .output()
        .unwrap());

    let via_flag = dir.path().join("flag.jsonl");
    ok(&bin()
        .args(["prune", "--cache"])
        .arg(&cache)
        .arg("--output")
        .arg(&via_flag)
        .args([
            "--strategy",
            "dropout",
            "--relative-length",
            "0.6",
            "--seed",
            "99",
        ])
        .output()
        .unwrap());

    let via_env = dir.path().join("env.jsonl");
    ok(&bin()
        .env("CODETRIM_SEED", "99")
        .args(["prune", "--cache"])
        .arg(&cache)
        .arg("--output")
        .arg(&via_env)
        .args(["--strategy", "dropout", "--relative-length", "0.6"])
        .output()
        .unwrap());

    assert_eq!(
        std::fs::read(&via_flag).unwrap(),
        std::fs::read(&via_env).unwrap()
    );

    // Flags win over the environment.
    let flag_wins = dir.path().join("flagwins.jsonl");
    ok(&bin()
        .env("CODETRIM_SEED", "1234")
        .args(["prune", "--cache"])
        .arg(&cache)
        .arg("--output")
        .arg(&flag_wins)
        .args([
            "--strategy",
            "dropout",
            "--relative-length",
            "0.6",
            "--seed",
            "99",
        ])
        .output()
        .unwrap());
    assert_eq!(
        std::fs::read(&via_flag).unwrap(),
        std::fs::read(&flag_wins).unwrap()
    );
}
