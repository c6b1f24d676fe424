//! Shared test fixtures and independent oracles.
//!
//! The oracles here (exhaustive knapsack, quadruple-loop tensor reduction)
//! deliberately reimplement their targets in the most literal way possible
//! and never call into the code paths they check.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::Rng;

use codetrim::attention::{AttentionExportRecord, DictBuilder, TokenAttentionDict};
use codetrim::lexer::Language;
use codetrim::statement::Snippet;

/// Reference snippet: 118 tokens, longest statement 18 tokens.
pub const READ_FILE_CODE: &str = r#"
public static final String readFile(String fileName) throws IOException {
    String content = null;
    File file = new File(fileName);
    FileReader reader = null;
    try {
        System.out.println(fileName);
        reader = new FileReader(file);
        char[] chars = new char[(int) file.length()];
        reader.read(chars);
        content = new String(chars);
    } catch (IOException e) {
        e.printStackTrace();
    } finally {
        if (reader != null) {
            reader.close();
        }
    }
    return content;
}
"#;

/// Statement ordinals the knapsack must keep for the reference snippet
/// under the reference dictionary at budget 60 (77 tokens in total):
/// signature, file construction, try, reader setup, buffer declaration,
/// read, finally, the null check, close, and the return.
pub const REFERENCE_SELECTED: &[usize] = &[0, 2, 4, 6, 7, 8, 12, 13, 14, 15];

/// Planted token weights that make [`REFERENCE_SELECTED`] the unique
/// knapsack optimum; verified against the exhaustive oracle in the
/// acceptance suite.
pub fn reference_weights() -> Vec<(&'static str, f64)> {
    vec![
        ("public", 0.020),
        ("static", 0.020),
        ("final", 0.018),
        ("readFile", 0.022),
        ("throws", 0.016),
        ("try", 0.020),
        ("File", 0.020),
        ("length", 0.020),
        ("int", 0.018),
        ("char", 0.016),
        ("chars", 0.014),
        ("read", 0.022),
        ("finally", 0.020),
        ("if", 0.018),
        ("close", 0.020),
        ("return", 0.022),
        ("!=", 0.012),
        ("reader", 0.012),
        ("FileReader", 0.010),
        ("file", 0.010),
        ("String", 0.010),
        ("fileName", 0.005),
        ("content", 0.002),
        ("null", 0.002),
        ("IOException", 0.002),
        ("System", 0.001),
        ("out", 0.001),
        ("println", 0.001),
        ("e", 0.001),
        ("printStackTrace", 0.001),
        ("catch", 0.002),
        ("new", 0.001),
        ("=", 0.001),
        (";", 0.001),
        ("(", 0.001),
        (")", 0.001),
        ("{", 0.001),
        ("}", 0.001),
        (".", 0.001),
        ("[", 0.001),
        ("]", 0.001),
    ]
}

pub fn reference_dict() -> TokenAttentionDict {
    let mut builder = DictBuilder::new();
    for (text, weight) in reference_weights() {
        builder.observe(text, weight);
    }
    builder.finish()
}

pub fn reference_snippet() -> Snippet {
    Snippet::parse("read_file", Language::Java, READ_FILE_CODE).unwrap()
}

pub fn corpus_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/corpus.jsonl")
}

/// Exhaustive 0-1 knapsack over all subsets, preferring the
/// lexicographically earliest subset among equal-value optima.
pub fn brute_force_knapsack(
    values: &[f64],
    weights: &[usize],
    capacity: usize,
) -> (f64, Vec<usize>) {
    let n = values.len();
    assert!(n <= 20, "oracle is exponential");
    let mut best_value = 0.0f64;
    let mut best_set: Vec<usize> = Vec::new();
    for mask in 0u64..(1 << n) {
        let mut value = 0.0;
        let mut weight = 0usize;
        for i in 0..n {
            if mask & (1 << i) != 0 {
                value += values[i];
                weight += weights[i];
            }
        }
        if weight > capacity {
            continue;
        }
        if value > best_value {
            best_value = value;
            best_set = members(mask, n);
        } else if value == best_value {
            let set = members(mask, n);
            if lex_less(&set, &best_set) {
                best_set = set;
            }
        }
    }
    (best_value, best_set)
}

fn members(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask & (1 << i) != 0).collect()
}

fn lex_less(a: &[usize], b: &[usize]) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        if x != y {
            return x < y;
        }
    }
    a.len() < b.len()
}

/// Literal quadruple-loop mean over layers, heads, and query rows.
#[allow(clippy::needless_range_loop)] // the oracle stays index-literal
pub fn quadruple_loop_received(stack: &[Vec<Vec<Vec<f64>>>]) -> Vec<f64> {
    let layers = stack.len();
    let heads = stack[0].len();
    let n = stack[0][0].len();
    let mut received = vec![0.0f64; n];
    for j in 0..n {
        let mut sum = 0.0;
        for l in 0..layers {
            for h in 0..heads {
                for i in 0..n {
                    sum += stack[l][h][i][j];
                }
            }
        }
        received[j] = sum / (layers * heads * n) as f64;
    }
    received
}

/// A random stack of row-stochastic matrices.
pub fn random_stack(
    rng: &mut StdRng,
    layers: usize,
    heads: usize,
    n: usize,
) -> Vec<Vec<Vec<Vec<f64>>>> {
    (0..layers)
        .map(|_| {
            (0..heads)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let raw: Vec<f64> =
                                (0..n).map(|_| rng.random_range(0.0..1.0f64)).collect();
                            let total: f64 = raw.iter().sum();
                            raw.into_iter().map(|x| x / total).collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

const IDENT_POOL: &[&str] = &[
    "buffer", "cursor", "entry", "handle", "index", "limit", "offset", "parser", "queue", "record",
    "shard", "stream", "token", "total", "value", "writer",
];

const CALL_POOL: &[&str] = &[
    "append", "convert", "decode", "emit", "flushAll", "merge", "process", "resolve", "scan",
    "update",
];

const SIGNATURE_NAMES: &[&str] = &[
    "taskAlpha",
    "taskBeta",
    "taskGamma",
    "taskDelta",
    "taskOmega",
    "taskSigma",
];

/// A deterministic planted weight for a token text: tokens that belong to
/// signatures and returns rank high, control-flow keywords rank low,
/// everything else lands in between by a stable hash.
pub fn planted_weight(text: &str) -> f64 {
    match text {
        "public" | "private" | "static" | "void" => 0.020,
        "return" => 0.022,
        t if SIGNATURE_NAMES.contains(&t) => 0.021,
        "if" | "for" | "while" | "switch" | "case" | "break" | "continue" | "default" => 0.0005,
        _ => {
            // FNV-1a, folded into [0.002, 0.008).
            let mut hash: u64 = 0xcbf29ce484222325;
            for byte in text.bytes() {
                hash ^= byte as u64;
                hash = hash.wrapping_mul(0x100000001b3);
            }
            0.002 + (hash % 1000) as f64 / 1000.0 * 0.006
        }
    }
}

/// Build a dictionary over a snippet set with [`planted_weight`] means and
/// true occurrence counts.
pub fn planted_dict(snippets: &[Snippet]) -> TokenAttentionDict {
    let mut builder = DictBuilder::new();
    for snippet in snippets {
        for token in &snippet.tokens {
            builder.observe(&token.text, planted_weight(&token.text));
        }
    }
    builder.finish()
}

/// An export record whose received vector follows [`planted_weight`],
/// normalized to sum to 1 like a real reduced attention export.
pub fn planted_export(snippet: &Snippet) -> AttentionExportRecord {
    let raw: Vec<f64> = snippet
        .tokens
        .iter()
        .map(|t| planted_weight(&t.text))
        .collect();
    let total: f64 = raw.iter().sum();
    AttentionExportRecord {
        id: snippet.id.clone(),
        tokens: snippet.tokens.iter().map(|t| t.text.clone()).collect(),
        received: Some(raw.into_iter().map(|w| w / total).collect()),
        tensor: None,
    }
}

/// Generate a random Java-shaped snippet: a signature, a body mixing
/// declarations, calls, arithmetic, and control-flow headers, and a
/// return. Between 2 and roughly `max_statements * 12` tokens.
pub fn random_java_snippet(rng: &mut StdRng, id: &str, max_statements: usize) -> Snippet {
    let mut code = String::new();
    let name = SIGNATURE_NAMES[rng.random_range(0..SIGNATURE_NAMES.len())];
    let arg = IDENT_POOL[rng.random_range(0..IDENT_POOL.len())];
    code.push_str(&format!("public void {name}(int {arg}) {{ "));
    let body_statements = rng.random_range(1..=max_statements.max(1));
    for _ in 0..body_statements {
        let a = IDENT_POOL[rng.random_range(0..IDENT_POOL.len())];
        let b = IDENT_POOL[rng.random_range(0..IDENT_POOL.len())];
        let call = CALL_POOL[rng.random_range(0..CALL_POOL.len())];
        match rng.random_range(0..8u32) {
            0 => code.push_str(&format!("int {a} = {b} + 2; ")),
            1 => code.push_str(&format!("{a} = {call}({b}); ")),
            2 => code.push_str(&format!("{call}({a}, {b}); ")),
            3 => code.push_str(&format!("if ({a} > 0) {{ {call}({a}); }} ")),
            4 => code.push_str(&format!("for (int i = 0; i < {a}; i++) {{ {call}(i); }} ")),
            5 => code.push_str(&format!("while ({a} < {b}) {{ {a} = {a} + 1; }} ")),
            6 => code.push_str(&format!(
                "switch ({a}) {{ case 1: break; default: {call}({b}); }} "
            )),
            _ => code.push_str(&format!("{a} = {a} * {b}; ")),
        }
    }
    let ret = IDENT_POOL[rng.random_range(0..IDENT_POOL.len())];
    code.push_str(&format!("return {ret}; }}"));
    Snippet::parse(id, Language::Java, &code).unwrap()
}
