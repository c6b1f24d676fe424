//! The attention strategy end to end: knapsack statement selection, then
//! greedy token pruning down to the budget.
//!
//! Statement values are min-max-scaled attention times statement length;
//! weights are token counts; the capacity is the budget plus the longest
//! statement, so the knapsack may overshoot by at most one statement for
//! the token phase to trim.
//!
//! Usage:
//!   cargo run --example prune_attention

use codetrim::attention::{statement_attention, DictBuilder, TokenAttentionDict};
use codetrim::lexer::Language;
use codetrim::pruning::{
    attention_prune, knapsack_capacity, knapsack_select, scale_statement_values, AttentionSource,
};
use codetrim::statement::Snippet;

const CODE: &str = r#"
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

fn demo_dict() -> TokenAttentionDict {
    let mut builder = DictBuilder::new();
    let weights: &[(&str, f64)] = &[
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
    ];
    for (text, weight) in weights {
        builder.observe(text, *weight);
    }
    builder.finish()
}

fn main() -> anyhow::Result<()> {
    let snippet = Snippet::parse("read_file", Language::Java, CODE)?;
    let dict = demo_dict();
    let budget = 60usize;

    println!(
        "input: {} tokens, {} statements, longest statement {} tokens",
        snippet.token_count(),
        snippet.statements.len(),
        snippet.max_statement_len()
    );
    let capacity = knapsack_capacity(budget, snippet.max_statement_len());
    println!("budget {budget} -> knapsack capacity {capacity}\n");

    // Phase 1: statement selection.
    let lengths: Vec<usize> = snippet.statements.iter().map(|s| s.len()).collect();
    let raw: Vec<f64> = snippet
        .statements
        .iter()
        .map(|s| statement_attention(&snippet.tokens[s.range()], &dict))
        .collect();
    let values = scale_statement_values(&raw, &lengths);
    let selected = knapsack_select(&values, &lengths, capacity);

    println!("     kept  len  value   statement");
    for statement in &snippet.statements {
        let marker = if selected.contains(&statement.ordinal) {
            "keep"
        } else {
            "drop"
        };
        println!(
            "#{:<3} {marker}  {:>3}  {:>6.2}  {}",
            statement.ordinal,
            statement.len(),
            values[statement.ordinal],
            snippet.statement_texts(statement.ordinal).join(" ")
        );
    }
    let selected_tokens: usize = selected.iter().map(|&i| lengths[i]).sum();
    println!("\nafter statement selection: {selected_tokens} tokens");

    // Phase 2 runs inside attention_prune: greedy token pruning.
    let result = attention_prune(
        &snippet,
        &dict,
        None,
        budget,
        AttentionSource::Token,
        false,
        false,
    );
    println!(
        "after token pruning:       {} tokens (RL {:.1}%)\n",
        result.kept.len(),
        result.relative_length * 100.0
    );
    println!("pruned snippet:\n{}", result.kept_texts(&snippet).join(" "));
    Ok(())
}
