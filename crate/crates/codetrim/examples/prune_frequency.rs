//! Frequency filtering: keep the occurrences whose corpus frequency ranks
//! in the top k, ties broken by earlier position.
//!
//! Usage:
//!   cargo run --example prune_frequency

use codetrim::attention::DictBuilder;
use codetrim::lexer::Language;
use codetrim::pruning::frequency_prune;
use codetrim::statement::Snippet;

fn main() -> anyhow::Result<()> {
    // Corpus frequencies come from the dictionary's occurrence counts;
    // the attention means are irrelevant to this strategy.
    let mut builder = DictBuilder::new();
    for (token, count) in [
        (";", 900),
        ("(", 800),
        (")", 800),
        ("return", 400),
        ("int", 300),
        ("total", 40),
        ("xs", 25),
        ("checksum", 2),
    ] {
        for _ in 0..count {
            builder.observe(token, 0.001);
        }
    }
    let dict = builder.finish();

    let code = "int total = checksum(xs); return total;";
    let snippet = Snippet::parse("demo", Language::Java, code)?;
    println!("input ({} tokens): {code}", snippet.token_count());
    for budget in [10, 6, 3] {
        let result = frequency_prune(&snippet, budget, &dict);
        println!(
            "budget {budget:>2}: {}",
            result.kept_texts(&snippet).join(" ")
        );
    }
    println!("\n(rare identifiers like \"checksum\" go first; delimiters last)");
    Ok(())
}
