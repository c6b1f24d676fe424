//! Statement attention: a softmax-weighted mean of the statement's token
//! weights, so tokens that matter corpus-wide dominate the score.
//!
//! Usage:
//!   cargo run --example statement_attention

use codetrim::attention::{
    softmax, statement_attention, statement_attention_from_weights, DictBuilder,
};
use codetrim::lexer::{lex, Language};

fn main() -> anyhow::Result<()> {
    // The raw math first.
    let weights = [0.0, 1.0];
    let sm = softmax(&weights);
    let score = statement_attention_from_weights(&weights);
    println!(
        "weights [0, 1]: softmax = [{:.4}, {:.4}], attention = {score:.6}",
        sm[0], sm[1]
    );
    println!(
        "  (closed form e/(1+e) = {:.6})",
        std::f64::consts::E / (1.0 + std::f64::consts::E)
    );

    println!(
        "uniform weights return the common value: {:.2}",
        statement_attention_from_weights(&[0.25, 0.25, 0.25])
    );
    println!(
        "singleton statements return their weight: {:.2}",
        statement_attention_from_weights(&[0.37])
    );

    // Against a dictionary: the same statement scores differently under
    // different corpus-level weights.
    let mut builder = DictBuilder::new();
    for (token, weight) in [("return", 0.03), ("x", 0.004), (";", 0.001)] {
        builder.observe(token, weight);
    }
    let dict = builder.finish();
    let tokens = lex("return x;", Language::Java)?;
    println!(
        "\"return x;\" under the dictionary: {:.5}",
        statement_attention(&tokens, &dict)
    );
    println!("  (bounded by the extreme token weights 0.001 and 0.03)");
    Ok(())
}
