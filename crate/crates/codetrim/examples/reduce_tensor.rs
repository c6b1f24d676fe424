//! Collapse a layers x heads x n x n attention stack into the per-token
//! received vector: the mean over layers, heads, and query rows.
//!
//! Usage:
//!   cargo run --example reduce_tensor

use codetrim::attention::reduce_attention_tensor;

fn main() -> anyhow::Result<()> {
    // One layer, one head, identity-like: each token attends to itself,
    // so both tokens receive the same share.
    let identity = vec![vec![vec![vec![1.0, 0.0], vec![0.0, 1.0]]]];
    println!(
        "identity          -> {:?}",
        reduce_attention_tensor(&identity)?
    );

    // Every query row attends to the second token.
    let skewed = vec![vec![vec![vec![0.0, 1.0], vec![0.0, 1.0]]]];
    println!(
        "all-to-token-2    -> {:?}",
        reduce_attention_tensor(&skewed)?
    );

    // Two layers, two heads, 3 tokens: still sums to 1.
    let row = |a: f64, b: f64, c: f64| vec![a, b, c];
    let matrix = vec![row(0.6, 0.3, 0.1), row(0.2, 0.5, 0.3), row(0.1, 0.1, 0.8)];
    let stack = vec![vec![matrix.clone(), matrix.clone()]; 2];
    let received = reduce_attention_tensor(&stack)?;
    println!("2x2 stack         -> {received:?}");
    println!("sum               -> {}", received.iter().sum::<f64>());

    // Rows must be stochastic: a broken row is rejected.
    let broken = vec![vec![vec![vec![0.9, 0.0], vec![0.0, 1.0]]]];
    println!(
        "broken row        -> {}",
        reduce_attention_tensor(&broken).unwrap_err()
    );
    Ok(())
}
