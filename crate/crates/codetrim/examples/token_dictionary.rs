//! Build a corpus-level token attention dictionary from export records,
//! including sharded builds that merge to the same result.
//!
//! Usage:
//!   cargo run --example token_dictionary

use codetrim::attention::{AttentionExportRecord, DictBuilder};

fn record(id: &str, tokens: &[&str], received: &[f64]) -> AttentionExportRecord {
    AttentionExportRecord {
        id: id.into(),
        tokens: tokens.iter().map(|t| t.to_string()).collect(),
        received: Some(received.to_vec()),
        tensor: None,
    }
}

fn main() -> anyhow::Result<()> {
    let exports = [
        record("r1", &["return", "x", ";"], &[0.5, 0.3, 0.2]),
        record("r2", &["return", "y", ";"], &[0.3, 0.4, 0.3]),
        record(
            "r3",
            &["int", "x", "=", "1", ";"],
            &[0.3, 0.2, 0.1, 0.3, 0.1],
        ),
    ];

    // Single pass.
    let mut single = DictBuilder::new();
    for export in &exports {
        single.observe_record(export)?;
    }
    let dict = single.finish();

    println!("token        mean     count");
    for (text, stats) in dict.ranked() {
        println!("{text:<12} {:.4}   {}", stats.mean, stats.count);
    }
    println!("fallback (OOV) weight: {:.4}", dict.fallback_weight);
    println!("weight(\"return\") = {:.4}", dict.weight("return"));
    println!(
        "weight(\"never\")  = {:.4} (falls back to the minimum)",
        dict.weight("never")
    );

    // Sharded build: two partial dictionaries merged afterwards.
    let mut left = DictBuilder::new();
    left.observe_record(&exports[0])?;
    let mut right = DictBuilder::new();
    right.observe_record(&exports[1])?;
    right.observe_record(&exports[2])?;
    left.merge(right);
    let merged = left.finish();
    let drift = dict
        .entries
        .iter()
        .map(|(k, v)| (v.mean - merged.weight(k)).abs())
        .fold(0.0f64, f64::max);
    println!("sharded build max drift vs single pass: {drift:.2e}");

    // Dictionaries round-trip through JSON files.
    let dir = tempfile::tempdir()?;
    let path = dir.path().join("dict.json");
    dict.to_file(&path)?;
    let reloaded = codetrim::attention::TokenAttentionDict::from_file(&path)?;
    println!(
        "reloaded {} entries from {}",
        reloaded.len(),
        path.display()
    );
    Ok(())
}
