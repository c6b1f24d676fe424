//! Literal rewriting: strings become `string`, numbers become `10`,
//! and the special values 0, 1, -1 survive verbatim.
//!
//! Usage:
//!   cargo run --example delexicalize

use codetrim::corpus::delexicalize;
use codetrim::lexer::{lex, Language};

fn main() -> anyhow::Result<()> {
    let cases = [
        ("x = \"hello\";", Language::Java),
        ("return -1;", Language::Java),
        ("i < 42", Language::Java),
        ("limit = 0x7F + 1", Language::Python),
        ("msg = f\"{count} rows\"", Language::Python),
    ];
    for (code, language) in cases {
        let before = lex(code, language)?;
        let after = delexicalize(before.clone());
        let render = |tokens: &[codetrim::lexer::Token]| {
            tokens
                .iter()
                .map(|t| t.text.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        };
        println!("{:<28} ->  {}", render(&before), render(&after));
    }
    Ok(())
}
