//! Tokenize Java and Python snippets at language-token granularity.
//!
//! Usage:
//!   cargo run --example lex_tokens

use codetrim::lexer::{lex, Language};

fn main() -> anyhow::Result<()> {
    let java = r#"public int scale(int x) { return x * 42 + offset; } // doubles"#;
    let python = "def scale(x): return x * 42 + offset  # doubles";

    for (language, code) in [(Language::Java, java), (Language::Python, python)] {
        println!("--- {language}: {code}");
        let tokens = lex(code, language)?;
        for token in &tokens {
            println!("  {:>3}  {:<16} {:?}", token.index, token.text, token.kind);
        }
        println!("  ({} tokens, comments stripped)\n", tokens.len());
    }

    // The one lexical error: an unterminated string, reported with its
    // byte offset.
    let err = lex("String s = \"oops", Language::Java).unwrap_err();
    println!("unterminated string error: {err}");
    Ok(())
}
