//! Split token streams into statements and classify each one.
//!
//! Java statements close on semicolons and braces; Python corpora carry
//! no indentation, so boundaries come from hint tokens (def, =, :, and a
//! line-ending close paren).
//!
//! Usage:
//!   cargo run --example split_and_classify

use codetrim::lexer::Language;
use codetrim::statement::Snippet;

fn main() -> anyhow::Result<()> {
    let java = r#"
public int code(char c) {
    int k = mapKey(c);
    switch (k) { case 1: return 1; default: break; }
    log.println(k);
    return 0;
}
"#;
    let python = "def fetch(url): resp = requests.get(url) data = resp.json() return data";

    for (id, language, code) in [
        ("java_demo", Language::Java, java),
        ("python_demo", Language::Python, python),
    ] {
        let snippet = Snippet::parse(id, language, code)?;
        println!(
            "--- {id}: {} tokens, {} statements",
            snippet.token_count(),
            snippet.statements.len()
        );
        for statement in &snippet.statements {
            println!(
                "  #{:<2} {:<22} {}",
                statement.ordinal,
                statement.category.as_str(),
                snippet.statement_texts(statement.ordinal).join(" ")
            );
        }
        println!();
    }
    Ok(())
}
