//! Corpus ingestion and literal delexicalization.
//!
//! A corpus file is UTF-8, one JSON record per line, with fields `id`,
//! `language`, `code`, and an optional `comment`. Comments are carried
//! through untouched; only code is ever pruned.

use std::fs::File;
use std::io::{BufRead, BufReader, Lines, Read};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexer::{Language, Token, TokenKind};

/// One function from a corpus file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    pub language: Language,
    pub code: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
}

// Raw form keeps the language as a string so a bad value can be reported
// with its line number instead of as an opaque serde error.
#[derive(Deserialize)]
struct RawRecord {
    id: String,
    language: String,
    code: String,
    #[serde(default)]
    comment: Option<String>,
}

/// Streaming reader over a corpus file. Yields records in file order;
/// each malformed line surfaces as an `Err` so the caller can decide
/// between skip-and-warn and fail-fast.
pub struct CorpusReader<R> {
    lines: Lines<BufReader<R>>,
    line_no: usize,
    filter: Option<Language>,
}

impl CorpusReader<File> {
    pub fn open(path: impl AsRef<Path>, filter: Option<Language>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Self::new(file, filter))
    }
}

impl<R: Read> CorpusReader<R> {
    pub fn new(reader: R, filter: Option<Language>) -> Self {
        CorpusReader {
            lines: BufReader::new(reader).lines(),
            line_no: 0,
            filter,
        }
    }

    /// File line of the most recently yielded record.
    pub fn line_number(&self) -> usize {
        self.line_no
    }

    fn parse_line(&self, line: &str) -> Result<CorpusRecord> {
        let raw: RawRecord = serde_json::from_str(line).map_err(|e| Error::MalformedRecord {
            line: self.line_no,
            message: e.to_string(),
        })?;
        let language = raw
            .language
            .parse::<Language>()
            .map_err(|_| Error::UnknownLanguage {
                line: self.line_no,
                value: raw.language.clone(),
            })?;
        if raw.code.is_empty() {
            return Err(Error::MalformedRecord {
                line: self.line_no,
                message: "missing or empty \"code\" field".into(),
            });
        }
        Ok(CorpusRecord {
            id: raw.id,
            language,
            code: raw.code,
            comment: raw.comment,
        })
    }
}

impl<R: Read> Iterator for CorpusReader<R> {
    type Item = Result<CorpusRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(line) => line,
                Err(e) => {
                    return Some(Err(Error::Io {
                        path: PathBuf::from("<corpus>"),
                        source: e,
                    }))
                }
            };
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            match self.parse_line(&line) {
                Ok(rec) => {
                    if let Some(want) = self.filter {
                        if rec.language != want {
                            continue;
                        }
                    }
                    return Some(Ok(rec));
                }
                Err(e) => return Some(Err(e)),
            }
        }
    }
}

/// Open a corpus file as a record stream.
pub fn load_corpus(
    path: impl AsRef<Path>,
    language_filter: Option<Language>,
) -> Result<CorpusReader<File>> {
    CorpusReader::open(path, language_filter)
}

/// Which literal class a rule rewrites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelexKind {
    StringConstant,
    NumericConstant,
}

/// A literal-rewriting rule: replace every literal of `kind` with
/// `replacement`, except texts listed in `preserved`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DelexRule {
    pub kind: DelexKind,
    pub replacement: String,
    pub preserved: Vec<String>,
}

impl DelexRule {
    /// The two standard rules: strings become `string`, numbers become `10`
    /// with `0`, `1`, and `-1` kept verbatim.
    pub fn standard() -> Vec<DelexRule> {
        vec![
            DelexRule {
                kind: DelexKind::StringConstant,
                replacement: "string".into(),
                preserved: vec![],
            },
            DelexRule {
                kind: DelexKind::NumericConstant,
                replacement: "10".into(),
                preserved: vec!["0".into(), "1".into(), "-1".into()],
            },
        ]
    }

    fn applies_to(&self, kind: TokenKind) -> bool {
        matches!(
            (self.kind, kind),
            (DelexKind::StringConstant, TokenKind::StringLiteral)
                | (DelexKind::NumericConstant, TokenKind::NumericLiteral)
        )
    }
}

/// Rewrite literal tokens in place per the standard rules: every string
/// literal becomes `string`, every numeric literal becomes `10` unless its
/// text is `0`, `1`, or `-1`. All other tokens pass through unchanged, so
/// output length always equals input length. Idempotent.
pub fn delexicalize(tokens: Vec<Token>) -> Vec<Token> {
    delexicalize_with(tokens, &DelexRule::standard())
}

/// [`delexicalize`] with a custom rule set. The preserved set is consulted
/// before replacement; a preserved literal is emitted verbatim.
pub fn delexicalize_with(mut tokens: Vec<Token>, rules: &[DelexRule]) -> Vec<Token> {
    for tok in &mut tokens {
        for rule in rules {
            if rule.applies_to(tok.kind) && !rule.preserved.contains(&tok.text) {
                tok.text = rule.replacement.clone();
                break;
            }
        }
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexer::lex;

    fn tok(text: &str, kind: TokenKind, index: usize) -> Token {
        Token::new(text, kind, index)
    }

    fn texts(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.text.as_str()).collect()
    }

    #[test]
    fn strings_become_generic() {
        let toks = vec![
            tok("x", TokenKind::Identifier, 0),
            tok("=", TokenKind::Operator, 1),
            tok("\"hello\"", TokenKind::StringLiteral, 2),
        ];
        assert_eq!(texts(&delexicalize(toks)), ["x", "=", "string"]);
    }

    #[test]
    fn special_numbers_survive() {
        let toks = lex("return -1;", Language::Java).unwrap();
        assert_eq!(texts(&delexicalize(toks)), ["return", "-", "1", ";"]);
        let toks = vec![
            tok("return", TokenKind::Keyword, 0),
            tok("-1", TokenKind::NumericLiteral, 1),
            tok(";", TokenKind::Delimiter, 2),
        ];
        assert_eq!(texts(&delexicalize(toks)), ["return", "-1", ";"]);
    }

    #[test]
    fn other_numbers_collapse() {
        let toks = lex("i < 42", Language::Java).unwrap();
        assert_eq!(texts(&delexicalize(toks)), ["i", "<", "10"]);
    }

    #[test]
    fn idempotent_and_length_preserving() {
        let toks = lex(
            "s = \"a\" + 'b' + 0 + 1 + -1 + 3.14 + 0xFF;",
            Language::Java,
        )
        .unwrap();
        let n = toks.len();
        let once = delexicalize(toks);
        assert_eq!(once.len(), n);
        let twice = delexicalize(once.clone());
        assert_eq!(once, twice);
    }

    #[test]
    fn reader_yields_in_order_and_reports_lines() {
        let data = concat!(
            r#"{"id":"a","language":"java","code":"int x = 1;"}"#,
            "\n",
            r#"{"id":"b","language":"lisp","code":"(cons)"}"#,
            "\n",
            r#"{"id":"c","language":"python","code":"x = 1"}"#,
            "\n",
        );
        let got: Vec<_> = CorpusReader::new(data.as_bytes(), None).collect();
        assert_eq!(got.len(), 3);
        assert_eq!(got[0].as_ref().unwrap().id, "a");
        match &got[1] {
            Err(Error::UnknownLanguage { line, value }) => {
                assert_eq!(*line, 2);
                assert_eq!(value, "lisp");
            }
            other => panic!("expected unknown-language error, got {other:?}"),
        }
        assert_eq!(got[2].as_ref().unwrap().language, Language::Python);
    }

    #[test]
    fn reader_filters_by_language() {
        let data = concat!(
            r#"{"id":"a","language":"java","code":"int x;"}"#,
            "\n",
            r#"{"id":"b","language":"python","code":"pass"}"#,
            "\n",
        );
        let got: Vec<_> = CorpusReader::new(data.as_bytes(), Some(Language::Python))
            .map(|r| r.unwrap().id)
            .collect();
        assert_eq!(got, ["b"]);
    }

    #[test]
    fn malformed_line_names_line_number() {
        let data = "{\"id\":\"a\",\"language\":\"java\",\"code\":\"x;\"}\nnot json\n";
        let got: Vec<_> = CorpusReader::new(data.as_bytes(), None).collect();
        match &got[1] {
            Err(Error::MalformedRecord { line, .. }) => assert_eq!(*line, 2),
            other => panic!("expected malformed-record error, got {other:?}"),
        }
    }
}
