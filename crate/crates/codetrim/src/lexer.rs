//! Language-token lexer for Java and Python function bodies.
//!
//! Tokens are produced at language-token granularity (identifiers, keywords,
//! literals, operators, delimiters), not subwords. Comments are stripped and
//! whitespace is collapsed; concatenating the remaining token texts
//! reproduces the significant content of the input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Source language of a record. Everything else in the pipeline is driven
/// by this tag: keyword tables, statement splitting, classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Java,
    Python,
}

impl Language {
    pub fn as_str(self) -> &'static str {
        match self {
            Language::Java => "java",
            Language::Python => "python",
        }
    }
}

impl std::str::FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "java" => Ok(Language::Java),
            "python" | "py" => Ok(Language::Python),
            other => Err(format!("unknown language {other:?}")),
        }
    }
}

impl std::fmt::Display for Language {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Lexical class of a token.
///
/// `Comment` never comes out of [`lex`] (comments are stripped) but is kept
/// so externally produced token streams can round-trip through the cache
/// format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TokenKind {
    Keyword,
    Identifier,
    StringLiteral,
    NumericLiteral,
    Operator,
    Delimiter,
    Annotation,
    Comment,
    Other,
}

/// A lexical unit of source code: its text, kind, and 0-based position in
/// the snippet token sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub kind: TokenKind,
    pub index: usize,
}

impl Token {
    pub fn new(text: impl Into<String>, kind: TokenKind, index: usize) -> Self {
        Token {
            text: text.into(),
            kind,
            index,
        }
    }
}

const JAVA_KEYWORDS: &[&str] = &[
    "abstract",
    "assert",
    "boolean",
    "break",
    "byte",
    "case",
    "catch",
    "char",
    "class",
    "const",
    "continue",
    "default",
    "do",
    "double",
    "else",
    "enum",
    "extends",
    "false",
    "final",
    "finally",
    "float",
    "for",
    "goto",
    "if",
    "implements",
    "import",
    "instanceof",
    "int",
    "interface",
    "long",
    "native",
    "new",
    "null",
    "package",
    "private",
    "protected",
    "public",
    "return",
    "short",
    "static",
    "strictfp",
    "super",
    "switch",
    "synchronized",
    "this",
    "throw",
    "throws",
    "transient",
    "true",
    "try",
    "var",
    "void",
    "volatile",
    "while",
];

const PYTHON_KEYWORDS: &[&str] = &[
    "False", "None", "True", "and", "as", "assert", "async", "await", "break", "class", "continue",
    "def", "del", "elif", "else", "except", "finally", "for", "from", "global", "if", "import",
    "in", "is", "lambda", "nonlocal", "not", "or", "pass", "raise", "return", "try", "while",
    "with", "yield",
];

// Longest first so maximal munch falls out of a linear scan.
const JAVA_OPERATORS: &[&str] = &[
    ">>>=", ">>>", "<<=", ">>=", "->", "::", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=",
    "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "+", "-", "*", "/", "%", "=", "<", ">",
    "!", "&", "|", "^", "~", "?",
];

const PYTHON_OPERATORS: &[&str] = &[
    "**=", "//=", "<<=", ">>=", "->", ":=", "**", "//", "==", "!=", "<=", ">=", "+=", "-=", "*=",
    "/=", "%=", "&=", "|=", "^=", "@=", "<<", ">>", "+", "-", "*", "/", "%", "=", "<", ">", "&",
    "|", "^", "~",
];

const DELIMITERS: &[&str] = &["...", "(", ")", "[", "]", "{", "}", ";", ",", ".", ":"];

fn is_keyword(text: &str, language: Language) -> bool {
    match language {
        Language::Java => JAVA_KEYWORDS.contains(&text),
        Language::Python => PYTHON_KEYWORDS.contains(&text),
    }
}

fn is_ident_start(c: char, language: Language) -> bool {
    c.is_alphabetic() || c == '_' || (language == Language::Java && c == '$')
}

fn is_ident_continue(c: char, language: Language) -> bool {
    c.is_alphanumeric() || c == '_' || (language == Language::Java && c == '$')
}

struct Scanner<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src_len: usize,
    language: Language,
    tokens: Vec<Token>,
    _src: &'a str,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str, language: Language) -> Self {
        Scanner {
            chars: src.char_indices().collect(),
            pos: 0,
            src_len: src.len(),
            language,
            tokens: Vec::new(),
            _src: src,
        }
    }

    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.pos + ahead).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(o, _)| o)
            .unwrap_or(self.src_len)
    }

    fn starts_with(&self, pat: &str) -> bool {
        pat.chars()
            .enumerate()
            .all(|(i, c)| self.peek(i) == Some(c))
    }

    fn advance(&mut self, n: usize) {
        self.pos += n;
    }

    fn push(&mut self, text: String, kind: TokenKind) {
        let index = self.tokens.len();
        self.tokens.push(Token { text, kind, index });
    }

    fn take_while(&mut self, start: usize, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        self.pos = start;
        while let Some(c) = self.peek(0) {
            if pred(c) {
                out.push(c);
                self.advance(1);
            } else {
                break;
            }
        }
        out
    }

    /// True when the previous token allows a '-' to start a numeric literal:
    /// an operator, an opening delimiter, or no token at all. Keeps "-1"
    /// intact so the literal-preservation rule can see it.
    fn minus_starts_literal(&self) -> bool {
        match self.tokens.last() {
            None => true,
            Some(tok) => {
                tok.kind == TokenKind::Operator || matches!(tok.text.as_str(), "(" | "[" | "{")
            }
        }
    }

    fn scan_line_comment(&mut self) {
        while let Some(c) = self.peek(0) {
            if c == '\n' {
                break;
            }
            self.advance(1);
        }
    }

    fn scan_block_comment(&mut self) {
        self.advance(2); // consume "/*"
        while self.pos < self.chars.len() {
            if self.starts_with("*/") {
                self.advance(2);
                return;
            }
            self.advance(1);
        }
        // Unterminated block comment swallows the rest of the input.
    }

    fn scan_string(&mut self) -> Result<()> {
        let open_offset = self.offset();
        let quote = self.peek(0).expect("caller checked");
        let triple = self.language == Language::Python
            && self.peek(1) == Some(quote)
            && self.peek(2) == Some(quote);
        let mut text = String::new();

        if triple {
            for _ in 0..3 {
                text.push(quote);
                self.advance(1);
            }
            loop {
                if self.pos >= self.chars.len() {
                    return Err(Error::UnterminatedString {
                        offset: open_offset,
                    });
                }
                if self.peek(0) == Some(quote)
                    && self.peek(1) == Some(quote)
                    && self.peek(2) == Some(quote)
                {
                    for _ in 0..3 {
                        text.push(quote);
                        self.advance(1);
                    }
                    break;
                }
                if self.peek(0) == Some('\\') && self.pos + 1 < self.chars.len() {
                    text.push('\\');
                    self.advance(1);
                }
                text.push(self.peek(0).unwrap());
                self.advance(1);
            }
        } else {
            text.push(quote);
            self.advance(1);
            loop {
                match self.peek(0) {
                    None => {
                        return Err(Error::UnterminatedString {
                            offset: open_offset,
                        })
                    }
                    Some('\\') => {
                        text.push('\\');
                        self.advance(1);
                        if let Some(c) = self.peek(0) {
                            text.push(c);
                            self.advance(1);
                        }
                    }
                    Some(c) if c == quote => {
                        text.push(c);
                        self.advance(1);
                        break;
                    }
                    // A raw newline ends nothing in Python single-quoted
                    // strings in valid code; corpora are noisy, so we let it
                    // through rather than erroring.
                    Some(c) => {
                        text.push(c);
                        self.advance(1);
                    }
                }
            }
        }
        self.push(text, TokenKind::StringLiteral);
        Ok(())
    }

    fn scan_number(&mut self, with_sign: bool) {
        let mut text = String::new();
        if with_sign {
            text.push('-');
            self.advance(1);
        }
        let mut prev = '\0';
        while let Some(c) = self.peek(0) {
            let take = if c.is_ascii_alphanumeric() || c == '_' {
                true
            } else if c == '.' {
                // "1.5" continues the literal, "f.length" does not.
                matches!(self.peek(1), Some(d) if d.is_ascii_digit())
            } else if c == '+' || c == '-' {
                // Exponent signs: 2.5e-3, 0x1p+3. In hex literals 'e' is a
                // digit, so only 'p' introduces an exponent there.
                let hex = text.trim_start_matches('-').starts_with("0x")
                    || text.trim_start_matches('-').starts_with("0X");
                (matches!(prev, 'e' | 'E') && !hex) || (matches!(prev, 'p' | 'P') && hex)
            } else {
                false
            };
            if !take {
                break;
            }
            text.push(c);
            prev = c;
            self.advance(1);
        }
        self.push(text, TokenKind::NumericLiteral);
    }

    fn scan_word(&mut self) {
        let lang = self.language;
        let start = self.pos;
        let word = self.take_while(start, |c| is_ident_continue(c, lang));

        // Python string prefixes: r"...", rb'...', f"..." and friends.
        if lang == Language::Python
            && word.len() <= 2
            && word.chars().all(|c| "rbufRBUF".contains(c))
            && matches!(self.peek(0), Some('"') | Some('\''))
        {
            // Re-lex as a prefixed string: keep the prefix in the text.
            let before = self.tokens.len();
            if self.scan_string().is_ok() {
                debug_assert_eq!(self.tokens.len(), before + 1);
                let tok = self.tokens.last_mut().unwrap();
                tok.text = format!("{word}{}", tok.text);
                return;
            }
            // Unterminated: fall through and emit the word alone; the quote
            // will error on the next dispatch.
        }

        let kind = if is_keyword(&word, lang) {
            TokenKind::Keyword
        } else {
            TokenKind::Identifier
        };
        self.push(word, kind);
    }

    fn scan_annotation(&mut self) {
        // '@' immediately followed by an identifier fuses into one token:
        // "@Override" in Java, "@decorator" in Python.
        if matches!(self.peek(1), Some(c) if is_ident_start(c, self.language)) {
            self.advance(1);
            let lang = self.language;
            let start = self.pos;
            let name = self.take_while(start, |c| is_ident_continue(c, lang));
            self.push(format!("@{name}"), TokenKind::Annotation);
        } else {
            let c = self.peek(0).unwrap();
            self.advance(1);
            self.push(c.to_string(), TokenKind::Operator);
        }
    }

    fn run(mut self) -> Result<Vec<Token>> {
        'outer: while let Some(c) = self.peek(0) {
            if c.is_whitespace() || c == '\\' {
                self.advance(1);
                continue;
            }
            match self.language {
                Language::Java => {
                    if self.starts_with("//") {
                        self.scan_line_comment();
                        continue;
                    }
                    if self.starts_with("/*") {
                        self.scan_block_comment();
                        continue;
                    }
                }
                Language::Python => {
                    if c == '#' {
                        self.scan_line_comment();
                        continue;
                    }
                }
            }
            if c == '"' || c == '\'' {
                self.scan_string()?;
                continue;
            }
            if c.is_ascii_digit() {
                self.scan_number(false);
                continue;
            }
            if c == '-'
                && matches!(self.peek(1), Some(d) if d.is_ascii_digit())
                && self.minus_starts_literal()
            {
                self.scan_number(true);
                continue;
            }
            if c == '@' {
                self.scan_annotation();
                continue;
            }
            if is_ident_start(c, self.language) {
                self.scan_word();
                continue;
            }
            for delim in DELIMITERS {
                if self.starts_with(delim) {
                    self.advance(delim.chars().count());
                    self.push((*delim).to_string(), TokenKind::Delimiter);
                    continue 'outer;
                }
            }
            let operators = match self.language {
                Language::Java => JAVA_OPERATORS,
                Language::Python => PYTHON_OPERATORS,
            };
            for op in operators {
                if self.starts_with(op) {
                    self.advance(op.chars().count());
                    self.push((*op).to_string(), TokenKind::Operator);
                    continue 'outer;
                }
            }
            self.advance(1);
            self.push(c.to_string(), TokenKind::Other);
        }
        Ok(self.tokens)
    }
}

/// Tokenize one function's source text.
///
/// Comments are stripped, whitespace is collapsed, and token kinds are
/// assigned from the per-language keyword tables. The only lexical error is
/// an unterminated string literal, reported with its byte offset.
pub fn lex(code: &str, language: Language) -> Result<Vec<Token>> {
    Scanner::new(code, language).run()
}
