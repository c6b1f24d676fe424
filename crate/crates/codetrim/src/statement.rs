//! Statement splitting and classification.
//!
//! Splitting is rule-based text processing over the token stream, not
//! grammar parsing. Java statements close after `;` (outside parentheses)
//! and after every `{` and `}`; a statement consisting solely of `}` tokens
//! is folded into its predecessor so closing braces ride along with the
//! statement they terminate. Python corpora carry no indentation, so
//! logical lines are approximated from hint tokens: a statement closes
//! after a top-level `:`, after a top-level `)` that ends the line, before
//! a top-level `def` or decorator, and before the target of a fresh
//! top-level assignment.
//!
//! Every token belongs to exactly one statement: boundaries partition the
//! token sequence with no gaps and no overlaps.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Lines, Read, Write};
use std::ops::Range;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{delexicalize, CorpusRecord};
use crate::error::{Error, Result};
use crate::lexer::{lex, Language, Token, TokenKind};

/// The statement taxonomy: twenty-one named classes plus a fallback.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatementCategory {
    FunctionInvocation,
    MethodSignature,
    VariableDeclaration,
    IfCondition,
    Annotation,
    Return,
    Getter,
    For,
    Try,
    Logging,
    Setter,
    Throw,
    Catch,
    Arithmetic,
    Case,
    While,
    Break,
    Finally,
    Continue,
    Switch,
    Synchronized,
    Other,
}

impl StatementCategory {
    /// All named classes, excluding the `Other` fallback.
    pub const NAMED: [StatementCategory; 21] = [
        StatementCategory::FunctionInvocation,
        StatementCategory::MethodSignature,
        StatementCategory::VariableDeclaration,
        StatementCategory::IfCondition,
        StatementCategory::Annotation,
        StatementCategory::Return,
        StatementCategory::Getter,
        StatementCategory::For,
        StatementCategory::Try,
        StatementCategory::Logging,
        StatementCategory::Setter,
        StatementCategory::Throw,
        StatementCategory::Catch,
        StatementCategory::Arithmetic,
        StatementCategory::Case,
        StatementCategory::While,
        StatementCategory::Break,
        StatementCategory::Finally,
        StatementCategory::Continue,
        StatementCategory::Switch,
        StatementCategory::Synchronized,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StatementCategory::FunctionInvocation => "function_invocation",
            StatementCategory::MethodSignature => "method_signature",
            StatementCategory::VariableDeclaration => "variable_declaration",
            StatementCategory::IfCondition => "if_condition",
            StatementCategory::Annotation => "annotation",
            StatementCategory::Return => "return",
            StatementCategory::Getter => "getter",
            StatementCategory::For => "for",
            StatementCategory::Try => "try",
            StatementCategory::Logging => "logging",
            StatementCategory::Setter => "setter",
            StatementCategory::Throw => "throw",
            StatementCategory::Catch => "catch",
            StatementCategory::Arithmetic => "arithmetic",
            StatementCategory::Case => "case",
            StatementCategory::While => "while",
            StatementCategory::Break => "break",
            StatementCategory::Finally => "finally",
            StatementCategory::Continue => "continue",
            StatementCategory::Switch => "switch",
            StatementCategory::Synchronized => "synchronized",
            StatementCategory::Other => "other",
        }
    }
}

impl std::fmt::Display for StatementCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A contiguous token run with a category label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statement {
    /// Half-open token index interval `[start, end)`.
    pub start: usize,
    pub end: usize,
    pub category: StatementCategory,
    /// 0-based position among the snippet's statements.
    pub ordinal: usize,
}

impl Statement {
    pub fn range(&self) -> Range<usize> {
        self.start..self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// One parsed function: delexicalized tokens plus the statement partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snippet {
    pub id: String,
    pub language: Language,
    pub tokens: Vec<Token>,
    pub statements: Vec<Statement>,
}

impl Snippet {
    /// Lex, delexicalize, split, and classify one function.
    pub fn parse(id: impl Into<String>, language: Language, code: &str) -> Result<Snippet> {
        let tokens = delexicalize(lex(code, language)?);
        Ok(Self::from_tokens(id, language, tokens))
    }

    /// Like [`Snippet::parse`] for a caller-supplied token sequence.
    /// Tokens are used as given; no delexicalization is applied.
    pub fn from_tokens(
        id: impl Into<String>,
        language: Language,
        mut tokens: Vec<Token>,
    ) -> Snippet {
        for (i, tok) in tokens.iter_mut().enumerate() {
            tok.index = i;
        }
        let ranges = split_statements(&tokens, language);
        let statements = ranges
            .into_iter()
            .enumerate()
            .map(|(ordinal, range)| {
                let category = classify(&tokens[range.clone()], language);
                Statement {
                    start: range.start,
                    end: range.end,
                    category,
                    ordinal,
                }
            })
            .collect();
        Snippet {
            id: id.into(),
            language,
            tokens,
            statements,
        }
    }

    pub fn from_record(record: &CorpusRecord) -> Result<Snippet> {
        Self::parse(record.id.clone(), record.language, &record.code)
    }

    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }

    /// Token texts of one statement.
    pub fn statement_texts(&self, ordinal: usize) -> Vec<&str> {
        self.statements[ordinal]
            .range()
            .map(|i| self.tokens[i].text.as_str())
            .collect()
    }

    /// Length of the longest statement, in tokens.
    pub fn max_statement_len(&self) -> usize {
        self.statements
            .iter()
            .map(Statement::len)
            .max()
            .unwrap_or(0)
    }
}

/// Split a token sequence into statement boundaries.
///
/// The returned ranges are disjoint, ordered, and jointly cover every token
/// exactly once. Degenerate inputs yield a single statement (or none, for
/// an empty sequence).
pub fn split_statements(tokens: &[Token], language: Language) -> Vec<Range<usize>> {
    match language {
        Language::Java => split_java(tokens),
        Language::Python => split_python(tokens),
    }
}

fn split_java(tokens: &[Token]) -> Vec<Range<usize>> {
    let mut cuts: Vec<usize> = Vec::new();
    let mut paren_depth: i32 = 0;
    for (i, tok) in tokens.iter().enumerate() {
        match tok.text.as_str() {
            "(" | "[" => paren_depth += 1,
            ")" | "]" => paren_depth = (paren_depth - 1).max(0),
            ";" if paren_depth == 0 => cuts.push(i + 1),
            "{" | "}" => cuts.push(i + 1),
            _ => {}
        }
    }
    let mut ranges = ranges_from_cuts(tokens.len(), &cuts);

    // Fold statements made only of closing braces into their predecessor.
    let mut merged: Vec<Range<usize>> = Vec::with_capacity(ranges.len());
    for range in ranges.drain(..) {
        let only_closers = range.clone().all(|i| tokens[i].text == "}");
        match merged.last_mut() {
            Some(prev) if only_closers => prev.end = range.end,
            _ => merged.push(range),
        }
    }
    merged
}

// Keywords that open a fresh logical line when met at top level. `if`,
// `else`, and `for` stay out: they appear inside conditional expressions
// and comprehensions.
const PYTHON_LINE_OPENERS: &[&str] = &[
    "return", "raise", "while", "try", "except", "finally", "del", "pass", "break", "continue",
    "yield", "assert", "import", "from", "class", "global", "nonlocal", "with", "elif",
];

fn split_python(tokens: &[Token]) -> Vec<Range<usize>> {
    let mut cuts: Vec<usize> = Vec::new();
    let mut depth: i32 = 0;
    let mut stmt_start = 0usize;
    let mut lambda_colon_pending = false;

    let is_continuation = |tok: &Token| -> bool {
        tok.kind == TokenKind::Operator
            || matches!(
                tok.text.as_str(),
                "." | "," | ":" | "(" | "[" | ")" | "]" | "}" | ";"
            )
            || matches!(
                tok.text.as_str(),
                "and" | "or" | "not" | "in" | "is" | "if" | "else" | "for" | "as"
            )
    };

    fn apply_cut(pos: usize, cuts: &mut Vec<usize>, stmt_start: &mut usize) {
        if pos > *stmt_start {
            cuts.push(pos);
            *stmt_start = pos;
        }
    }

    let mut i = 0usize;
    while i < tokens.len() {
        let tok = &tokens[i];
        match tok.text.as_str() {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => depth = (depth - 1).max(0),
            _ => {}
        }
        if depth > 0 {
            i += 1;
            continue;
        }

        macro_rules! cut_at {
            ($pos:expr) => {
                apply_cut($pos, &mut cuts, &mut stmt_start)
            };
        }

        match tok.text.as_str() {
            "lambda" => lambda_colon_pending = true,
            // Header end: def f():, if x:, for i in xs: ...
            ":" => {
                if lambda_colon_pending {
                    lambda_colon_pending = false;
                } else {
                    cut_at!(i + 1);
                }
            }
            ";" => cut_at!(i + 1),
            // A def (or a decorator) always opens a fresh statement.
            "def" => cut_at!(i),
            ")" => {
                let ends_line = match tokens.get(i + 1) {
                    None => false, // stream end closes the final statement anyway
                    Some(next) => !is_continuation(next),
                };
                if ends_line {
                    cut_at!(i + 1);
                }
            }
            // A fresh top-level assignment: the target tokens before the
            // '=' belong to the new statement, so cut before them.
            "=" if tok.kind == TokenKind::Operator => {
                let target_start = assignment_target_start(tokens, i);
                cut_at!(target_start);
            }
            text => {
                if tok.kind == TokenKind::Annotation {
                    cut_at!(i);
                } else if tok.kind == TokenKind::Keyword
                    && PYTHON_LINE_OPENERS.contains(&text)
                    && i > stmt_start
                {
                    // A statement keyword begins a new logical line, except
                    // the `import` of a `from ... import` line and the
                    // `from` of `raise ... from err`.
                    let current = &tokens[stmt_start..i];
                    let blocked = (text == "import" && current.iter().any(|t| t.text == "from"))
                        || (text == "from" && current.iter().any(|t| t.text == "raise"));
                    if !blocked {
                        cut_at!(i);
                    }
                }
            }
        }
        i += 1;
    }
    ranges_from_cuts(tokens.len(), &cuts)
}

/// Walk back from a top-level `=` over its assignment target
/// (`a`, `self.x`, `a[i]`, `a, b`) and return the index where the target
/// starts. Everything before that index belongs to the previous statement.
fn assignment_target_start(tokens: &[Token], eq_pos: usize) -> usize {
    let mut i = eq_pos;
    loop {
        if i == 0 {
            return 0;
        }
        let prev = &tokens[i - 1];
        match prev.text.as_str() {
            "]" => {
                // Skip the balanced subscript.
                let mut depth = 0i32;
                let mut j = i - 1;
                loop {
                    match tokens[j].text.as_str() {
                        "]" => depth += 1,
                        "[" => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                    if j == 0 {
                        return 0;
                    }
                    j -= 1;
                }
                i = j;
            }
            "," => i -= 1,
            _ if prev.kind == TokenKind::Identifier => {
                i -= 1;
                // A dotted path keeps walking; two adjacent names do not.
                if i > 0 && tokens[i - 1].text == "." {
                    i -= 1;
                } else {
                    return i;
                }
            }
            _ => return i,
        }
    }
}

fn ranges_from_cuts(len: usize, cuts: &[usize]) -> Vec<Range<usize>> {
    let mut ranges = Vec::new();
    let mut start = 0usize;
    for &cut in cuts {
        if cut > start && cut <= len {
            ranges.push(start..cut);
            start = cut;
        }
    }
    if start < len {
        ranges.push(start..len);
    }
    ranges
}

const JAVA_MODIFIERS: &[&str] = &[
    "public",
    "private",
    "protected",
    "static",
    "final",
    "abstract",
    "synchronized",
    "native",
    "strictfp",
    "transient",
    "volatile",
];

const JAVA_PRIMITIVES: &[&str] = &[
    "boolean", "byte", "char", "short", "int", "long", "float", "double", "void", "var",
];

/// Classify one statement into the taxonomy.
///
/// Rules are tried in a fixed priority order so that a statement matching
/// several shapes gets a deterministic label: method signature, annotation,
/// control-flow headers, throw/catch/finally/try, return, logging,
/// getter/setter, variable declaration, arithmetic, function invocation,
/// and finally the fallback.
pub fn classify(tokens: &[Token], language: Language) -> StatementCategory {
    if tokens.is_empty() {
        return StatementCategory::Other;
    }
    // Closing braces folded in from the splitter and `else` glue do not
    // carry the statement's identity.
    let skip = tokens
        .iter()
        .take_while(|t| t.text == "}" || t.text == "else")
        .count();
    let effective = if skip < tokens.len() {
        &tokens[skip..]
    } else {
        tokens
    };

    if is_method_signature(effective, language) {
        return StatementCategory::MethodSignature;
    }
    if effective[0].kind == TokenKind::Annotation {
        return StatementCategory::Annotation;
    }
    // Control-flow headers, then exception structure.
    let head_past_annotations = effective
        .iter()
        .find(|t| t.kind != TokenKind::Annotation)
        .unwrap_or(&effective[0]);
    let second = effective.get(1).map(|t| t.text.as_str());
    match head_past_annotations.text.as_str() {
        "if" | "elif" => return StatementCategory::IfCondition,
        "for" => return StatementCategory::For,
        "while" => return StatementCategory::While,
        "switch" => return StatementCategory::Switch,
        "case" => return StatementCategory::Case,
        "default" if second == Some(":") => return StatementCategory::Case,
        "break" => return StatementCategory::Break,
        "continue" => return StatementCategory::Continue,
        "synchronized" if second == Some("(") => return StatementCategory::Synchronized,
        "throw" | "raise" => return StatementCategory::Throw,
        "catch" | "except" => return StatementCategory::Catch,
        "finally" => return StatementCategory::Finally,
        "try" => return StatementCategory::Try,
        "return" => return StatementCategory::Return,
        _ => {}
    }
    if is_logging(effective) {
        return StatementCategory::Logging;
    }
    if let Some(cat) = getter_or_setter(effective) {
        return cat;
    }
    if is_variable_declaration(effective, language) {
        return StatementCategory::VariableDeclaration;
    }
    if is_arithmetic(effective) {
        return StatementCategory::Arithmetic;
    }
    if has_call(effective) {
        return StatementCategory::FunctionInvocation;
    }
    StatementCategory::Other
}

fn is_method_signature(tokens: &[Token], language: Language) -> bool {
    // Leading annotations ride on the header they decorate.
    let rest: Vec<&Token> = tokens
        .iter()
        .filter(|t| t.kind != TokenKind::Annotation)
        .collect();
    if rest.is_empty() {
        return false;
    }
    match language {
        Language::Python => {
            rest[0].text == "def"
                || (rest[0].text == "async" && rest.get(1).map(|t| t.text.as_str()) == Some("def"))
        }
        Language::Java => {
            let has_paren = rest.iter().any(|t| t.text == "(");
            if !has_paren {
                return false;
            }
            let ends_with_brace = rest.last().map(|t| t.text.as_str()) == Some("{");
            let eq_before_paren = rest
                .iter()
                .take_while(|t| t.text != "(")
                .any(|t| t.text == "=");
            if JAVA_MODIFIERS.contains(&rest[0].text.as_str())
                && rest.get(1).map(|t| t.text.as_str()) != Some("(")
                && (ends_with_brace || !eq_before_paren)
            {
                return true;
            }
            // Modifier-less header: `void run ( ... ) {` / `Foo bar ( ... ) {`.
            if ends_with_brace && !eq_before_paren && rest.len() >= 4 {
                let type_like = JAVA_PRIMITIVES.contains(&rest[0].text.as_str())
                    || (rest[0].kind == TokenKind::Identifier
                        && rest[0]
                            .text
                            .chars()
                            .next()
                            .is_some_and(|c| c.is_uppercase()));
                let name_call = rest[1].kind == TokenKind::Identifier
                    && rest.get(2).map(|t| t.text.as_str()) == Some("(");
                return type_like && name_call;
            }
            false
        }
    }
}

fn is_logging(tokens: &[Token]) -> bool {
    let invoked = tokens.iter().any(|t| t.text == "(");
    invoked
        && tokens
            .iter()
            .any(|t| matches!(t.text.as_str(), "log4j" | "Logger" | "println"))
}

fn getter_or_setter(tokens: &[Token]) -> Option<StatementCategory> {
    for (tok, next) in tokens.iter().zip(tokens.iter().skip(1)) {
        if tok.kind == TokenKind::Identifier && next.text == "(" {
            let name = tok.text.as_str();
            let accessor = |prefix: &str| {
                name.strip_prefix(prefix)
                    .and_then(|rest| rest.chars().next())
                    .is_some_and(|c| c.is_uppercase())
            };
            if accessor("get") {
                return Some(StatementCategory::Getter);
            }
            if accessor("set") {
                return Some(StatementCategory::Setter);
            }
        }
    }
    None
}

fn is_variable_declaration(tokens: &[Token], language: Language) -> bool {
    match language {
        Language::Python => has_top_level_assign(tokens) && !is_arithmetic(tokens),
        Language::Java => {
            let t0 = &tokens[0];
            let type_like = JAVA_PRIMITIVES.contains(&t0.text.as_str())
                || JAVA_MODIFIERS.contains(&t0.text.as_str())
                || (t0.kind == TokenKind::Identifier
                    && t0.text.chars().next().is_some_and(|c| c.is_uppercase()));
            if !type_like {
                return false;
            }
            // Hop over modifiers, a generic argument list, and array dims
            // to land on the declared name.
            let mut i = 0usize;
            while i < tokens.len() && JAVA_MODIFIERS.contains(&tokens[i].text.as_str()) {
                i += 1;
            }
            if i >= tokens.len() {
                return false;
            }
            let base_ok = JAVA_PRIMITIVES.contains(&tokens[i].text.as_str())
                || (tokens[i].kind == TokenKind::Identifier
                    && tokens[i]
                        .text
                        .chars()
                        .next()
                        .is_some_and(|c| c.is_uppercase()));
            if !base_ok {
                return false;
            }
            i += 1;
            if tokens.get(i).map(|t| t.text.as_str()) == Some("<") {
                let mut depth = 0i64;
                while i < tokens.len() {
                    match tokens[i].text.as_str() {
                        "<" => depth += 1,
                        ">" => depth -= 1,
                        ">>" => depth -= 2,
                        ">>>" => depth -= 3,
                        _ => {}
                    }
                    i += 1;
                    if depth <= 0 {
                        break;
                    }
                }
            }
            while matches!(
                tokens.get(i).map(|t| t.text.as_str()),
                Some("[") | Some("]")
            ) {
                i += 1;
            }
            let name_ok = tokens
                .get(i)
                .is_some_and(|t| t.kind == TokenKind::Identifier);
            if !name_ok {
                return false;
            }
            matches!(
                tokens.get(i + 1).map(|t| t.text.as_str()),
                Some("=") | Some(";") | Some(",") | Some("[")
            )
        }
    }
}

fn has_top_level_assign(tokens: &[Token]) -> bool {
    let mut depth = 0i32;
    for tok in tokens {
        match tok.text.as_str() {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => depth = (depth - 1).max(0),
            "=" if depth == 0 && tok.kind == TokenKind::Operator => return true,
            _ => {}
        }
    }
    false
}

const ARITH_OPS: &[&str] = &[
    "+", "-", "*", "/", "%", "**", "//", "++", "--", "+=", "-=", "*=", "/=", "%=", "**=", "//=",
];

fn is_arithmetic(tokens: &[Token]) -> bool {
    if has_call(tokens) {
        return false;
    }
    let mut has_op = false;
    for tok in tokens {
        match tok.kind {
            TokenKind::Identifier | TokenKind::NumericLiteral => {}
            TokenKind::Operator => {
                if ARITH_OPS.contains(&tok.text.as_str()) {
                    has_op = true;
                } else if tok.text != "=" {
                    return false;
                }
            }
            TokenKind::Delimiter => {
                if !matches!(tok.text.as_str(), "(" | ")" | "[" | "]" | ";" | "." | ",") {
                    return false;
                }
            }
            _ => return false,
        }
    }
    has_op
}

fn has_call(tokens: &[Token]) -> bool {
    tokens.iter().zip(tokens.iter().skip(1)).any(|(a, b)| {
        (a.kind == TokenKind::Identifier || (a.kind == TokenKind::Keyword && a.text == "super"))
            && b.text == "("
    })
}

/// Cache-file record: one parsed snippet in a compact, bit-stable layout.
/// Token indices and statement ordinals are positional and omitted.
#[derive(Debug, Serialize, Deserialize)]
pub struct SnippetRecord {
    pub id: String,
    pub language: Language,
    pub tokens: Vec<(String, TokenKind)>,
    pub statements: Vec<(usize, usize, StatementCategory)>,
}

impl From<&Snippet> for SnippetRecord {
    fn from(s: &Snippet) -> Self {
        SnippetRecord {
            id: s.id.clone(),
            language: s.language,
            tokens: s.tokens.iter().map(|t| (t.text.clone(), t.kind)).collect(),
            statements: s
                .statements
                .iter()
                .map(|st| (st.start, st.end, st.category))
                .collect(),
        }
    }
}

impl From<SnippetRecord> for Snippet {
    fn from(r: SnippetRecord) -> Self {
        Snippet {
            id: r.id,
            language: r.language,
            tokens: r
                .tokens
                .into_iter()
                .enumerate()
                .map(|(index, (text, kind))| Token { text, kind, index })
                .collect(),
            statements: r
                .statements
                .into_iter()
                .enumerate()
                .map(|(ordinal, (start, end, category))| Statement {
                    start,
                    end,
                    category,
                    ordinal,
                })
                .collect(),
        }
    }
}

/// Write snippets to a cache file, one JSON record per line.
pub fn write_snippet_cache<'a>(
    path: impl AsRef<Path>,
    snippets: impl IntoIterator<Item = &'a Snippet>,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = BufWriter::new(file);
    for snippet in snippets {
        let record = SnippetRecord::from(snippet);
        let line = serde_json::to_string(&record).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        writeln!(out, "{line}").map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    out.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Streaming reader over a snippet cache file.
pub struct SnippetReader<R> {
    lines: Lines<BufReader<R>>,
    line_no: usize,
}

impl SnippetReader<File> {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(SnippetReader {
            lines: BufReader::new(file).lines(),
            line_no: 0,
        })
    }
}

impl<R: Read> SnippetReader<R> {
    pub fn new(reader: R) -> Self {
        SnippetReader {
            lines: BufReader::new(reader).lines(),
            line_no: 0,
        }
    }
}

impl<R: Read> Iterator for SnippetReader<R> {
    type Item = Result<Snippet>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(line) => line,
                Err(e) => {
                    return Some(Err(Error::Io {
                        path: "<cache>".into(),
                        source: e,
                    }))
                }
            };
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            return Some(
                serde_json::from_str::<SnippetRecord>(&line)
                    .map(Snippet::from)
                    .map_err(|e| Error::MalformedRecord {
                        line: self.line_no,
                        message: e.to_string(),
                    }),
            );
        }
    }
}

/// Load a whole snippet cache into memory.
pub fn read_snippet_cache(path: impl AsRef<Path>) -> Result<Vec<Snippet>> {
    SnippetReader::open(path)?.collect()
}
