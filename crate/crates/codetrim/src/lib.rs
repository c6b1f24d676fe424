//! Code simplification for token-budgeted consumers of source code.
//!
//! `codetrim` shrinks Java and Python functions to a target token budget
//! while keeping the tokens and statements that matter most. It works on
//! plain token streams: no compiler, no model inference. Attention weights
//! produced by an external model are ingested as data files and drive the
//! attention-based strategy; the other two strategies (random dropout and
//! corpus-frequency filtering) need only a token dictionary.
//!
//! The pipeline has four stages, each usable on its own:
//!
//! 1. [`corpus`]: stream function records from line-delimited JSON and
//!    rewrite literals to generic tokens.
//! 2. [`lexer`] and [`statement`]: tokenize, split into statements, and
//!    classify each statement into a fixed taxonomy.
//! 3. [`attention`]: reduce exported attention tensors, build corpus-level
//!    token and per-category dictionaries.
//! 4. [`pruning`] and [`metrics`]: reduce each snippet to the budget and
//!    summarize a run.
//!
//! See the `examples/` directory for one runnable walkthrough per
//! capability, and the `codetrim` binary for the file-based pipeline.

pub mod attention;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod lexer;
pub mod metrics;
pub mod pruning;
pub mod statement;

pub use error::{Error, Result};
pub use lexer::{lex, Token, TokenKind};
pub use statement::{Snippet, Statement, StatementCategory};
