//! The `.gpde` model language: lexer, parser, semantic checks, printer, and
//! the built-in model corpus.

pub mod diagnostics;
pub mod eval;
pub mod lexer;
pub mod parser;
pub mod printer;

pub use diagnostics::{Diagnostic, Severity, Span};
pub use printer::{model_source, poly_source};

use crate::error::Error;
use crate::gauge_pde::Model;

/// Parse and validate a model.
pub fn parse_model(src: &str) -> Result<Model, Vec<Diagnostic>> {
    let stmts = parser::parse(src).map_err(|d| vec![d])?;
    eval::build(&stmts)
}

/// Like [`parse_model`], with diagnostics rendered into an [`Error`].
pub fn load_model(file: &str, src: &str) -> Result<Model, Error> {
    parse_model(src).map_err(|ds| Error::Parse(ds.iter().map(|d| d.render(file, src)).collect::<Vec<_>>().join("\n")))
}

pub const BUILTINS: [(&str, &str); 4] = [
    ("ce_aksz", include_str!("../../models/ce_aksz.gpde")),
    ("ym_weak", include_str!("../../models/ym_weak.gpde")),
    ("maxwell_weak", include_str!("../../models/maxwell_weak.gpde")),
    ("toy_dim0", include_str!("../../models/toy_dim0.gpde")),
];

pub fn builtin_source(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// One of the shipped models by name.
pub fn builtin(name: &str) -> Result<Model, Error> {
    let src = builtin_source(name).ok_or_else(|| Error::Parse(format!("unknown built-in model `{name}`")))?;
    load_model(&format!("{name}.gpde"), src)
}
