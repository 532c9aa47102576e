//! Surface syntax for source programs: a named, parenthesized prefix
//! notation with explicit value/computation keywords.

mod elaborate;
mod parse;
mod print;

pub use elaborate::{elaborate, ElabError, ElabErrors};
pub use parse::{from_sexp, parse_surface, Surface, SurfaceKind, KEYWORDS};
pub use print::{print_derivation, surface_of_comp, surface_of_val};

use crate::sexp::SyntaxError;
use crate::source::SourceDeriv;
use crate::types::QType;

#[derive(Debug, thiserror::Error)]
pub enum FrontendError {
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    #[error("{0}")]
    Elab(#[from] ElabErrors),
}

/// Parses and elaborates a closed source term.
pub fn load_source(text: &str) -> Result<(SourceDeriv, QType), FrontendError> {
    Ok(elaborate(&parse_surface(text)?)?)
}
