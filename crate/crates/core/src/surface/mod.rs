//! Concrete syntax: lexer, parser, printer and elaborator.

pub mod elab;
pub mod lexer;
pub mod parser;
pub mod print;
pub mod syntax;

pub use lexer::ParseError;
pub use parser::{parse_expr, parse_file};
