//! System F: parsing, type inference, and translation into `.itt` files.

pub mod check;
pub mod parser;
pub mod syntax;
pub mod translate;

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::span::Span;
use crate::surface::print::print_expr;
use crate::term::Name;

pub use check::{infer_f, subst, FEnv};
pub use parser::{parse_f, parse_f_term, parse_f_type};
pub use syntax::{FDecl, FTerm, FTermKind, FType};
pub use translate::{translate_term, translate_type, Mode, Translator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FErrorKind {
    Parse,
    UnboundVar,
    UnboundTypeVar,
    Mismatch,
    NotAFunction,
    NotAForall,
    /// `/\X. t` where `X` is free in the context.
    SideCondition,
    Duplicate,
}

impl fmt::Display for FErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Error)]
#[error("{kind}: {message}")]
pub struct FError {
    pub kind: FErrorKind,
    pub message: String,
    pub span: Span,
}

impl FError {
    pub fn new(kind: FErrorKind, message: impl Into<String>, span: Span) -> FError {
        FError { kind, message: message.into(), span }
    }

    pub fn parse(message: impl Into<String>, span: Span) -> FError {
        FError::new(FErrorKind::Parse, message, span)
    }

    pub fn is_parse(&self) -> bool {
        self.kind == FErrorKind::Parse
    }

    pub fn span(&self) -> Span {
        self.span
    }
}

/// Check every declaration of a `.sysf` file, returning their inferred types.
pub fn check_decls(decls: &[FDecl]) -> Result<Vec<(Name, Rc<FType>)>, FError> {
    let mut globals: Vec<(Name, Rc<FType>)> = Vec::new();
    for d in decls {
        if globals.iter().any(|(n, _)| *n == d.name) {
            return Err(FError::new(FErrorKind::Duplicate, format!("`{}` is defined twice", d.name), d.span));
        }
        if let Some(v) = d.ty.free_vars().into_iter().next() {
            return Err(FError::new(FErrorKind::UnboundTypeVar, format!("unbound type variable `{v}`"), d.span));
        }
        let inferred = infer_f(&mut FEnv::new(&globals), &d.body)?;
        if !inferred.alpha_eq(&d.ty) {
            return Err(FError::new(
                FErrorKind::Mismatch,
                format!("`{}` is declared as `{}` but has type `{inferred}`", d.name, d.ty),
                d.body.span,
            ));
        }
        globals.push((d.name.clone(), d.ty.clone()));
    }
    Ok(globals)
}

/// Parse, check and translate a `.sysf` source into `.itt` text.
pub fn translate_source(src: &str, mode: Mode) -> Result<String, FError> {
    let decls = parse_f(src)?;
    check_decls(&decls)?;
    let mut out = format!("-- translated from System F, mode {}\n", mode.cli_name());
    if mode.needs_prelude() {
        out.push_str("import \"prelude.itt\"\n");
    }
    let mut tr = Translator::new(mode);
    for d in &decls {
        let ty = tr.ty(&d.ty);
        let body = tr.term(&d.body);
        let name = tr.declare(&d.name);
        out.push_str(&format!("\ndef {name} : {}\n  := {}\n", print_expr(&ty), print_expr(&body)));
    }
    Ok(out)
}
