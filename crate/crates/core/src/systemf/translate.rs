//! Translation of System F into `.itt` surface syntax.
//!
//! In [`Mode::FullU`] a quantifier ranges over `U`. In the other modes it
//! ranges over a subuniverse (`Prop`, `Set`, `OneType`) and type variables
//! are decoded with the matching `El`. Type arguments are then passed as
//! codes built from the prelude helpers, whose decodings are definitionally
//! the translated types.

use std::collections::BTreeSet;
use std::rc::Rc;

use crate::level::Level;
use crate::surface::lexer::KEYWORDS;
use crate::surface::syntax::{Expr, ExprKind};
use crate::term::Name;

use super::syntax::{FTerm, FTermKind, FType};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    FullU,
    Prop,
    Set,
    OneType,
}

struct Names {
    universe: &'static str,
    el: &'static str,
    arrow: &'static str,
    forall: &'static str,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::FullU, Mode::Prop, Mode::Set, Mode::OneType];

    pub fn cli_name(self) -> &'static str {
        match self {
            Mode::FullU => "u",
            Mode::Prop => "prop",
            Mode::Set => "set",
            Mode::OneType => "onetype",
        }
    }

    fn names(self) -> Option<Names> {
        let (universe, el, arrow, forall) = match self {
            Mode::FullU => return None,
            Mode::Prop => ("Prop", "ElP", "arrowProp", "forallProp"),
            Mode::Set => ("Set", "El", "arrowSet", "forallSet"),
            Mode::OneType => ("OneType", "El1", "arrow1", "forall1"),
        };
        Some(Names { universe, el, arrow, forall })
    }

    /// Whether the translation refers to prelude definitions.
    pub fn needs_prelude(self) -> bool {
        self != Mode::FullU
    }
}

/// Names the translation must not bind.
pub const RESERVED: &[&str] = &[
    "Prop", "ElP", "arrowProp", "forallProp", "Set", "El", "arrowSet", "forallSet", "OneType", "El1", "arrow1",
    "forall1",
];

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Ty,
    Tm,
}

pub struct Translator {
    mode: Mode,
    /// Top-level names already emitted: F name and `.itt` name.
    globals: Vec<(Name, Name)>,
    scope: Vec<(Kind, Name, Name)>,
}

fn var(n: &str) -> Rc<Expr> {
    Expr::synth(ExprKind::Var(n.into()))
}

fn app(f: Rc<Expr>, a: Rc<Expr>) -> Rc<Expr> {
    Expr::synth(ExprKind::App(f, a))
}

impl Translator {
    pub fn new(mode: Mode) -> Translator {
        Translator { mode, globals: Vec::new(), scope: Vec::new() }
    }

    fn taken(&self, n: &str) -> bool {
        KEYWORDS.contains(&n)
            || RESERVED.contains(&n)
            || self.scope.iter().any(|(_, _, m)| &**m == n)
            || self.globals.iter().any(|(_, m)| &**m == n)
    }

    fn fresh(&self, base: &str) -> Name {
        let mut n = base.to_string();
        while self.taken(&n) {
            n.push('\'');
        }
        n.as_str().into()
    }

    fn bind(&mut self, kind: Kind, x: &Name) -> Name {
        let n = self.fresh(x);
        self.scope.push((kind, x.clone(), n.clone()));
        n
    }

    fn resolve(&self, kind: Kind, x: &str) -> Name {
        self.scope
            .iter()
            .rev()
            .find(|(k, f, _)| *k == kind && &**f == x)
            .map(|(_, _, m)| m.clone())
            .or_else(|| {
                (kind == Kind::Tm)
                    .then(|| self.globals.iter().rev().find(|(f, _)| &**f == x).map(|(_, m)| m.clone()))
                    .flatten()
            })
            .unwrap_or_else(|| x.into())
    }

    /// Register a top-level declaration and return its `.itt` name.
    pub fn declare(&mut self, x: &Name) -> Name {
        let n = self.fresh(x);
        self.globals.push((x.clone(), n.clone()));
        n
    }

    pub fn ty(&mut self, t: &FType) -> Rc<Expr> {
        match t {
            FType::Var(x) => {
                let n = self.resolve(Kind::Ty, x);
                match self.mode.names() {
                    None => var(&n),
                    Some(names) => app(var(names.el), var(&n)),
                }
            }
            FType::Arrow(a, b) => {
                let a = self.ty(a);
                let b = self.ty(b);
                Expr::synth(ExprKind::Pi("_".into(), a, b))
            }
            FType::Forall(x, b) => {
                let universe = match self.mode.names() {
                    None => Expr::synth(ExprKind::Universe(Level::Imp)),
                    Some(names) => var(names.universe),
                };
                let n = self.bind(Kind::Ty, x);
                let b = self.ty(b);
                self.scope.pop();
                Expr::synth(ExprKind::Pi(n, universe, b))
            }
        }
    }

    /// A type as an argument: itself in `FullU`, otherwise its code.
    fn ty_arg(&mut self, t: &FType) -> Rc<Expr> {
        let Some(names) = self.mode.names() else {
            return self.ty(t);
        };
        match t {
            FType::Var(x) => var(&self.resolve(Kind::Ty, x)),
            FType::Arrow(a, b) => {
                let a = self.ty_arg(a);
                let b = self.ty_arg(b);
                app(app(var(names.arrow), a), b)
            }
            FType::Forall(x, b) => {
                let n = self.bind(Kind::Ty, x);
                let b = self.ty_arg(b);
                self.scope.pop();
                app(var(names.forall), Expr::synth(ExprKind::Lam(n, None, b)))
            }
        }
    }

    pub fn term(&mut self, t: &FTerm) -> Rc<Expr> {
        match &t.kind {
            FTermKind::Var(x) => var(&self.resolve(Kind::Tm, x)),
            FTermKind::Lam(x, a, body) => {
                let a = self.ty(a);
                let n = self.bind(Kind::Tm, x);
                let body = self.term(body);
                self.scope.pop();
                Expr::synth(ExprKind::Lam(n, Some(a), body))
            }
            FTermKind::TyLam(x, body) => {
                let universe = match self.mode.names() {
                    None => Expr::synth(ExprKind::Universe(Level::Imp)),
                    Some(names) => var(names.universe),
                };
                let n = self.bind(Kind::Ty, x);
                let body = self.term(body);
                self.scope.pop();
                Expr::synth(ExprKind::Lam(n, Some(universe), body))
            }
            FTermKind::App(f, a) => {
                let f = self.term(f);
                let a = self.term(a);
                app(f, a)
            }
            FTermKind::TyApp(f, b) => {
                let f = self.term(f);
                let b = self.ty_arg(b);
                app(f, b)
            }
        }
    }
}

/// Translate a closed type.
pub fn translate_type(t: &FType, mode: Mode) -> Rc<Expr> {
    Translator::new(mode).ty(t)
}

/// Translate a closed term.
pub fn translate_term(t: &FTerm, mode: Mode) -> Rc<Expr> {
    Translator::new(mode).term(t)
}

/// Every name bound in a type, for tests that rename binders.
pub fn bound_names(t: &FType) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    fn go(t: &FType, out: &mut BTreeSet<Name>) {
        match t {
            FType::Var(_) => {}
            FType::Arrow(a, b) => {
                go(a, out);
                go(b, out);
            }
            FType::Forall(x, b) => {
                out.insert(x.clone());
                go(b, out);
            }
        }
    }
    go(t, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parse_expr;
    use crate::surface::print::print_expr;
    use crate::systemf::parser::{parse_f_term, parse_f_type};

    fn ty(src: &str, mode: Mode) -> String {
        print_expr(&translate_type(&parse_f_type(src).unwrap(), mode))
    }

    #[test]
    fn nat_shapes() {
        assert_eq!(ty("forall X. (X -> X) -> X -> X", Mode::FullU), "(X : U) -> (X -> X) -> X -> X");
        assert_eq!(
            ty("forall X. (X -> X) -> X -> X", Mode::Set),
            "(X : Set) -> (El X -> El X) -> El X -> El X"
        );
        assert_eq!(ty("X -> X", Mode::FullU), "X -> X");
    }

    #[test]
    fn terms_and_type_arguments() {
        let two = parse_f_term("/\\X. \\(f : X -> X). \\(x : X). f (f x)").unwrap();
        assert_eq!(print_expr(&translate_term(&two, Mode::FullU)), "fun (X : U) (f : X -> X) (x : X) => f (f x)");
        let inst = parse_f_term("/\\Y. two [Y -> Y]").unwrap();
        assert_eq!(print_expr(&translate_term(&inst, Mode::Set)), "fun (Y : Set) => two (arrowSet Y Y)");
        let e = translate_term(&inst, Mode::FullU);
        assert!(e.alpha_eq(&parse_expr("fun (Y : U) => two (Y -> Y)").unwrap()));
    }

    #[test]
    fn reserved_names_are_avoided() {
        assert_eq!(ty("forall El. El -> El", Mode::Set), "(El' : Set) -> El El' -> El El'");
        let t = parse_f_term("/\\X. \\(X : X). X").unwrap();
        assert_eq!(print_expr(&translate_term(&t, Mode::FullU)), "fun (X : U) (X' : X) => X'");
    }
}
