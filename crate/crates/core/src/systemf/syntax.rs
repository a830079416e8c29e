//! System F types and terms with named variables.

use std::collections::BTreeSet;
use std::fmt;
use std::rc::Rc;

use crate::span::Span;
use crate::term::Name;

#[derive(Debug, Clone)]
pub enum FType {
    Var(Name),
    Arrow(Rc<FType>, Rc<FType>),
    Forall(Name, Rc<FType>),
}

impl FType {
    pub fn var(x: &str) -> Rc<FType> {
        Rc::new(FType::Var(x.into()))
    }

    pub fn arrow(a: Rc<FType>, b: Rc<FType>) -> Rc<FType> {
        Rc::new(FType::Arrow(a, b))
    }

    pub fn forall(x: &str, body: Rc<FType>) -> Rc<FType> {
        Rc::new(FType::Forall(x.into(), body))
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        fn go(t: &FType, bound: &mut Vec<Name>, out: &mut BTreeSet<Name>) {
            match t {
                FType::Var(x) => {
                    if !bound.contains(x) {
                        out.insert(x.clone());
                    }
                }
                FType::Arrow(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                FType::Forall(x, b) => {
                    bound.push(x.clone());
                    go(b, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn alpha_eq(&self, other: &FType) -> bool {
        fn go<'a>(a: &'a FType, b: &'a FType, env: &mut Vec<(&'a Name, &'a Name)>) -> bool {
            match (a, b) {
                (FType::Var(x), FType::Var(y)) => {
                    let i = env.iter().rev().position(|(l, _)| *l == x);
                    let j = env.iter().rev().position(|(_, r)| *r == y);
                    match (i, j) {
                        (None, None) => x == y,
                        (i, j) => i == j,
                    }
                }
                (FType::Arrow(a1, b1), FType::Arrow(a2, b2)) => go(a1, a2, env) && go(b1, b2, env),
                (FType::Forall(x, b1), FType::Forall(y, b2)) => {
                    env.push((x, y));
                    let r = go(b1, b2, env);
                    env.pop();
                    r
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }

    pub fn size(&self) -> usize {
        match self {
            FType::Var(_) => 1,
            FType::Arrow(a, b) => 1 + a.size() + b.size(),
            FType::Forall(_, b) => 1 + b.size(),
        }
    }
}

impl fmt::Display for FType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FType::Var(x) => f.write_str(x),
            FType::Arrow(a, b) => {
                if matches!(a.as_ref(), FType::Var(_)) {
                    write!(f, "{a} -> {b}")
                } else {
                    write!(f, "({a}) -> {b}")
                }
            }
            FType::Forall(x, b) => write!(f, "forall {x}. {b}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FTerm {
    pub kind: FTermKind,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub enum FTermKind {
    Var(Name),
    Lam(Name, Rc<FType>, Rc<FTerm>),
    App(Rc<FTerm>, Rc<FTerm>),
    TyLam(Name, Rc<FTerm>),
    TyApp(Rc<FTerm>, Rc<FType>),
}

impl FTerm {
    pub fn new(kind: FTermKind, span: Span) -> Rc<FTerm> {
        Rc::new(FTerm { kind, span })
    }
}

#[derive(Debug, Clone)]
pub struct FDecl {
    pub name: Name,
    pub ty: Rc<FType>,
    pub body: Rc<FTerm>,
    pub span: Span,
}
