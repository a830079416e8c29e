//! Surface syntax tree, with names instead of indices.

use std::rc::Rc;

use crate::level::Level;
use crate::span::Span;
use crate::term::Name;

#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Debug, Clone)]
pub enum ExprKind {
    Var(Name),
    Universe(Level),
    Hole,
    /// Binder name `_` for a non-dependent arrow.
    Pi(Name, Rc<Expr>, Rc<Expr>),
    Sigma(Name, Rc<Expr>, Rc<Expr>),
    Lam(Name, Option<Rc<Expr>>, Rc<Expr>),
    App(Rc<Expr>, Rc<Expr>),
    Pair(Rc<Expr>, Rc<Expr>),
    Fst(Rc<Expr>),
    Snd(Rc<Expr>),
    Id(Rc<Expr>, Rc<Expr>, Rc<Expr>),
    Refl(Rc<Expr>, Rc<Expr>),
    /// `J A C d x y p`
    J(Box<[Rc<Expr>; 6]>),
    Ann(Rc<Expr>, Rc<Expr>),
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Rc<Expr> {
        Rc::new(Expr { kind, span })
    }

    /// Unspanned node, for generated syntax.
    pub fn synth(kind: ExprKind) -> Rc<Expr> {
        Expr::new(kind, Span::default())
    }

    /// Alpha-equivalence ignoring spans. Free names compare by spelling.
    pub fn alpha_eq(&self, other: &Expr) -> bool {
        fn go<'a>(a: &'a Expr, b: &'a Expr, env: &mut Vec<(&'a str, &'a str)>) -> bool {
            use ExprKind::*;
            match (&a.kind, &b.kind) {
                (Var(x), Var(y)) => {
                    let bx = env.iter().rev().position(|(l, _)| *l == &**x);
                    let by = env.iter().rev().position(|(_, r)| *r == &**y);
                    match (bx, by) {
                        (None, None) => x == y,
                        (i, j) => i == j,
                    }
                }
                (Universe(l), Universe(m)) => l == m,
                (Hole, Hole) => true,
                (Pi(x, a1, b1), Pi(y, a2, b2)) | (Sigma(x, a1, b1), Sigma(y, a2, b2)) => {
                    if std::mem::discriminant(&a.kind) != std::mem::discriminant(&b.kind) || !go(a1, a2, env) {
                        return false;
                    }
                    env.push((x, y));
                    let r = go(b1, b2, env);
                    env.pop();
                    r
                }
                (Lam(x, t1, b1), Lam(y, t2, b2)) => {
                    let ann = match (t1, t2) {
                        (None, None) => true,
                        (Some(t1), Some(t2)) => go(t1, t2, env),
                        _ => false,
                    };
                    if !ann {
                        return false;
                    }
                    env.push((x, y));
                    let r = go(b1, b2, env);
                    env.pop();
                    r
                }
                (App(f1, a1), App(f2, a2)) | (Pair(f1, a1), Pair(f2, a2)) | (Refl(f1, a1), Refl(f2, a2)) | (Ann(f1, a1), Ann(f2, a2)) => {
                    std::mem::discriminant(&a.kind) == std::mem::discriminant(&b.kind) && go(f1, f2, env) && go(a1, a2, env)
                }
                (Fst(x), Fst(y)) | (Snd(x), Snd(y)) => go(x, y, env),
                (Id(a1, x1, y1), Id(a2, x2, y2)) => go(a1, a2, env) && go(x1, x2, env) && go(y1, y2, env),
                (J(xs), J(ys)) => xs.iter().zip(ys.iter()).all(|(x, y)| go(x, y, env)),
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }
}

#[derive(Debug, Clone)]
pub enum Decl {
    Def { name: Name, ty: Rc<Expr>, body: Rc<Expr>, span: Span },
    Postulate { name: Name, ty: Rc<Expr>, span: Span },
    Import { path: String, span: Span },
    /// A `#` line; kept for tooling and otherwise ignored.
    Pragma { text: String, span: Span },
}

impl Decl {
    pub fn span(&self) -> Span {
        match self {
            Decl::Def { span, .. } | Decl::Postulate { span, .. } | Decl::Import { span, .. } | Decl::Pragma { span, .. } => *span,
        }
    }
}
