//! Pretty printing. Output re-parses to an alpha-equivalent tree.

use std::collections::HashSet;
use std::rc::Rc;

use crate::level::Level;
use crate::term::{Name, Term};

use super::syntax::{Decl, Expr, ExprKind};

const TERM: u8 = 0;
const SIGMA: u8 = 1;
const APP: u8 = 2;
const ATOM: u8 = 3;

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    go(e, TERM, &mut out);
    out
}

pub fn print_decl(d: &Decl) -> String {
    match d {
        Decl::Def { name, ty, body, .. } => format!("def {name} : {} := {}", print_expr(ty), print_expr(body)),
        Decl::Postulate { name, ty, .. } => format!("postulate {name} : {}", print_expr(ty)),
        Decl::Import { path, .. } => format!("import \"{path}\""),
        Decl::Pragma { text, .. } => format!("# {text}"),
    }
}

pub fn print_file(decls: &[Decl]) -> String {
    decls.iter().map(|d| print_decl(d) + "\n").collect()
}

fn level_name(l: Level) -> String {
    l.to_string()
}

fn go(e: &Expr, prec: u8, out: &mut String) {
    let own = match &e.kind {
        ExprKind::Var(_) | ExprKind::Universe(_) | ExprKind::Hole | ExprKind::Pair(..) | ExprKind::Ann(..) => ATOM,
        ExprKind::App(..) | ExprKind::Fst(_) | ExprKind::Snd(_) | ExprKind::Id(..) | ExprKind::Refl(..) | ExprKind::J(_) => APP,
        ExprKind::Sigma(..) => SIGMA,
        ExprKind::Pi(..) | ExprKind::Lam(..) => TERM,
    };
    if own < prec {
        out.push('(');
        go(e, TERM, out);
        out.push(')');
        return;
    }
    match &e.kind {
        ExprKind::Var(x) => out.push_str(x),
        ExprKind::Universe(l) => out.push_str(&level_name(*l)),
        ExprKind::Hole => out.push('_'),
        ExprKind::Pi(x, a, b) if &**x == "_" => {
            go_guarded(a, SIGMA, out);
            out.push_str(" -> ");
            go(b, TERM, out);
        }
        ExprKind::Pi(..) => {
            let mut cur = e;
            while let ExprKind::Pi(x, a, b) = &cur.kind {
                if &**x == "_" {
                    break;
                }
                out.push_str(&format!("({x} : "));
                go(a, TERM, out);
                out.push_str(") ");
                cur = b;
            }
            out.push_str("-> ");
            go(cur, TERM, out);
        }
        ExprKind::Sigma(x, a, b) => {
            if &**x == "_" {
                go_guarded(a, APP, out);
            } else {
                out.push_str(&format!("({x} : "));
                go(a, TERM, out);
                out.push(')');
            }
            out.push_str(" * ");
            go(b, SIGMA, out);
        }
        ExprKind::Lam(..) => {
            out.push_str("fun");
            let mut cur = e;
            while let ExprKind::Lam(x, ann, b) = &cur.kind {
                match ann {
                    None => out.push_str(&format!(" {x}")),
                    Some(t) => {
                        out.push_str(&format!(" ({x} : "));
                        go(t, TERM, out);
                        out.push(')');
                    }
                }
                cur = b;
            }
            out.push_str(" => ");
            go(cur, TERM, out);
        }
        ExprKind::App(f, a) => {
            go(f, APP, out);
            out.push(' ');
            go(a, ATOM, out);
        }
        ExprKind::Pair(a, b) => {
            out.push('(');
            go(a, TERM, out);
            out.push_str(", ");
            go(b, TERM, out);
            out.push(')');
        }
        ExprKind::Ann(a, t) => {
            out.push('(');
            go(a, TERM, out);
            out.push_str(" : ");
            go(t, TERM, out);
            out.push(')');
        }
        ExprKind::Fst(a) | ExprKind::Snd(a) => {
            out.push_str(if matches!(e.kind, ExprKind::Fst(_)) { "fst " } else { "snd " });
            go(a, ATOM, out);
        }
        ExprKind::Id(a, x, y) => keyword_app("Id", [a, x, y], out),
        ExprKind::Refl(a, x) => keyword_app("refl", [a, x], out),
        ExprKind::J(args) => keyword_app("J", args.each_ref(), out),
    }
}

/// An annotation in front of `->` or `*` would read back as a binder.
fn go_guarded(e: &Expr, prec: u8, out: &mut String) {
    if matches!(e.kind, ExprKind::Ann(..)) {
        out.push('(');
        go(e, prec, out);
        out.push(')');
    } else {
        go(e, prec, out);
    }
}

fn keyword_app<const N: usize>(kw: &str, args: [&Rc<Expr>; N], out: &mut String) {
    out.push_str(kw);
    for a in args {
        out.push(' ');
        go(a, ATOM, out);
    }
}

/// Does `t` mention the variable with index `i`?
pub fn mentions(t: &Term, i: usize) -> bool {
    match t {
        Term::Var(j) => *j == i,
        Term::Universe(_) | Term::Const(_) | Term::Meta(_) => false,
        Term::Pi(_, a, b) | Term::Sigma(_, a, b) => mentions(a, i) || mentions(b, i + 1),
        Term::Lam(_, a, b) => a.as_ref().is_some_and(|a| mentions(a, i)) || mentions(b, i + 1),
        Term::App(a, b) | Term::Pair(a, b) | Term::Refl(a, b) => mentions(a, i) || mentions(b, i),
        Term::Fst(a) | Term::Snd(a) => mentions(a, i),
        Term::Id(a, b, c) => mentions(a, i) || mentions(b, i) || mentions(c, i),
        Term::J(j) => j.iter().any(|x| mentions(x, i)),
    }
}

/// Convert a core term to surface syntax, choosing binder names that do not
/// capture. `names` lists the enclosing binders, outermost first.
pub fn term_to_expr(t: &Term, names: &[Name]) -> Rc<Expr> {
    let avoid: HashSet<Name> = t.constants().into_iter().collect();
    let mut scope = names.to_vec();
    to_expr(t, &mut scope, &avoid)
}

pub fn render_term(t: &Term, names: &[Name]) -> String {
    print_expr(&term_to_expr(t, names))
}

fn pick(base: &Name, used: bool, arrow: bool, scope: &[Name], avoid: &HashSet<Name>) -> Name {
    if !used && arrow {
        return "_".into();
    }
    let base: Name = if &**base == "_" || base.is_empty() { if used { "x".into() } else { return "_".into() } } else { base.clone() };
    let clash = |n: &str| scope.iter().any(|s| &**s == n) || avoid.contains(n) || super::lexer::KEYWORDS.contains(&n);
    if !clash(&base) {
        return base;
    }
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    (1..)
        .map(|k| format!("{stem}{k}"))
        .find(|n| !clash(n))
        .map(|n| n.as_str().into())
        .unwrap_or(base)
}

fn to_expr(t: &Term, scope: &mut Vec<Name>, avoid: &HashSet<Name>) -> Rc<Expr> {
    let k = match t {
        Term::Var(i) => match scope.len().checked_sub(i + 1) {
            Some(l) => ExprKind::Var(scope[l].clone()),
            None => ExprKind::Var(format!("#{i}").as_str().into()),
        },
        Term::Universe(l) => ExprKind::Universe(*l),
        Term::Const(c) => ExprKind::Var(c.clone()),
        Term::Meta(m) => ExprKind::Var(format!("?{m}").as_str().into()),
        Term::Pi(x, a, b) | Term::Sigma(x, a, b) => {
            let a = to_expr(a, scope, avoid);
            let name = pick(x, mentions(b, 0), true, scope, avoid);
            scope.push(name.clone());
            let b = to_expr(b, scope, avoid);
            scope.pop();
            if matches!(t, Term::Pi(..)) {
                ExprKind::Pi(name, a, b)
            } else {
                ExprKind::Sigma(name, a, b)
            }
        }
        Term::Lam(x, a, b) => {
            let a = a.as_ref().map(|a| to_expr(a, scope, avoid));
            let name = pick(x, mentions(b, 0), false, scope, avoid);
            scope.push(name.clone());
            let b = to_expr(b, scope, avoid);
            scope.pop();
            ExprKind::Lam(name, a, b)
        }
        Term::App(f, a) => ExprKind::App(to_expr(f, scope, avoid), to_expr(a, scope, avoid)),
        Term::Pair(a, b) => ExprKind::Pair(to_expr(a, scope, avoid), to_expr(b, scope, avoid)),
        Term::Fst(a) => ExprKind::Fst(to_expr(a, scope, avoid)),
        Term::Snd(a) => ExprKind::Snd(to_expr(a, scope, avoid)),
        Term::Id(a, x, y) => ExprKind::Id(to_expr(a, scope, avoid), to_expr(x, scope, avoid), to_expr(y, scope, avoid)),
        Term::Refl(a, x) => ExprKind::Refl(to_expr(a, scope, avoid), to_expr(x, scope, avoid)),
        Term::J(j) => {
            let args: Vec<Rc<Expr>> = j.iter().map(|x| to_expr(x, scope, avoid)).collect();
            ExprKind::J(Box::new(args.try_into().unwrap_or_else(|_| unreachable!())))
        }
    };
    Expr::synth(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::parser::parse_expr;

    fn roundtrip(src: &str) {
        let e = parse_expr(src).unwrap();
        let printed = print_expr(&e);
        let again = parse_expr(&printed).unwrap_or_else(|err| panic!("{printed}: {err}"));
        assert!(e.alpha_eq(&again), "{src} printed as {printed}");
    }

    #[test]
    fn roundtrips() {
        for s in [
            "A -> B -> C",
            "(A -> B) -> C",
            "A * B -> C",
            "A * (B -> C)",
            "(A * B) * C",
            "(x y : A) -> Id A x y",
            "(x : A) * B x -> C",
            "fun x (y : A) => f (fun z => z) (x, y)",
            "Id (A -> A) f (fun x => x)",
            "J A C (fun x => refl A x) a b p",
            "fst (snd p) (g (x : A))",
            "(f : (x : A) -> B x) -> U2",
            "((x : A)) -> B",
        ] {
            roundtrip(s);
        }
    }

    #[test]
    fn shadowing_binders_are_renamed() {
        // fun x => fun x1 => x, with the inner binder originally also named x
        let t = Term::lam("x", Term::lam("x", Term::var(1)));
        assert_eq!(render_term(&t, &[]), "fun x x1 => x");
        let arrow = Term::pi("x", Term::universe(Level::Imp), Term::universe(Level::Imp));
        assert_eq!(render_term(&arrow, &[]), "U -> U");
        let k = Term::lam("f", Term::app(Term::constant("f"), Term::var(0)));
        assert_eq!(render_term(&k, &[]), "fun f1 => f f1");
    }
}
