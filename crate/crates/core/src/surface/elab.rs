//! Elaboration from surface syntax to core terms.
//!
//! Holes become metavariables. A metavariable is solved the first time
//! conversion compares it with a value; there is no postponement. After a
//! declaration is elaborated every metavariable is substituted away and the
//! result is re-checked by the kernel without metavariables.

use std::rc::Rc;

use crate::check::{CheckResult, Checker, Context, ErrorKind, TypeError};
use crate::level::{formation_level, Former, Level};
use crate::meta::MetaStore;
use crate::signature::Signature;
use crate::span::Span;
use crate::term::{JArgs, Term};
use crate::value::{Val, Value};

use super::syntax::{Expr, ExprKind};

pub struct Elaborator<'a> {
    checker: Checker<'a>,
    metas: &'a MetaStore,
}

impl<'a> Elaborator<'a> {
    pub fn new(sig: &'a Signature, metas: &'a MetaStore) -> Elaborator<'a> {
        Elaborator { checker: Checker::new(sig).with_metas(metas), metas }
    }

    pub fn with_budget(mut self, budget: Option<u64>) -> Elaborator<'a> {
        self.checker = self.checker.with_budget(budget);
        self
    }

    pub fn with_max_level(mut self, max: u8) -> Elaborator<'a> {
        self.checker = self.checker.with_max_level(max);
        self
    }

    pub fn checker(&self) -> &Checker<'a> {
        &self.checker
    }

    fn eval(&self, ctx: &Context, t: &Term) -> CheckResult<Val> {
        self.checker.eval(ctx, t)
    }

    fn fresh_meta(&self, ctx: &Context, span: Span, ty: Val) -> Rc<Term> {
        Rc::new(Term::Meta(self.metas.fresh(ctx.len(), span, ty)))
    }

    fn top_universe(&self) -> Val {
        Value::universe(Level::Pred(self.checker.max_level()))
    }

    pub fn infer(&self, ctx: &mut Context, e: &Expr) -> CheckResult<(Rc<Term>, Val)> {
        self.infer_inner(ctx, e).map_err(|err| err.at(e.span))
    }

    pub fn check(&self, ctx: &mut Context, e: &Expr, expected: &Val) -> CheckResult<Rc<Term>> {
        self.check_inner(ctx, e, expected).map_err(|err| err.at(e.span))
    }

    /// Elaborate a type, returning its universe level.
    pub fn infer_type(&self, ctx: &mut Context, e: &Expr) -> CheckResult<(Rc<Term>, Level)> {
        if let ExprKind::Hole = e.kind {
            let top = self.top_universe();
            return Ok((self.fresh_meta(ctx, e.span, top), Level::Pred(self.checker.max_level())));
        }
        let (t, ty) = self.infer(ctx, e)?;
        match self.checker.nbe().force(&ty)?.as_universe() {
            Some(l) => Ok((t, l)),
            None => Err(TypeError::new(
                ErrorKind::NotAUniverse,
                format!("expected a type, found a term of type `{}`", self.checker.show(ctx, &ty)),
            )
            .at(e.span)),
        }
    }

    fn infer_inner(&self, ctx: &mut Context, e: &Expr) -> CheckResult<(Rc<Term>, Val)> {
        let nbe = self.checker.nbe();
        match &e.kind {
            ExprKind::Var(x) => {
                if let Some(i) = ctx.resolve(x) {
                    let ty = ctx.lookup(i).cloned().expect("resolved variable has a type");
                    return Ok((Term::var(i), ty));
                }
                match self.checker.sig().get(x) {
                    Some(d) => Ok((Term::constant(x), d.ty_value.clone())),
                    None => Err(TypeError::new(ErrorKind::UnboundName, format!("unknown name `{x}`"))),
                }
            }
            ExprKind::Universe(l) => Ok((Term::universe(*l), self.checker.universe_type(*l)?)),
            ExprKind::Hole => {
                let top = self.top_universe();
                let ty_meta = self.fresh_meta(ctx, e.span, top);
                let ty = self.eval(ctx, &ty_meta)?;
                Ok((self.fresh_meta(ctx, e.span, ty.clone()), ty))
            }
            ExprKind::Pi(x, a, b) | ExprKind::Sigma(x, a, b) => {
                let (ta, la) = self.infer_type(ctx, a)?;
                let va = self.eval(ctx, &ta)?;
                ctx.push(x.clone(), va);
                let r = self.infer_type(ctx, b);
                ctx.pop();
                let (tb, lb) = r?;
                let (former, term) = if matches!(e.kind, ExprKind::Pi(..)) {
                    (Former::Pi, Term::Pi(x.clone(), ta, tb))
                } else {
                    (Former::Sigma, Term::Sigma(x.clone(), ta, tb))
                };
                Ok((Rc::new(term), Value::universe(formation_level(former, la, lb))))
            }
            ExprKind::Lam(x, ann, body) => {
                let ta = match ann {
                    Some(a) => self.infer_type(ctx, a)?.0,
                    None => {
                        let top = self.top_universe();
                        self.fresh_meta(ctx, e.span, top)
                    }
                };
                let va = self.eval(ctx, &ta)?;
                ctx.push(x.clone(), va.clone());
                let r = self.infer(ctx, body).and_then(|(tb, ty)| Ok((tb, nbe.quote(ctx.len(), &ty)?)));
                ctx.pop();
                let (tb, cod) = r?;
                let pi = Rc::new(Term::Pi(x.clone(), ta, cod));
                let Term::Pi(_, ta, _) = pi.as_ref() else { unreachable!() };
                Ok((Rc::new(Term::Lam(x.clone(), Some(ta.clone()), tb)), self.eval(ctx, &pi)?))
            }
            ExprKind::App(f, a) => {
                let (tf, fty) = self.infer(ctx, f)?;
                match nbe.force(&fty)?.as_ref() {
                    Value::Pi(_, dom, clo) => {
                        let ta = self.check(ctx, a, dom)?;
                        let va = self.eval(ctx, &ta)?;
                        Ok((Term::app(tf, ta), nbe.instantiate(clo, va)?))
                    }
                    _ => Err(TypeError::new(
                        ErrorKind::NotAFunction,
                        format!("expected a function, found something of type `{}`", self.checker.show(ctx, &fty)),
                    )
                    .at(f.span)),
                }
            }
            ExprKind::Pair(a, b) => {
                let (ta, tya) = self.infer(ctx, a)?;
                let (tb, tyb) = self.infer(ctx, b)?;
                let qa = nbe.quote(ctx.len(), &tya)?;
                let qb = nbe.quote(ctx.len(), &tyb)?;
                let sigma = Rc::new(Term::Sigma("_".into(), qa, qb.shift(1, 0)));
                Ok((Term::pair(ta, tb), self.eval(ctx, &sigma)?))
            }
            ExprKind::Fst(p) | ExprKind::Snd(p) => {
                let (tp, ty) = self.infer(ctx, p)?;
                match nbe.force(&ty)?.as_ref() {
                    Value::Sigma(_, a, clo) => {
                        if matches!(e.kind, ExprKind::Fst(_)) {
                            Ok((Term::fst(tp), a.clone()))
                        } else {
                            let vp = self.eval(ctx, &tp)?;
                            let b = nbe.instantiate(clo, nbe.fst(&vp)?)?;
                            Ok((Term::snd(tp), b))
                        }
                    }
                    _ => Err(TypeError::new(
                        ErrorKind::NotAPair,
                        format!("expected a pair, found something of type `{}`", self.checker.show(ctx, &ty)),
                    )
                    .at(p.span)),
                }
            }
            ExprKind::Id(a, x, y) => {
                let (ta, va, tx) = self.carrier_and_point(ctx, a, x)?;
                let l = self.level_of(ctx, &ta)?;
                let ty = self.check(ctx, y, &va)?;
                Ok((Term::id(ta, tx, ty), Value::universe(formation_level(Former::Id, l, l))))
            }
            ExprKind::Refl(a, x) => {
                let (ta, va, tx) = self.carrier_and_point(ctx, a, x)?;
                let vx = self.eval(ctx, &tx)?;
                Ok((Term::refl(ta, tx), Rc::new(Value::Id(va, vx.clone(), vx))))
            }
            ExprKind::J(args) => self.infer_j(ctx, args),
            ExprKind::Ann(t, ty) => {
                let (tty, _) = self.infer_type(ctx, ty)?;
                let vty = self.eval(ctx, &tty)?;
                let tt = self.check(ctx, t, &vty)?;
                Ok((tt, vty))
            }
        }
    }

    /// Elaborate a carrier type and a point of it. A hole for the carrier is
    /// filled with the point's inferred type.
    fn carrier_and_point(&self, ctx: &mut Context, a: &Expr, x: &Expr) -> CheckResult<(Rc<Term>, Val, Rc<Term>)> {
        if let ExprKind::Hole = a.kind {
            let (tx, ty) = self.infer(ctx, x)?;
            let ta = self.checker.nbe().quote(ctx.len(), &ty)?;
            return Ok((ta, ty, tx));
        }
        let (ta, _) = self.infer_type(ctx, a)?;
        let va = self.eval(ctx, &ta)?;
        let tx = self.check(ctx, x, &va)?;
        Ok((ta, va, tx))
    }

    fn level_of(&self, ctx: &mut Context, ty: &Rc<Term>) -> CheckResult<Level> {
        let u = self.checker.infer(ctx, ty)?;
        self.checker.nbe().force(&u)?.as_universe().ok_or_else(|| TypeError::new(ErrorKind::NotAUniverse, "expected a type"))
    }

    fn infer_j(&self, ctx: &mut Context, args: &[Rc<Expr>; 6]) -> CheckResult<(Rc<Term>, Val)> {
        let [a, c, d, x, y, p] = args;
        let nbe = self.checker.nbe();
        let (ta, va, tx) = self.carrier_and_point(ctx, a, x)?;
        let max = Level::Pred(self.checker.max_level());
        let motive_ty = Term::pi(
            "x",
            ta.clone(),
            Term::pi("y", ta.shift(1, 0), Term::pi("p", Term::id(ta.shift(2, 0), Term::var(1), Term::var(0)), Term::universe(max))),
        );
        let motive_ty = self.eval(ctx, &motive_ty)?;
        let tc = self.check(ctx, c, &motive_ty)?;
        let refl_ty = Term::pi(
            "x",
            ta.clone(),
            Term::apps(tc.shift(1, 0), [Term::var(0), Term::var(0), Term::refl(ta.shift(1, 0), Term::var(0))]),
        );
        let refl_ty = self.eval(ctx, &refl_ty)?;
        let td = self.check(ctx, d, &refl_ty)?;
        let ty = self.check(ctx, y, &va)?;
        let vx = self.eval(ctx, &tx)?;
        let vy = self.eval(ctx, &ty)?;
        let path_ty = Rc::new(Value::Id(va, vx.clone(), vy.clone()));
        let tp = self.check(ctx, p, &path_ty)?;
        let vc = self.eval(ctx, &tc)?;
        let vp = self.eval(ctx, &tp)?;
        let result = nbe.apply_all(&vc, [vx, vy, vp])?;
        let j = JArgs { ty: ta, motive: tc, refl_case: td, lhs: tx, rhs: ty, path: tp };
        Ok((Rc::new(Term::J(j)), result))
    }

    fn check_inner(&self, ctx: &mut Context, e: &Expr, expected: &Val) -> CheckResult<Rc<Term>> {
        let nbe = self.checker.nbe();
        match &e.kind {
            ExprKind::Hole => Ok(self.fresh_meta(ctx, e.span, expected.clone())),
            ExprKind::Lam(x, ann, body) => match nbe.force(expected)?.as_ref() {
                Value::Pi(_, dom, clo) => {
                    let dom_term = match ann {
                        Some(a) => {
                            let (ta, _) = self.infer_type(ctx, a)?;
                            let va = self.eval(ctx, &ta)?;
                            if !nbe.conv(ctx.len(), &va, dom)? {
                                return Err(self.checker.mismatch(ctx, dom, &va).at(a.span));
                            }
                            Some(ta)
                        }
                        None => None,
                    };
                    let cod = nbe.instantiate(clo, Value::var(ctx.len()))?;
                    ctx.push(x.clone(), dom.clone());
                    let r = self.check(ctx, body, &cod);
                    ctx.pop();
                    Ok(Rc::new(Term::Lam(x.clone(), dom_term, r?)))
                }
                _ => Err(TypeError::new(
                    ErrorKind::Mismatch,
                    format!("a function was given where `{}` was expected", self.checker.show(ctx, expected)),
                )),
            },
            ExprKind::Pair(a, b) => match nbe.force(expected)?.as_ref() {
                Value::Sigma(_, ta, clo) => {
                    let a = self.check(ctx, a, ta)?;
                    let va = self.eval(ctx, &a)?;
                    let tb = nbe.instantiate(clo, va)?;
                    let b = self.check(ctx, b, &tb)?;
                    Ok(Term::pair(a, b))
                }
                _ => Err(TypeError::new(
                    ErrorKind::Mismatch,
                    format!("a pair was given where `{}` was expected", self.checker.show(ctx, expected)),
                )),
            },
            _ => {
                let (t, actual) = self.infer(ctx, e)?;
                if self.checker.subtype(ctx.len(), &actual, expected)? {
                    Ok(t)
                } else {
                    Err(self.checker.mismatch(ctx, expected, &actual))
                }
            }
        }
    }

    /// Substitute solved metavariables in a term elaborated under `depth`
    /// binders. Fails on the first unsolved one.
    pub fn zonk(&self, t: &Rc<Term>, depth: usize) -> CheckResult<Rc<Term>> {
        let z = |u: &Rc<Term>, extra: usize| self.zonk(u, depth + extra);
        Ok(match t.as_ref() {
            Term::Meta(m) => match self.metas.solution(*m) {
                Some(v) => {
                    let q = self.checker.nbe().quote(depth, &v)?;
                    self.zonk(&q, depth)?
                }
                None => {
                    let span = self.metas.entry(*m).map(|e| e.span).unwrap_or_default();
                    return Err(TypeError::new(ErrorKind::UnsolvedHole, "could not infer this hole").at(span));
                }
            },
            Term::Var(_) | Term::Universe(_) | Term::Const(_) => t.clone(),
            Term::Pi(x, a, b) => Rc::new(Term::Pi(x.clone(), z(a, 0)?, z(b, 1)?)),
            Term::Sigma(x, a, b) => Rc::new(Term::Sigma(x.clone(), z(a, 0)?, z(b, 1)?)),
            Term::Lam(x, a, b) => Rc::new(Term::Lam(x.clone(), a.as_ref().map(|a| z(a, 0)).transpose()?, z(b, 1)?)),
            Term::App(a, b) => Term::app(z(a, 0)?, z(b, 0)?),
            Term::Pair(a, b) => Term::pair(z(a, 0)?, z(b, 0)?),
            Term::Refl(a, b) => Term::refl(z(a, 0)?, z(b, 0)?),
            Term::Fst(a) => Term::fst(z(a, 0)?),
            Term::Snd(a) => Term::snd(z(a, 0)?),
            Term::Id(a, b, c) => Term::id(z(a, 0)?, z(b, 0)?, z(c, 0)?),
            Term::J(j) => Rc::new(Term::J(JArgs {
                ty: z(&j.ty, 0)?,
                motive: z(&j.motive, 0)?,
                refl_case: z(&j.refl_case, 0)?,
                lhs: z(&j.lhs, 0)?,
                rhs: z(&j.rhs, 0)?,
                path: z(&j.path, 0)?,
            })),
        })
    }
}

/// Elaborate a closed type and a closed term of it, returning hole-free
/// core terms. The result has not yet been re-checked by the kernel.
pub fn elaborate_definition(
    sig: &Signature,
    ty: &Expr,
    body: Option<&Expr>,
    max_level: u8,
    budget: Option<u64>,
) -> CheckResult<(Rc<Term>, Option<Rc<Term>>)> {
    let metas = MetaStore::new();
    let el = Elaborator::new(sig, &metas).with_max_level(max_level).with_budget(budget);
    let mut ctx = Context::new();
    let (tty, _) = el.infer_type(&mut ctx, ty)?;
    let tty = el.zonk(&tty, 0)?;
    let tbody = match body {
        Some(b) => {
            let vty = el.eval(&ctx, &tty)?;
            let tb = el.check(&mut ctx, b, &vty)?;
            Some(el.zonk(&tb, 0)?)
        }
        None => None,
    };
    Ok((tty, tbody))
}

/// Elaborate a closed term with an optional expected type given as surface
/// syntax. Returns the term and its type, both hole-free.
pub fn elaborate_closed(sig: &Signature, e: &Expr, expected: Option<&Val>) -> CheckResult<(Rc<Term>, Rc<Term>)> {
    let metas = MetaStore::new();
    let el = Elaborator::new(sig, &metas);
    let mut ctx = Context::new();
    let (t, ty) = match expected {
        Some(ty) => (el.check(&mut ctx, e, ty)?, ty.clone()),
        None => el.infer(&mut ctx, e)?,
    };
    let t = el.zonk(&t, 0)?;
    let ty = el.checker.nbe().quote(0, &ty)?;
    let ty = el.zonk(&ty, 0)?;
    Ok((t, ty))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check::{check_decl, DeclInput};
    use crate::signature::PostulatePolicy;
    use crate::surface::parser::parse_expr;

    fn def(sig: &mut Signature, name: &str, ty: &str, body: &str) {
        let (t, b) = elaborate_definition(sig, &parse_expr(ty).unwrap(), Some(&parse_expr(body).unwrap()), 2, None)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        check_decl(sig, DeclInput::definition(name, t, b.unwrap()), &PostulatePolicy::deny_all()).unwrap();
    }

    #[test]
    fn refl_infers_its_identity_type() {
        let mut sig = Signature::new();
        def(&mut sig, "A", "U0", "U");
        let e = parse_expr("refl U0 A").unwrap();
        let (_, ty) = elaborate_closed(&sig, &e, None).unwrap();
        assert!(matches!(ty.as_ref(), Term::Id(..)));
    }

    #[test]
    fn holes_are_solved_from_arguments() {
        let mut sig = Signature::new();
        def(&mut sig, "id", "(A : U) -> A -> A", "fun A a => a");
        def(&mut sig, "k", "(A : U) -> A -> A", "fun A a => id _ a");
        let body = sig.get("k").unwrap().body().unwrap().clone();
        let explicit = parse_expr("fun A a => id A a").unwrap();
        let ty = sig.get("k").unwrap().ty_value.clone();
        let (t, _) = elaborate_closed(&sig, &explicit, Some(&ty)).unwrap();
        assert!(body.alpha_eq(&t));
    }

    #[test]
    fn unsolved_hole_is_reported() {
        let sig = Signature::new();
        let e = parse_expr("(fun (x : U) => x) _").unwrap();
        let err = elaborate_closed(&sig, &e, None).unwrap_err();
        assert_eq!(err.kind, ErrorKind::UnsolvedHole);
        assert_eq!(err.span.start, 19);
    }

    #[test]
    fn lambda_against_wrong_arity() {
        let sig = Signature::new();
        let metas = MetaStore::new();
        let el = Elaborator::new(&sig, &metas);
        let ty = parse_expr("(A : U) -> A -> A").unwrap();
        let (tty, _) = el.infer_type(&mut Context::new(), &ty).unwrap();
        let vty = el.eval(&Context::new(), &tty).unwrap();
        let e = parse_expr("fun x => x").unwrap();
        let err = el.check(&mut Context::new(), &e, &vty).unwrap_err();
        assert_eq!(err.kind, ErrorKind::Mismatch);
    }

    #[test]
    fn unbound_names_carry_spans() {
        let sig = Signature::new();
        let e = parse_expr("fun (x : U) => y").unwrap();
        let metas = MetaStore::new();
        let el = Elaborator::new(&sig, &metas);
        let err = el.infer(&mut Context::new(), &e).unwrap_err();
        assert_eq!(err.kind, ErrorKind::UnboundName);
        assert_eq!((err.span.start, err.span.end), (15, 16));
    }
}
