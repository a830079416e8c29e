//! Normalization by evaluation: `eval`, `quote` and conversion checking.
//!
//! Definitions are unfolded eagerly (their values are cached in the
//! signature), postulates stay neutral, and `J` only computes on `refl`.
//! Conversion is β with η for functions and pairs.

use std::cell::Cell;
use std::rc::Rc;

use thiserror::Error;

use crate::meta::MetaStore;
use crate::signature::{DeclKind, Signature};
use crate::term::{JArgs, Term};
use crate::value::{Closure, Elim, Env, Head, Val, Value};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound constant `{0}`")]
    UnboundConst(String),
    #[error("unbound variable index {0}")]
    UnboundVar(usize),
    #[error("cannot apply {0} to a value of this shape")]
    BadElim(&'static str),
    #[error("step budget of {0} evaluation steps exhausted")]
    BudgetExhausted(u64),
}

pub type EvalResult<T> = Result<T, EvalError>;

/// Evaluation context: the signature, optional metavariable solutions and
/// an optional step budget.
pub struct Nbe<'a> {
    sig: &'a Signature,
    metas: Option<&'a MetaStore>,
    steps: Cell<u64>,
    budget: Option<u64>,
}

impl<'a> Nbe<'a> {
    pub fn new(sig: &'a Signature) -> Nbe<'a> {
        Nbe { sig, metas: None, steps: Cell::new(0), budget: None }
    }

    pub fn with_metas(mut self, metas: &'a MetaStore) -> Nbe<'a> {
        self.metas = Some(metas);
        self
    }

    pub fn with_budget(mut self, budget: Option<u64>) -> Nbe<'a> {
        self.budget = budget;
        self
    }

    pub fn sig(&self) -> &'a Signature {
        self.sig
    }

    pub fn metas(&self) -> Option<&'a MetaStore> {
        self.metas
    }

    pub fn steps(&self) -> u64 {
        self.steps.get()
    }

    fn tick(&self) -> EvalResult<()> {
        let n = self.steps.get() + 1;
        self.steps.set(n);
        match self.budget {
            Some(b) if n > b => Err(EvalError::BudgetExhausted(b)),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, env: &Env, t: &Term) -> EvalResult<Val> {
        self.tick()?;
        Ok(match t {
            Term::Var(i) => env.get(*i).cloned().ok_or(EvalError::UnboundVar(*i))?,
            Term::Universe(l) => Value::universe(*l),
            Term::Pi(n, a, b) => Rc::new(Value::Pi(
                n.clone(),
                self.eval(env, a)?,
                Closure { env: env.clone(), body: b.clone() },
            )),
            Term::Lam(n, _, b) => {
                Rc::new(Value::Lam(n.clone(), Closure { env: env.clone(), body: b.clone() }))
            }
            Term::App(f, a) => {
                let f = self.eval(env, f)?;
                let a = self.eval(env, a)?;
                self.apply(&f, a)?
            }
            Term::Sigma(n, a, b) => Rc::new(Value::Sigma(
                n.clone(),
                self.eval(env, a)?,
                Closure { env: env.clone(), body: b.clone() },
            )),
            Term::Pair(a, b) => Rc::new(Value::Pair(self.eval(env, a)?, self.eval(env, b)?)),
            Term::Fst(p) => {
                let p = self.eval(env, p)?;
                self.fst(&p)?
            }
            Term::Snd(p) => {
                let p = self.eval(env, p)?;
                self.snd(&p)?
            }
            Term::Id(a, x, y) => {
                Rc::new(Value::Id(self.eval(env, a)?, self.eval(env, x)?, self.eval(env, y)?))
            }
            Term::Refl(a, x) => Rc::new(Value::Refl(self.eval(env, a)?, self.eval(env, x)?)),
            Term::J(j) => self.eval_j(env, j)?,
            Term::Const(c) => match self.sig.get(c) {
                Some(decl) => match &decl.kind {
                    DeclKind::Definition { value, .. } => value.clone(),
                    DeclKind::Postulate => {
                        Rc::new(Value::Neutral(Head::Postulate(c.clone()), Vec::new()))
                    }
                },
                None => return Err(EvalError::UnboundConst(c.to_string())),
            },
            Term::Meta(m) => match self.metas.and_then(|ms| ms.solution(*m)) {
                Some(v) => v,
                None => Rc::new(Value::Neutral(Head::Meta(*m), Vec::new())),
            },
        })
    }

    fn eval_j(&self, env: &Env, j: &JArgs) -> EvalResult<Val> {
        let path = self.eval(env, &j.path)?;
        let refl_case = self.eval(env, &j.refl_case)?;
        match self.force(&path)?.as_ref() {
            Value::Refl(_, point) => self.apply(&refl_case, point.clone()),
            Value::Neutral(head, spine) => {
                let mut spine = spine.clone();
                spine.push(Elim::J {
                    ty: self.eval(env, &j.ty)?,
                    motive: self.eval(env, &j.motive)?,
                    refl_case,
                    lhs: self.eval(env, &j.lhs)?,
                    rhs: self.eval(env, &j.rhs)?,
                });
                Ok(Rc::new(Value::Neutral(head.clone(), spine)))
            }
            _ => Err(EvalError::BadElim("J")),
        }
    }

    /// Replace a solved metavariable head by its solution.
    pub fn force(&self, v: &Val) -> EvalResult<Val> {
        if let Value::Neutral(Head::Meta(m), spine) = v.as_ref() {
            if let Some(sol) = self.metas.and_then(|ms| ms.solution(*m)) {
                let mut out = sol;
                for e in spine {
                    out = self.elim(&out, e)?;
                }
                return self.force(&out);
            }
        }
        Ok(v.clone())
    }

    fn elim(&self, head: &Val, e: &Elim) -> EvalResult<Val> {
        match e {
            Elim::App(a) => self.apply(head, a.clone()),
            Elim::Fst => self.fst(head),
            Elim::Snd => self.snd(head),
            Elim::J { ty, motive, refl_case, lhs, rhs } => match self.force(head)?.as_ref() {
                Value::Refl(_, point) => self.apply(refl_case, point.clone()),
                Value::Neutral(h, spine) => {
                    let mut spine = spine.clone();
                    spine.push(Elim::J {
                        ty: ty.clone(),
                        motive: motive.clone(),
                        refl_case: refl_case.clone(),
                        lhs: lhs.clone(),
                        rhs: rhs.clone(),
                    });
                    Ok(Rc::new(Value::Neutral(h.clone(), spine)))
                }
                _ => Err(EvalError::BadElim("J")),
            },
        }
    }

    pub fn apply(&self, f: &Val, arg: Val) -> EvalResult<Val> {
        match self.force(f)?.as_ref() {
            Value::Lam(_, clo) => self.instantiate(clo, arg),
            Value::Neutral(h, spine) => {
                let mut spine = spine.clone();
                spine.push(Elim::App(arg));
                Ok(Rc::new(Value::Neutral(h.clone(), spine)))
            }
            _ => Err(EvalError::BadElim("application")),
        }
    }

    pub fn apply_all(&self, f: &Val, args: impl IntoIterator<Item = Val>) -> EvalResult<Val> {
        args.into_iter().try_fold(f.clone(), |f, a| self.apply(&f, a))
    }

    pub fn fst(&self, p: &Val) -> EvalResult<Val> {
        match self.force(p)?.as_ref() {
            Value::Pair(a, _) => Ok(a.clone()),
            Value::Neutral(h, spine) => {
                let mut spine = spine.clone();
                spine.push(Elim::Fst);
                Ok(Rc::new(Value::Neutral(h.clone(), spine)))
            }
            _ => Err(EvalError::BadElim("fst")),
        }
    }

    pub fn snd(&self, p: &Val) -> EvalResult<Val> {
        match self.force(p)?.as_ref() {
            Value::Pair(_, b) => Ok(b.clone()),
            Value::Neutral(h, spine) => {
                let mut spine = spine.clone();
                spine.push(Elim::Snd);
                Ok(Rc::new(Value::Neutral(h.clone(), spine)))
            }
            _ => Err(EvalError::BadElim("snd")),
        }
    }

    pub fn instantiate(&self, clo: &Closure, arg: Val) -> EvalResult<Val> {
        self.eval(&clo.env.push(arg), &clo.body)
    }

    /// Read a value back as a β-normal term under `depth` bound variables.
    pub fn quote(&self, depth: usize, v: &Val) -> EvalResult<Rc<Term>> {
        let v = self.force(v)?;
        Ok(match v.as_ref() {
            Value::Universe(l) => Term::universe(*l),
            Value::Pi(n, a, clo) => Rc::new(Term::Pi(
                n.clone(),
                self.quote(depth, a)?,
                self.quote_closure(depth, clo)?,
            )),
            Value::Lam(n, clo) => Rc::new(Term::Lam(n.clone(), None, self.quote_closure(depth, clo)?)),
            Value::Sigma(n, a, clo) => Rc::new(Term::Sigma(
                n.clone(),
                self.quote(depth, a)?,
                self.quote_closure(depth, clo)?,
            )),
            Value::Pair(a, b) => Term::pair(self.quote(depth, a)?, self.quote(depth, b)?),
            Value::Id(a, x, y) => {
                Term::id(self.quote(depth, a)?, self.quote(depth, x)?, self.quote(depth, y)?)
            }
            Value::Refl(a, x) => Term::refl(self.quote(depth, a)?, self.quote(depth, x)?),
            Value::Neutral(h, spine) => {
                let mut t = match h {
                    Head::Var(l) => Term::var(depth - 1 - l),
                    Head::Postulate(c) => Rc::new(Term::Const(c.clone())),
                    Head::Meta(m) => Rc::new(Term::Meta(*m)),
                };
                for e in spine {
                    t = match e {
                        Elim::App(a) => Term::app(t, self.quote(depth, a)?),
                        Elim::Fst => Term::fst(t),
                        Elim::Snd => Term::snd(t),
                        Elim::J { ty, motive, refl_case, lhs, rhs } => Rc::new(Term::J(JArgs {
                            ty: self.quote(depth, ty)?,
                            motive: self.quote(depth, motive)?,
                            refl_case: self.quote(depth, refl_case)?,
                            lhs: self.quote(depth, lhs)?,
                            rhs: self.quote(depth, rhs)?,
                            path: t,
                        })),
                    };
                }
                t
            }
        })
    }

    fn quote_closure(&self, depth: usize, clo: &Closure) -> EvalResult<Rc<Term>> {
        let body = self.instantiate(clo, Value::var(depth))?;
        self.quote(depth + 1, &body)
    }

    /// Closed-term normalization.
    pub fn normalize(&self, t: &Term) -> EvalResult<Rc<Term>> {
        let v = self.eval(&Env::new(), t)?;
        self.quote(0, &v)
    }

    /// Definitional equality of two values under `depth` bound variables.
    ///
    /// When a metavariable store is attached, an unsolved metavariable with
    /// an empty spine is solved by the other side.
    pub fn conv(&self, depth: usize, a: &Val, b: &Val) -> EvalResult<bool> {
        let a = self.force(a)?;
        let b = self.force(b)?;
        if let Some(solved) = self.try_solve(depth, &a, &b)? {
            return Ok(solved);
        }
        if let Some(solved) = self.try_solve(depth, &b, &a)? {
            return Ok(solved);
        }
        match (a.as_ref(), b.as_ref()) {
            (Value::Universe(l1), Value::Universe(l2)) => Ok(l1 == l2),
            (Value::Pi(_, a1, c1), Value::Pi(_, a2, c2))
            | (Value::Sigma(_, a1, c1), Value::Sigma(_, a2, c2)) => {
                Ok(self.conv(depth, a1, a2)? && self.conv_closures(depth, c1, c2)?)
            }
            (Value::Lam(_, c1), Value::Lam(_, c2)) => self.conv_closures(depth, c1, c2),
            (Value::Lam(_, c), _) => {
                let x = Value::var(depth);
                let l = self.instantiate(c, x.clone())?;
                let r = self.apply(&b, x)?;
                self.conv(depth + 1, &l, &r)
            }
            (_, Value::Lam(_, c)) => {
                let x = Value::var(depth);
                let l = self.apply(&a, x.clone())?;
                let r = self.instantiate(c, x)?;
                self.conv(depth + 1, &l, &r)
            }
            (Value::Pair(x1, y1), Value::Pair(x2, y2)) => {
                Ok(self.conv(depth, x1, x2)? && self.conv(depth, y1, y2)?)
            }
            (Value::Pair(x, y), _) => {
                Ok(self.conv(depth, x, &self.fst(&b)?)? && self.conv(depth, y, &self.snd(&b)?)?)
            }
            (_, Value::Pair(x, y)) => {
                Ok(self.conv(depth, &self.fst(&a)?, x)? && self.conv(depth, &self.snd(&a)?, y)?)
            }
            (Value::Id(t1, x1, y1), Value::Id(t2, x2, y2)) => Ok(self.conv(depth, t1, t2)?
                && self.conv(depth, x1, x2)?
                && self.conv(depth, y1, y2)?),
            (Value::Refl(t1, x1), Value::Refl(t2, x2)) => {
                Ok(self.conv(depth, t1, t2)? && self.conv(depth, x1, x2)?)
            }
            (Value::Neutral(h1, s1), Value::Neutral(h2, s2)) => {
                if h1 != h2 || s1.len() != s2.len() {
                    return Ok(false);
                }
                for (e1, e2) in s1.iter().zip(s2) {
                    if !self.conv_elim(depth, e1, e2)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(false),
        }
    }

    fn conv_closures(&self, depth: usize, c1: &Closure, c2: &Closure) -> EvalResult<bool> {
        let x = Value::var(depth);
        let l = self.instantiate(c1, x.clone())?;
        let r = self.instantiate(c2, x)?;
        self.conv(depth + 1, &l, &r)
    }

    fn conv_elim(&self, depth: usize, e1: &Elim, e2: &Elim) -> EvalResult<bool> {
        match (e1, e2) {
            (Elim::App(a), Elim::App(b)) => self.conv(depth, a, b),
            (Elim::Fst, Elim::Fst) | (Elim::Snd, Elim::Snd) => Ok(true),
            (
                Elim::J { ty: t1, motive: m1, refl_case: d1, lhs: x1, rhs: y1 },
                Elim::J { ty: t2, motive: m2, refl_case: d2, lhs: x2, rhs: y2 },
            ) => Ok(self.conv(depth, t1, t2)?
                && self.conv(depth, m1, m2)?
                && self.conv(depth, d1, d2)?
                && self.conv(depth, x1, x2)?
                && self.conv(depth, y1, y2)?),
            _ => Ok(false),
        }
    }

    /// `Some(result)` if `lhs` is an unsolved bare metavariable.
    fn try_solve(&self, depth: usize, lhs: &Val, rhs: &Val) -> EvalResult<Option<bool>> {
        let (Some(metas), Value::Neutral(Head::Meta(m), spine)) = (self.metas, lhs.as_ref()) else {
            return Ok(None);
        };
        if !spine.is_empty() {
            return Ok(None);
        }
        if let Value::Neutral(Head::Meta(m2), s2) = rhs.as_ref() {
            if m2 == m && s2.is_empty() {
                return Ok(Some(true));
            }
        }
        let Some(entry) = metas.entry(*m) else {
            return Ok(Some(false));
        };
        let quoted = self.quote(depth, rhs)?;
        if !solution_in_scope(&quoted, *m, depth, entry.depth) {
            return Ok(Some(false));
        }
        metas.set_solution(*m, rhs.clone());
        Ok(Some(true))
    }
}

/// The candidate solution (quoted under `depth` binders) mentions neither
/// the metavariable itself nor any variable bound after its creation.
fn solution_in_scope(t: &Term, meta: usize, depth: usize, meta_depth: usize) -> bool {
    fn go(t: &Term, meta: usize, depth: usize, limit: usize, binders: usize) -> bool {
        let rec = |u: &Term, extra: usize| go(u, meta, depth, limit, binders + extra);
        match t {
            Term::Var(i) => {
                if *i < binders {
                    true
                } else {
                    let level = depth + binders - 1 - i;
                    level < limit
                }
            }
            Term::Meta(m) => *m != meta,
            Term::Universe(_) | Term::Const(_) => true,
            Term::Pi(_, a, b) | Term::Sigma(_, a, b) => rec(a, 0) && rec(b, 1),
            Term::Lam(_, a, b) => a.as_ref().is_none_or(|a| rec(a, 0)) && rec(b, 1),
            Term::App(a, b) | Term::Pair(a, b) | Term::Refl(a, b) => rec(a, 0) && rec(b, 0),
            Term::Fst(a) | Term::Snd(a) => rec(a, 0),
            Term::Id(a, b, c) => rec(a, 0) && rec(b, 0) && rec(c, 0),
            Term::J(j) => j.iter().all(|u| rec(u, 0)),
        }
    }
    go(t, meta, depth, meta_depth, 0)
}

/// `quote(0, eval([], t))` in a fresh evaluation context.
pub fn normalize(sig: &Signature, t: &Term) -> EvalResult<Rc<Term>> {
    Nbe::new(sig).normalize(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level::Level;

    fn lam(b: Rc<Term>) -> Rc<Term> {
        Term::lam("x", b)
    }

    #[test]
    fn beta_identity_applied_to_universe() {
        let sig = Signature::new();
        let nbe = Nbe::new(&sig);
        let t = Term::app(
            Term::lam("A", Term::lam("a", Term::var(0))),
            Term::universe(Level::Imp),
        );
        let v = nbe.eval(&Env::new(), &t).unwrap();
        assert!(matches!(v.as_ref(), Value::Lam(..)));
        assert_eq!(*nbe.quote(0, &v).unwrap(), *Term::lam("a", Term::var(0)));
    }

    #[test]
    fn quote_identity() {
        let sig = Signature::new();
        assert_eq!(*normalize(&sig, &lam(Term::var(0))).unwrap(), *Term::lam("x", Term::var(0)));
    }

    #[test]
    fn neutral_readback() {
        let sig = Signature::new();
        let nbe = Nbe::new(&sig);
        let n = nbe.apply(&Value::var(0), Value::universe(Level::Imp)).unwrap();
        let t = nbe.quote(1, &n).unwrap();
        assert_eq!(*t, *Term::app(Term::var(0), Term::universe(Level::Imp)));
    }

    #[test]
    fn j_computes_on_refl() {
        let sig = Signature::new();
        let u = Term::universe(Level::Imp);
        // J U (\x y p. U) (\x. x) U U (refl U U)  ~>  U
        let t = Term::J(JArgs {
            ty: Term::universe(Level::Pred(0)),
            motive: lam(lam(lam(Term::universe(Level::Pred(0))))),
            refl_case: lam(Term::var(0)),
            lhs: u.clone(),
            rhs: u.clone(),
            path: Term::refl(Term::universe(Level::Pred(0)), u.clone()),
        });
        assert_eq!(*normalize(&sig, &t).unwrap(), *u);
    }

    #[test]
    fn j_on_neutral_path_is_stuck() {
        let sig = Signature::new();
        let nbe = Nbe::new(&sig);
        let t = Term::J(JArgs {
            ty: Term::var(0),
            motive: lam(lam(lam(Term::universe(Level::Imp)))),
            refl_case: lam(Term::var(0)),
            lhs: Term::var(0),
            rhs: Term::var(0),
            path: Term::var(0),
        });
        let v = nbe.eval(&Env::identity(1), &t).unwrap();
        assert!(matches!(v.as_ref(), Value::Neutral(Head::Var(0), s) if s.len() == 1));
    }

    #[test]
    fn eta_for_functions() {
        let sig = Signature::new();
        let nbe = Nbe::new(&sig);
        let env = Env::identity(1);
        let expanded = nbe.eval(&env, &lam(Term::app(Term::var(1), Term::var(0)))).unwrap();
        let n = Value::var(0);
        assert!(nbe.conv(1, &expanded, &n).unwrap());
        assert!(nbe.conv(1, &n, &expanded).unwrap());
    }

    #[test]
    fn eta_for_pairs() {
        let sig = Signature::new();
        let nbe = Nbe::new(&sig);
        let env = Env::identity(1);
        let p = nbe.eval(&env, &Term::pair(Term::fst(Term::var(0)), Term::snd(Term::var(0)))).unwrap();
        assert!(nbe.conv(1, &p, &Value::var(0)).unwrap());
    }

    #[test]
    fn distinct_neutrals_differ() {
        let sig = Signature::new();
        let nbe = Nbe::new(&sig);
        assert!(!nbe.conv(2, &Value::var(0), &Value::var(1)).unwrap());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let sig = Signature::new();
        let nbe = Nbe::new(&sig).with_budget(Some(3));
        let t = Term::apps(lam(Term::var(0)), [lam(Term::var(0)), lam(Term::var(0))]);
        assert!(matches!(nbe.eval(&Env::new(), &t), Err(EvalError::BudgetExhausted(3))));
    }

    #[test]
    fn unbound_constant_is_an_error() {
        let sig = Signature::new();
        assert_eq!(
            normalize(&sig, &Term::Const("nope".into())),
            Err(EvalError::UnboundConst("nope".into()))
        );
    }
}
