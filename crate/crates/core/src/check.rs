//! Bidirectional kernel type checker.
//!
//! Universes are Russell-style and cumulative: `U <= U0 <= U1 <= U2`, and
//! cumulativity is applied silently through [`Checker::subtype`].

use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::eval::{EvalError, Nbe};
use crate::level::{formation_level, Former, Level, MAX_LEVEL};
use crate::meta::MetaStore;
use crate::signature::{Decl, DeclKind, PostulatePolicy, Provenance, Signature};
use crate::span::Span;
use crate::surface::print::render_term;
use crate::term::{JArgs, Name, Term};
use crate::value::{Env, Val, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    Mismatch,
    NotAFunction,
    NotAPair,
    NotAUniverse,
    UnboundName,
    LevelOverflow,
    UnsolvedHole,
    PostulateForbidden,
    CannotInfer,
    DuplicateName,
    BudgetExhausted,
    Internal,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Error)]
#[error("{kind}: {message}")]
pub struct TypeError {
    pub kind: ErrorKind,
    pub message: String,
    pub expected: Option<Rc<Term>>,
    pub actual: Option<Rc<Term>>,
    pub span: Span,
}

impl TypeError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> TypeError {
        TypeError { kind, message: message.into(), expected: None, actual: None, span: Span::default() }
    }

    pub fn at(mut self, span: Span) -> TypeError {
        if self.span == Span::default() {
            self.span = span;
        }
        self
    }
}

impl From<EvalError> for TypeError {
    fn from(e: EvalError) -> TypeError {
        let kind = match e {
            EvalError::BudgetExhausted(_) => ErrorKind::BudgetExhausted,
            EvalError::UnboundConst(_) => ErrorKind::UnboundName,
            _ => ErrorKind::Internal,
        };
        TypeError::new(kind, e.to_string())
    }
}

pub type CheckResult<T> = Result<T, TypeError>;

/// Local typing assumptions. Entry `i`'s type was evaluated in the context
/// of entries `0..i`.
#[derive(Debug, Clone, Default)]
pub struct Context {
    names: Vec<Name>,
    types: Vec<Val>,
    env: Env,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn env(&self) -> &Env {
        &self.env
    }

    pub fn names(&self) -> &[Name] {
        &self.names
    }

    pub fn push(&mut self, name: Name, ty: Val) {
        self.env = self.env.push(Value::var(self.names.len()));
        self.names.push(name);
        self.types.push(ty);
    }

    pub fn pop(&mut self) {
        self.names.pop();
        self.types.pop();
        self.env = self.env.tail();
    }

    /// Type of the variable with de Bruijn index `i`.
    pub fn lookup(&self, i: usize) -> Option<&Val> {
        self.types.len().checked_sub(i + 1).map(|l| &self.types[l])
    }

    /// Index of the innermost binder called `name`.
    pub fn resolve(&self, name: &str) -> Option<usize> {
        self.names.iter().rev().position(|n| &**n == name)
    }
}

pub struct Checker<'a> {
    nbe: Nbe<'a>,
    max_level: u8,
}

impl<'a> Checker<'a> {
    pub fn new(sig: &'a Signature) -> Checker<'a> {
        Checker { nbe: Nbe::new(sig), max_level: MAX_LEVEL }
    }

    pub fn with_metas(mut self, metas: &'a MetaStore) -> Checker<'a> {
        self.nbe = self.nbe.with_metas(metas);
        self
    }

    pub fn with_max_level(mut self, max: u8) -> Checker<'a> {
        self.max_level = max;
        self
    }

    pub fn with_budget(mut self, budget: Option<u64>) -> Checker<'a> {
        self.nbe = self.nbe.with_budget(budget);
        self
    }

    pub fn nbe(&self) -> &Nbe<'a> {
        &self.nbe
    }

    pub fn max_level(&self) -> u8 {
        self.max_level
    }

    pub fn sig(&self) -> &'a Signature {
        self.nbe.sig()
    }

    pub fn eval(&self, ctx: &Context, t: &Term) -> CheckResult<Val> {
        Ok(self.nbe.eval(ctx.env(), t)?)
    }

    /// Render a value for an error message.
    pub fn show(&self, ctx: &Context, v: &Val) -> String {
        match self.nbe.quote(ctx.len(), v) {
            Ok(t) => render_term(&t, ctx.names()),
            Err(e) => format!("<{e}>"),
        }
    }

    pub fn mismatch(&self, ctx: &Context, expected: &Val, actual: &Val) -> TypeError {
        let e = self.nbe.quote(ctx.len(), expected).ok();
        let a = self.nbe.quote(ctx.len(), actual).ok();
        TypeError {
            kind: ErrorKind::Mismatch,
            message: format!(
                "type mismatch: expected `{}`, found `{}`",
                self.show(ctx, expected),
                self.show(ctx, actual)
            ),
            expected: e,
            actual: a,
            span: Span::default(),
        }
    }

    pub fn universe_type(&self, l: Level) -> CheckResult<Val> {
        if !l.is_valid(self.max_level) {
            return Err(TypeError::new(ErrorKind::LevelOverflow, format!("universe {l} is above the hierarchy")));
        }
        match l.type_of(self.max_level) {
            Some(up) => Ok(Value::universe(up)),
            None => Err(TypeError::new(
                ErrorKind::LevelOverflow,
                format!("{l} is the top universe and has no type"),
            )),
        }
    }

    pub fn infer(&self, ctx: &mut Context, t: &Term) -> CheckResult<Val> {
        match t {
            Term::Var(i) => ctx.lookup(*i).cloned().ok_or_else(|| {
                TypeError::new(ErrorKind::UnboundName, format!("unbound variable index {i}"))
            }),
            Term::Universe(l) => self.universe_type(*l),
            Term::Pi(n, a, b) | Term::Sigma(n, a, b) => {
                let la = self.infer_universe(ctx, a)?;
                let va = self.eval(ctx, a)?;
                ctx.push(n.clone(), va);
                let lb = self.infer_universe(ctx, b);
                ctx.pop();
                let former = if matches!(t, Term::Pi(..)) { Former::Pi } else { Former::Sigma };
                Ok(Value::universe(formation_level(former, la, lb?)))
            }
            Term::Lam(n, Some(a), body) => {
                self.infer_universe(ctx, a)?;
                let va = self.eval(ctx, a)?;
                ctx.push(n.clone(), va);
                let r = self.infer(ctx, body).and_then(|tb| Ok(self.nbe.quote(ctx.len(), &tb)?));
                ctx.pop();
                let pi = Term::Pi(n.clone(), a.clone(), r?);
                self.eval(ctx, &pi)
            }
            Term::Lam(_, None, _) => Err(TypeError::new(
                ErrorKind::CannotInfer,
                "cannot infer the type of a lambda; add a type",
            )),
            Term::Pair(..) => Err(TypeError::new(
                ErrorKind::CannotInfer,
                "cannot infer the type of a pair; add a type",
            )),
            Term::App(f, a) => {
                let tf = self.infer(ctx, f)?;
                match self.nbe.force(&tf)?.as_ref() {
                    Value::Pi(_, dom, clo) => {
                        self.check(ctx, a, dom)?;
                        let va = self.eval(ctx, a)?;
                        Ok(self.nbe.instantiate(clo, va)?)
                    }
                    _ => Err(TypeError::new(
                        ErrorKind::NotAFunction,
                        format!("expected a function, found something of type `{}`", self.show(ctx, &tf)),
                    )),
                }
            }
            Term::Fst(p) | Term::Snd(p) => {
                let tp = self.infer(ctx, p)?;
                match self.nbe.force(&tp)?.as_ref() {
                    Value::Sigma(_, a, clo) => {
                        if matches!(t, Term::Fst(_)) {
                            Ok(a.clone())
                        } else {
                            let vp = self.eval(ctx, p)?;
                            let first = self.nbe.fst(&vp)?;
                            Ok(self.nbe.instantiate(clo, first)?)
                        }
                    }
                    _ => Err(TypeError::new(
                        ErrorKind::NotAPair,
                        format!("expected a pair, found something of type `{}`", self.show(ctx, &tp)),
                    )),
                }
            }
            Term::Id(a, x, y) => {
                let l = self.infer_universe(ctx, a)?;
                let va = self.eval(ctx, a)?;
                self.check(ctx, x, &va)?;
                self.check(ctx, y, &va)?;
                Ok(Value::universe(formation_level(Former::Id, l, l)))
            }
            Term::Refl(a, x) => {
                self.infer_universe(ctx, a)?;
                let va = self.eval(ctx, a)?;
                self.check(ctx, x, &va)?;
                let vx = self.eval(ctx, x)?;
                Ok(Rc::new(Value::Id(va, vx.clone(), vx)))
            }
            Term::J(j) => self.infer_j(ctx, j),
            Term::Const(c) => match self.sig().get(c) {
                Some(d) => Ok(d.ty_value.clone()),
                None => Err(TypeError::new(ErrorKind::UnboundName, format!("unknown name `{c}`"))),
            },
            Term::Meta(m) => match self.nbe.metas().and_then(|ms| ms.entry(*m)) {
                Some(entry) => Ok(entry.ty),
                None => Err(TypeError::new(ErrorKind::UnsolvedHole, "unsolved hole in kernel term")),
            },
        }
    }

    fn infer_j(&self, ctx: &mut Context, j: &JArgs) -> CheckResult<Val> {
        self.infer_universe(ctx, &j.ty)?;
        let motive_ty = motive_type(&j.ty, self.max_level);
        let motive_ty = self.eval(ctx, &motive_ty)?;
        self.check(ctx, &j.motive, &motive_ty)?;
        let refl_ty = Term::pi(
            "x",
            j.ty.clone(),
            Term::apps(
                j.motive.shift(1, 0),
                [Term::var(0), Term::var(0), Term::refl(j.ty.shift(1, 0), Term::var(0))],
            ),
        );
        let refl_ty = self.eval(ctx, &refl_ty)?;
        self.check(ctx, &j.refl_case, &refl_ty)?;
        let va = self.eval(ctx, &j.ty)?;
        self.check(ctx, &j.lhs, &va)?;
        self.check(ctx, &j.rhs, &va)?;
        let vx = self.eval(ctx, &j.lhs)?;
        let vy = self.eval(ctx, &j.rhs)?;
        let path_ty = Rc::new(Value::Id(va, vx.clone(), vy.clone()));
        self.check(ctx, &j.path, &path_ty)?;
        let vc = self.eval(ctx, &j.motive)?;
        let vp = self.eval(ctx, &j.path)?;
        Ok(self.nbe.apply_all(&vc, [vx, vy, vp])?)
    }

    /// Infer the type of `t` and require it to be a universe.
    pub fn infer_universe(&self, ctx: &mut Context, t: &Term) -> CheckResult<Level> {
        let ty = self.infer(ctx, t)?;
        match self.nbe.force(&ty)?.as_universe() {
            Some(l) => Ok(l),
            None => Err(TypeError::new(
                ErrorKind::NotAUniverse,
                format!("expected a type, found a term of type `{}`", self.show(ctx, &ty)),
            )),
        }
    }

    pub fn check(&self, ctx: &mut Context, t: &Term, expected: &Val) -> CheckResult<()> {
        match t {
            Term::Lam(n, ann, body) => match self.nbe.force(expected)?.as_ref() {
                Value::Pi(_, dom, clo) => {
                    if let Some(a) = ann {
                        self.infer_universe(ctx, a)?;
                        let va = self.eval(ctx, a)?;
                        if !self.nbe.conv(ctx.len(), &va, dom)? {
                            return Err(self.mismatch(ctx, dom, &va));
                        }
                    }
                    let cod = self.nbe.instantiate(clo, Value::var(ctx.len()))?;
                    ctx.push(n.clone(), dom.clone());
                    let r = self.check(ctx, body, &cod);
                    ctx.pop();
                    r
                }
                _ => Err(TypeError::new(
                    ErrorKind::Mismatch,
                    format!("a function was given where `{}` was expected", self.show(ctx, expected)),
                )),
            },
            Term::Pair(a, b) => match self.nbe.force(expected)?.as_ref() {
                Value::Sigma(_, ta, clo) => {
                    self.check(ctx, a, ta)?;
                    let va = self.eval(ctx, a)?;
                    let tb = self.nbe.instantiate(clo, va)?;
                    self.check(ctx, b, &tb)
                }
                _ => Err(TypeError::new(
                    ErrorKind::Mismatch,
                    format!("a pair was given where `{}` was expected", self.show(ctx, expected)),
                )),
            },
            _ => {
                let actual = self.infer(ctx, t)?;
                if self.subtype(ctx.len(), &actual, expected)? {
                    Ok(())
                } else {
                    Err(self.mismatch(ctx, expected, &actual))
                }
            }
        }
    }

    /// `a <= b` under `depth` bound variables.
    ///
    /// Universes follow the level order. Function types need convertible
    /// domains and compare codomains pointwise; sums need convertible first
    /// components. Everything else falls back to conversion.
    pub fn subtype(&self, depth: usize, a: &Val, b: &Val) -> CheckResult<bool> {
        let a = self.nbe.force(a)?;
        let b = self.nbe.force(b)?;
        match (a.as_ref(), b.as_ref()) {
            (Value::Universe(l1), Value::Universe(l2)) => Ok(l1 <= l2),
            (Value::Pi(_, d1, c1), Value::Pi(_, d2, c2))
            | (Value::Sigma(_, d1, c1), Value::Sigma(_, d2, c2)) => {
                if !self.nbe.conv(depth, d1, d2)? {
                    return Ok(false);
                }
                let x = Value::var(depth);
                let l = self.nbe.instantiate(c1, x.clone())?;
                let r = self.nbe.instantiate(c2, x)?;
                self.subtype(depth + 1, &l, &r)
            }
            _ => Ok(self.nbe.conv(depth, &a, &b)?),
        }
    }
}

/// `(x y : A) -> Id A x y -> U{max}`, the most permissive motive type.
fn motive_type(ty: &Rc<Term>, max: u8) -> Rc<Term> {
    Term::pi(
        "x",
        ty.clone(),
        Term::pi(
            "y",
            ty.shift(1, 0),
            Term::pi(
                "p",
                Term::id(ty.shift(2, 0), Term::var(1), Term::var(0)),
                Term::universe(Level::Pred(max)),
            ),
        ),
    )
}

/// A declaration before checking.
#[derive(Debug, Clone)]
pub struct DeclInput {
    pub name: Name,
    pub ty: Rc<Term>,
    pub body: Option<Rc<Term>>,
    pub provenance: Provenance,
}

impl DeclInput {
    pub fn definition(name: &str, ty: Rc<Term>, body: Rc<Term>) -> DeclInput {
        DeclInput { name: name.into(), ty, body: Some(body), provenance: Provenance::default() }
    }

    pub fn postulate(name: &str, ty: Rc<Term>) -> DeclInput {
        DeclInput { name: name.into(), ty, body: None, provenance: Provenance::default() }
    }
}

/// Check a declaration against `sig` and append it.
pub fn check_decl(sig: &mut Signature, decl: DeclInput, policy: &PostulatePolicy) -> CheckResult<()> {
    check_decl_with(sig, decl, policy, MAX_LEVEL, None)
}

pub fn check_decl_with(
    sig: &mut Signature,
    decl: DeclInput,
    policy: &PostulatePolicy,
    max_level: u8,
    budget: Option<u64>,
) -> CheckResult<()> {
    if sig.contains(&decl.name) {
        return Err(TypeError::new(
            ErrorKind::DuplicateName,
            format!("`{}` is already declared", decl.name),
        ));
    }
    let scoped = decl.ty.well_scoped(0) && decl.body.as_ref().is_none_or(|b| b.well_scoped(0));
    if !scoped {
        return Err(TypeError::new(ErrorKind::UnboundName, "declaration mentions an unbound variable"));
    }
    let audit = decl.provenance.qualify(&decl.name);
    let new = {
        let checker = Checker::new(sig).with_max_level(max_level).with_budget(budget);
        let mut ctx = Context::new();
        checker.infer_universe(&mut ctx, &decl.ty)?;
        let ty_value = checker.eval(&ctx, &decl.ty)?;
        let kind = match &decl.body {
            Some(body) => {
                checker.check(&mut ctx, body, &ty_value)?;
                DeclKind::Definition { body: body.clone(), value: checker.eval(&ctx, body)? }
            }
            None => {
                if !policy.permits(&audit) {
                    return Err(TypeError::new(
                        ErrorKind::PostulateForbidden,
                        format!("postulate `{audit}` is not on the allowlist"),
                    ));
                }
                DeclKind::Postulate
            }
        };
        Decl { name: decl.name, ty: decl.ty, ty_value, kind, provenance: decl.provenance }
    };
    sig.push(new);
    Ok(())
}
