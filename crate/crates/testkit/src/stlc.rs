//! Simply typed lambda terms over one base type, with a generator of
//! well-typed closed terms and erasure to the untyped calculus.

use std::rc::Rc;

use proptest::prelude::*;

use itt_core::level::Level;
use itt_core::span::Span;
use itt_core::systemf::syntax::{FTerm, FTermKind, FType};
use itt_core::term::Term;

use crate::lambda::{self, Lam};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ty {
    Base,
    Arrow(Box<Ty>, Box<Ty>),
}

#[derive(Debug, Clone)]
pub enum Tm {
    Var(usize),
    Lam(Ty, Box<Tm>),
    App(Box<Tm>, Box<Tm>),
}

pub fn arb_ty() -> impl Strategy<Value = Ty> {
    Just(Ty::Base).prop_recursive(3, 8, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Ty::Arrow(Box::new(a), Box::new(b)))
    })
}

/// Well-typed terms of type `ty` in context `cx` (innermost last).
pub fn arb_tm(cx: Vec<Ty>, ty: Ty, depth: u32) -> BoxedStrategy<Tm> {
    let vars: Vec<Tm> = cx
        .iter()
        .enumerate()
        .filter(|(_, t)| **t == ty)
        .map(|(k, _)| Tm::Var(cx.len() - 1 - k))
        .collect();
    let mut options: Vec<BoxedStrategy<Tm>> = Vec::new();
    if !vars.is_empty() {
        options.push(proptest::sample::select(vars).boxed());
    }
    if let Ty::Arrow(a, b) = &ty {
        let mut cx2 = cx.clone();
        cx2.push((**a).clone());
        let a = (**a).clone();
        options.push(arb_tm(cx2, (**b).clone(), depth.saturating_sub(1)).prop_map(move |t| Tm::Lam(a.clone(), Box::new(t))).boxed());
    }
    if depth > 0 {
        let cx2 = cx.clone();
        let ty2 = ty.clone();
        options.push(
            arb_ty()
                .prop_flat_map(move |a| {
                    let f = arb_tm(cx2.clone(), Ty::Arrow(Box::new(a.clone()), Box::new(ty2.clone())), depth - 1);
                    let x = arb_tm(cx2.clone(), a, depth - 1);
                    (f, x)
                })
                .prop_map(|(f, x)| Tm::App(Box::new(f), Box::new(x)))
                .boxed(),
        );
    }
    proptest::strategy::Union::new(options).boxed()
}

/// Well-typed terms in a context holding one variable of the base type,
/// paired with their types.
pub fn arb_open() -> impl Strategy<Value = (Tm, Ty)> {
    arb_ty().prop_flat_map(|ty| arb_tm(vec![Ty::Base], ty.clone(), 3).prop_map(move |t| (t, ty.clone())))
}

impl Tm {
    pub fn erase(&self) -> Lam {
        match self {
            Tm::Var(i) => lambda::var(*i),
            Tm::Lam(_, b) => lambda::abs(b.erase()),
            Tm::App(f, a) => lambda::app(f.erase(), a.erase()),
        }
    }

        /// Core term in the context `cx` (innermost last), with the base type
    /// bound just outside it. Lambdas in head position are wrapped in the
    /// constant `ann` (see [`ann_decl`]) so that they can be inferred.
    pub fn to_core(&self, cx: &mut Vec<Ty>) -> Rc<Term> {
        match self {
            Tm::Var(i) => Term::var(*i),
            Tm::Lam(a, b) => {
                cx.push(a.clone());
                let body = b.to_core(cx);
                cx.pop();
                Term::lam("x", body)
            }
            Tm::App(f, a) => {
                let mut head = f.to_core(cx);
                if let Tm::Lam(..) = **f {
                    let fty = f.infer(cx).expect("well-typed").to_core().shift(cx.len(), 0);
                    head = Term::apps(Term::constant("ann"), [fty, head]);
                }
                Term::app(head, a.to_core(cx))
            }
        }
    }
}

impl Ty {
    /// Core type in a scope where the base type is variable 0.
    pub fn to_core(&self) -> Rc<Term> {
        match self {
            Ty::Base => Term::var(0),
            Ty::Arrow(a, b) => Term::arrow(a.to_core(), b.to_core()),
        }
    }
}

/// `(X : U) -> X -> ty` and `fun X x0 => tm` for a term of [`arb_open`].
pub fn close_over_base(tm: &Tm, ty: &Ty) -> (Rc<Term>, Rc<Term>) {
    (
        Term::pi("X", Term::universe(Level::Imp), Term::arrow(Term::var(0), ty.to_core())),
        Term::lam("X", Term::lam("x0", tm.to_core(&mut vec![Ty::Base]))),
    )
}

/// Untyped image of a core term built only from variables, lambdas and
/// applications.
pub fn core_to_lam(t: &Term) -> Option<Lam> {
    match t {
        Term::Var(i) => Some(lambda::var(*i)),
        Term::Lam(_, _, b) => Some(lambda::abs(core_to_lam(b)?)),
        Term::App(f, a) => Some(lambda::app(core_to_lam(f)?, core_to_lam(a)?)),
        _ => None,
    }
}

impl Ty {
    /// System F type with the base type as the type variable `X`.
    pub fn to_f(&self) -> Rc<FType> {
        match self {
            Ty::Base => FType::var("X"),
            Ty::Arrow(a, b) => FType::arrow(a.to_f(), b.to_f()),
        }
    }
}

impl Tm {
    pub fn infer(&self, cx: &[Ty]) -> Option<Ty> {
        match self {
            Tm::Var(i) => cx.len().checked_sub(i + 1).map(|k| cx[k].clone()),
            Tm::Lam(a, b) => {
                let mut cx2 = cx.to_vec();
                cx2.push(a.clone());
                Some(Ty::Arrow(Box::new(a.clone()), Box::new(b.infer(&cx2)?)))
            }
            Tm::App(f, _) => match f.infer(cx)? {
                Ty::Arrow(_, b) => Some(*b),
                Ty::Base => None,
            },
        }
    }

    /// System F term in the context `names`/`cx`. With `poly`, every
    /// argument is routed through an instance of the polymorphic identity.
    pub fn to_f(&self, names: &mut Vec<String>, cx: &mut Vec<Ty>, poly: bool) -> Rc<FTerm> {
        let mk = |k| FTerm::new(k, Span::default());
        match self {
            Tm::Var(i) => mk(FTermKind::Var(names[names.len() - 1 - i].as_str().into())),
            Tm::Lam(a, b) => {
                let x = format!("x{}", names.len());
                names.push(x.clone());
                cx.push(a.clone());
                let body = b.to_f(names, cx, poly);
                names.pop();
                cx.pop();
                mk(FTermKind::Lam(x.as_str().into(), a.to_f(), body))
            }
            Tm::App(f, a) => {
                let ff = f.to_f(names, cx, poly);
                let mut fa = a.to_f(names, cx, poly);
                if poly {
                    let sigma = a.infer(cx).expect("well-typed").to_f();
                    let id = mk(FTermKind::TyLam(
                        "Y".into(),
                        mk(FTermKind::Lam("y".into(), FType::var("Y"), mk(FTermKind::Var("y".into())))),
                    ));
                    fa = mk(FTermKind::App(mk(FTermKind::TyApp(id, sigma)), fa));
                }
                mk(FTermKind::App(ff, fa))
            }
        }
    }
}

/// `/\X. \(x0 : X). tm` at `forall X. X -> ty`, for a term of [`arb_open`].
pub fn close_f(tm: &Tm, ty: &Ty, poly: bool) -> (Rc<FType>, Rc<FTerm>) {
    let mk = |k| FTerm::new(k, Span::default());
    let body = tm.to_f(&mut vec!["x0".to_string()], &mut vec![Ty::Base], poly);
    (
        FType::forall("X", FType::arrow(FType::var("X"), ty.to_f())),
        mk(FTermKind::TyLam("X".into(), mk(FTermKind::Lam("x0".into(), FType::var("X"), body)))),
    )
}

/// `ann : (A : U) -> A -> A := fun A a => a`
pub fn ann_decl() -> (Rc<Term>, Rc<Term>) {
    (
        Term::pi("A", Term::universe(Level::Imp), Term::arrow(Term::var(0), Term::var(0))),
        Term::lam("A", Term::lam("a", Term::var(0))),
    )
}
