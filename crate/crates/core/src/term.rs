//! Core syntax, using de Bruijn indices for bound variables.

use std::rc::Rc;

use crate::level::Level;

pub type Name = Rc<str>;

/// Kernel terms.
///
/// Binder names are kept only for printing; the derived `PartialEq` compares
/// them, so use [`Term::alpha_eq`] when names should be ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(usize),
    Universe(Level),
    Pi(Name, Rc<Term>, Rc<Term>),
    /// Lambda with an optional domain. Only annotated lambdas infer.
    Lam(Name, Option<Rc<Term>>, Rc<Term>),
    App(Rc<Term>, Rc<Term>),
    Sigma(Name, Rc<Term>, Rc<Term>),
    Pair(Rc<Term>, Rc<Term>),
    Fst(Rc<Term>),
    Snd(Rc<Term>),
    Id(Rc<Term>, Rc<Term>, Rc<Term>),
    Refl(Rc<Term>, Rc<Term>),
    /// `J A C d x y p` with motive `C : (x y : A) -> Id A x y -> U_l` and
    /// refl case `d : (x : A) -> C x x (refl A x)`.
    J(JArgs),
    Const(Name),
    /// Elaboration-time metavariable. Never accepted by the kernel.
    Meta(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JArgs {
    pub ty: Rc<Term>,
    pub motive: Rc<Term>,
    pub refl_case: Rc<Term>,
    pub lhs: Rc<Term>,
    pub rhs: Rc<Term>,
    pub path: Rc<Term>,
}

impl Term {
    pub fn var(i: usize) -> Rc<Term> {
        Rc::new(Term::Var(i))
    }

    pub fn universe(l: Level) -> Rc<Term> {
        Rc::new(Term::Universe(l))
    }

    pub fn pi(name: &str, dom: Rc<Term>, cod: Rc<Term>) -> Rc<Term> {
        Rc::new(Term::Pi(name.into(), dom, cod))
    }

    pub fn arrow(dom: Rc<Term>, cod: Rc<Term>) -> Rc<Term> {
        Rc::new(Term::Pi("_".into(), dom, cod.shift(1, 0)))
    }

    pub fn lam(name: &str, body: Rc<Term>) -> Rc<Term> {
        Rc::new(Term::Lam(name.into(), None, body))
    }

    pub fn lam_ann(name: &str, dom: Rc<Term>, body: Rc<Term>) -> Rc<Term> {
        Rc::new(Term::Lam(name.into(), Some(dom), body))
    }

    pub fn app(f: Rc<Term>, a: Rc<Term>) -> Rc<Term> {
        Rc::new(Term::App(f, a))
    }

    pub fn apps(f: Rc<Term>, args: impl IntoIterator<Item = Rc<Term>>) -> Rc<Term> {
        args.into_iter().fold(f, Term::app)
    }

    pub fn sigma(name: &str, fst: Rc<Term>, snd: Rc<Term>) -> Rc<Term> {
        Rc::new(Term::Sigma(name.into(), fst, snd))
    }

    pub fn pair(a: Rc<Term>, b: Rc<Term>) -> Rc<Term> {
        Rc::new(Term::Pair(a, b))
    }

    pub fn fst(t: Rc<Term>) -> Rc<Term> {
        Rc::new(Term::Fst(t))
    }

    pub fn snd(t: Rc<Term>) -> Rc<Term> {
        Rc::new(Term::Snd(t))
    }

    pub fn id(ty: Rc<Term>, a: Rc<Term>, b: Rc<Term>) -> Rc<Term> {
        Rc::new(Term::Id(ty, a, b))
    }

    pub fn refl(ty: Rc<Term>, a: Rc<Term>) -> Rc<Term> {
        Rc::new(Term::Refl(ty, a))
    }

    pub fn constant(name: &str) -> Rc<Term> {
        Rc::new(Term::Const(name.into()))
    }

    /// True iff every variable index is bound, assuming `depth` variables
    /// are in scope around the term.
    pub fn well_scoped(&self, depth: usize) -> bool {
        match self {
            Term::Var(i) => *i < depth,
            Term::Universe(_) | Term::Const(_) | Term::Meta(_) => true,
            Term::Pi(_, a, b) | Term::Sigma(_, a, b) => {
                a.well_scoped(depth) && b.well_scoped(depth + 1)
            }
            Term::Lam(_, a, b) => a.as_ref().is_none_or(|a| a.well_scoped(depth)) && b.well_scoped(depth + 1),
            Term::App(a, b) | Term::Pair(a, b) | Term::Refl(a, b) => {
                a.well_scoped(depth) && b.well_scoped(depth)
            }
            Term::Fst(t) | Term::Snd(t) => t.well_scoped(depth),
            Term::Id(a, b, c) => {
                a.well_scoped(depth) && b.well_scoped(depth) && c.well_scoped(depth)
            }
            Term::J(j) => j.iter().all(|t| t.well_scoped(depth)),
        }
    }

    /// Add `by` to every free index `>= cutoff`.
    pub fn shift(self: &Rc<Term>, by: usize, cutoff: usize) -> Rc<Term> {
        if by == 0 {
            return self.clone();
        }
        self.map_vars(cutoff, &|i, c| if i >= c { Term::Var(i + by) } else { Term::Var(i) })
    }

    fn map_vars(self: &Rc<Term>, cutoff: usize, f: &dyn Fn(usize, usize) -> Term) -> Rc<Term> {
        let go = |t: &Rc<Term>, c: usize| t.map_vars(c, f);
        Rc::new(match self.as_ref() {
            Term::Var(i) => f(*i, cutoff),
            Term::Universe(_) | Term::Const(_) | Term::Meta(_) => return self.clone(),
            Term::Pi(n, a, b) => Term::Pi(n.clone(), go(a, cutoff), go(b, cutoff + 1)),
            Term::Sigma(n, a, b) => Term::Sigma(n.clone(), go(a, cutoff), go(b, cutoff + 1)),
            Term::Lam(n, a, b) => Term::Lam(n.clone(), a.as_ref().map(|a| go(a, cutoff)), go(b, cutoff + 1)),
            Term::App(a, b) => Term::App(go(a, cutoff), go(b, cutoff)),
            Term::Pair(a, b) => Term::Pair(go(a, cutoff), go(b, cutoff)),
            Term::Refl(a, b) => Term::Refl(go(a, cutoff), go(b, cutoff)),
            Term::Fst(t) => Term::Fst(go(t, cutoff)),
            Term::Snd(t) => Term::Snd(go(t, cutoff)),
            Term::Id(a, b, c) => Term::Id(go(a, cutoff), go(b, cutoff), go(c, cutoff)),
            Term::J(j) => Term::J(JArgs {
                ty: go(&j.ty, cutoff),
                motive: go(&j.motive, cutoff),
                refl_case: go(&j.refl_case, cutoff),
                lhs: go(&j.lhs, cutoff),
                rhs: go(&j.rhs, cutoff),
                path: go(&j.path, cutoff),
            }),
        })
    }

    /// Structural equality ignoring binder names.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        match (self, other) {
            (Term::Var(a), Term::Var(b)) => a == b,
            (Term::Universe(a), Term::Universe(b)) => a == b,
            (Term::Const(a), Term::Const(b)) => a == b,
            (Term::Meta(a), Term::Meta(b)) => a == b,
            (Term::Pi(_, a1, b1), Term::Pi(_, a2, b2))
            | (Term::Sigma(_, a1, b1), Term::Sigma(_, a2, b2))
            | (Term::App(a1, b1), Term::App(a2, b2))
            | (Term::Pair(a1, b1), Term::Pair(a2, b2))
            | (Term::Refl(a1, b1), Term::Refl(a2, b2)) => a1.alpha_eq(a2) && b1.alpha_eq(b2),
            (Term::Lam(_, a1, b1), Term::Lam(_, a2, b2)) => {
                let doms = match (a1, a2) {
                    (None, None) => true,
                    (Some(a1), Some(a2)) => a1.alpha_eq(a2),
                    _ => false,
                };
                doms && b1.alpha_eq(b2)
            }
            (Term::Fst(a), Term::Fst(b)) | (Term::Snd(a), Term::Snd(b)) => a.alpha_eq(b),
            (Term::Id(a1, b1, c1), Term::Id(a2, b2, c2)) => {
                a1.alpha_eq(a2) && b1.alpha_eq(b2) && c1.alpha_eq(c2)
            }
            (Term::J(j1), Term::J(j2)) => j1.iter().zip(j2.iter()).all(|(a, b)| a.alpha_eq(b)),
            _ => false,
        }
    }

    /// Visit every subterm in pre-order.
    pub fn walk(&self, f: &mut dyn FnMut(&Term)) {
        f(self);
        match self {
            Term::Var(_) | Term::Universe(_) | Term::Const(_) | Term::Meta(_) => {}
            Term::Pi(_, a, b)
            | Term::Sigma(_, a, b)
            | Term::App(a, b)
            | Term::Pair(a, b)
            | Term::Refl(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Term::Lam(_, a, b) => {
                if let Some(a) = a {
                    a.walk(f);
                }
                b.walk(f);
            }
            Term::Fst(b) | Term::Snd(b) => b.walk(f),
            Term::Id(a, b, c) => {
                a.walk(f);
                b.walk(f);
                c.walk(f);
            }
            Term::J(j) => j.iter().for_each(|t| t.walk(f)),
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    /// Names of all constants referenced by the term.
    pub fn constants(&self) -> Vec<Name> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let Term::Const(c) = t {
                if !out.contains(c) {
                    out.push(c.clone());
                }
            }
        });
        out
    }
}

impl JArgs {
    pub fn iter(&self) -> impl Iterator<Item = &Rc<Term>> {
        [&self.ty, &self.motive, &self.refl_case, &self.lhs, &self.rhs, &self.path].into_iter()
    }
}
