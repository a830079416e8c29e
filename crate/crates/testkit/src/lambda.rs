//! Untyped lambda calculus with de Bruijn indices and normal-order
//! reduction by substitution.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lam {
    Var(usize),
    Abs(Box<Lam>),
    App(Box<Lam>, Box<Lam>),
}

pub fn var(i: usize) -> Lam {
    Lam::Var(i)
}

pub fn abs(b: Lam) -> Lam {
    Lam::Abs(Box::new(b))
}

pub fn app(f: Lam, a: Lam) -> Lam {
    Lam::App(Box::new(f), Box::new(a))
}

pub fn apps(f: Lam, args: impl IntoIterator<Item = Lam>) -> Lam {
    args.into_iter().fold(f, app)
}

impl Lam {
    pub fn shift(&self, by: isize, cutoff: usize) -> Lam {
        match self {
            Lam::Var(i) if *i >= cutoff => Lam::Var((*i as isize + by) as usize),
            Lam::Var(i) => Lam::Var(*i),
            Lam::Abs(b) => abs(b.shift(by, cutoff + 1)),
            Lam::App(f, a) => app(f.shift(by, cutoff), a.shift(by, cutoff)),
        }
    }

    /// Replace variable `j` by `s`, decrementing variables above `j`.
    fn subst(&self, j: usize, s: &Lam) -> Lam {
        match self {
            Lam::Var(i) if *i == j => s.shift(j as isize, 0),
            Lam::Var(i) if *i > j => Lam::Var(i - 1),
            Lam::Var(i) => Lam::Var(*i),
            Lam::Abs(b) => abs(b.subst(j + 1, s)),
            Lam::App(f, a) => app(f.subst(j, s), a.subst(j, s)),
        }
    }

    /// One leftmost-outermost step, if any redex exists.
    fn step(&self) -> Option<Lam> {
        match self {
            Lam::Var(_) => None,
            Lam::Abs(b) => b.step().map(abs),
            Lam::App(f, a) => {
                if let Lam::Abs(b) = f.as_ref() {
                    return Some(b.subst(0, a));
                }
                if let Some(f2) = f.step() {
                    return Some(app(f2, (**a).clone()));
                }
                a.step().map(|a2| app((**f).clone(), a2))
            }
        }
    }

    /// Normal form, or `None` if `fuel` steps were not enough.
    pub fn normalize(&self, fuel: usize) -> Option<Lam> {
        let mut t = self.clone();
        for _ in 0..fuel {
            match t.step() {
                Some(n) => t = n,
                None => return Some(t),
            }
        }
        None
    }
}

impl fmt::Display for Lam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lam::Var(i) => write!(f, "{i}"),
            Lam::Abs(b) => write!(f, "(\\ {b})"),
            Lam::App(g, a) => write!(f, "({g} {a})"),
        }
    }
}

/// `\h x. h (h ... x)` with `n` applications.
pub fn church(n: usize) -> Lam {
    let mut body = var(0);
    for _ in 0..n {
        body = app(var(1), body);
    }
    abs(abs(body))
}

/// Inverse of [`church`] on normal forms.
pub fn read_church(t: &Lam) -> Option<usize> {
    let Lam::Abs(b) = t else { return None };
    let Lam::Abs(mut b) = (**b).clone() else { return None };
    let mut n = 0;
    loop {
        match *b {
            Lam::Var(0) => return Some(n),
            Lam::App(f, a) if *f == Lam::Var(1) => {
                n += 1;
                b = a;
            }
            _ => return None,
        }
    }
}

pub fn succ() -> Lam {
    abs(abs(abs(app(var(1), apps(var(2), [var(1), var(0)])))))
}

/// `plus m n := m succ n`
pub fn plus() -> Lam {
    abs(abs(apps(var(1), [succ(), var(0)])))
}

/// `times m n := n (plus m) 0`
pub fn times() -> Lam {
    abs(abs(apps(var(0), [app(plus(), var(1)), church(0)])))
}

/// Evaluate `op m n` on Church numerals and read back the result.
pub fn church_op(op: Lam, m: usize, n: usize) -> Option<usize> {
    let t = apps(op, [church(m), church(n)]);
    read_church(&t.normalize(100_000)?)
}
