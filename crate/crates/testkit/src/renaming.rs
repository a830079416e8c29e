//! System F type substitution by renaming every binder apart first, so the
//! substitution itself can be naive.

use std::collections::BTreeSet;
use std::rc::Rc;

use itt_core::systemf::syntax::FType;
use itt_core::term::Name;

fn all_names(t: &FType, out: &mut BTreeSet<Name>) {
    match t {
        FType::Var(x) => {
            out.insert(x.clone());
        }
        FType::Arrow(a, b) => {
            all_names(a, out);
            all_names(b, out);
        }
        FType::Forall(x, b) => {
            out.insert(x.clone());
            all_names(b, out);
        }
    }
}

struct Renamer {
    counter: usize,
    avoid: BTreeSet<Name>,
}

impl Renamer {
    fn fresh(&mut self) -> Name {
        loop {
            self.counter += 1;
            let n: Name = format!("_r{}", self.counter).into();
            if !self.avoid.contains(&n) {
                return n;
            }
        }
    }

    fn go(&mut self, t: &FType, env: &[(Name, Name)]) -> Rc<FType> {
        match t {
            FType::Var(x) => {
                let y = env.iter().rev().find(|(a, _)| a == x).map(|(_, b)| b.clone()).unwrap_or(x.clone());
                Rc::new(FType::Var(y))
            }
            FType::Arrow(a, b) => Rc::new(FType::Arrow(self.go(a, env), self.go(b, env))),
            FType::Forall(x, b) => {
                let y = self.fresh();
                let mut env = env.to_vec();
                env.push((x.clone(), y.clone()));
                Rc::new(FType::Forall(y, self.go(b, &env)))
            }
        }
    }
}

fn naive(t: &FType, x: &str, b: &Rc<FType>) -> Rc<FType> {
    match t {
        FType::Var(y) if &**y == x => b.clone(),
        FType::Var(y) => Rc::new(FType::Var(y.clone())),
        FType::Arrow(p, q) => Rc::new(FType::Arrow(naive(p, x, b), naive(q, x, b))),
        FType::Forall(y, body) => Rc::new(FType::Forall(y.clone(), naive(body, x, b))),
    }
}

/// `a[x := b]`, computed by renaming all binders of `a` to fresh names.
pub fn subst_by_renaming(a: &FType, x: &str, b: &Rc<FType>) -> Rc<FType> {
    let mut avoid = BTreeSet::new();
    all_names(a, &mut avoid);
    all_names(b, &mut avoid);
    avoid.insert(x.into());
    let mut r = Renamer { counter: 0, avoid };
    naive(&r.go(a, &[]), x, b)
}
