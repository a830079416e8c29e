//! Semantic domain for normalization by evaluation.
//!
//! Free variables are de Bruijn *levels*; terms use indices. Closures pair a
//! term with the environment it was built in.

use std::rc::Rc;

use crate::level::Level;
use crate::term::{Name, Term};

pub type Val = Rc<Value>;

#[derive(Debug, Clone)]
pub enum Value {
    Universe(Level),
    Pi(Name, Val, Closure),
    Lam(Name, Closure),
    Sigma(Name, Val, Closure),
    Pair(Val, Val),
    Id(Val, Val, Val),
    Refl(Val, Val),
    Neutral(Head, Vec<Elim>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Head {
    /// Bound variable, as a de Bruijn level.
    Var(usize),
    Postulate(Name),
    Meta(usize),
}

#[derive(Debug, Clone)]
pub enum Elim {
    App(Val),
    Fst,
    Snd,
    /// Stuck `J`; only pushed when the path is neutral.
    J { ty: Val, motive: Val, refl_case: Val, lhs: Val, rhs: Val },
}

#[derive(Debug, Clone)]
pub struct Closure {
    pub env: Env,
    pub body: Rc<Term>,
}

/// Persistent environment; index 0 is the innermost binding.
#[derive(Debug, Clone, Default)]
pub struct Env(Option<Rc<EnvNode>>);

#[derive(Debug)]
struct EnvNode {
    value: Val,
    next: Env,
    len: usize,
}

impl Env {
    pub fn new() -> Env {
        Env(None)
    }

    pub fn len(&self) -> usize {
        self.0.as_ref().map_or(0, |n| n.len)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    pub fn push(&self, value: Val) -> Env {
        Env(Some(Rc::new(EnvNode { value, next: self.clone(), len: self.len() + 1 })))
    }

    pub fn get(&self, index: usize) -> Option<&Val> {
        let mut node = self.0.as_ref()?;
        for _ in 0..index {
            node = node.next.0.as_ref()?;
        }
        Some(&node.value)
    }

    /// The environment without its innermost binding.
    pub fn tail(&self) -> Env {
        self.0.as_ref().map_or(Env::new(), |n| n.next.clone())
    }

    /// Environment of `depth` fresh variables, levels `0..depth`.
    pub fn identity(depth: usize) -> Env {
        (0..depth).fold(Env::new(), |env, l| env.push(Value::var(l)))
    }
}

impl Value {
    pub fn var(level: usize) -> Val {
        Rc::new(Value::Neutral(Head::Var(level), Vec::new()))
    }

    pub fn universe(l: Level) -> Val {
        Rc::new(Value::Universe(l))
    }

    pub fn as_universe(&self) -> Option<Level> {
        match self {
            Value::Universe(l) => Some(*l),
            _ => None,
        }
    }
}
