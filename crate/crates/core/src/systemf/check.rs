//! Type inference for System F and capture-avoiding type substitution.

use std::collections::BTreeSet;
use std::rc::Rc;

use crate::term::Name;

use super::syntax::{FTerm, FTermKind, FType};
use super::{FError, FErrorKind};

/// `a[b/x]`, renaming binders of `a` that would capture free variables of `b`.
pub fn subst(a: &Rc<FType>, x: &str, b: &Rc<FType>) -> Rc<FType> {
    match a.as_ref() {
        FType::Var(y) => {
            if &**y == x {
                b.clone()
            } else {
                a.clone()
            }
        }
        FType::Arrow(l, r) => FType::arrow(subst(l, x, b), subst(r, x, b)),
        FType::Forall(y, body) => {
            if &**y == x {
                return a.clone();
            }
            let fv_b = b.free_vars();
            if fv_b.contains(y) && body.free_vars().contains(x) {
                let mut avoid = fv_b;
                avoid.extend(body.free_vars());
                avoid.insert(x.into());
                let fresh = fresh_name(y, &avoid);
                let renamed = subst(body, y, &FType::var(&fresh));
                Rc::new(FType::Forall(fresh, subst(&renamed, x, b)))
            } else {
                Rc::new(FType::Forall(y.clone(), subst(body, x, b)))
            }
        }
    }
}

pub fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let mut n = format!("{base}'");
    while avoid.contains(n.as_str()) {
        n.push('\'');
    }
    n.as_str().into()
}

/// Typing environment for terms: earlier declarations plus local binders.
pub struct FEnv<'a> {
    pub globals: &'a [(Name, Rc<FType>)],
    pub tyvars: Vec<Name>,
    pub locals: Vec<(Name, Rc<FType>)>,
}

impl<'a> FEnv<'a> {
    pub fn new(globals: &'a [(Name, Rc<FType>)]) -> FEnv<'a> {
        FEnv { globals, tyvars: Vec::new(), locals: Vec::new() }
    }

    fn lookup(&self, x: &str) -> Option<Rc<FType>> {
        self.locals
            .iter()
            .rev()
            .chain(self.globals.iter().rev())
            .find(|(n, _)| &**n == x)
            .map(|(_, t)| t.clone())
    }

    fn well_formed(&self, t: &FType, at: &FTerm) -> Result<(), FError> {
        match t.free_vars().into_iter().find(|v| !self.tyvars.contains(v)) {
            None => Ok(()),
            Some(v) => Err(FError::new(FErrorKind::UnboundTypeVar, format!("unbound type variable `{v}`"), at.span)),
        }
    }
}

/// Infer the type of `t`. The locals' types may mention type variables that
/// are not in `env.tyvars`; those count as free in the context.
pub fn infer_f(env: &mut FEnv<'_>, t: &FTerm) -> Result<Rc<FType>, FError> {
    match &t.kind {
        FTermKind::Var(x) => env
            .lookup(x)
            .ok_or_else(|| FError::new(FErrorKind::UnboundVar, format!("unbound variable `{x}`"), t.span)),
        FTermKind::Lam(x, a, body) => {
            env.well_formed(a, t)?;
            env.locals.push((x.clone(), a.clone()));
            let b = infer_f(env, body);
            env.locals.pop();
            Ok(FType::arrow(a.clone(), b?))
        }
        FTermKind::App(f, u) => {
            let tf = infer_f(env, f)?;
            let tu = infer_f(env, u)?;
            match tf.as_ref() {
                FType::Arrow(a, b) => {
                    if a.alpha_eq(&tu) {
                        Ok(b.clone())
                    } else {
                        Err(FError::new(
                            FErrorKind::Mismatch,
                            format!("argument has type `{tu}` but the function expects `{a}`"),
                            u.span,
                        ))
                    }
                }
                _ => Err(FError::new(FErrorKind::NotAFunction, format!("applying a term of type `{tf}`"), f.span)),
            }
        }
        FTermKind::TyLam(x, body) => {
            if let Some((y, ty)) = env.locals.iter().find(|(_, ty)| ty.free_vars().contains(x)) {
                return Err(FError::new(
                    FErrorKind::SideCondition,
                    format!("cannot generalize over `{x}`: it is free in the type `{ty}` of `{y}`"),
                    t.span,
                ));
            }
            env.tyvars.push(x.clone());
            let b = infer_f(env, body);
            env.tyvars.pop();
            Ok(Rc::new(FType::Forall(x.clone(), b?)))
        }
        FTermKind::TyApp(f, b) => {
            env.well_formed(b, t)?;
            let tf = infer_f(env, f)?;
            match tf.as_ref() {
                FType::Forall(x, body) => Ok(subst(body, x, b)),
                _ => Err(FError::new(
                    FErrorKind::NotAForall,
                    format!("type application to a term of type `{tf}`"),
                    f.span,
                )),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::systemf::parser::{parse_f_term, parse_f_type};

    fn infer_closed(src: &str) -> Result<Rc<FType>, FError> {
        let t = parse_f_term(src).unwrap();
        infer_f(&mut FEnv::new(&[]), &t)
    }

    #[test]
    fn polymorphic_identity() {
        let ty = infer_closed("/\\X. \\(x : X). x").unwrap();
        assert!(ty.alpha_eq(&parse_f_type("forall Y. Y -> Y").unwrap()));
    }

    #[test]
    fn side_condition() {
        let t = parse_f_term("/\\Y. \\(x : Y). x").unwrap();
        let mut env = FEnv::new(&[]);
        env.locals.push(("y".into(), FType::var("Y")));
        let e = infer_f(&mut env, &t).unwrap_err();
        assert_eq!(e.kind, FErrorKind::SideCondition);
    }

    #[test]
    fn church_two() {
        let ty = infer_closed("/\\X. \\(f : X -> X). \\(x : X). f (f x)").unwrap();
        assert!(ty.alpha_eq(&parse_f_type("forall X. (X -> X) -> X -> X").unwrap()));
    }

    #[test]
    fn instantiation_avoids_capture() {
        // (forall Y. X -> Y)[Y/X] must not capture.
        let a = parse_f_type("forall Y. X -> Y").unwrap();
        let r = subst(&a, "X", &FType::var("Y"));
        assert!(r.alpha_eq(&parse_f_type("forall Z. Y -> Z").unwrap()));
        let ty = infer_closed("/\\Y. (/\\X. /\\Y. \\(x : X). \\(y : Y). x) [Y]").unwrap();
        assert!(ty.alpha_eq(&parse_f_type("forall A. forall B. A -> B -> A").unwrap()));
    }

    #[test]
    fn errors() {
        assert_eq!(infer_closed("\\(x : X). x").unwrap_err().kind, FErrorKind::UnboundTypeVar);
        assert_eq!(infer_closed("/\\X. \\(x : X). x x").unwrap_err().kind, FErrorKind::NotAFunction);
        assert_eq!(infer_closed("/\\X. \\(x : X). \\(f : X -> X). f f").unwrap_err().kind, FErrorKind::Mismatch);
        assert_eq!(infer_closed("/\\X. \\(x : X). x [X]").unwrap_err().kind, FErrorKind::NotAForall);
        assert_eq!(infer_closed("y").unwrap_err().kind, FErrorKind::UnboundVar);
    }
}
