//! Scope checking of core terms against an explicit list of binder names.

use itt_core::term::Term;

/// Does every variable of `t` refer to an enclosing binder or one of the
/// `outer` ones? Binders are tracked as a list of names rather than a count.
pub fn scoped(t: &Term, outer: &mut Vec<String>) -> bool {
    fn under(t: &Term, name: &str, cx: &mut Vec<String>) -> bool {
        cx.push(name.to_string());
        let ok = scoped(t, cx);
        cx.pop();
        ok
    }
    match t {
        Term::Var(i) => cx_get(outer, *i).is_some(),
        Term::Universe(_) | Term::Const(_) | Term::Meta(_) => true,
        Term::Pi(x, a, b) | Term::Sigma(x, a, b) => scoped(a, outer) && under(b, x, outer),
        Term::Lam(x, a, b) => a.as_ref().is_none_or(|a| scoped(a, outer)) && under(b, x, outer),
        Term::App(a, b) | Term::Pair(a, b) | Term::Refl(a, b) => scoped(a, outer) && scoped(b, outer),
        Term::Fst(a) | Term::Snd(a) => scoped(a, outer),
        Term::Id(a, b, c) => scoped(a, outer) && scoped(b, outer) && scoped(c, outer),
        Term::J(j) => [&j.ty, &j.motive, &j.refl_case, &j.lhs, &j.rhs, &j.path].into_iter().all(|t| scoped(t, outer)),
    }
}

fn cx_get(cx: &[String], i: usize) -> Option<&String> {
    cx.len().checked_sub(i + 1).and_then(|k| cx.get(k))
}
