//! Random neutral terms for conversion tests.

use std::rc::Rc;

use proptest::prelude::*;

use itt_core::level::Level;
use itt_core::term::Term;

/// Number of free variables the generated neutrals may mention.
pub const NEUTRAL_DEPTH: usize = 3;

/// Neutral terms over `NEUTRAL_DEPTH` free variables: a variable under
/// applications and projections.
pub fn arb_neutral() -> impl Strategy<Value = Rc<Term>> {
    let arg = prop_oneof![
        (0..NEUTRAL_DEPTH).prop_map(Term::var),
        (0..NEUTRAL_DEPTH + 1).prop_map(|i| Term::lam("y", Term::var(i))),
        Just(Term::universe(Level::Imp)),
    ];
    (0..NEUTRAL_DEPTH).prop_map(Term::var).prop_recursive(4, 16, 1, move |inner| {
        prop_oneof![
            (inner.clone(), arg.clone()).prop_map(|(n, a)| Term::app(n, a)),
            inner.clone().prop_map(Term::fst),
            inner.prop_map(Term::snd),
        ]
    })
}
