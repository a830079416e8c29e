//! Kernel behaviour compared against the reference implementations in
//! `itt-testkit`.

use std::rc::Rc;

use proptest::prelude::*;

use itt_core::check::{check_decl, Checker, Context, DeclInput};
use itt_core::eval::Nbe;
use itt_core::level::Level;
use itt_core::signature::{PostulatePolicy, Signature};
use itt_core::systemf::syntax::FType;
use itt_core::systemf::subst;
use itt_core::term::{JArgs, Term};
use itt_core::value::Env;
use itt_testkit::neutral::{arb_neutral, NEUTRAL_DEPTH};
use itt_testkit::renaming::subst_by_renaming;
use itt_testkit::scoping::scoped;
use itt_testkit::stlc::{ann_decl, arb_open, close_over_base, core_to_lam};

fn strip_lams(mut t: &Rc<Term>, n: usize) -> &Rc<Term> {
    for _ in 0..n {
        match t.as_ref() {
            Term::Lam(_, _, b) => t = b,
            other => panic!("expected a lambda, got {other:?}"),
        }
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn stlc_normal_forms_match_erasure((tm, ty) in arb_open()) {
        let mut sig = Signature::new();
        let (aty, abody) = ann_decl();
        check_decl(&mut sig, DeclInput::definition("ann", aty, abody), &PostulatePolicy::deny_all()).unwrap();
        let checker = Checker::new(&sig);
        let (cty, ctm) = close_over_base(&tm, &ty);
        let vty = checker.eval(&Context::new(), &cty).unwrap();
        checker.check(&mut Context::new(), &ctm, &vty).unwrap();
        let expected = tm.erase().normalize(200_000);
        prop_assume!(expected.is_some());
        let nf = Nbe::new(&sig).normalize(&ctm).unwrap();
        let got = core_to_lam(strip_lams(&nf, 2)).expect("pure lambda term");
        prop_assert_eq!(got, expected.unwrap());
    }
}

fn arb_term() -> impl Strategy<Value = Rc<Term>> {
    let leaf = prop_oneof![
        (0usize..4).prop_map(Term::var),
        Just(Term::universe(Level::Imp)),
        Just(Term::constant("c")),
    ];
    leaf.prop_recursive(5, 40, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::pi("x", a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::sigma("x", a, b)),
            inner.clone().prop_map(|b| Term::lam("x", b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::app(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::pair(a, b)),
            inner.clone().prop_map(Term::fst),
            (inner.clone(), inner.clone(), inner.clone()).prop_map(|(a, b, c)| Term::id(a, b, c)),
            (inner.clone(), inner.clone(), inner.clone()).prop_map(|(a, b, c)| Rc::new(Term::J(JArgs {
                ty: a.clone(),
                motive: b.clone(),
                refl_case: c.clone(),
                lhs: a,
                rhs: b,
                path: c,
            }))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn well_scoped_agrees_with_named_scoper(t in arb_term(), depth in 0usize..3) {
        let mut outer: Vec<String> = (0..depth).map(|i| format!("v{i}")).collect();
        prop_assert_eq!(t.well_scoped(depth), scoped(&t, &mut outer));
    }
}

fn arb_ftype() -> impl Strategy<Value = Rc<FType>> {
    let names = prop_oneof![Just("X"), Just("Y"), Just("Z")];
    names.clone().prop_map(FType::var).prop_recursive(5, 32, 2, move |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| FType::arrow(a, b)),
            (names.clone(), inner).prop_map(|(x, b)| FType::forall(x, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn f_substitution_matches_renaming(a in arb_ftype(), b in arb_ftype(), x in prop_oneof![Just("X"), Just("Y"), Just("Z")]) {
        let fast = subst(&a, x, &b);
        let slow = subst_by_renaming(&a, x, &b);
        prop_assert!(fast.alpha_eq(&slow), "{} vs {}", fast, slow);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn eta_laws_hold_on_neutrals(n in arb_neutral()) {
        let sig = Signature::new();
        let nbe = Nbe::new(&sig);
        let env = Env::identity(NEUTRAL_DEPTH);
        let v = nbe.eval(&env, &n).unwrap();
        let expanded = Term::lam("x", Term::app(n.shift(1, 0), Term::var(0)));
        let ve = nbe.eval(&env, &expanded).unwrap();
        prop_assert!(nbe.conv(NEUTRAL_DEPTH, &ve, &v).unwrap());
        prop_assert!(nbe.conv(NEUTRAL_DEPTH, &v, &ve).unwrap());
        let paired = Term::pair(Term::fst(n.clone()), Term::snd(n.clone()));
        let vp = nbe.eval(&env, &paired).unwrap();
        prop_assert!(nbe.conv(NEUTRAL_DEPTH, &vp, &v).unwrap());
        let other = Term::app(n.clone(), Term::universe(Level::Pred(0)));
        let vo = nbe.eval(&env, &other).unwrap();
        prop_assert!(!nbe.conv(NEUTRAL_DEPTH, &vo, &v).unwrap());
    }
}
