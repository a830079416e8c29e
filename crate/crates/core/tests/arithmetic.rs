//! Numerals of the refined encoding against untyped Church arithmetic.

use std::fmt::Write;

use itt_core::driver::{default_stdlib_dir, Session};
use itt_core::eval::Nbe;
use itt_core::term::Term;
use itt_core::value::Env;
use itt_testkit::lambda::{church, church_op, plus, times};
use itt_testkit::stlc::core_to_lam;

const MAX: usize = 7;

fn session() -> Session {
    let mut src = String::from("import \"nat.itt\"\n\ndef n0 : Nat := zero\n");
    for k in 1..=MAX * MAX {
        writeln!(src, "def n{k} : Nat := succ n{}", k - 1).unwrap();
    }
    for k in 0..=MAX * MAX {
        writeln!(src, "def c{k} : NatStar := fst n{k}").unwrap();
    }
    for m in 0..=MAX {
        for n in 0..=MAX {
            writeln!(src, "def p{m}_{n} : NatStar := fst (plus n{m} n{n})").unwrap();
            writeln!(src, "def t{m}_{n} : NatStar := fst (times n{m} n{n})").unwrap();
        }
    }
    let mut s = Session::default();
    s.load_source_at(&default_stdlib_dir().join("arith.itt"), &src).unwrap();
    assert!(!s.has_errors(), "{:?}", s.first_error());
    s
}

fn check_op(s: &Session, prefix: &str, op: fn() -> itt_testkit::lambda::Lam) {
    let nbe = Nbe::new(&s.sig);
    for m in 0..=MAX {
        for n in 0..=MAX {
            let k = church_op(op(), m, n).expect("oracle terminates");
            let name = format!("{prefix}{m}_{n}");
            let lhs = nbe.eval(&Env::new(), &Term::Const(name.as_str().into())).unwrap();
            let rhs = nbe.eval(&Env::new(), &Term::Const(format!("c{k}").as_str().into())).unwrap();
            assert!(nbe.conv(0, &lhs, &rhs).unwrap(), "{name} is not c{k}");
            let nf = nbe.quote(0, &lhs).unwrap();
            let Term::Lam(_, _, body) = nf.as_ref() else { panic!("{name}: {nf:?}") };
            assert_eq!(core_to_lam(body), Some(church(k)), "{name}");
        }
    }
}

#[test]
fn addition_and_multiplication_agree_with_church_oracle() {
    let s = session();
    check_op(&s, "p", plus);
    check_op(&s, "t", times);
}
