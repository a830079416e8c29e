//! Kernel properties over every declaration of the shipped library.

use std::time::Instant;

use itt_core::check::{Checker, Context};
use itt_core::driver::{default_stdlib_dir, Session};
use itt_core::eval::Nbe;
use itt_core::surface::parse_file;
use itt_core::surface::print::print_decl;
use itt_core::value::Env;

fn stdlib() -> Session {
    let mut s = Session::default();
    s.load_dir(&default_stdlib_dir()).expect("stdlib loads");
    assert!(!s.has_errors(), "stdlib has errors: {:?}", s.first_error());
    s
}

#[test]
fn normalization_is_idempotent_and_type_preserving() {
    let s = stdlib();
    let nbe = Nbe::new(&s.sig);
    let checker = Checker::new(&s.sig);
    let t0 = Instant::now();
    for d in s.sig.iter() {
        let Some(body) = d.body() else { continue };
        let n1 = nbe.normalize(body).unwrap();
        let n2 = nbe.normalize(&n1).unwrap();
        assert!(n1.alpha_eq(&n2), "normalize not idempotent on {}", d.name);
        checker
            .check(&mut Context::new(), &n1, &d.ty_value)
            .unwrap_or_else(|e| panic!("normal form of {} does not check: {e:?}", d.name));
    }
    eprintln!("normalized stdlib in {:?}", t0.elapsed());
}

#[test]
fn conversion_is_reflexive_on_stdlib() {
    let s = stdlib();
    let nbe = Nbe::new(&s.sig);
    for d in s.sig.iter() {
        let a = nbe.eval(&Env::new(), &d.ty).unwrap();
        let b = nbe.eval(&Env::new(), &d.ty).unwrap();
        assert!(nbe.conv(0, &a, &b).unwrap(), "type of {}", d.name);
        if let Some(body) = d.body() {
            let a = nbe.eval(&Env::new(), body).unwrap();
            let b = nbe.eval(&Env::new(), body).unwrap();
            assert!(nbe.conv(0, &a, &b).unwrap(), "body of {}", d.name);
        }
    }
}

#[test]
fn stdlib_declarations_round_trip_through_printer() {
    for entry in std::fs::read_dir(default_stdlib_dir()).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_none_or(|e| e != "itt") {
            continue;
        }
        let src = std::fs::read_to_string(&p).unwrap();
        for d in parse_file(&src).unwrap() {
            let printed = print_decl(&d);
            let again = parse_file(&printed).unwrap_or_else(|e| panic!("{}: reparse failed: {e:?}\n{printed}", p.display()));
            assert_eq!(again.len(), 1);
            assert_eq!(print_decl(&again[0]), printed, "{}", p.display());
        }
    }
}
