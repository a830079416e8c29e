//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use proptest::test_runner::{Config, TestRunner};
use serde::Deserialize;

use itt_core::check::{Checker, Context};
use itt_core::driver::Session;
use itt_core::eval::Nbe;
use itt_core::level::Level;
use itt_core::signature::Signature;
use itt_core::term::Term;
use itt_core::value::Env;
use itt_testkit::lambda::{church, church_op, plus, times, Lam};
use itt_testkit::neutral::{arb_neutral, NEUTRAL_DEPTH};
use itt_testkit::stlc::core_to_lam;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn stdlib_dir() -> PathBuf {
    root().join("stdlib")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn ittc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ittc"))
        .current_dir(root())
        .env_remove("ITTC_STEP_BUDGET")
        .arg("--stdlib")
        .arg(stdlib_dir())
        .args(args)
        .output()
        .expect("ittc runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn text(o: &Output) -> String {
    format!("{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
}

#[derive(Deserialize)]
struct Manifest {
    file: Vec<FileEntry>,
}

#[derive(Deserialize)]
struct FileEntry {
    name: String,
    expected_postulates: Vec<String>,
    beta_facts: Vec<[String; 2]>,
    eta_theorems: Vec<String>,
}

fn manifest() -> Manifest {
    let src = std::fs::read_to_string(stdlib_dir().join("manifest.toml")).unwrap();
    toml::from_str(&src).unwrap()
}

#[derive(Deserialize)]
struct Line {
    name: String,
    status: String,
    #[serde(rename = "type")]
    ty: Option<String>,
}

/// json-lines report of checking the whole library, by declaration name.
fn stdlib_report() -> &'static BTreeMap<String, Line> {
    static REPORT: OnceLock<BTreeMap<String, Line>> = OnceLock::new();
    REPORT.get_or_init(|| {
        let out = ittc(&["--format", "json", "check", "stdlib"]);
        String::from_utf8_lossy(&out.stdout)
            .lines()
            .map(|l| serde_json::from_str::<Line>(l).unwrap())
            .map(|l| (l.name.clone(), l))
            .collect()
    })
}

fn load_stdlib() -> Session {
    let mut s = Session::default();
    s.load_dir(&stdlib_dir()).expect("stdlib loads");
    assert!(!s.has_errors(), "{:?}", s.first_error());
    s
}

fn stdlib_checks() -> Outcome {
    let t0 = Instant::now();
    let out = ittc(&["check", "stdlib"]);
    let elapsed = t0.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    if code(&out) != 0 {
        return Err(format!("exit {}: {}", code(&out), text(&out)));
    }
    if elapsed >= Duration::from_secs(60) {
        return Err(format!("took {elapsed:.1?}"));
    }
    let audit = stdout.lines().rfind(|l| l.starts_with("postulates:")).ok_or("no audit line")?;
    let got: BTreeSet<&str> = audit["postulates:".len()..].split(',').map(str::trim).collect();
    let want: BTreeSet<&str> = ["funext", "circle.a", "circle.b", "circle.c"].into();
    let m = manifest();
    let listed: BTreeSet<&str> = m.file.iter().flat_map(|f| f.expected_postulates.iter().map(String::as_str)).collect();
    if got != want || listed != want {
        return Err(format!("audit `{audit}`, manifest {listed:?}"));
    }
    let ok = stdout.lines().filter(|l| l.starts_with("ok")).count();
    Ok(format!("{ok} declarations, `{audit}`, {elapsed:.1?}"))
}

const REQUIRED_BETA: [(&str, &str, &str); 8] = [
    ("empty", "beta_rec0_lhs", "beta_rec0_rhs"),
    ("unit", "beta_rec1_lhs", "beta_rec1_rhs"),
    ("sum", "lhs_beta_inl", "rhs_beta_inl"),
    ("sum", "lhs_beta_inr", "rhs_beta_inr"),
    ("trunc0", "lhs_beta_trunc0", "rhs_beta_trunc0"),
    ("nat", "lhs_beta_zero", "rhs_beta_zero"),
    ("nat", "lhs_beta_succ", "rhs_beta_succ"),
    ("circle", "lhs_beta_base", "rhs_beta_base"),
];

fn conv_in(file: &str, a: &str, b: &str) -> Result<(), String> {
    let path = format!("stdlib/{file}.itt");
    let out = ittc(&["conv", &path, a, b]);
    match code(&out) {
        0 => Ok(()),
        c => Err(format!("{file}: {a} vs {b} exit {c}: {}", text(&out))),
    }
}

fn beta_suite() -> Outcome {
    let m = manifest();
    let listed: BTreeSet<(&str, &str, &str)> = m
        .file
        .iter()
        .flat_map(|f| f.beta_facts.iter().map(move |[a, b]| (f.name.as_str(), a.as_str(), b.as_str())))
        .collect();
    let mut passed = 0;
    for &(file, a, b) in &REQUIRED_BETA {
        if !listed.contains(&(file, a, b)) {
            return Err(format!("{file}: {a} vs {b} missing from the manifest"));
        }
        conv_in(file, a, b)?;
        passed += 1;
    }
    let extra: Vec<_> = listed.iter().filter(|t| !REQUIRED_BETA.contains(t)).collect();
    for &&(file, a, b) in &extra {
        conv_in(file, a, b)?;
    }
    Ok(format!("{passed}/8 required, {n}/{n} further manifest facts", n = extra.len()))
}

fn eta_theorems() -> Outcome {
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/eta_types.txt")).unwrap();
    let report = stdlib_report();
    let mut names = BTreeSet::new();
    for line in golden.lines().filter(|l| !l.trim().is_empty()) {
        let (name, ty) = line.split_once(" : ").ok_or_else(|| format!("bad golden line `{line}`"))?;
        let got = report.get(name).ok_or_else(|| format!("{name} not found"))?;
        if got.status != "ok" {
            return Err(format!("{name}: status {}", got.status));
        }
        if got.ty.as_deref() != Some(ty) {
            return Err(format!("{name}: printed `{}`, golden `{ty}`", got.ty.as_deref().unwrap_or("")));
        }
        names.insert(name.to_string());
    }
    let m = manifest();
    let listed: BTreeSet<String> = m.file.iter().flat_map(|f| f.eta_theorems.iter().cloned()).collect();
    if listed != names || names.len() != 7 {
        return Err(format!("manifest lists {listed:?}, golden has {names:?}"));
    }
    Ok(format!("{}/7 check with golden types", names.len()))
}

fn hlevels() -> Outcome {
    let expected = [
        ("sumNIsProp", "isProp (SumN A B alpha)"),
        ("limPIsProp", "isProp (LimP nu)"),
        ("sumIsSet", "isSet (Sum A B)"),
        ("natIsSet", "isSet Nat"),
    ];
    let report = stdlib_report();
    for (name, tail) in expected {
        let l = report.get(name).ok_or_else(|| format!("{name} not found"))?;
        let ty = l.ty.as_deref().unwrap_or("");
        if l.status != "ok" || !ty.ends_with(tail) {
            return Err(format!("{name}: {} `{ty}`", l.status));
        }
    }
    let coh = ["CohUnit", "CohComp", "Coh", "S1"];
    if let Some(bad) = coh.iter().find(|n| report.get(**n).is_none_or(|l| l.status != "ok")) {
        return Err(format!("{bad} does not check"));
    }
    Ok("4/4 declarations; circle coherence types check".into())
}

const PLUS_MAX: usize = 7;
const TIMES_MAX: usize = 4;

fn arithmetic() -> Outcome {
    let top = PLUS_MAX * 2;
    let mut src = String::from("import \"nat.itt\"\n\ndef n0 : Nat := zero\n");
    for k in 1..=top.max(TIMES_MAX * TIMES_MAX) {
        writeln!(src, "def n{k} : Nat := succ n{}", k - 1).unwrap();
        writeln!(src, "def c{k} : NatStar := fst n{k}").unwrap();
    }
    writeln!(src, "def c0 : NatStar := fst n0").unwrap();
    for m in 0..=PLUS_MAX {
        for n in 0..=PLUS_MAX {
            writeln!(src, "def p{m}_{n} : NatStar := fst (plus n{m} n{n})").unwrap();
        }
    }
    for m in 0..=TIMES_MAX {
        for n in 0..=TIMES_MAX {
            writeln!(src, "def t{m}_{n} : NatStar := fst (times n{m} n{n})").unwrap();
        }
    }
    let mut s = Session::default();
    s.load_source_at(&stdlib_dir().join("arith.itt"), &src).map_err(|e| format!("{e:?}"))?;
    if s.has_errors() {
        return Err(format!("{:?}", s.first_error()));
    }
    let nbe = Nbe::new(&s.sig);
    let konst = |n: &str| nbe.eval(&Env::new(), &Term::Const(n.into())).unwrap();
    let mut slowest = Duration::ZERO;
    let mut count = 0;
    let mut run = |prefix: &str, op: fn() -> Lam, max: usize| -> Result<(), String> {
        for m in 0..=max {
            for n in 0..=max {
                let k = church_op(op(), m, n).ok_or("oracle diverged")?;
                let name = format!("{prefix}{m}_{n}");
                let t0 = Instant::now();
                let equal = nbe.conv(0, &konst(&name), &konst(&format!("c{k}"))).map_err(|e| format!("{e:?}"))?;
                let took = t0.elapsed();
                slowest = slowest.max(took);
                if !equal || took >= Duration::from_secs(10) {
                    return Err(format!("{name} vs c{k}: equal={equal} in {took:.1?}"));
                }
                let nf = nbe.quote(0, &konst(&name)).map_err(|e| format!("{e:?}"))?;
                let Term::Lam(_, _, body) = nf.as_ref() else { return Err(format!("{name}: {nf:?}")) };
                if core_to_lam(body) != Some(church(k)) {
                    return Err(format!("{name}: normal form is not the numeral {k}"));
                }
                count += 1;
            }
        }
        Ok(())
    };
    run("p", plus, PLUS_MAX)?;
    run("t", times, TIMES_MAX)?;
    Ok(format!("{count} conversions agree with the Church evaluator, slowest {slowest:.1?}"))
}

fn json_error_kind(o: &Output) -> Option<String> {
    String::from_utf8_lossy(&o.stdout).lines().find_map(|l| {
        let v: serde_json::Value = serde_json::from_str(l).ok()?;
        Some(v.get("error")?.get("kind")?.as_str()?.to_string())
    })
}

fn negatives() -> Outcome {
    let cases = [
        ("bad/type_in_type.itt", "Mismatch"),
        ("bad/predicativity.itt", "Mismatch"),
        ("bad/sigma_large.itt", "Mismatch"),
        ("bad/unauthorized.itt", "PostulateForbidden"),
    ];
    for (file, kind) in cases {
        let path = data(file);
        let out = ittc(&["--format", "json", "check", path.to_str().unwrap()]);
        let got = json_error_kind(&out);
        if code(&out) != 1 || got.as_deref() != Some(kind) {
            return Err(format!("{file}: exit {}, kind {got:?}", code(&out)));
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let sysf = data("bad/forall_side.sysf");
    let target = dir.path().join("bad.itt");
    let out = ittc(&["translate-f", sysf.to_str().unwrap(), "-o", target.to_str().unwrap()]);
    if code(&out) != 1 || !text(&out).contains("SideCondition") || target.exists() {
        return Err(format!("forall_side.sysf: exit {}: {}", code(&out), text(&out)));
    }
    Ok("5/5 rejected with exit 1 and the expected kinds".into())
}

fn system_f() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let church = data("church.sysf");
    let mut types = BTreeMap::new();
    for mode in ["set", "u"] {
        let target = dir.path().join(format!("church_{mode}.itt"));
        let out = ittc(&["translate-f", church.to_str().unwrap(), "--mode", mode, "-o", target.to_str().unwrap()]);
        if code(&out) != 0 {
            return Err(format!("translate --mode {mode}: exit {}: {}", code(&out), text(&out)));
        }
        let out = ittc(&["--format", "json", "check", target.to_str().unwrap()]);
        if code(&out) != 0 {
            return Err(format!("re-check of --mode {mode}: exit {}: {}", code(&out), text(&out)));
        }
        for l in String::from_utf8_lossy(&out.stdout).lines() {
            let l: Line = serde_json::from_str(l).map_err(|e| e.to_string())?;
            types.insert((mode, l.name), l.ty.unwrap_or_default());
        }
    }
    let nat = &types[&("set", "zero".to_string())];
    let sum = &types[&("set", "inl".to_string())];
    let cmp = dir.path().join("cmp.itt");
    std::fs::write(
        &cmp,
        format!(
            "import \"nat.itt\"\nimport \"sum.itt\"\n\ndef natF : U := {nat}\ndef sumF : U := {sum}\n\
             def sumRef : U := (A B : Set) -> El A -> SumStar A B\n"
        ),
    )
    .unwrap();
    for (a, b) in [("natF", "NatStar"), ("sumF", "sumRef")] {
        let out = ittc(&["conv", cmp.to_str().unwrap(), a, b]);
        if code(&out) != 0 {
            return Err(format!("{a} vs {b}: exit {}: {}", code(&out), text(&out)));
        }
    }
    let decls = types.keys().filter(|(m, _)| *m == "u").count();
    Ok(format!("{decls} F declarations re-check in set and u modes; nat and sum types conv to the stdlib"))
}

fn kernel_properties() -> Outcome {
    let s = load_stdlib();
    let nbe = Nbe::new(&s.sig);
    let checker = Checker::new(&s.sig);
    let err = |e: &dyn std::fmt::Debug| format!("{e:?}");
    let mut defs = 0;
    let mut terms = 0;
    for d in s.sig.iter() {
        let mut reflexive = |t: &Term| -> Result<(), String> {
            let a = nbe.eval(&Env::new(), t).map_err(|e| err(&e))?;
            let b = nbe.eval(&Env::new(), t).map_err(|e| err(&e))?;
            terms += 1;
            nbe.conv(0, &a, &b).map_err(|e| err(&e))?.then_some(()).ok_or(format!("{} not reflexive", d.name))
        };
        reflexive(&d.ty)?;
        let Some(body) = d.body() else { continue };
        reflexive(body)?;
        let n1 = nbe.normalize(body).map_err(|e| err(&e))?;
        let n2 = nbe.normalize(&n1).map_err(|e| err(&e))?;
        if !n1.alpha_eq(&n2) {
            return Err(format!("normalization of {} is not idempotent", d.name));
        }
        checker
            .check(&mut Context::new(), &n1, &d.ty_value)
            .map_err(|e| format!("normal form of {} does not check: {e:?}", d.name))?;
        defs += 1;
    }
    let empty = Signature::new();
    let nbe0 = Nbe::new(&empty);
    let mut runner = TestRunner::new(Config { cases: 100, failure_persistence: None, ..Config::default() });
    runner
        .run(&arb_neutral(), |n| {
            let env = Env::identity(NEUTRAL_DEPTH);
            let v = nbe0.eval(&env, &n).unwrap();
            let expanded = Term::lam("x", Term::app(n.shift(1, 0), Term::var(0)));
            let ve = nbe0.eval(&env, &expanded).unwrap();
            let other = nbe0.eval(&env, &Term::app(n.clone(), Term::universe(Level::Pred(0)))).unwrap();
            proptest::prop_assert!(nbe0.conv(NEUTRAL_DEPTH, &ve, &v).unwrap());
            proptest::prop_assert!(!nbe0.conv(NEUTRAL_DEPTH, &other, &v).unwrap());
            Ok(())
        })
        .map_err(|e| format!("eta: {e}"))?;
    Ok(format!(
        "{defs} definitions idempotent and type-preserving, {terms} terms reflexive, eta on 100 neutrals"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("stdlib checks with the expected audit", stdlib_checks),
        ("definitional beta suite", beta_suite),
        ("propositional eta theorems", eta_theorems),
        ("h-level facts", hlevels),
        ("arithmetic against Church oracle", arithmetic),
        ("negative suite", negatives),
        ("System F round trip", system_f),
        ("kernel properties", kernel_properties),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let took = t0.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} [{took:.1?}]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {}. {name}: {detail} [{took:.1?}]", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
