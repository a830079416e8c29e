//! `ittc`: check `.itt` files, compare and normalize definitions, and
//! translate System F programs.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use itt_core::driver::{LoadError, Session};
use itt_core::eval::{EvalError, Nbe};
use itt_core::signature::PostulatePolicy;
use itt_core::surface::print::render_term;
use itt_core::systemf::{self, Mode};
use itt_core::term::Term;
use itt_core::value::Env;

const EXIT_TYPE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_USAGE: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "ittc", version, about = "Proof checker for dependent type theory with an impredicative universe")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Extra postulates to allow, by audit name (`module.name`); `*` allows all.
    #[arg(long, global = true, value_delimiter = ',')]
    allow_postulates: Vec<String>,

    /// Abort evaluation after this many steps (also ITTC_STEP_BUDGET).
    #[arg(long, global = true)]
    step_budget: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Directory searched for imports (default: ITTC_STDLIB or the bundled stdlib).
    #[arg(long, global = true)]
    stdlib: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check files or directories and print a postulate audit.
    Check { paths: Vec<PathBuf> },
    /// Decide definitional equality of two definitions.
    Conv { path: PathBuf, a: String, b: String },
    /// Print the normal form of a definition.
    Normalize { path: PathBuf, name: String },
    /// Translate a System F file into an .itt file and check the result.
    TranslateF {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = CliMode::U)]
        mode: CliMode,
        /// Output file (default: sibling file with the .itt extension).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Summarize the declarations in files or directories.
    Stats { paths: Vec<PathBuf> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CliMode {
    U,
    Prop,
    Set,
    Onetype,
}

impl From<CliMode> for Mode {
    fn from(m: CliMode) -> Mode {
        match m {
            CliMode::U => Mode::FullU,
            CliMode::Prop => Mode::Prop,
            CliMode::Set => Mode::Set,
            CliMode::Onetype => Mode::OneType,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(code) => ExitCode::from(code),
    }
}

fn budget(cli: &Cli) -> Result<Option<u64>, u8> {
    if cli.step_budget.is_some() {
        return Ok(cli.step_budget);
    }
    match std::env::var("ITTC_STEP_BUDGET") {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| {
            eprintln!("error: ITTC_STEP_BUDGET must be a natural number, got {s:?}");
            EXIT_USAGE
        }),
        Err(_) => Ok(None),
    }
}

fn session(cli: &Cli) -> Result<Session, u8> {
    let policy = if cli.allow_postulates.iter().any(|p| p == "*") {
        PostulatePolicy::AllowAll
    } else {
        let mut names: Vec<String> = match PostulatePolicy::shipped() {
            PostulatePolicy::Allowlist(s) => s.into_iter().collect(),
            PostulatePolicy::AllowAll => Vec::new(),
        };
        names.extend(cli.allow_postulates.iter().cloned());
        PostulatePolicy::allow(names)
    };
    let mut s = Session::new(policy).with_budget(budget(cli)?);
    if let Some(dir) = &cli.stdlib {
        s = s.with_stdlib_dir(dir);
    }
    Ok(s)
}

fn load_error(e: &LoadError) -> u8 {
    eprintln!("error: {e}");
    match e {
        LoadError::Parse { .. } => EXIT_PARSE,
        LoadError::Io { .. } => EXIT_USAGE,
        LoadError::Import { .. } => EXIT_TYPE,
    }
}

fn run(cli: &Cli) -> Result<ExitCode, u8> {
    match &cli.command {
        Command::Check { paths } => cmd_check(cli, paths),
        Command::Conv { path, a, b } => cmd_conv(cli, path, a, b),
        Command::Normalize { path, name } => cmd_normalize(cli, path, name),
        Command::TranslateF { path, mode, output } => cmd_translate(cli, path, (*mode).into(), output.as_deref()),
        Command::Stats { paths } => cmd_stats(cli, paths),
    }
}

fn require_paths(paths: &[PathBuf]) -> Result<(), u8> {
    if paths.is_empty() {
        eprintln!("error: no input paths");
        return Err(EXIT_USAGE);
    }
    if let Some(p) = paths.iter().find(|p| !p.exists()) {
        eprintln!("error: {}: no such file or directory", p.display());
        return Err(EXIT_USAGE);
    }
    Ok(())
}

/// Load `paths`, print per-declaration status, and return the session.
fn load_all(cli: &Cli, paths: &[PathBuf], print: bool) -> Result<Session, u8> {
    require_paths(paths)?;
    let mut s = session(cli)?;
    let mut failure = None;
    for p in paths {
        if let Err(e) = s.load_path(p) {
            failure = Some(load_error(&e));
            break;
        }
    }
    if print {
        print_reports(cli, &s);
    }
    if let Some(code) = failure {
        return Err(code);
    }
    if s.budget_exhausted() {
        if !print {
            print_reports(cli, &s);
        }
        return Err(EXIT_BUDGET);
    }
    if s.has_errors() {
        if !print {
            print_reports(cli, &s);
        }
        return Err(EXIT_TYPE);
    }
    Ok(s)
}

fn print_reports(cli: &Cli, s: &Session) {
    for r in &s.reports {
        match cli.format {
            Format::Json => {
                let mut obj = json!({
                    "name": r.name,
                    "status": if r.is_ok() { "ok" } else { "error" },
                    "type": r.ty,
                });
                if let Some(e) = r.error() {
                    obj["error"] = json!({
                        "kind": e.kind.to_string(),
                        "message": e.message,
                        "location": s.error_location(r).to_string(),
                    });
                }
                println!("{obj}");
            }
            Format::Human => match r.error() {
                None => println!("ok    {}.{}", r.module, r.name),
                Some(e) => {
                    println!("FAIL  {}.{}", r.module, r.name);
                    eprintln!("{}: {}: {}", s.error_location(r), e.kind, e.message);
                }
            },
        }
    }
}

fn print_audit(cli: &Cli, s: &Session) {
    let line = format!("postulates: {}", s.sig.postulates().join(", "));
    match cli.format {
        Format::Human => println!("{line}"),
        Format::Json => eprintln!("{line}"),
    }
}

fn cmd_check(cli: &Cli, paths: &[PathBuf]) -> Result<ExitCode, u8> {
    let s = load_all(cli, paths, true)?;
    print_audit(cli, &s);
    Ok(ExitCode::SUCCESS)
}

fn lookup(s: &Session, name: &str) -> Result<(), u8> {
    if s.sig.contains(name) {
        Ok(())
    } else {
        eprintln!("error: `{name}` is not defined");
        Err(EXIT_USAGE)
    }
}

fn eval_error(e: EvalError, what: &str, steps: u64) -> u8 {
    match e {
        EvalError::BudgetExhausted(b) => {
            eprintln!("error: step budget of {b} exhausted after {steps} steps while evaluating {what}");
            EXIT_BUDGET
        }
        other => {
            eprintln!("error: {other}");
            EXIT_TYPE
        }
    }
}

fn cmd_conv(cli: &Cli, path: &Path, a: &str, b: &str) -> Result<ExitCode, u8> {
    let s = load_all(cli, &[path.to_path_buf()], false)?;
    lookup(&s, a)?;
    lookup(&s, b)?;
    let nbe = Nbe::new(&s.sig).with_budget(s.budget);
    let env = Env::new();
    let what = format!("`{a}` and `{b}`");
    let result = (|| {
        let va = nbe.eval(&env, &Term::Const(a.into()))?;
        let vb = nbe.eval(&env, &Term::Const(b.into()))?;
        if nbe.conv(0, &va, &vb)? {
            return Ok(None);
        }
        Ok(Some((nbe.quote(0, &va)?, nbe.quote(0, &vb)?)))
    })();
    match result.map_err(|e| eval_error(e, &what, nbe.steps()))? {
        None => {
            println!("{a} == {b}");
            Ok(ExitCode::SUCCESS)
        }
        Some((na, nb)) => {
            println!("{a} =/= {b}");
            println!("  {a} ~> {}", render_term(&na, &[]));
            println!("  {b} ~> {}", render_term(&nb, &[]));
            Ok(ExitCode::from(EXIT_TYPE))
        }
    }
}

fn cmd_normalize(cli: &Cli, path: &Path, name: &str) -> Result<ExitCode, u8> {
    let s = load_all(cli, &[path.to_path_buf()], false)?;
    lookup(&s, name)?;
    let nbe = Nbe::new(&s.sig).with_budget(s.budget);
    let nf = nbe.normalize(&Term::Const(name.into())).map_err(|e| eval_error(e, &format!("`{name}`"), nbe.steps()))?;
    match cli.format {
        Format::Human => println!("{}", render_term(&nf, &[])),
        Format::Json => println!("{}", json!({ "name": name, "normal_form": render_term(&nf, &[]) })),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_translate(cli: &Cli, path: &Path, mode: Mode, output: Option<&Path>) -> Result<ExitCode, u8> {
    require_paths(&[path.to_path_buf()])?;
    let src = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_USAGE
    })?;
    let text = match systemf::translate_source(&src, mode) {
        Ok(t) => t,
        Err(e) => {
            let (line, col) = itt_core::span::line_col(&src, e.span().start);
            eprintln!("{}:{line}:{col}: {e}", path.display());
            return Err(if e.is_parse() { EXIT_PARSE } else { EXIT_TYPE });
        }
    };
    let out = output.map(Path::to_path_buf).unwrap_or_else(|| path.with_extension("itt"));
    std::fs::write(&out, &text).map_err(|e| {
        eprintln!("error: {}: {e}", out.display());
        EXIT_USAGE
    })?;
    let s = load_all(cli, std::slice::from_ref(&out), false)?;
    if cli.format == Format::Human {
        println!("wrote {} ({} declarations checked)", out.display(), s.reports.len());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(cli: &Cli, paths: &[PathBuf]) -> Result<ExitCode, u8> {
    let s = load_all(cli, paths, false)?;
    let mut modules: Vec<String> = Vec::new();
    for d in s.sig.iter() {
        if !modules.contains(&d.provenance.module) {
            modules.push(d.provenance.module.clone());
        }
    }
    for m in &modules {
        let decls: Vec<_> = s.sig.iter().filter(|d| &d.provenance.module == m).collect();
        let postulates = decls.iter().filter(|d| d.is_postulate()).count();
        let size: usize = decls.iter().map(|d| d.ty.size() + d.body().map_or(0, |b| b.size())).sum();
        match cli.format {
            Format::Human => println!(
                "{m:<12} {:>4} definitions {:>3} postulates {:>7} term nodes",
                decls.len() - postulates,
                postulates,
                size
            ),
            Format::Json => println!(
                "{}",
                json!({"module": m, "definitions": decls.len() - postulates, "postulates": postulates, "size": size})
            ),
        }
    }
    print_audit(cli, &s);
    Ok(ExitCode::SUCCESS)
}
