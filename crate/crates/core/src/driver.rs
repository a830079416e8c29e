//! Loading `.itt` files: import resolution, elaboration, kernel checking and
//! per-declaration reports.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::check::{check_decl_with, DeclInput, ErrorKind, TypeError};
use crate::level::MAX_LEVEL;
use crate::signature::{PostulatePolicy, Provenance, Signature};
use crate::span::{line_col, Span};
use crate::surface::elab::elaborate_definition;
use crate::surface::print::render_term;
use crate::surface::syntax::Decl;
use crate::surface::{parse_file, ParseError};

/// Directory searched for imports not found next to the importing file.
pub fn default_stdlib_dir() -> PathBuf {
    match std::env::var_os("ITTC_STDLIB") {
        Some(p) => PathBuf::from(p),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../stdlib"),
    }
}

#[derive(Debug, Clone)]
pub enum DeclStatus {
    Ok,
    Failed(TypeError),
}

#[derive(Debug, Clone)]
pub struct DeclReport {
    pub name: String,
    pub module: String,
    pub file: PathBuf,
    pub line: usize,
    pub col: usize,
    pub status: DeclStatus,
    /// Printed type, when it could be elaborated.
    pub ty: Option<String>,
}

impl DeclReport {
    pub fn is_ok(&self) -> bool {
        matches!(self.status, DeclStatus::Ok)
    }

    pub fn error(&self) -> Option<&TypeError> {
        match &self.status {
            DeclStatus::Ok => None,
            DeclStatus::Failed(e) => Some(e),
        }
    }
}

/// Position of a span start inside a file, for messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Location {
    pub file: PathBuf,
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Location {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.file.display(), self.line, self.col)
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{at}: parse error: {error}")]
    Parse { at: Location, error: ParseError },
    #[error("{at}: {message}")]
    Import { at: Location, message: String },
}

pub struct Session {
    pub sig: Signature,
    pub policy: PostulatePolicy,
    pub budget: Option<u64>,
    pub max_level: u8,
    pub stdlib_dir: PathBuf,
    pub reports: Vec<DeclReport>,
    loaded: HashSet<PathBuf>,
    loading: Vec<PathBuf>,
}

impl Default for Session {
    fn default() -> Session {
        Session::new(PostulatePolicy::shipped())
    }
}

impl Session {
    pub fn new(policy: PostulatePolicy) -> Session {
        Session {
            sig: Signature::new(),
            policy,
            budget: None,
            max_level: MAX_LEVEL,
            stdlib_dir: default_stdlib_dir(),
            reports: Vec::new(),
            loaded: HashSet::new(),
            loading: Vec::new(),
        }
    }

    pub fn with_budget(mut self, budget: Option<u64>) -> Session {
        self.budget = budget;
        self
    }

    pub fn with_stdlib_dir(mut self, dir: impl Into<PathBuf>) -> Session {
        self.stdlib_dir = dir.into();
        self
    }

    pub fn has_errors(&self) -> bool {
        self.reports.iter().any(|r| !r.is_ok())
    }

    pub fn first_error(&self) -> Option<&DeclReport> {
        self.reports.iter().find(|r| !r.is_ok())
    }

    /// Load a file and, transitively, its imports. Each file is loaded once.
    /// Type errors are recorded in [`Session::reports`]; only I/O, parse and
    /// import errors abort.
    pub fn load_file(&mut self, path: &Path) -> Result<(), LoadError> {
        let canon = fs::canonicalize(path)
            .map_err(|e| LoadError::Io { path: path.display().to_string(), source: e })?;
        if self.loaded.contains(&canon) {
            return Ok(());
        }
        let src = fs::read_to_string(&canon)
            .map_err(|e| LoadError::Io { path: path.display().to_string(), source: e })?;
        self.loading.push(canon.clone());
        let r = self.load_source_at(path, &src);
        self.loading.pop();
        self.loaded.insert(canon);
        r
    }

    /// Load every `.itt` file under `dir`, in path order.
    pub fn load_dir(&mut self, dir: &Path) -> Result<(), LoadError> {
        let mut files = Vec::new();
        collect_itt(dir, &mut files).map_err(|e| LoadError::Io { path: dir.display().to_string(), source: e })?;
        files.sort();
        for f in files {
            self.load_file(&f)?;
        }
        Ok(())
    }

    /// Load a file or a directory.
    pub fn load_path(&mut self, path: &Path) -> Result<(), LoadError> {
        if path.is_dir() {
            self.load_dir(path)
        } else {
            self.load_file(path)
        }
    }

    /// Check source text as if it were the file `path`.
    pub fn load_source_at(&mut self, path: &Path, src: &str) -> Result<(), LoadError> {
        let module = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let locate = |span: Span| {
            let (line, col) = line_col(src, span.start);
            Location { file: path.to_path_buf(), line, col }
        };
        let decls = parse_file(src).map_err(|error| LoadError::Parse { at: locate(error.span), error })?;
        for decl in &decls {
            match decl {
                Decl::Import { path: target, span } => {
                    let resolved = self.resolve_import(path, target).ok_or_else(|| LoadError::Import {
                        at: locate(*span),
                        message: format!("cannot find import \"{target}\""),
                    })?;
                    let canon = fs::canonicalize(&resolved).unwrap_or(resolved.clone());
                    if self.loading.contains(&canon) {
                        return Err(LoadError::Import { at: locate(*span), message: format!("import cycle through \"{target}\"") });
                    }
                    self.load_file(&resolved)?;
                }
                Decl::Pragma { .. } => {}
                Decl::Def { name, ty, span, .. } | Decl::Postulate { name, ty, span } => {
                    let body = match decl {
                        Decl::Def { body, .. } => Some(body.as_ref()),
                        _ => None,
                    };
                    let (line, col) = line_col(src, span.start);
                    let provenance = Provenance { module: module.clone(), file: path.display().to_string(), line };
                    let mut printed = None;
                    let result = elaborate_definition(&self.sig, ty, body, self.max_level, self.budget).and_then(|(t, b)| {
                        printed = Some(render_term(&t, &[]));
                        let input = DeclInput { name: name.clone(), ty: t, body: b, provenance };
                        check_decl_with(&mut self.sig, input, &self.policy, self.max_level, self.budget)
                    });
                    let status = match result {
                        Ok(()) => DeclStatus::Ok,
                        Err(e) => DeclStatus::Failed(e.at(*span)),
                    };
                    self.reports.push(DeclReport {
                        name: name.to_string(),
                        module: module.clone(),
                        file: path.to_path_buf(),
                        line,
                        col,
                        status,
                        ty: printed,
                    });
                }
            }
        }
        Ok(())
    }

    fn resolve_import(&self, from: &Path, target: &str) -> Option<PathBuf> {
        let local = from.parent().map(|d| d.join(target)).unwrap_or_else(|| PathBuf::from(target));
        if local.is_file() {
            return Some(local);
        }
        let lib = self.stdlib_dir.join(target);
        lib.is_file().then_some(lib)
    }

    /// Location of an error inside the report's file.
    pub fn error_location(&self, report: &DeclReport) -> Location {
        let (line, col) = match report.error() {
            Some(e) if e.span != Span::default() => fs::read_to_string(&report.file)
                .map(|src| line_col(&src, e.span.start))
                .unwrap_or((report.line, report.col)),
            _ => (report.line, report.col),
        };
        Location { file: report.file.clone(), line, col }
    }

    /// Did checking stop because of the step budget?
    pub fn budget_exhausted(&self) -> bool {
        self.reports.iter().any(|r| r.error().is_some_and(|e| e.kind == ErrorKind::BudgetExhausted))
    }
}

fn collect_itt(dir: &Path, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    for entry in fs::read_dir(dir)? {
        let p = entry?.path();
        if p.is_dir() {
            collect_itt(&p, out)?;
        } else if p.extension().is_some_and(|e| e == "itt") {
            out.push(p);
        }
    }
    Ok(())
}
