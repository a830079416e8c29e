//! Global declarations.

use std::collections::BTreeSet;
use std::rc::Rc;

use indexmap::IndexMap;

use crate::term::{Name, Term};
use crate::value::Val;

/// Where a declaration came from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Provenance {
    /// Module name (file stem). Empty for declarations built in code.
    pub module: String,
    pub file: String,
    pub line: usize,
}

/// Modules whose postulates are reported without a module prefix.
pub const ROOT_MODULES: &[&str] = &["", "prelude"];

impl Provenance {
    pub fn qualify(&self, name: &str) -> String {
        if ROOT_MODULES.contains(&self.module.as_str()) {
            name.to_string()
        } else {
            format!("{}.{}", self.module, name)
        }
    }
}

#[derive(Debug, Clone)]
pub enum DeclKind {
    Definition { body: Rc<Term>, value: Val },
    Postulate,
}

#[derive(Debug, Clone)]
pub struct Decl {
    pub name: Name,
    pub ty: Rc<Term>,
    pub ty_value: Val,
    pub kind: DeclKind,
    pub provenance: Provenance,
}

impl Decl {
    pub fn is_postulate(&self) -> bool {
        matches!(self.kind, DeclKind::Postulate)
    }

    pub fn body(&self) -> Option<&Rc<Term>> {
        match &self.kind {
            DeclKind::Definition { body, .. } => Some(body),
            DeclKind::Postulate => None,
        }
    }

    /// Name as reported by the postulate audit.
    pub fn audit_name(&self) -> String {
        self.provenance.qualify(&self.name)
    }
}

/// Checked declarations in insertion order.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    decls: IndexMap<Name, Decl>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn get(&self, name: &str) -> Option<&Decl> {
        self.decls.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.decls.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Decl> {
        self.decls.values()
    }

    /// Append an already checked declaration. Callers go through
    /// [`crate::check::check_decl`]; returns `false` on a duplicate.
    pub(crate) fn push(&mut self, decl: Decl) -> bool {
        if self.decls.contains_key(&decl.name) {
            return false;
        }
        self.decls.insert(decl.name.clone(), decl);
        true
    }

    /// Audit names of every postulate, in declaration order.
    pub fn postulates(&self) -> Vec<String> {
        self.iter().filter(|d| d.is_postulate()).map(Decl::audit_name).collect()
    }
}

/// Which postulates may be added to a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PostulatePolicy {
    AllowAll,
    /// Audit-qualified names (e.g. `funext`, `circle.a`).
    Allowlist(BTreeSet<String>),
}

impl PostulatePolicy {
    /// The shipped configuration: function extensionality plus the three
    /// coherence cells of the circle's loop.
    pub fn shipped() -> PostulatePolicy {
        PostulatePolicy::allow(["funext", "circle.a", "circle.b", "circle.c"])
    }

    pub fn deny_all() -> PostulatePolicy {
        PostulatePolicy::Allowlist(BTreeSet::new())
    }

    pub fn allow<I, S>(names: I) -> PostulatePolicy
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        PostulatePolicy::Allowlist(names.into_iter().map(Into::into).collect())
    }

    pub fn permits(&self, audit_name: &str) -> bool {
        match self {
            PostulatePolicy::AllowAll => true,
            PostulatePolicy::Allowlist(names) => names.contains(audit_name),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qualification_skips_root_modules() {
        let p = Provenance { module: "prelude".into(), ..Default::default() };
        assert_eq!(p.qualify("funext"), "funext");
        let c = Provenance { module: "circle".into(), ..Default::default() };
        assert_eq!(c.qualify("a"), "circle.a");
    }

    #[test]
    fn shipped_policy() {
        let p = PostulatePolicy::shipped();
        assert!(p.permits("funext"));
        assert!(p.permits("circle.b"));
        assert!(!p.permits("cheat"));
        assert!(!PostulatePolicy::deny_all().permits("funext"));
    }
}
