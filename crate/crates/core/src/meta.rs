//! Metavariables created for holes during elaboration.

use std::cell::RefCell;

use crate::span::Span;
use crate::value::Val;

#[derive(Debug, Clone)]
pub struct MetaEntry {
    pub solution: Option<Val>,
    /// Context length at creation; solutions may only mention levels below it.
    pub depth: usize,
    pub span: Span,
    pub ty: Val,
}

#[derive(Debug, Default)]
pub struct MetaStore {
    entries: RefCell<Vec<MetaEntry>>,
}

impl MetaStore {
    pub fn new() -> MetaStore {
        MetaStore::default()
    }

    pub fn fresh(&self, depth: usize, span: Span, ty: Val) -> usize {
        let mut entries = self.entries.borrow_mut();
        entries.push(MetaEntry { solution: None, depth, span, ty });
        entries.len() - 1
    }

    pub fn solution(&self, id: usize) -> Option<Val> {
        self.entries.borrow().get(id).and_then(|e| e.solution.clone())
    }

    pub fn entry(&self, id: usize) -> Option<MetaEntry> {
        self.entries.borrow().get(id).cloned()
    }

    pub(crate) fn set_solution(&self, id: usize, value: Val) {
        if let Some(e) = self.entries.borrow_mut().get_mut(id) {
            e.solution = Some(value);
        }
    }

    pub fn len(&self) -> usize {
        self.entries.borrow().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn unsolved(&self) -> Vec<(usize, Span)> {
        self.entries
            .borrow()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.solution.is_none())
            .map(|(i, e)| (i, e.span))
            .collect()
    }
}
