//! Universe levels.
//!
//! The hierarchy is `U : U0 : U1 : ... : U{max}` where `U` is the single
//! impredicative universe at the bottom. Levels are totally ordered and the
//! derived `Ord` instance matches that order.

use std::fmt;

/// Default index of the topmost predicative universe.
pub const MAX_LEVEL: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    /// The impredicative universe `U`.
    Imp,
    /// The predicative universe `U{i}`.
    Pred(u8),
}

/// Type former whose universe is being computed by [`formation_level`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Former {
    Pi,
    Sigma,
    Id,
}

impl Level {
    /// The level of the universe that contains `Universe(self)`, or `None`
    /// when that would exceed `max`.
    pub fn type_of(self, max: u8) -> Option<Level> {
        match self {
            Level::Imp => Some(Level::Pred(0)),
            Level::Pred(i) if i < max => Some(Level::Pred(i + 1)),
            Level::Pred(_) => None,
        }
    }

    pub fn is_valid(self, max: u8) -> bool {
        match self {
            Level::Imp => true,
            Level::Pred(i) => i <= max,
        }
    }

    /// All levels up to and including `U{max}`, in increasing order.
    pub fn all(max: u8) -> impl Iterator<Item = Level> {
        std::iter::once(Level::Imp).chain((0..=max).map(Level::Pred))
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Imp => write!(f, "U"),
            Level::Pred(i) => write!(f, "U{}", i),
        }
    }
}

pub fn level_leq(a: Level, b: Level) -> bool {
    a <= b
}

/// Universe of a type built with `former` from components living in
/// `domain` and `codomain`.
///
/// Products landing in `U` stay in `U` whatever the domain. Sums are small
/// only when both components are small. An identity type lives where its
/// carrier lives, so `codomain` is ignored for [`Former::Id`].
pub fn formation_level(former: Former, domain: Level, codomain: Level) -> Level {
    match former {
        Former::Pi if codomain == Level::Imp => Level::Imp,
        Former::Pi | Former::Sigma => domain.max(codomain),
        Former::Id => domain,
    }
}
