//! Reference implementations used as oracles by the test suites. Nothing in
//! here calls into the kernel's evaluator or checker.

pub mod lambda;
pub mod neutral;
pub mod renaming;
pub mod scoping;
pub mod stlc;
