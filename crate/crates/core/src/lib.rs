//! Kernel and front end for a dependent type theory with an impredicative
//! base universe `U` below a predicative hierarchy `U0 : U1 : U2`.

pub mod check;
pub mod driver;
pub mod eval;
pub mod level;
pub mod meta;
pub mod signature;
pub mod span;
pub mod surface;
pub mod systemf;
pub mod term;
pub mod value;
