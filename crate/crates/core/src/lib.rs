//! Inception rules for lattice-expansion logics: signatures, formulas, ALBA,
//! rule generation, a display-calculus kernel, a derivation checker and cut
//! elimination, with finite algebras as a semantic oracle.

pub mod lexer;
pub mod signature;
pub mod syntax;
pub mod alba;
pub mod algebra;
pub mod kernel;
pub mod rulegen;
pub mod checker;
pub mod cutelim;
