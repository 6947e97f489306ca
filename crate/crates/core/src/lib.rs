//! Exact arithmetic for universal binary Hermitian lattices over imaginary
//! quadratic fields: trace forms, representation testing, escalation trees
//! and the finite checks behind the classification.

// index loops mirror the matrix formulas
#![allow(clippy::needless_range_loop)]

pub mod classify;
pub mod criteria;
pub mod enumerate;
pub mod escalate;
pub mod hermitian;
pub mod linalg;
pub mod qform;
pub mod ring;
