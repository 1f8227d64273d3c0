//! Exact computations with quasi-invariants of complex reflection groups:
//! cyclotomic arithmetic, polynomial rings, reflection groups and their
//! representations, Dunkl operators, quasi-invariant modules, shift operators
//! and Baker–Akhiezer functions.

pub mod dunkl;
pub mod exactnum;
pub mod linalg;
pub mod polyring;
pub mod quasiinv;
pub mod refgroup;
pub mod shiftops;
pub mod tseries;
pub mod baf;
