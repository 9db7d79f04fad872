//! Witness-count toolkit for restricted counting problems.
//!
//! The unifying observation: for several natural equivalence problems the set
//! of witnesses is an affine coset over GF(2), so a solver either finds no
//! witness or finds exactly a power of two of them. This crate implements the
//! solvers, the coset verification, and two counting constructions built on
//! the same discipline:
//!
//! - [`formula`] / [`obdd`] / [`negequiv`] — negation equivalence of boolean
//!   functions (formula brute force and a symbolic OBDD route), with the full
//!   witness coset and its stabilizer dimension.
//! - [`twodag`] — interchange equivalence of 2-dags under depth-set flips.
//! - [`fewamp`] — the accepting-path amplifier: constants `c_i` that map any
//!   few-path count into a chosen acceptance set, with growth-bound checks.
//! - [`cep`] — padding an exact-count acceptance test so the total path count
//!   is a power of two precisely on acceptance.
//!
//! The `epkit` binary exposes all of it for batch use; see [`cli`].

pub mod cep;
pub mod cli;
pub mod fewamp;
pub mod formula;
pub mod gen;
pub mod gf2;
pub mod negequiv;
pub mod obdd;
pub mod twodag;
