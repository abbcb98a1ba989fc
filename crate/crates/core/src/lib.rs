#![forbid(unsafe_code)]

//! Constrained de Bruijn sequences and codes.
//!
//! A word is (b,k)-constrained when no k-tuple repeats among any b
//! consecutive windows of length k. This crate implements the toolkit
//! around that constraint:
//!
//! - [`words`] / [`constraint`]: sequence types, the constraint predicate
//!   in its window, period, and forbidden-pattern forms;
//! - [`automaton`]: finite-state presentations, transfer matrices, and the
//!   Perron eigenvalue that gives the asymptotic rate;
//! - [`enumeration`]: exact counting, closed forms, rate tables, and
//!   enumerative rank/unrank coding;
//! - [`gf`]: finite fields, primitive polynomials, and maximal-length
//!   shift-register sequences;
//! - [`construction`]: codes with large constrained segments built from
//!   m-sequences, and an independent-set search over de Bruijn cycles;
//! - [`channels`]: the l-symbol read channel and racetrack-memory codecs
//!   for sticky insertions and limited bursts of deletions.
//!
//! All values are immutable once built and all operations are pure
//! (randomized ones take an explicit generator), so instances can be
//! shared freely across threads.

pub mod automaton;
pub mod channels;
pub mod constraint;
pub mod construction;
pub mod enumeration;
pub mod error;
pub mod gf;
pub mod words;

pub use error::{Error, Result};
