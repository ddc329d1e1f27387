//! Finite quantale-valued structures on groups.
//!
//! The crate covers, entirely over finite data: commutative quantales and
//! the structures they grade (reflexive transitive valuations on sets and on
//! groups), distance-preserving group automorphisms, split extensions of
//! valued groups and the ones carrying the product valuation, the match-up
//! between those and twisting actions, and the right adjoint to pulling a
//! valuation back along a group homomorphism. Everything is checked by
//! finite search, so every claim a function returns comes with either a
//! proof by exhaustion or a concrete counterexample.

pub mod doc;
pub mod error;
pub mod grp;
pub mod kan;
pub mod points;
pub mod quantale;
pub mod report;
pub mod vgrp;
pub mod vstruct;

pub use error::{Error, Result};
