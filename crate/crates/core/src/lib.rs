//! Exact-arithmetic classification of low-dimensional singularities by
//! Mather-Jacobian criteria.
//!
//! The crate decides, with zero floating-point tolerance, whether a germ cut
//! out by polynomial equations is MJ-canonical, MJ-log-canonical, or
//! neither. It does so with three cooperating toolkits:
//!
//! * commutative-algebra machinery — Groebner bases over Q and over simple
//!   extensions Q(α), tangent cones, dimension and multiplicity counts
//!   ([`groebner`], [`poly`], [`arith`]);
//! * jet-scheme dimension bounds and Newton-polygon certificates that rule
//!   germs out ([`jets`], [`newton`]);
//! * decision procedures for curve germs and surface germs built on those
//!   bounds, plus the cone criterion for higher-dimensional toric cones
//!   ([`curves`], [`classify`]).

pub mod arith;
pub mod budget;
pub mod classify;
pub mod curves;
pub mod error;
pub mod groebner;
pub mod jets;
pub mod newton;
pub mod poly;

pub use budget::Budget;
pub use error::{Error, Result};
