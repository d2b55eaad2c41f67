//! Finite models of G-groupoids, double and n-tuple principal groups and
//! bundles, and weight-graded polynomial automorphism groups.
//!
//! Every construction is checked by exact arithmetic: finite groups are
//! multiplication tables, groupoids are finite arrow sets, and polynomial maps
//! have rational or prime-field coefficients.

pub mod aut;
pub mod cocycle;
pub mod graded;
pub mod group;
pub mod groupoid;
pub mod io;
pub mod principal;
