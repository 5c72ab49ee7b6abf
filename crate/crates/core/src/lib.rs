//! Exact toolkit for reflexive lattice simplices: construction from weight
//! vectors, h*-vectors, integral closure, free sums at the level of types,
//! and weak Lefschetz elements of the associated graded quotient.

pub mod ehrhart;
pub mod error;
pub mod family;
pub mod idp;
pub mod json;
pub mod lefschetz;
pub mod linalg;
pub mod search;
pub mod simplex;
pub mod strategy;
pub mod weights;

pub use ehrhart::{fpp_points, hstar, hstar_by_interpolation, FppPoint, HStarVector};
pub use error::{Error, Result};
pub use idp::{is_integrally_closed, IdpVerdict};
pub use lefschetz::{weak_lefschetz_verdict, WlVerdict};
pub use simplex::{build_delta_q, free_sum, is_reflexive, simplex_type, weight_vector, LatticeSimplex, SimplexType, WeightVector};
