pub mod annulus;
pub mod braid;
pub mod braidmon;
pub mod cover;
pub mod error;
pub mod freegroup;
pub mod hurwitz;
pub mod invariants;
pub mod linalg;
pub mod mcg;
pub mod plumbing;
pub mod ribbon;
pub mod surface;
pub mod wordbank;

/// Exact rationals used by the plumbing calculus.
pub type Rational = num_rational::BigRational;
/// Small exact rationals, for callers that want `Copy` scalars.
pub type Ratio64 = num_rational::Ratio<i64>;
