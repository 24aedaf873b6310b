//! Exact numerics for Ulrich bundles on geometrically ruled surfaces with
//! invariant `e > 0`.
//!
//! * [`lattice`]: intersection form, canonical class, Riemann–Roch.
//! * [`oracle`]: exact line-bundle cohomology on Hirzebruch surfaces and an
//!   exhaustive Ulrich search.
//! * [`classify`]: the closed-form classification of Ulrich line bundles.
//! * [`rank2`]: numerical data of rank-2 special Ulrich bundles.
//! * [`report`]: parameter sweeps and their CSV / JSON / markdown output.
//!
//! Everything is generic over an exact integer [`Scalar`]; the aliases below
//! fix it to `i64` or to arbitrary precision.

pub mod classify;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod rank2;
pub mod report;
pub mod scalar;
pub mod twist;

pub use error::{CondBranch, Error, Result};
pub use lattice::{DivisorClass, Polarization, RuledSurface};
pub use scalar::Scalar;
pub use twist::{Genericity, TwistLabel};

pub use num_bigint::BigInt;

pub type Surface = RuledSurface<i64>;
pub type Divisor = DivisorClass<i64>;
pub type Polar = Polarization<i64>;
pub type Coh = oracle::CohTable<i64>;
pub type Extension = rank2::ExtensionData<i64>;
pub type Classes = classify::Classification<i64>;

pub type BigSurface = RuledSurface<BigInt>;
pub type BigDivisor = DivisorClass<BigInt>;
pub type BigPolar = Polarization<BigInt>;
pub type BigExtension = rank2::ExtensionData<BigInt>;
