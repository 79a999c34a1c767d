//! Exact arithmetic toolkit for the multiplicative group generated by two
//! primes acting on `Z/QZ`, the relation lattice of that action, and the
//! greatest common divisor of S-unit differences.
//!
//! Everything in here is exact: integers are arbitrary precision (or a
//! fixed-width integer chosen by the caller through [`Int`]), rationals are
//! [`num_rational::Ratio`], and comparisons against real powers such as
//! `H^eps` are decided by integer power comparisons.
//!
//! Module map:
//! - [`arith`]: places, `v`-adic absolute values, S-parts, factorization,
//!   exact power comparison.
//! - [`orbit`]: the set `B(beta, Q)`, canonical representatives, return sets
//!   and their collinearity.
//! - [`lattice`]: generic 2-D lattices (HNF, sup-norm successive minima) and
//!   the relation lattice of `p`, `q` modulo `Q`.
//! - [`gcdlab`]: explicit constants, trichotomy classification, scans,
//!   extremal gcd records, box-principle witnesses.
//! - [`certificate`]: auxiliary points, place-indexed linear forms, and the
//!   exact verification of the inequality chains that precede the subspace
//!   theorem.

pub mod arith;
pub mod certificate;
pub mod error;
pub mod gcdlab;
pub mod lattice;
pub mod modular;
pub mod orbit;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Int;

use num_bigint::BigInt;
use num_rational::Ratio;

/// Exact rational over arbitrary precision integers.
pub type BigRat = Ratio<BigInt>;
/// 2-D lattice over machine integers (desk-scale relation lattices).
pub type Lattice64 = lattice::Lattice2<i64>;
/// 2-D lattice over 128-bit integers.
pub type Lattice128 = lattice::Lattice2<i128>;
/// 2-D lattice over arbitrary precision integers.
pub type BigLattice = lattice::Lattice2<BigInt>;
/// Successive minima of a [`Lattice64`].
pub type Minima64 = lattice::MinimaPair<i64>;
/// Successive minima of a [`BigLattice`].
pub type BigMinima = lattice::MinimaPair<BigInt>;
