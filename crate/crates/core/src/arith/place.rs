use std::fmt;

use super::factor::is_prime_u64;
use crate::error::{Error, Result};

/// A place of `Q`: a finite prime or the Archimedean place.
///
/// The derived order puts finite primes first, ascending, then infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(u64),
    Infinity,
}

impl Place {
    pub fn finite(p: u64) -> Result<Place> {
        if is_prime_u64(p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Place::Finite(_))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

/// A finite set of places that always contains infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaceSet {
    finite: Vec<u64>,
}

impl PlaceSet {
    /// Build `S = primes + {inf}`. Primes are verified and sorted; duplicates
    /// are rejected.
    pub fn new(primes: &[u64]) -> Result<PlaceSet> {
        let mut finite = Vec::with_capacity(primes.len());
        for &p in primes {
            Place::finite(p)?;
            finite.push(p);
        }
        finite.sort_unstable();
        if finite.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain(format!("duplicate prime in place set {primes:?}")));
        }
        Ok(PlaceSet { finite })
    }

    /// The finite part `S_f`, ascending.
    pub fn finite(&self) -> &[u64] {
        &self.finite
    }

    /// All places in canonical order: finite primes ascending, then infinity.
    pub fn places(&self) -> impl Iterator<Item = Place> + '_ {
        self.finite.iter().map(|&p| Place::Finite(p)).chain(std::iter::once(Place::Infinity))
    }

    pub fn len(&self) -> usize {
        self.finite.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, place: Place) -> bool {
        match place {
            Place::Infinity => true,
            Place::Finite(p) => self.finite.binary_search(&p).is_ok(),
        }
    }

    /// The same set with the given primes removed.
    pub fn without(&self, primes: &[u64]) -> PlaceSet {
        PlaceSet {
            finite: self.finite.iter().copied().filter(|p| !primes.contains(p)).collect(),
        }
    }
}

impl fmt::Display for PlaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for p in &self.finite {
            write!(f, "{p},")?;
        }
        f.write_str("inf}")
    }
}
