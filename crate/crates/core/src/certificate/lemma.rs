use num_rational::Ratio;
use num_traits::One;

use crate::arith::{v_abs, PlaceSet};
use crate::error::{Error, Result};
use crate::scalar::Int;

/// Both sides of
/// `prod_{v in S} min(|y1|_v, |y2|_v) <= (2/|Q|) prod_{v in S} |y1 y2|_v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaDiff<T: Int> {
    pub holds: bool,
    pub lhs: Ratio<T>,
    pub rhs: Ratio<T>,
}

/// The difference lemma for distinct nonzero `y1`, `y2` with `Q | y1 - y2`
/// and `Q` free of primes in `S`.
pub fn lemma_diff<T: Int>(y1: &T, y2: &T, qd: &T, places: &PlaceSet) -> Result<LemmaDiff<T>> {
    if y1.is_zero() || y2.is_zero() {
        return Err(Error::Precondition("y1, y2 must be nonzero".into()));
    }
    if y1 == y2 {
        return Err(Error::Precondition(format!("y1 = y2 = {y1}")));
    }
    if qd.is_zero() {
        return Err(Error::Precondition("Q must be nonzero".into()));
    }
    if !(y1.clone() - y2.clone()).is_multiple_of(qd) {
        return Err(Error::Precondition(format!("{qd} does not divide {y1} - {y2}")));
    }
    if let Some(p) = places.finite().iter().find(|&&p| qd.is_multiple_of(&T::from_u64_exact(p))) {
        return Err(Error::Precondition(format!("Q = {qd} is divisible by {p} in S")));
    }
    let (r1, r2) = (Ratio::from_integer(y1.clone()), Ratio::from_integer(y2.clone()));
    let prod = Ratio::from_integer(y1.clone() * y2.clone());
    let mut lhs = Ratio::<T>::one();
    let mut rhs = Ratio::from_integer(T::one() + T::one()) / Ratio::from_integer(qd.abs());
    for v in places.places() {
        let (a, b) = (v_abs(&r1, v)?, v_abs(&r2, v)?);
        lhs *= if a < b { a } else { b };
        rhs *= v_abs(&prod, v)?;
    }
    Ok(LemmaDiff { holds: lhs <= rhs, lhs, rhs })
}
