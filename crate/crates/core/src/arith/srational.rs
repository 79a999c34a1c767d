use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{s_part_split, PlaceSet, Sign};
use crate::error::{Error, Result};
use crate::BigRat;

/// A nonzero rational split into its S-part and a residual coprime to `S_f`:
/// `sign * prod p^e * residual_num / residual_den`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SRational {
    pub sign: Sign,
    /// Only nonzero exponents are stored.
    pub s_exponents: BTreeMap<u64, i64>,
    pub residual_num: BigInt,
    pub residual_den: BigInt,
}

impl SRational {
    pub fn new(x: &BigRat, s: &PlaceSet) -> Result<SRational> {
        if x.is_zero() {
            return Err(Error::Domain("S-rational of zero".into()));
        }
        let num = s_part_split(x.numer(), s)?;
        let den = s_part_split(x.denom(), s)?;
        let mut s_exponents = BTreeMap::new();
        for &p in s.finite() {
            let pb = BigInt::from(p);
            let e = count(&num.s, &pb) - count(&den.s, &pb);
            if e != 0 {
                s_exponents.insert(p, e);
            }
        }
        Ok(SRational {
            sign: if x.is_negative() { Sign::Negative } else { Sign::Positive },
            s_exponents,
            residual_num: num.r,
            residual_den: den.r,
        })
    }

    /// Whether `x` is an S-unit (its residual is trivial).
    pub fn is_s_unit(&self) -> bool {
        self.residual_num.is_one() && self.residual_den.is_one()
    }

    pub fn to_rational(&self) -> BigRat {
        let mut num = self.residual_num.clone();
        let mut den = self.residual_den.clone();
        for (&p, &e) in &self.s_exponents {
            let pw = num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize);
            if e > 0 {
                num *= pw;
            } else {
                den *= pw;
            }
        }
        if self.sign == Sign::Negative {
            num = -num;
        }
        BigRat::new(num, den)
    }
}

fn count(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.clone();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        n = q;
        e += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn splits_ratio() {
        let s = PlaceSet::new(&[2, 3]).unwrap();
        let x = BigRat::new(BigInt::from(-40), BigInt::from(63));
        let sr = SRational::new(&x, &s).unwrap();
        assert_eq!(sr.sign, Sign::Negative);
        assert_eq!(sr.s_exponents, BTreeMap::from([(2, 3), (3, -2)]));
        assert_eq!(sr.residual_num, BigInt::from(5));
        assert_eq!(sr.residual_den, BigInt::from(7));
        assert!(!sr.is_s_unit());
        assert_eq!(sr.to_rational(), x);
        assert!(SRational::new(&BigRat::zero(), &s).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(n in -1_000_000i64..1_000_000, d in 1i64..1_000_000) {
            prop_assume!(n != 0);
            let s = PlaceSet::new(&[2, 3, 5]).unwrap();
            let x = BigRat::new(BigInt::from(n), BigInt::from(d));
            let sr = SRational::new(&x, &s).unwrap();
            prop_assert_eq!(sr.to_rational(), x);
            prop_assert!(sr.residual_num.gcd(&sr.residual_den).is_one());
            prop_assert!(sr.s_exponents.values().all(|&e| e != 0));
        }
    }
}
