//! `v`-adic absolute values and the S-part of integers, generic over the
//! integer scalar.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Place, PlaceSet, Sign};
use crate::error::{Error, Result};
use crate::scalar::{ipow, Int};

/// Largest `m` with `p^m | n`. `n` must be nonzero and `p >= 2`.
///
/// Divides by `p, p^2, p^4, ...` on the way up and then back down, so the
/// number of divisions is logarithmic in `m`.
pub fn valuation<T: Int>(n: &T, p: &T) -> u32 {
    debug_assert!(!n.is_zero());
    let mut n = n.clone();
    let mut m = 0u32;
    let mut pows = vec![p.clone()];
    loop {
        let top = pows.last().expect("nonempty");
        let (q, r) = n.div_rem(top);
        if !r.is_zero() {
            break;
        }
        n = q;
        m += 1 << (pows.len() - 1);
        // stop before squaring past |n| (also keeps fixed-width types safe)
        if top.abs() > n.abs() / top.abs() {
            break;
        }
        let sq = top.clone() * top.clone();
        pows.push(sq);
    }
    for (j, pw) in pows.iter().enumerate().rev() {
        let (q, r) = n.div_rem(pw);
        if r.is_zero() {
            n = q;
            m += 1 << j;
        }
    }
    m
}

/// [`valuation`] for a word-sized prime, without big divisors: one remainder
/// per `p^k` chunk that fits in a `u64`.
pub fn valuation_big(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero() && p >= 2);
    if p == 2 {
        return n.trailing_zeros().expect("nonzero") as u32;
    }
    let (mut pk, mut k) = (p, 1u32);
    while let Some(next) = pk.checked_mul(p) {
        pk = next;
        k += 1;
    }
    let mut n = n.magnitude().clone();
    let mut m = 0;
    loop {
        let r = (&n % pk).to_u64().expect("below p^k");
        if r != 0 {
            let mut r = r;
            while r % p == 0 {
                r /= p;
                m += 1;
            }
            return m;
        }
        n /= pk;
        m += k;
    }
}

/// `|x|_v`: `v^-m` for a finite place with `m = ord_v(x)`, `|x|` at infinity.
pub fn v_abs<T: Int>(x: &Ratio<T>, v: Place) -> Result<Ratio<T>> {
    if x.is_zero() {
        return Err(Error::Domain("absolute value of zero".into()));
    }
    match v {
        Place::Infinity => Ok(x.abs()),
        Place::Finite(p) => {
            let pt = T::from_u64_exact(p);
            let m = valuation(x.numer(), &pt) as i64 - valuation(x.denom(), &pt) as i64;
            let pw = ipow(&pt, m.unsigned_abs());
            Ok(if m >= 0 { Ratio::new_raw(T::one(), pw) } else { Ratio::from_integer(pw) })
        }
    }
}

/// `prod_{v in S} |x|_v`.
pub fn s_product<T: Int>(x: &Ratio<T>, s: &PlaceSet) -> Result<Ratio<T>> {
    let mut acc = Ratio::one();
    for v in s.places() {
        acc *= v_abs(x, v)?;
    }
    Ok(acc)
}

fn strip<T: Int>(n: &mut T, p: &T) -> u32 {
    let mut m = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return m;
        }
        *n = q;
        m += 1;
    }
}

/// Whether every prime factor of `n` lies in `S_f`. `1` is smooth; values
/// below `1` are not.
pub fn is_smooth<T: Int>(n: &T, s: &PlaceSet) -> bool {
    if !n.is_positive() {
        return false;
    }
    let mut rest = n.clone();
    for &p in s.finite() {
        strip(&mut rest, &T::from_u64_exact(p));
    }
    rest.is_one()
}

/// `|n| = s * r` with `s` supported on `S_f` and `r` coprime to `S_f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SPart<T> {
    pub s: T,
    pub r: T,
    pub sign: Sign,
}

impl<T: Int> SPart<T> {
    pub fn reassemble(&self) -> T {
        let v = self.s.clone() * self.r.clone();
        match self.sign {
            Sign::Positive => v,
            Sign::Negative => -v,
        }
    }
}

pub fn s_part_split<T: Int>(n: &T, s: &PlaceSet) -> Result<SPart<T>> {
    if n.is_zero() {
        return Err(Error::Domain("S-part of zero".into()));
    }
    let sign = Sign::of(n);
    let mut r = n.abs();
    let mut smooth = T::one();
    for &p in s.finite() {
        let pt = T::from_u64_exact(p);
        let m = strip(&mut r, &pt);
        smooth = smooth * ipow(&pt, m as u64);
    }
    Ok(SPart { s: smooth, r, sign })
}

/// `H(x) = max |x_i|`.
pub fn height_vec<T: Int>(x: &[T]) -> Result<T> {
    x.iter()
        .map(|v| v.abs())
        .max()
        .ok_or_else(|| Error::Domain("height of an empty vector".into()))
}

/// A nonempty integer vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntVector<T>(Vec<T>);

impl<T: Int> IntVector<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("empty integer vector".into()));
        }
        Ok(IntVector(entries))
    }

    pub fn entries(&self) -> &[T] {
        &self.0
    }

    pub fn height(&self) -> T {
        height_vec(&self.0).expect("nonempty by construction")
    }
}
