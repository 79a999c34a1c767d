//! Exact comparison of rational powers `a^e` with `a > 0` and `e` rational.
//!
//! Comparisons first try rigorous fixed-point enclosures of `log2`, computed
//! with integer arithmetic only. If the enclosures overlap, the exponents
//! are cleared to integers and the two sides are compared as exact
//! rationals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::BigRat;

const FRAC_BITS: u32 = 60;

/// `base^exp` kept symbolic, `base > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPower {
    pub base: BigRat,
    pub exp: BigRat,
}

impl RatPower {
    pub fn new(base: BigRat, exp: BigRat) -> Result<RatPower> {
        if !base.is_positive() {
            return Err(Error::Domain(format!("power base must be positive, got {base}")));
        }
        Ok(RatPower { base, exp })
    }

    /// `h^exp` for a positive integer `h`.
    pub fn of_int(h: &BigInt, exp: BigRat) -> Result<RatPower> {
        RatPower::new(BigRat::from_integer(h.clone()), exp)
    }

    /// The rational `x` itself, as `x^1`.
    pub fn rational(x: BigRat) -> Result<RatPower> {
        RatPower::new(x, BigRat::one())
    }
}

impl fmt::Display for RatPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp.is_one() {
            write!(f, "{}/{}", self.base.numer(), self.base.denom())
        } else if self.base.is_integer() {
            write!(f, "{}^({}/{})", self.base.numer(), self.exp.numer(), self.exp.denom())
        } else {
            write!(
                f,
                "({}/{})^({}/{})",
                self.base.numer(),
                self.base.denom(),
                self.exp.numer(),
                self.exp.denom()
            )
        }
    }
}

/// Lower bound of `2^60 * log2(m)` for `1 <= m <= 2^63`, or an upper bound
/// when `round_up` is set.
fn log2_fixed_u64(m: u64, round_up: bool) -> i128 {
    debug_assert!(m >= 1 && m <= 1 << 63);
    let e = 63 - m.leading_zeros();
    // y in [1, 2) with 62 fractional bits.
    let mut y: u128 = if e <= 62 { (m as u128) << (62 - e) } else { 1u128 << 62 };
    let two: u128 = 1u128 << 63;
    let mut c: i128 = 0;
    for _ in 0..FRAC_BITS {
        let sq = y * y;
        y = if round_up { (sq + (1u128 << 62) - 1) >> 62 } else { sq >> 62 };
        c <<= 1;
        if y >= two {
            c |= 1;
            y = if round_up { (y + 1) >> 1 } else { y >> 1 };
        }
    }
    let base = (e as i128) << FRAC_BITS;
    if round_up {
        base + c + 1
    } else {
        base + c
    }
}

/// `(lo, hi)` with `lo <= 2^60 * log2(x) <= hi` for an integer `x >= 1`.
fn log2_bounds_uint(x: &BigUint) -> (BigInt, BigInt) {
    let bits = x.bits();
    if bits <= 63 {
        let m = x.to_u64().expect("fits");
        return (BigInt::from(log2_fixed_u64(m, false)), BigInt::from(log2_fixed_u64(m, true)));
    }
    let shift = bits - 63;
    let top = x >> shift;
    let m = top.to_u64().expect("63 bits");
    let exact = (&top << shift) == *x;
    let m_hi = if exact { m } else { m + 1 };
    let k = BigInt::from(shift) << FRAC_BITS;
    (
        &k + log2_fixed_u64(m, false),
        &k + log2_fixed_u64(m_hi, true),
    )
}

fn log2_bounds(x: &BigRat) -> (BigInt, BigInt) {
    let (nl, nh) = log2_bounds_uint(x.numer().magnitude());
    let (dl, dh) = log2_bounds_uint(x.denom().magnitude());
    (nl - dh, nh - dl)
}

fn scaled_interval(p: &RatPower, scale: &BigInt) -> (BigInt, BigInt) {
    let (lo, hi) = log2_bounds(&p.base);
    let c = p.exp.numer() * scale;
    if c.is_negative() {
        (&c * hi, c * lo)
    } else {
        (&c * lo, c * hi)
    }
}

fn int_pow_signed(x: &BigRat, e: &BigInt) -> BigRat {
    let mag = e.magnitude().to_u64().expect("exponent too large for exact fallback");
    let mut num = num_traits::pow(x.numer().clone(), mag as usize);
    let mut den = num_traits::pow(x.denom().clone(), mag as usize);
    if e.is_negative() {
        std::mem::swap(&mut num, &mut den);
    }
    BigRat::new(num, den)
}

fn cmp_exact(a: &RatPower, b: &RatPower) -> Ordering {
    let d = a.exp.denom().lcm(b.exp.denom());
    let ia = a.exp.numer() * (&d / a.exp.denom());
    let ib = b.exp.numer() * (&d / b.exp.denom());
    int_pow_signed(&a.base, &ia).cmp(&int_pow_signed(&b.base, &ib))
}

/// Order of `a.base^a.exp` relative to `b.base^b.exp`.
pub fn cmp_powers(a: &RatPower, b: &RatPower) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let (xa_lo, xa_hi) = scaled_interval(a, b.exp.denom());
    let (xb_lo, xb_hi) = scaled_interval(b, a.exp.denom());
    if xa_hi < xb_lo {
        Ordering::Less
    } else if xa_lo > xb_hi {
        Ordering::Greater
    } else {
        cmp_exact(a, b)
    }
}

/// Order of the positive rational `x` relative to `p`.
pub fn cmp_power(x: &BigRat, p: &RatPower) -> Ordering {
    let lhs = RatPower { base: x.clone(), exp: BigRat::one() };
    cmp_powers(&lhs, p)
}

/// Compare `log q1 / log h1` with `log q2 / log h2` for integers `q >= 1`,
/// `h >= 2`. `None` when the enclosures cannot separate the two ratios
/// (in particular when they are equal).
pub fn cmp_log_ratios(q1: &BigInt, h1: &BigInt, q2: &BigInt, h2: &BigInt) -> Option<Ordering> {
    let bounds = |x: &BigInt| {
        let (lo, hi) = log2_bounds_uint(x.magnitude());
        (lo.max(BigInt::from(0)), hi)
    };
    let ((q1l, q1h), (h1l, h1h)) = (bounds(q1), bounds(h1));
    let ((q2l, q2h), (h2l, h2h)) = (bounds(q2), bounds(h2));
    // all logs are >= 0, so the cross products have monotone enclosures
    let (lhs_lo, lhs_hi) = (&q1l * &h2l, &q1h * &h2h);
    let (rhs_lo, rhs_hi) = (&q2l * &h1l, &q2h * &h1h);
    if lhs_hi < rhs_lo {
        Some(Ordering::Less)
    } else if lhs_lo > rhs_hi {
        Some(Ordering::Greater)
    } else {
        None
    }
}

/// Display-only approximation of `log2(x)` for a positive rational.
pub fn log2_approx(x: &BigRat) -> f64 {
    let (lo, hi) = log2_bounds(x);
    let mid: BigInt = (lo + hi) >> 1;
    mid.to_f64().unwrap_or(f64::NAN) / (1u64 << FRAC_BITS) as f64
}
