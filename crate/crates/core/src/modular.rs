//! Word-size modular arithmetic: products through `u128`, inverses,
//! signed exponents and multiplicative orders.

use num_integer::Integer;

use crate::arith::factor::factor_u64;
use crate::error::{Error, Result};

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// `base^exp mod m` for a signed exponent; negative exponents go through the
/// modular inverse.
pub fn pow_mod_signed(base: u64, exp: i64, m: u64) -> Result<u64> {
    if exp >= 0 {
        return Ok(pow_mod(base, exp as u64, m));
    }
    let inv = inv_mod(base % m, m)
        .ok_or_else(|| Error::Domain(format!("{base} is not invertible mod {m}")))?;
    Ok(pow_mod(inv, exp.unsigned_abs(), m))
}

/// Reduce a signed integer to `0..m`.
pub fn reduce_signed(a: i64, m: u64) -> u64 {
    (a as i128).rem_euclid(m as i128) as u64
}

/// Carmichael's function `lambda(n)`, the exponent of `(Z/nZ)*`.
pub fn carmichael(n: u64) -> u64 {
    let mut lambda = 1u64;
    for (p, e) in factor_u64(n) {
        let part = if p == 2 {
            match e {
                1 => 1,
                2 => 2,
                _ => 1u64 << (e - 2),
            }
        } else {
            (p - 1) * p.pow(e - 1)
        };
        lambda = lambda.lcm(&part);
    }
    lambda
}

/// Multiplicative order of `x` modulo `modulus`: the least `k >= 1` with
/// `x^k = 1`. Computed by stripping prime factors off Carmichael's exponent.
pub fn mult_order(x: i64, modulus: u64) -> Result<u64> {
    if modulus < 2 {
        return Err(Error::Domain(format!("modulus must be >= 2, got {modulus}")));
    }
    let x = reduce_signed(x, modulus);
    if x.gcd(&modulus) != 1 {
        return Err(Error::Domain(format!("gcd({x}, {modulus}) != 1")));
    }
    let mut ord = carmichael(modulus);
    for (r, _) in factor_u64(ord) {
        while ord % r == 0 && pow_mod(x, ord / r, modulus) == 1 {
            ord /= r;
        }
    }
    Ok(ord)
}

/// Multiplicative order by direct iteration; only for small moduli.
pub fn mult_order_naive(x: i64, modulus: u64) -> Result<u64> {
    let x = reduce_signed(x, modulus);
    if modulus < 2 || x.gcd(&modulus) != 1 {
        return Err(Error::Domain(format!("gcd({x}, {modulus}) != 1")));
    }
    let mut acc = x;
    let mut k = 1;
    while acc != 1 {
        acc = mul_mod(acc, x, modulus);
        k += 1;
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_of_small_examples() {
        assert_eq!(mult_order(2, 7).unwrap(), 3);
        assert_eq!(mult_order(3, 7).unwrap(), 6);
        assert_eq!(mult_order(1, 91).unwrap(), 1);
        assert_eq!(mult_order(-1, 10).unwrap(), 2);
    }

    #[test]
    fn order_rejects_non_units() {
        assert!(mult_order(6, 9).is_err());
        assert!(mult_order(0, 5).is_err());
    }

    #[test]
    fn carmichael_values() {
        assert_eq!(carmichael(1), 1);
        assert_eq!(carmichael(8), 2);
        assert_eq!(carmichael(16), 4);
        assert_eq!(carmichael(15), 4);
        assert_eq!(carmichael(561), 80);
    }

    #[test]
    fn order_matches_iteration() {
        for m in 2..400u64 {
            for x in 1..m.min(60) {
                if x.gcd(&m) == 1 {
                    assert_eq!(mult_order(x as i64, m).unwrap(), mult_order_naive(x as i64, m).unwrap());
                }
            }
        }
    }

    #[test]
    fn signed_powers() {
        assert_eq!(pow_mod_signed(2, -1, 7).unwrap(), 4);
        assert_eq!(pow_mod_signed(3, -2, 7).unwrap(), mul_mod(5, 5, 7));
        assert!(pow_mod_signed(3, -1, 9).is_err());
    }
}
