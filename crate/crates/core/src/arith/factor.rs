//! Primality testing and integer factorization.
//!
//! Primality is deterministic Miller-Rabin below `2^64` and Baillie-PSW
//! above. Factorization is trial division up to a bound followed by
//! Pollard-Brent rho with a capped number of attempts; running out of
//! attempts is reported as [`Error::IncompleteFactorization`].

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Sign;
use crate::error::{Error, Result};
use crate::modular::{mul_mod, pow_mod};
use crate::BigRat;

/// Default trial-division bound.
pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

const RHO_ATTEMPTS: u64 = 64;
const RHO_ITERATIONS: u64 = 1 << 22;

const MR_BASES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn strong_probable_prime_u64(n: u64, a: u64) -> bool {
    let a = a % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

/// Deterministic for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES_U64 {
        if n % p == 0 {
            return n == p;
        }
    }
    MR_BASES_U64.iter().all(|&a| strong_probable_prime_u64(n, a))
}

fn strong_probable_prime_big(n: &BigUint, a: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = a.modpow(&d, n);
    if x == one || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn half_mod(x: BigInt, n: &BigInt) -> BigInt {
    let x = if x.is_odd() { x + n } else { x };
    let half: BigInt = x >> 1usize;
    half.mod_floor(n)
}

/// Strong Lucas probable prime test with Selfridge's parameters.
fn strong_lucas_probable_prime(n: &BigInt) -> bool {
    let root = n.sqrt();
    if &(&root * &root) == n {
        return false;
    }
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, n) {
            -1 => break,
            0 => {
                if &d.abs() != n {
                    return false;
                }
            }
            _ => {}
        }
        d = if d.is_positive() { -(d + 2u32) } else { -(d - 2u32) };
    }
    let p = BigInt::one();
    let q: BigInt = (BigInt::one() - &d) / 4u32;
    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    let mut u = BigInt::one();
    let mut v = p.clone();
    let mut qk = q.mod_floor(n);
    let bits = k.bits();
    for i in (0..bits - 1).rev() {
        u = (&u * &v).mod_floor(n);
        v = (&v * &v - &qk * 2u32).mod_floor(n);
        qk = (&qk * &qk).mod_floor(n);
        if k.bit(i) {
            let nu = half_mod(&p * &u + &v, n);
            let nv = half_mod(&d * &u + &p * &v, n);
            u = nu;
            v = nv;
            qk = (&qk * &q).mod_floor(n);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - &qk * 2u32).mod_floor(n);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(n);
    }
    false
}

/// Primality of a nonnegative integer: deterministic below `2^64`,
/// Baillie-PSW above.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &MR_BASES_U64 {
        if (n % p).is_zero() {
            return false;
        }
    }
    if !strong_probable_prime_big(n, &BigUint::from(2u32)) {
        return false;
    }
    strong_lucas_probable_prime(&BigInt::from_biguint(BigSign::Plus, n.clone()))
}

fn primes_up_to(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    primes
}

fn default_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(DEFAULT_TRIAL_BOUND))
}

fn with_trial_primes<R>(bound: u64, f: impl FnOnce(&[u64]) -> R) -> R {
    if bound <= DEFAULT_TRIAL_BOUND {
        let all = default_primes();
        let end = all.partition_point(|&p| p <= bound);
        f(&all[..end])
    } else {
        f(&primes_up_to(bound))
    }
}

fn rho_u64(n: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    for c in 1..=RHO_ATTEMPTS {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut y = 2u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        let mut steps = 0u64;
        while g == 1 && steps < RHO_ITERATIONS {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(r - k).min(128) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
            steps += r;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

fn rho_big(n: &BigUint) -> Option<BigUint> {
    let one = BigUint::one();
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    for c in 1..=RHO_ATTEMPTS {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut steps = 0u64;
        while g == one && steps < RHO_ITERATIONS {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..(r - k).min(128) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            r *= 2;
            steps += r;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if g > one && &g < n {
            return Some(g);
        }
    }
    None
}

fn split_u64(n: u64, out: &mut BTreeMap<u64, u32>) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime_u64(n) {
        *out.entry(n).or_insert(0) += 1;
        return Ok(());
    }
    let d = rho_u64(n).ok_or_else(|| Error::IncompleteFactorization { residual: n.to_string() })?;
    split_u64(d, out)?;
    split_u64(n / d, out)
}

/// Complete factorization of a `u64` as ascending `(prime, exponent)` pairs.
/// `factor_u64(1)` is empty; `factor_u64(0)` panics.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "cannot factor zero");
    let mut out = BTreeMap::new();
    let mut n = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
    }
    let mut p = 53u64;
    while p * p <= n && p < 10_000 {
        while n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
        p += 2;
    }
    // Rho never fails on 64-bit inputs in practice; a failure here is a bug.
    split_u64(n, &mut out).expect("rho failed on a 64-bit cofactor");
    out.into_iter().collect()
}

fn split_big(n: BigUint, out: &mut BTreeMap<BigUint, u32>) -> Result<()> {
    if n.is_one() {
        return Ok(());
    }
    if let Some(small) = n.to_u64() {
        let mut tmp = BTreeMap::new();
        split_u64(small, &mut tmp)?;
        for (p, e) in tmp {
            *out.entry(BigUint::from(p)).or_insert(0) += e;
        }
        return Ok(());
    }
    if is_prime(&n) {
        *out.entry(n).or_insert(0) += 1;
        return Ok(());
    }
    let d = rho_big(&n).ok_or_else(|| Error::IncompleteFactorization { residual: n.to_string() })?;
    let rest = &n / &d;
    split_big(d, out)?;
    split_big(rest, out)
}

/// Factor a positive integer: trial division by primes up to `trial_bound`,
/// then primality testing and Pollard-Brent rho on what is left.
pub fn factor_biguint(n: &BigUint, trial_bound: u64) -> Result<BTreeMap<BigUint, u32>> {
    if n.is_zero() {
        return Err(Error::Domain("cannot factor zero".into()));
    }
    let mut out = BTreeMap::new();
    let mut rest = n.clone();
    with_trial_primes(trial_bound, |primes| {
        for &p in primes {
            if rest.is_one() {
                break;
            }
            let pb = BigUint::from(p);
            if &pb * &pb > rest {
                break;
            }
            let mut e = 0;
            loop {
                let (q, r) = rest.div_rem(&pb);
                if !r.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                out.insert(pb, e);
            }
        }
    });
    if rest.is_one() {
        return Ok(out);
    }
    let bound = BigUint::from(trial_bound);
    if rest <= &bound * &bound {
        *out.entry(rest).or_insert(0) += 1;
        return Ok(out);
    }
    split_big(rest, &mut out)?;
    Ok(out)
}

/// Signed prime factorization of a nonzero rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: Sign,
    /// Prime to nonzero exponent; negative exponents come from the denominator.
    pub exponents: BTreeMap<BigInt, i64>,
}

impl Factorization {
    /// Multiply the factorization back out.
    pub fn to_rational(&self) -> BigRat {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, &e) in &self.exponents {
            let pw = num_traits::pow(p.clone(), e.unsigned_abs() as usize);
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

/// Full prime factorization of a nonzero rational, with the sign tracked
/// separately.
pub fn exponent_vector(x: &BigRat, trial_bound: u64) -> Result<Factorization> {
    if x.is_zero() {
        return Err(Error::Domain("exponent vector of zero".into()));
    }
    let sign = if x.is_negative() { Sign::Negative } else { Sign::Positive };
    let mut exponents = BTreeMap::new();
    for (p, e) in factor_biguint(x.numer().magnitude(), trial_bound)? {
        exponents.insert(BigInt::from(p), e as i64);
    }
    for (p, e) in factor_biguint(x.denom().magnitude(), trial_bound)? {
        exponents.insert(BigInt::from(p), -(e as i64));
    }
    Ok(Factorization { sign, exponents })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn rat(n: i64, d: i64) -> BigRat {
        BigRat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_primes() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
    }

    #[test]
    fn pseudoprimes_rejected() {
        // Carmichael numbers and strong pseudoprimes to several bases.
        for n in [561u64, 1105, 1729, 2047, 3215031751, 3825123056546413051] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18446744073709551557));
        assert!(is_prime_u64((1 << 61) - 1));
    }

    #[test]
    fn big_primality() {
        let m89 = (BigUint::one() << 89) - 1u32;
        let m127 = (BigUint::one() << 127) - 1u32;
        assert!(is_prime(&m89));
        assert!(is_prime(&m127));
        assert!(!is_prime(&(&m89 * &m127)));
        // 2^67 - 1 = 193707721 * 761838257287
        assert!(!is_prime(&((BigUint::one() << 67) - 1u32)));
        // Strong pseudoprime to bases 2..37 (Arnault), composite.
        let arnault = BigUint::from_str("3317044064679887385961981").unwrap();
        assert!(!is_prime(&arnault));
    }

    #[test]
    fn lucas_agrees_with_sieve_on_odd_range() {
        for n in (3..5000i64).step_by(2) {
            let expected = is_prime_u64(n as u64);
            let got = strong_probable_prime_u64(n as u64, 2)
                && strong_lucas_probable_prime(&BigInt::from(n));
            assert_eq!(got, expected, "{n}");
        }
    }

    #[test]
    fn factor_u64_reassembles() {
        for n in [1u64, 2, 12, 97, 1001, 600851475143, 18446744073709551615] {
            let f = factor_u64(n);
            let back: u128 = f.iter().map(|&(p, e)| (p as u128).pow(e)).product();
            assert_eq!(back, n as u128);
            assert!(f.iter().all(|&(p, _)| is_prime_u64(p)));
        }
    }

    #[test]
    fn factor_large_semiprime_via_rho() {
        let a = BigUint::from(1_000_000_007u64);
        let b = BigUint::from(998_244_353u64);
        let c = (BigUint::one() << 89) - 1u32;
        let n = &a * &b * &c;
        let f = factor_biguint(&n, 1000).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f[&a], 1);
        assert_eq!(f[&c], 1);
    }

    #[test]
    fn exponent_vector_examples() {
        let f = exponent_vector(&rat(4, 9), DEFAULT_TRIAL_BOUND).unwrap();
        assert_eq!(f.sign, Sign::Positive);
        assert_eq!(f.exponents, BTreeMap::from([(BigInt::from(2), 2), (BigInt::from(3), -2)]));

        let f = exponent_vector(&rat(1, 1), DEFAULT_TRIAL_BOUND).unwrap();
        assert!(f.exponents.is_empty());

        let f = exponent_vector(&rat(-50, 3), DEFAULT_TRIAL_BOUND).unwrap();
        assert_eq!(f.sign, Sign::Negative);
        assert_eq!(
            f.exponents,
            BTreeMap::from([(BigInt::from(2), 1), (BigInt::from(5), 2), (BigInt::from(3), -1)])
        );
        assert_eq!(f.to_rational(), rat(-50, 3));
    }

    #[test]
    fn exponent_vector_of_zero_fails() {
        assert!(matches!(exponent_vector(&rat(0, 1), 100), Err(Error::Domain(_))));
    }
}
