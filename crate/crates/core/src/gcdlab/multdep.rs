use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{exponent_vector, Factorization, DEFAULT_TRIAL_BOUND};
use crate::error::Result;
use crate::BigRat;

fn exponent(f: &Factorization, p: &BigInt) -> i64 {
    f.exponents.get(p).copied().unwrap_or(0)
}

/// `x1^n1 == x2^n2`, decided on exponent vectors and signs.
fn relation_holds(f1: &Factorization, f2: &Factorization, primes: &BTreeSet<BigInt>, n1: i64, n2: i64) -> bool {
    f1.sign.pow(n1) == f2.sign.pow(n2)
        && primes.iter().all(|p| n1 * exponent(f1, p) == n2 * exponent(f2, p))
}

/// Smallest `(n1, n2) != (0, 0)` with `|n_i| <= N - 1` and `x1^n1 = x2^n2`.
///
/// Witnesses are normalized so the first nonzero entry is positive and then
/// ordered by `|n1| + |n2|`, then lexicographically.
pub fn mult_dep_search(x1: &BigRat, x2: &BigRat, n: u64) -> Result<Option<(i64, i64)>> {
    let f1 = exponent_vector(x1, DEFAULT_TRIAL_BOUND)?;
    let f2 = exponent_vector(x2, DEFAULT_TRIAL_BOUND)?;
    let primes: BTreeSet<BigInt> = f1.exponents.keys().chain(f2.exponents.keys()).cloned().collect();
    let bound = n.saturating_sub(1) as i64;
    let mut best: Option<(i64, i64)> = None;
    for n1 in 0..=bound {
        for n2 in -bound..=bound {
            if (n1 == 0 && n2 <= 0) || !relation_holds(&f1, &f2, &primes, n1, n2) {
                continue;
            }
            let key = |w: (i64, i64)| (w.0.abs() + w.1.abs(), w.0, w.1);
            if best.map_or(true, |b| key((n1, n2)) < key(b)) {
                best = Some((n1, n2));
            }
        }
    }
    Ok(best)
}

/// Whether two nonzero rationals satisfy no relation `x1^n1 = x2^n2` at all.
pub fn multiplicatively_independent(x1: &BigRat, x2: &BigRat) -> Result<bool> {
    let f1 = exponent_vector(x1, DEFAULT_TRIAL_BOUND)?;
    let f2 = exponent_vector(x2, DEFAULT_TRIAL_BOUND)?;
    let torsion = |f: &Factorization| f.exponents.is_empty();
    if torsion(&f1) || torsion(&f2) {
        // +-1 is always dependent: (+-1)^2 = x^0
        return Ok(false);
    }
    // exponent vectors must be parallel for any relation to exist
    let primes: BTreeSet<BigInt> = f1.exponents.keys().chain(f2.exponents.keys()).cloned().collect();
    let p0 = f1.exponents.keys().next().expect("nonempty");
    let (e1, e2) = (exponent(&f1, p0), exponent(&f2, p0));
    if e2.is_zero() {
        return Ok(true);
    }
    let parallel = primes.iter().all(|p| exponent(&f1, p) * e2 == exponent(&f2, p) * e1);
    // if parallel, x1^e2 = +-x2^e1 and squaring fixes the sign
    Ok(!parallel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    fn rpow(x: &BigRat, e: i64) -> BigRat {
        let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
        if e < 0 {
            p.recip()
        } else {
            p
        }
    }

    /// Exhaustive oracle with exact powers.
    fn brute(x1: &BigRat, x2: &BigRat, n: u64) -> Option<(i64, i64)> {
        let b = n as i64 - 1;
        let mut hits: Vec<(i64, i64)> = Vec::new();
        for n1 in -b..=b {
            for n2 in -b..=b {
                if (n1, n2) != (0, 0) && rpow(x1, n1) == rpow(x2, n2) {
                    let w = if n1 < 0 || (n1 == 0 && n2 < 0) { (-n1, -n2) } else { (n1, n2) };
                    hits.push(w);
                }
            }
        }
        hits.into_iter().min_by_key(|w| (w.0.abs() + w.1.abs(), w.0, w.1))
    }

    #[test]
    fn examples() {
        assert_eq!(mult_dep_search(&q(4, 9), &q(8, 27), 4).unwrap(), Some((3, 2)));
        assert_eq!(mult_dep_search(&q(2, 1), &q(3, 1), 20).unwrap(), None);
        assert_eq!(mult_dep_search(&q(1, 1), &q(7, 5), 2).unwrap(), Some((1, 0)));
        assert_eq!(mult_dep_search(&q(-2, 1), &q(4, 1), 3).unwrap(), Some((2, 1)));
        assert_eq!(mult_dep_search(&q(4, 9), &q(8, 27), 3).unwrap(), None);
        // both (1, 1) and (1, -1) work; lex order picks (1, -1)
        assert_eq!(mult_dep_search(&q(-1, 1), &q(-1, 1), 2).unwrap(), Some((1, -1)));
    }

    #[test]
    fn independence() {
        assert!(multiplicatively_independent(&q(2, 1), &q(3, 1)).unwrap());
        assert!(!multiplicatively_independent(&q(4, 1), &q(8, 1)).unwrap());
        assert!(!multiplicatively_independent(&q(-2, 3), &q(9, 4)).unwrap());
        assert!(!multiplicatively_independent(&q(1, 1), &q(3, 1)).unwrap());
        assert!(multiplicatively_independent(&q(6, 1), &q(12, 1)).unwrap());
    }

    // Random S-rationals over {2, 3, 5}, biased toward dependent pairs.
    fn random_pair(rng: &mut ChaCha8Rng) -> (BigRat, BigRat) {
        let primes = [2i64, 3, 5];
        let base: Vec<i64> = primes.iter().map(|_| rng.gen_range(-2..=2)).collect();
        let mk = |rng: &mut ChaCha8Rng, k: i64| {
            let mut x = BigRat::one();
            for (p, &e) in primes.iter().zip(&base) {
                let extra = if rng.gen_bool(0.2) { rng.gen_range(-1..=1) } else { 0 };
                x *= rpow(&q(*p, 1), e * k + extra);
            }
            if rng.gen_bool(0.3) {
                -x
            } else {
                x
            }
        };
        let (k1, k2) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        (mk(rng, k1), mk(rng, k2))
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let (x1, x2) = random_pair(&mut rng);
            let n = rng.gen_range(1..=6);
            assert_eq!(mult_dep_search(&x1, &x2, n).unwrap(), brute(&x1, &x2, n), "{x1} {x2} {n}");
        }
    }

    proptest! {
        #[test]
        fn witness_is_a_relation(a in 1i64..200, b in 1i64..200, n in 1u64..8) {
            let (x1, x2) = (q(a, 1), q(b, 1));
            if let Some((n1, n2)) = mult_dep_search(&x1, &x2, n).unwrap() {
                prop_assert!((n1, n2) != (0, 0));
                prop_assert!(n1.abs() < n as i64 && n2.abs() < n as i64);
                prop_assert_eq!(rpow(&x1, n1), rpow(&x2, n2));
            }
        }
    }
}
