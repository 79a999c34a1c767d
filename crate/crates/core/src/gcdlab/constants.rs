use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::BigRat;

/// `eps`, `N` and `alpha` together with the two conditions the proof relies on:
/// `(N+1) eps > 2 N^2 alpha + 4` and `eps > 16 (N-1) alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constants {
    pub epsilon: BigRat,
    pub n: u64,
    pub alpha: BigRat,
    pub cond1: bool,
    pub cond2: bool,
}

fn rat(n: u64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

impl Constants {
    /// `N = floor(32 / (7 eps))`, `alpha = 7 eps^2 / 512`.
    pub fn for_epsilon(epsilon: &BigRat) -> Result<Constants> {
        if !epsilon.is_positive() {
            return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
        }
        let n = (rat(32) / (rat(7) * epsilon))
            .floor()
            .to_integer()
            .to_u64()
            .ok_or_else(|| Error::Domain(format!("N overflows for epsilon {epsilon}")))?;
        let alpha = rat(7) * epsilon * epsilon / rat(512);
        Constants::custom(epsilon, n, &alpha)
    }

    /// Check a user-supplied triple; a triple failing either condition is
    /// rejected.
    pub fn custom(epsilon: &BigRat, n: u64, alpha: &BigRat) -> Result<Constants> {
        if !epsilon.is_positive() || !alpha.is_positive() {
            return Err(Error::Domain(format!("need eps, alpha > 0, got {epsilon}, {alpha}")));
        }
        let nn = rat(n);
        let cond1 = (&nn + BigRat::one()) * epsilon > rat(2) * &nn * &nn * alpha + rat(4);
        let cond2 = n >= 1 && *epsilon > rat(16) * (&nn - BigRat::one()) * alpha;
        if !(cond1 && cond2) {
            return Err(Error::ConstantsRejected {
                epsilon: epsilon.to_string(),
                n,
                alpha: alpha.to_string(),
                cond1,
                cond2,
            });
        }
        Ok(Constants { epsilon: epsilon.clone(), n, alpha: alpha.clone(), cond1, cond2 })
    }

    /// `2 delta = (N^2 - 1) eps - 2 (N-1) N^2 alpha - 4 (N-1)`.
    pub fn two_delta_t2(&self) -> BigRat {
        let nn = rat(self.n);
        let n2 = &nn * &nn;
        (&n2 - BigRat::one()) * &self.epsilon
            - rat(2) * (&nn - BigRat::one()) * &n2 * &self.alpha
            - rat(4) * (&nn - BigRat::one())
    }

    /// `2 delta = eps - 8 (d1 + d2 - 1) alpha` for a curve of bidegree `(d1, d2)`.
    pub fn two_delta_p4(&self, d1: usize, d2: usize) -> BigRat {
        &self.epsilon - rat(8) * rat((d1 + d2) as u64 - 1) * &self.alpha
    }

    /// `N` as a `usize`, for indexing.
    pub fn dim(&self) -> usize {
        self.n as usize
    }
}

/// Parse `"n/d"` or `"n"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRat> {
    let bad = || Error::Domain(format!("not a rational: {s:?}"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    let g = n.gcd(&d);
    Ok(BigRat::new(n / &g, d / g))
}
