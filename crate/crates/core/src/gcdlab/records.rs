use num_bigint::{BigInt, BigUint};
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use super::multdep::multiplicatively_independent;
use crate::error::{Error, Result};
use crate::lattice::{sup_norm, Lattice2};
use crate::BigRat;

#[derive(Debug, Clone, PartialEq)]
pub struct GcdRecord {
    pub n: u64,
    pub g: BigUint,
    /// Strictly larger than every earlier `g`.
    pub record: bool,
    /// Display-only `log log g / (log n / log log n)`, for `n >= 3`, `g >= 2`.
    pub statistic: Option<f64>,
}

fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().expect("below f64 range").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("64 bits").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `g_n = gcd(a^n - 1, b^n - 1)` for `n = 1..=nmax`, with running records.
pub fn extremal_gcd_search(a: u64, b: u64, nmax: u64) -> Result<Vec<GcdRecord>> {
    if a < 2 || b < 2 {
        return Err(Error::Domain(format!("need a, b >= 2, got {a}, {b}")));
    }
    let (xa, xb) = (BigRat::from_integer(BigInt::from(a)), BigRat::from_integer(BigInt::from(b)));
    if !multiplicatively_independent(&xa, &xb)? {
        return Err(Error::Domain(format!("{a} and {b} are multiplicatively dependent")));
    }
    let gs: Vec<BigUint> = (1..=nmax)
        .into_par_iter()
        .map(|n| {
            let an = BigUint::from(a).pow(n as u32) - 1u32;
            let bn = BigUint::from(b).pow(n as u32) - 1u32;
            an.gcd(&bn)
        })
        .collect();
    let mut best = BigUint::from(0u32);
    let mut out = Vec::with_capacity(gs.len());
    for (i, g) in gs.into_iter().enumerate() {
        let n = i as u64 + 1;
        let record = g > best;
        if record {
            best = g.clone();
        }
        let statistic = (n >= 3 && g > BigUint::one()).then(|| {
            let ln_n = (n as f64).ln();
            ln_big(&g).ln() / (ln_n / ln_n.ln())
        });
        out.push(GcdRecord { n, g, record, statistic });
    }
    Ok(out)
}

fn ceil_sqrt(q: u64) -> i128 {
    let r = q.sqrt();
    if r * r == q {
        r as i128
    } else {
        r as i128 + 1
    }
}

/// `(a, b) != 0` with `Q | a s - b` and `|a|, |b| <= ceil(sqrt Q)`: the
/// Euclidean-shortest vector of `{(a, b) : a s = b mod Q}`, or the sup-norm
/// shortest vector should the former exceed the bound.
pub fn box_witness(modulus: u64, s: i64) -> Result<(i64, i64)> {
    if modulus < 2 {
        return Err(Error::Domain(format!("Q must be >= 2, got {modulus}")));
    }
    if (s as i128).gcd(&(modulus as i128)) != 1 {
        return Err(Error::Domain(format!("gcd({s}, {modulus}) != 1")));
    }
    let s = (s as i128).rem_euclid(modulus as i128);
    let lattice = Lattice2::new([1i128, s], [0, modulus as i128])?;
    let bound = ceil_sqrt(modulus);
    let mut v = lattice.euclidean_shortest();
    if sup_norm(&v) > bound {
        v = lattice.successive_minima().v1;
    }
    if sup_norm(&v) > bound {
        return Err(Error::Invariant(format!("box witness {v:?} exceeds {bound} for Q = {modulus}")));
    }
    Ok((v[0] as i64, v[1] as i64))
}
