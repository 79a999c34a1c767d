use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use super::constants::Constants;
use super::instance::{classify, GcdInstance, Verdict};
use crate::arith::{cmp_log_ratios, PlaceSet};
use crate::error::{Error, Result};
use crate::BigRat;

/// All `S`-smooth positive integers `<= hmax`, ascending.
pub fn smooth_numbers(places: &PlaceSet, hmax: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for &p in places.finite() {
        let mut next = Vec::new();
        for &x in &out {
            let mut y = x;
            loop {
                next.push(y);
                match y.checked_mul(p) {
                    Some(z) if z <= hmax => y = z,
                    _ => break,
                }
            }
        }
        out = next;
    }
    out.retain(|&x| x <= hmax);
    out.sort_unstable();
    out
}

#[derive(Debug, Clone)]
pub struct ScanSpec {
    pub places: PlaceSet,
    pub epsilon: BigRat,
    pub hmax: u64,
    pub amax: u64,
    pub cthreshold: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct T2Row {
    pub inst: GcdInstance,
    pub h: BigInt,
    pub qgcd: BigInt,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct T2Scan {
    pub constants: Constants,
    /// Instances meeting the gcd hypothesis, in enumeration order.
    pub rows: Vec<T2Row>,
    /// Octuples passing the coprimality hypotheses (before the gcd filter).
    pub admissible: u64,
    pub counts: BTreeMap<&'static str, usize>,
    /// `(Q_gcd, H)` maximizing `log Q_gcd / log H` over rows not in (c);
    /// ties keep the earliest row.
    pub max_eps: Option<(BigInt, BigInt)>,
}

fn coeff_range(places: &PlaceSet, amax: u64) -> Vec<i64> {
    let amax = amax as i64;
    (-amax..=amax)
        .filter(|&a| a != 0 && places.finite().iter().all(|&p| a % p as i64 != 0))
        .collect()
}

/// `q >= h^(n/d)` as `q^d >= h^n`, with machine integers when they fit.
fn gcd_gate(q: u64, h: u64, eps: &BigRat) -> bool {
    if q == 0 {
        return false;
    }
    if h == 1 {
        return true;
    }
    if q == 1 {
        return false;
    }
    let n = eps.numer().try_into().unwrap_or(u32::MAX);
    let d = eps.denom().try_into().unwrap_or(u32::MAX);
    match ((q as u128).checked_pow(d), (h as u128).checked_pow(n)) {
        (Some(l), Some(r)) => l >= r,
        _ => num_traits::pow(BigInt::from(q), d as usize) >= num_traits::pow(BigInt::from(h), n as usize),
    }
}

/// Every octuple with `s_i, t_i <= hmax` smooth and `0 < |a_i|, |b_i| <= amax`
/// free of `S_f` primes, meeting the coprimality hypotheses and
/// `Q_gcd >= H^eps`, classified. Enumeration order: `(s1, t1, s2, t2)`
/// ascending, then `(a1, b1, a2, b2)` lexicographic.
pub fn theorem2_scan(spec: &ScanSpec) -> Result<T2Scan> {
    let constants = Constants::for_epsilon(&spec.epsilon)?;
    if spec.hmax.checked_mul(spec.amax).map_or(true, |x| x > 1 << 40) {
        return Err(Error::Domain("hmax * amax too large for a desk-scale scan".into()));
    }
    let units = smooth_numbers(&spec.places, spec.hmax);
    let st: Vec<(u64, u64)> = units
        .iter()
        .flat_map(|&s| units.iter().map(move |&t| (s, t)))
        .filter(|(s, t)| s.gcd(t) == 1)
        .collect();
    let cs = coeff_range(&spec.places, spec.amax);
    let ab: Vec<(i64, i64)> = cs
        .iter()
        .flat_map(|&a| cs.iter().map(move |&b| (a, b)))
        .filter(|(a, b)| a.gcd(b) == 1)
        .collect();

    let per_outer: Vec<(u64, Vec<[i64; 8]>)> = st
        .par_iter()
        .map(|&(s1, t1)| {
            let mut admissible = 0u64;
            let mut hits = Vec::new();
            for &(s2, t2) in &st {
                let h = s1.max(t1).max(s2).max(t2);
                for &(a1, b1) in &ab {
                    // gcd(a s, b t) = 1 also needs gcd(a, t) = gcd(b, s) = 1
                    if (a1.unsigned_abs()).gcd(&t1) != 1 || (b1.unsigned_abs()).gcd(&s1) != 1 {
                        continue;
                    }
                    let d1 = a1 as i128 * s1 as i128 - b1 as i128 * t1 as i128;
                    for &(a2, b2) in &ab {
                        if (a2.unsigned_abs()).gcd(&t2) != 1 || (b2.unsigned_abs()).gcd(&s2) != 1 {
                            continue;
                        }
                        admissible += 1;
                        let d2 = a2 as i128 * s2 as i128 - b2 as i128 * t2 as i128;
                        let q = d1.gcd(&d2) as u64;
                        if gcd_gate(q, h, &spec.epsilon) {
                            hits.push([a1, b1, a2, b2, s1 as i64, t1 as i64, s2 as i64, t2 as i64]);
                        }
                    }
                }
            }
            (admissible, hits)
        })
        .collect();

    let admissible = per_outer.iter().map(|(a, _)| a).sum();
    let octuples: Vec<[i64; 8]> = per_outer.into_iter().flat_map(|(_, h)| h).collect();
    let rows = octuples
        .par_iter()
        .map(|&o| {
            let inst = GcdInstance::from_i64(o, spec.places.clone());
            let verdict = classify(&inst, &constants, &spec.cthreshold)?;
            Ok(T2Row { h: inst.h(), qgcd: inst.qgcd(), inst, verdict })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut counts = BTreeMap::new();
    let mut max_eps: Option<(BigInt, BigInt)> = None;
    for row in &rows {
        *counts.entry(row.verdict.tag()).or_insert(0) += 1;
        if matches!(row.verdict, Verdict::MultDep { .. }) || row.h < BigInt::from(2) {
            continue;
        }
        let better = match &max_eps {
            None => true,
            Some((q, h)) => cmp_log_ratios(&row.qgcd, &row.h, q, h) == Some(Ordering::Greater),
        };
        if better {
            max_eps = Some((row.qgcd.clone(), row.h.clone()));
        }
    }
    Ok(T2Scan { constants, rows, admissible, counts, max_eps })
}
