//! The `x p, x q` action on `Z/QZ`: the window set `B(beta, Q)`, canonical
//! representatives of short orbit segments, return sets and collinearity.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::is_prime_u64;
use crate::error::{Error, Result};
use crate::modular::{mul_mod, pow_mod_signed, reduce_signed};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitParams {
    pub p: u64,
    pub q: u64,
    pub modulus: u64,
    pub beta: Ratio<u64>,
    pub k: u64,
}

impl OrbitParams {
    pub fn new(p: u64, q: u64, modulus: u64, beta: Ratio<u64>, k: u64) -> Result<OrbitParams> {
        if !is_prime_u64(p) || !is_prime_u64(q) || p == q {
            return Err(Error::Domain(format!("p, q must be distinct primes, got {p}, {q}")));
        }
        if modulus < 2 || modulus % p == 0 || modulus % q == 0 {
            return Err(Error::Domain(format!("Q = {modulus} must be >= 2 and coprime to {p}*{q}")));
        }
        if beta.is_zero() || beta >= Ratio::one() {
            return Err(Error::Domain(format!("beta = {beta} must lie in (0, 1)")));
        }
        if k == 0 {
            return Err(Error::Domain("K must be positive".into()));
        }
        Ok(OrbitParams { p, q, modulus, beta, k })
    }

    /// `floor(Q^beta)`: integers `x` satisfy `|x| <= Q^beta` iff `|x| <= W`.
    pub fn window(&self) -> u64 {
        let (n, d) = (*self.beta.numer(), *self.beta.denom());
        let qn = BigUint::from(self.modulus).pow(n as u32);
        qn.nth_root(d as u32).to_u64().expect("window fits in u64")
    }

    /// Largest `e` with `base^e <= Q^K`.
    pub fn exponent_bound(&self, base: u64) -> i64 {
        let cap = BigUint::from(self.modulus).pow(self.k as u32);
        let b = BigUint::from(base);
        let mut e = 0i64;
        let mut acc = b.clone();
        while acc <= cap {
            e += 1;
            acc *= &b;
        }
        e
    }

    fn coprime_pq(&self, x: u64) -> bool {
        x % self.p != 0 && x % self.q != 0
    }

    fn lift(&self, x: i64) -> u64 {
        reduce_signed(x, self.modulus)
    }
}

/// Largest `e` with `base^e <= w`.
fn window_exponent(base: u64, w: u64) -> i64 {
    let mut e = 0;
    let mut acc = base as u128;
    while acc <= w as u128 {
        e += 1;
        acc *= base as u128;
    }
    e
}

/// `B(beta, Q)`: residues with a lift in `[-Q^beta, Q^beta]` coprime to `pq`.
pub fn b_set(params: &OrbitParams) -> BTreeSet<u64> {
    let w = params.window().min(params.modulus);
    (1..=w)
        .filter(|&x| params.coprime_pq(x))
        .flat_map(|x| [params.lift(x as i64), params.lift(-(x as i64))])
        .collect()
}

/// Residues having a nonzero lift in the window.
pub fn windowed_residues(params: &OrbitParams) -> BTreeSet<u64> {
    let w = params.window().min(params.modulus);
    (1..=w)
        .flat_map(|x| [params.lift(x as i64), params.lift(-(x as i64))])
        .filter(|&r| r != 0)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CanonicalRep {
    pub a_prime: u64,
    pub m: i64,
    pub n: i64,
}

/// Write `a = p^m q^n a'` with `a'` in `B(beta, Q)` by stripping `p` and `q`
/// from the smallest lift of `a` in the window (ties go to the positive lift).
pub fn canonical_rep(a: u64, params: &OrbitParams) -> Result<CanonicalRep> {
    let modulus = params.modulus as i64;
    let w = params.window() as i64;
    let r = (a % params.modulus) as i64;
    let mut lifts: Vec<i64> = Vec::new();
    let mut x = r - modulus * ((r + w) / modulus);
    while x <= w {
        if x >= -w && x != 0 {
            lifts.push(x);
        }
        x += modulus;
    }
    let lift = lifts
        .into_iter()
        .min_by_key(|x| (x.abs(), *x < 0))
        .ok_or_else(|| Error::Domain(format!("{a} has no nonzero lift in [-{w}, {w}] mod {modulus}")))?;
    let mut rest = lift.abs();
    let (mut m, mut n) = (0, 0);
    while rest % params.p as i64 == 0 {
        rest /= params.p as i64;
        m += 1;
    }
    while rest % params.q as i64 == 0 {
        rest /= params.q as i64;
        n += 1;
    }
    let a_prime = params.lift(rest * lift.signum());
    Ok(CanonicalRep { a_prime, m, n })
}

/// Whether every windowed residue has exactly one decomposition
/// `(a', m', n')` with `a'` in `B` and `p^|m'|, q^|n'| <= Q^beta`.
pub fn uniqueness_check(params: &OrbitParams) -> Result<bool> {
    if params.beta >= Ratio::new(1, 3) {
        return Err(Error::Precondition(format!("uniqueness needs beta < 1/3, got {}", params.beta)));
    }
    let counts = decomposition_counts(params)?;
    Ok(counts.values().all(|&c| c == 1) && counts.len() == windowed_residues(params).len())
}

fn decomposition_counts(params: &OrbitParams) -> Result<BTreeMap<u64, usize>> {
    let w = params.window();
    let (em, en) = (window_exponent(params.p, w), window_exponent(params.q, w));
    let windowed = windowed_residues(params);
    let b = b_set(params);
    let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
    for m in -em..=em {
        let pm = pow_mod_signed(params.p, m, params.modulus)?;
        for n in -en..=en {
            let u = mul_mod(pm, pow_mod_signed(params.q, n, params.modulus)?, params.modulus);
            for &a in &b {
                let target = mul_mod(u, a, params.modulus);
                if windowed.contains(&target) {
                    *counts.entry(target).or_default() += 1;
                }
            }
        }
    }
    Ok(counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReturnRecord {
    pub m: i64,
    pub n: i64,
    pub a: u64,
    pub b: u64,
}

/// All `(m, n, a, b)` with `p^|m|, q^|n| <= Q^K`, `a, b` in `B` and
/// `p^m q^n a = b mod Q`, sorted.
pub fn return_set(params: &OrbitParams) -> Result<Vec<ReturnRecord>> {
    let b = b_set(params);
    let (mk, nk) = (params.exponent_bound(params.p), params.exponent_bound(params.q));
    let mut out = Vec::new();
    for m in -mk..=mk {
        let pm = pow_mod_signed(params.p, m, params.modulus)?;
        for n in -nk..=nk {
            let u = mul_mod(pm, pow_mod_signed(params.q, n, params.modulus)?, params.modulus);
            for &a in &b {
                let target = mul_mod(u, a, params.modulus);
                if b.contains(&target) {
                    out.push(ReturnRecord { m, n, a, b: target });
                }
            }
        }
    }
    Ok(out)
}

/// The distinct exponent pairs of a return set.
pub fn pairs(records: &[ReturnRecord]) -> BTreeSet<(i64, i64)> {
    records.iter().map(|r| (r.m, r.n)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Collinearity {
    Empty,
    Point((i64, i64)),
    /// `point + t * direction`, direction primitive with first nonzero
    /// coordinate positive; `point` is the smallest input point.
    Line { point: (i64, i64), direction: (i64, i64) },
    NotCollinear,
}

impl Collinearity {
    pub fn is_collinear(&self) -> bool {
        !matches!(self, Collinearity::NotCollinear)
    }
}

/// Affine collinearity of a finite point set.
pub fn is_collinear(points: &BTreeSet<(i64, i64)>) -> Collinearity {
    let mut it = points.iter();
    let Some(&p0) = it.next() else {
        return Collinearity::Empty;
    };
    let Some(&p1) = it.next() else {
        return Collinearity::Point(p0);
    };
    let (dx, dy) = (p1.0 - p0.0, p1.1 - p0.1);
    let ok = points
        .iter()
        .all(|&(x, y)| (x - p0.0) as i128 * dy as i128 == (y - p0.1) as i128 * dx as i128);
    if !ok {
        return Collinearity::NotCollinear;
    }
    let g = dx.gcd(&dy);
    let (mut dx, mut dy) = (dx / g, dy / g);
    if dx < 0 || (dx == 0 && dy < 0) {
        dx = -dx;
        dy = -dy;
    }
    Collinearity::Line { point: p0, direction: (dx, dy) }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanRow {
    pub modulus: u64,
    pub b_size: usize,
    pub records: usize,
    pub pairs: usize,
    pub collinearity: Collinearity,
}

impl ScanRow {
    pub fn empty_b(&self) -> bool {
        self.b_size == 0
    }

    pub fn flagged(&self) -> bool {
        !self.collinearity.is_collinear()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem1Scan {
    pub rows: Vec<ScanRow>,
    /// Moduli in range sharing a factor with `pq`.
    pub skipped: usize,
}

impl Theorem1Scan {
    pub fn flagged(&self) -> Vec<u64> {
        self.rows.iter().filter(|r| r.flagged()).map(|r| r.modulus).collect()
    }
}

/// The `beta` for which the line statement is asserted: `1/(147 K)`.
pub fn default_beta(k: u64) -> Ratio<u64> {
    Ratio::new(1, 147 * k)
}

/// Return sets and collinearity for every `Q` in `qmin..=qmax` coprime to `pq`.
pub fn theorem1_scan(
    p: u64,
    q: u64,
    k: u64,
    beta: Ratio<u64>,
    qmin: u64,
    qmax: u64,
) -> Result<Theorem1Scan> {
    let qmin = qmin.max(2);
    let moduli: Vec<u64> = (qmin..=qmax).filter(|m| m % p != 0 && m % q != 0).collect();
    let skipped = (qmax + 1).saturating_sub(qmin) as usize - moduli.len();
    let rows = moduli
        .par_iter()
        .map(|&modulus| {
            let params = OrbitParams::new(p, q, modulus, beta, k)?;
            let b_size = b_set(&params).len();
            let records = return_set(&params)?;
            let pts = pairs(&records);
            Ok(ScanRow {
                modulus,
                b_size,
                records: records.len(),
                pairs: pts.len(),
                collinearity: is_collinear(&pts),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Theorem1Scan { rows, skipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(p: u64, q: u64, modulus: u64, n: u64, d: u64, k: u64) -> OrbitParams {
        OrbitParams::new(p, q, modulus, Ratio::new(n, d), k).unwrap()
    }

    // Independent oracle: all lifts in [-Q, Q] tested with real powers
    // cleared of denominators.
    fn brute_b(pr: &OrbitParams) -> BTreeSet<u64> {
        let (n, d) = (*pr.beta.numer() as u32, *pr.beta.denom() as u32);
        let cap = BigUint::from(pr.modulus).pow(n);
        let m = pr.modulus as i64;
        (-m..=m)
            .filter(|x| *x != 0 && x.gcd(&((pr.p * pr.q) as i64)) == 1)
            .filter(|x| BigUint::from(x.unsigned_abs()).pow(d) <= cap)
            .map(|x| x.rem_euclid(m) as u64)
            .collect()
    }

    #[test]
    fn b_set_examples() {
        assert_eq!(b_set(&params(2, 3, 7, 1, 2, 1)), BTreeSet::from([1, 6]));
        assert_eq!(b_set(&params(2, 3, 101, 2, 5, 1)), BTreeSet::from([1, 5, 96, 100]));
        assert!(!b_set(&params(2, 3, 101, 2, 5, 1)).contains(&0));
    }

    #[test]
    fn canonical_rep_examples() {
        let c = canonical_rep(2, &params(2, 3, 101, 3, 10, 1)).unwrap();
        assert_eq!((c.a_prime, c.m, c.n), (1, 1, 0));
        let c = canonical_rep(3, &params(2, 3, 101, 2, 5, 1)).unwrap();
        assert_eq!((c.a_prime, c.m, c.n), (1, 0, 1));
        let c = canonical_rep(1, &params(2, 3, 101, 2, 5, 1)).unwrap();
        assert_eq!((c.a_prime, c.m, c.n), (1, 0, 0));
        assert!(canonical_rep(50, &params(2, 3, 101, 2, 5, 1)).is_err());
        assert!(canonical_rep(0, &params(2, 3, 101, 2, 5, 1)).is_err());
    }

    #[test]
    fn uniqueness_examples() {
        assert!(uniqueness_check(&params(2, 3, 101, 3, 10, 1)).unwrap());
        let _ = uniqueness_check(&params(2, 3, 35, 3, 10, 1)).unwrap();
        assert!(uniqueness_check(&params(2, 3, 101, 1, 3, 1)).is_err());
    }

    #[test]
    fn return_set_q5() {
        let recs = return_set(&params(2, 3, 5, 1, 4, 1)).unwrap();
        let expect = BTreeSet::from([(0, 0), (2, 0), (-2, 0), (1, 1), (-1, -1), (1, -1), (-1, 1)]);
        assert_eq!(pairs(&recs), expect);
        assert_eq!(is_collinear(&pairs(&recs)), Collinearity::NotCollinear);
        for r in &recs {
            assert!(recs.contains(&ReturnRecord { m: -r.m, n: -r.n, a: r.b, b: r.a }));
        }
    }

    #[test]
    fn collinearity_examples() {
        let line = is_collinear(&BTreeSet::from([(0, 0), (1, 1), (2, 2)]));
        assert_eq!(line, Collinearity::Line { point: (0, 0), direction: (1, 1) });
        assert!(!is_collinear(&BTreeSet::from([(0, 0), (1, 0), (0, 1)])).is_collinear());
        assert!(is_collinear(&BTreeSet::new()).is_collinear());
        assert!(is_collinear(&BTreeSet::from([(4, -1)])).is_collinear());
        let l = is_collinear(&BTreeSet::from([(3, 0), (-1, 2)]));
        assert_eq!(l, Collinearity::Line { point: (-1, 2), direction: (2, -1) });
    }

    #[test]
    fn scan_flags_q5() {
        let scan = theorem1_scan(2, 3, 1, Ratio::new(1, 4), 2, 40).unwrap();
        assert!(scan.flagged().contains(&5));
        assert!(scan.rows.windows(2).all(|w| w[0].modulus < w[1].modulus));
        assert_eq!(scan.skipped + scan.rows.len(), 39);
        // +-1 always lie in B, so B is never empty
        let tiny = theorem1_scan(2, 3, 1, default_beta(1), 5, 5).unwrap();
        assert_eq!(tiny.rows[0].b_size, 2);
        assert!(!tiny.rows[0].empty_b());
    }

    #[test]
    fn b_set_matches_brute_force() {
        for modulus in (2..400u64).filter(|m| m % 2 != 0 && m % 3 != 0) {
            for (n, d) in [(1, 2), (2, 5), (1, 4), (3, 10), (1, 147), (9, 10)] {
                let pr = params(2, 3, modulus, n, d, 1);
                assert_eq!(b_set(&pr), brute_b(&pr), "Q={modulus} beta={n}/{d}");
            }
        }
    }

    #[test]
    fn canonical_rep_sound_for_windowed_residues() {
        for modulus in (5..2000u64).filter(|m| m % 2 != 0 && m % 3 != 0) {
            let pr = params(2, 3, modulus, 3, 10, 1);
            let b = b_set(&pr);
            let w = pr.window();
            for a in windowed_residues(&pr) {
                let c = canonical_rep(a, &pr).unwrap();
                assert!(b.contains(&c.a_prime));
                assert!(2u64.pow(c.m as u32) <= w && 3u64.pow(c.n as u32) <= w);
                let u = mul_mod(
                    pow_mod_signed(2, c.m, modulus).unwrap(),
                    pow_mod_signed(3, c.n, modulus).unwrap(),
                    modulus,
                );
                assert_eq!(mul_mod(u, c.a_prime, modulus), a);
            }
        }
    }

    proptest! {
        #[test]
        fn beta_monotone(modulus in 5u64..3000, n1 in 1u64..10, n2 in 1u64..10) {
            prop_assume!(modulus % 2 != 0 && modulus % 3 != 0);
            let (lo, hi) = (n1.min(n2), n1.max(n2));
            let small = params(2, 3, modulus, lo, 11, 1);
            let big = params(2, 3, modulus, hi, 11, 1);
            prop_assert!(b_set(&small).is_subset(&b_set(&big)));
            let rs: BTreeSet<_> = return_set(&small).unwrap().into_iter().collect();
            let rb: BTreeSet<_> = return_set(&big).unwrap().into_iter().collect();
            prop_assert!(rs.is_subset(&rb));
        }

        #[test]
        fn return_set_symmetric(modulus in 5u64..5000, n in 1u64..6) {
            prop_assume!(modulus % 2 != 0 && modulus % 3 != 0);
            let recs = return_set(&params(2, 3, modulus, n, 12, 1)).unwrap();
            let set: BTreeSet<_> = recs.iter().copied().collect();
            for r in &recs {
                let mirror = ReturnRecord { m: -r.m, n: -r.n, a: r.b, b: r.a };
                prop_assert!(set.contains(&mirror));
            }
        }

        #[test]
        fn collinearity_translation_invariant(
            pts in proptest::collection::btree_set((-20i64..20, -20i64..20), 0..6),
            tx in -50i64..50, ty in -50i64..50,
        ) {
            let moved: BTreeSet<_> = pts.iter().map(|&(x, y)| (x + tx, y + ty)).collect();
            let swapped: BTreeSet<_> = pts.iter().map(|&(x, y)| (y, x)).collect();
            let c = is_collinear(&pts).is_collinear();
            prop_assert_eq!(c, is_collinear(&moved).is_collinear());
            prop_assert_eq!(c, is_collinear(&swapped).is_collinear());
        }
    }
}
