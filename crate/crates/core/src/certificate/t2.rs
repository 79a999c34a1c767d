use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::report::Check;
use crate::arith::{valuation_big, Place, PlaceSet, RatPower};
use crate::error::{Error, Result};
use crate::gcdlab::{Constants, GcdInstance};
use crate::BigRat;

/// The auxiliary point: entry `(l1, l2)` is
/// `(a1 s1)^l1 (b1 t1)^(N-1-l1) (a2 s2)^l2 (b2 t2)^(N-1-l2) / Q`.
/// Numerators are stored; all entries share the denominator `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TildeT2 {
    pub n: usize,
    pub qgcd: BigInt,
    /// Row-major `N x N` numerators.
    pub num: Vec<BigInt>,
    /// `S` with the primes dividing `Q` removed.
    pub places: PlaceSet,
}

impl TildeT2 {
    pub fn numerator(&self, l1: usize, l2: usize) -> &BigInt {
        &self.num[l1 * self.n + l2]
    }

    pub fn entry(&self, l1: usize, l2: usize) -> BigRat {
        BigRat::new(self.numerator(l1, l2).clone(), self.qgcd.clone())
    }

    pub fn entries(&self) -> Vec<Vec<BigRat>> {
        (0..self.n).map(|l1| (0..self.n).map(|l2| self.entry(l1, l2)).collect()).collect()
    }

    /// Same as [`minimal_indices`] on [`TildeT2::entries`], on numerators:
    /// the common denominator has no prime in `S_f`.
    pub fn minimal_indices(&self) -> MinIndexMap {
        let mut out = MinIndexMap::new();
        for v in self.places.places() {
            let key = |l: (usize, usize)| -> BigInt {
                let x = self.numerator(l.0, l.1);
                match v {
                    Place::Infinity => x.abs(),
                    Place::Finite(p) => -BigInt::from(valuation_big(x, p)),
                }
            };
            let mut best = ((0, 0), key((0, 0)));
            for l in self.indices().skip(1) {
                let k = key(l);
                if k < best.1 {
                    best = (l, k);
                }
            }
            out.insert(v, best.0);
        }
        out
    }

    fn indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |l1| (0..self.n).map(move |l2| (l1, l2)))
    }
}

/// `u_l = x^l y^(len-1-l)` for `l = 0..len`.
pub(crate) fn power_row(x: &BigInt, y: &BigInt, len: usize) -> Vec<BigInt> {
    (0..len)
        .map(|l| num_traits::pow(x.clone(), l) * num_traits::pow(y.clone(), len - 1 - l))
        .collect()
}

/// Build the point and verify that all pairwise differences are integers.
pub fn build_tilde_t2(inst: &GcdInstance, n: usize) -> Result<TildeT2> {
    inst.validate()?;
    if n == 0 {
        return Err(Error::Domain("N must be positive".into()));
    }
    let q = inst.qgcd();
    if q.is_zero() {
        return Err(Error::Precondition("gcd of the differences is 0".into()));
    }
    let u = power_row(&(&inst.a1 * &inst.s1), &(&inst.b1 * &inst.t1), n);
    let w = power_row(&(&inst.a2 * &inst.s2), &(&inst.b2 * &inst.t2), n);
    let num: Vec<BigInt> = u.iter().flat_map(|x| w.iter().map(move |y| x * y)).collect();
    let first = &num[0];
    if let Some(pos) = num.iter().position(|x| !((x - first) % &q).is_zero()) {
        return Err(Error::Invariant(format!(
            "entry {:?} differs from entry (0, 0) by a non-integer",
            (pos / n, pos % n)
        )));
    }
    Ok(TildeT2 { n, qgcd: q, num, places: inst.reduced_places() })
}

pub type MinIndexMap = BTreeMap<Place, (usize, usize)>;

fn abs_v(x: &BigRat, v: Place) -> Result<BigRat> {
    crate::arith::v_abs(x, v)
}

/// For each place, the lexicographically first index minimizing `|y|_v`.
pub fn minimal_indices(grid: &[Vec<BigRat>], places: &PlaceSet) -> Result<MinIndexMap> {
    let mut out = MinIndexMap::new();
    for v in places.places() {
        let mut best: Option<(BigRat, (usize, usize))> = None;
        for (l1, row) in grid.iter().enumerate() {
            for (l2, y) in row.iter().enumerate() {
                let a = abs_v(y, v)?;
                if best.as_ref().map_or(true, |(b, _)| a < *b) {
                    best = Some((a, (l1, l2)));
                }
            }
        }
        let (_, idx) = best.ok_or_else(|| Error::Domain("empty matrix".into()))?;
        out.insert(v, idx);
    }
    Ok(out)
}

/// A positive rational `num/den * prod p^e` with `num`, `den` free of the
/// primes `p` in `S_f`, so that lowest terms only need `gcd(num, den)`.
#[derive(Debug, Clone)]
struct SValue {
    num: BigInt,
    den: BigInt,
    exps: BTreeMap<u64, i64>,
}

impl SValue {
    fn div(&self, other: &SValue) -> SValue {
        let mut exps = self.exps.clone();
        for (&p, &e) in &other.exps {
            *exps.entry(p).or_insert(0) -= e;
        }
        SValue { num: &self.num * &other.den, den: &self.den * &other.num, exps }
    }

    /// Multiply by `num * p^e`, `e >= 0`; `num` must be free of `S`-primes.
    fn scale(mut self, num: &BigInt, p: u64, e: i64) -> SValue {
        self.num *= num;
        match self.exps.get_mut(&p) {
            Some(x) => *x += e,
            None => self.num *= num_traits::pow(BigInt::from(p), e as usize),
        }
        self
    }

    /// `gcd(num, den)` after one Euclidean step: one side is usually tens of
    /// thousands of bits longer than the other.
    fn to_rat(&self) -> BigRat {
        let (small, big) = if self.num.bits() < self.den.bits() { (&self.num, &self.den) } else { (&self.den, &self.num) };
        let g = small.gcd(&(big % small));
        let (mut num, mut den) = (&self.num / &g, &self.den / &g);
        for (&p, &e) in &self.exps {
            let pw = num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize);
            if e >= 0 {
                num *= pw;
            } else {
                den *= pw;
            }
        }
        BigRat::new_raw(num, den)
    }
}

/// Accumulates `prod |x/Q|_v` over places without forming intermediate
/// rationals. `S`-primes are split off the Archimedean part as they arrive.
#[derive(Debug, Clone)]
struct AbsProduct {
    inf: BigInt,
    q_power: usize,
    exps: BTreeMap<u64, i64>,
}

impl AbsProduct {
    fn new(places: &PlaceSet) -> AbsProduct {
        let exps = places.finite().iter().map(|&p| (p, 0)).collect();
        AbsProduct { inf: BigInt::one(), q_power: 0, exps }
    }

    /// Multiply by `|x / Q|_v`, where `Q` has no prime factor in `S_f`.
    fn push(&mut self, x: &BigInt, v: Place) {
        match v {
            Place::Infinity => {
                let mut x = x.abs();
                for (&p, e) in self.exps.iter_mut() {
                    let k = valuation_big(&x, p);
                    if k > 0 {
                        x /= num_traits::pow(BigInt::from(p), k as usize);
                        *e += k as i64;
                    }
                }
                self.inf *= x;
                self.q_power += 1;
            }
            Place::Finite(p) => {
                *self.exps.get_mut(&p).expect("place in S") -= valuation_big(x, p) as i64;
            }
        }
    }

    fn value(&self, q: &BigInt) -> SValue {
        SValue { num: self.inf.clone(), den: num_traits::pow(q.abs(), self.q_power), exps: self.exps.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct T2Certificate {
    pub n: usize,
    pub places: PlaceSet,
    pub idx: MinIndexMap,
    /// `prod_v prod_{l != idx(v)} |y_l - y_idx(v)|_v`.
    pub pi: BigRat,
    pub checks: Vec<Check>,
}

fn rat(n: u64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

fn pow_h(h: &BigInt, e: BigRat) -> RatPower {
    RatPower::of_int(h, e).expect("H >= 1")
}

/// Compute the form product and verify the chain (i)-(v). A coordinate
/// equal to the pivot at some place makes a form vanish: `DegenerateForm`.
pub fn form_product_t2(
    inst: &GcdInstance,
    y: &TildeT2,
    idx: &MinIndexMap,
    c: &Constants,
) -> Result<T2Certificate> {
    let n = y.n;
    let q = &y.qgcd;
    let h = inst.h();
    let n2 = (n * n) as u64;
    let places: Vec<Place> = y.places.places().collect();

    let mut pi = AbsProduct::new(&y.places);
    let mut all = AbsProduct::new(&y.places);
    let mut pivots = AbsProduct::new(&y.places);
    for &v in &places {
        let pivot = idx[&v];
        let pv = y.numerator(pivot.0, pivot.1);
        pivots.push(pv, v);
        for l in y.indices() {
            let yl = y.numerator(l.0, l.1);
            all.push(yl, v);
            if l == pivot {
                continue;
            }
            let d = yl - pv;
            if d.is_zero() {
                return Err(Error::DegenerateForm { place: v.to_string(), index: l, pivot });
            }
            pi.push(&d, v);
        }
    }
    // differences are integers: |(y_l - y_p)|_v with the Q in the denominator
    // is handled by value(q) at infinity only
    let pi_val = pi.value(q).to_rat();
    let all_val = all.value(q);

    let mut checks = Vec::new();
    let two_pow = num_traits::pow(rat(2), (n2 - 1) as usize);

    // (i) C_v = 1 at finite places, 2 at infinity
    let rhs = all_val.div(&pivots.value(q)).scale(&BigInt::one(), 2, n2 as i64 - 1).to_rat();
    checks.push(Check::le("i", &pi_val, &rhs));

    // (ii) numerator bound, needs the coefficient gate
    let coeff_ok = inst.coeff_gate(&c.alpha);
    let nn = rat(n as u64);
    let e2 = rat(2) * (&nn - BigRat::one()) * rat(n2) * &c.alpha;
    if coeff_ok {
        let lhs = all_val.scale(&num_traits::pow(q.abs(), n2 as usize), 2, 0).to_rat();
        checks.push(Check::le_pow("ii", &lhs, &pow_h(&h, e2)).with_note("scaled by Q^(N^2)"));
    } else {
        checks.push(Check::not_applicable("ii", "max |a_i|, |b_i| > H^alpha".into()));
    }

    // (iii) denominator: infinity, finite places, and the H bound
    let inf_pivot = y.entry(idx[&Place::Infinity].0, idx[&Place::Infinity].1).abs();
    checks.push(Check::ge("iii.inf", &inf_pivot, &BigRat::new(BigInt::one(), q.clone())));
    let units: BigInt = inst.units().into_iter().product();
    let units_pow = num_traits::pow(units, n - 1);
    let mut fin_lhs = BigRat::one();
    let mut fin_rhs = BigRat::one();
    let mut per_place_ok = true;
    for &v in places.iter().filter(|v| v.is_finite()) {
        let pivot = idx[&v];
        let a = abs_v(&y.entry(pivot.0, pivot.1), v)?;
        let b = abs_v(&BigRat::from_integer(units_pow.clone()), v)?;
        per_place_ok &= a >= b;
        fin_lhs *= a;
        fin_rhs *= b;
    }
    let mut fin = Check::ge("iii.fin", &fin_lhs, &fin_rhs);
    if !per_place_ok {
        fin = fin.with_note("a per-place bound fails");
        fin.status = super::CheckStatus::Fail;
    }
    checks.push(fin);
    let h_bound = pow_h(&h, -rat(4) * (&nn - BigRat::one()));
    checks.push(Check::ge_pow("iii.height", &fin_rhs, &h_bound));

    // (iv) the H^-delta bound behind all three largeness gates
    let gcd_ok = inst.gcd_hypothesis(&c.epsilon);
    let delta = c.two_delta_t2() / rat(2);
    let mut gates = Vec::new();
    if !gcd_ok {
        gates.push("Q < H^eps".to_string());
    }
    if !coeff_ok {
        gates.push("max |a_i|, |b_i| > H^alpha".to_string());
    }
    if !delta.is_positive() {
        gates.push("delta <= 0".to_string());
    } else if crate::arith::cmp_power(&two_pow, &pow_h(&h, delta.clone())) == std::cmp::Ordering::Greater {
        gates.push(format!("2^{} > H^delta", n2 - 1));
    }
    if gates.is_empty() {
        checks.push(Check::le_pow("iv", &pi_val, &pow_h(&h, -delta)));
    } else {
        checks.push(Check::not_applicable("iv", gates.join("; ")));
    }

    // (v) height of the integer vector Lambda^(0)(y), Lambda^(0) = Lambda^(inf)
    let pivot = idx[&Place::Infinity];
    let pv = y.numerator(pivot.0, pivot.1);
    let height = y
        .indices()
        .filter(|&l| l != pivot)
        .map(|l| ((y.numerator(l.0, l.1) - pv) / q).abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    if gcd_ok && coeff_ok {
        let e = rat(2) * (BigRat::one() + &c.alpha) * (&nn - BigRat::one());
        checks.push(Check::le_pow("v", &BigRat::from_integer(height), &pow_h(&h, e)));
    } else {
        checks.push(Check::not_applicable("v", "needs Q >= H^eps and max |a_i|, |b_i| <= H^alpha".into()));
    }

    Ok(T2Certificate { n, places: y.places.clone(), idx: idx.clone(), pi: pi_val, checks })
}

/// Build, select pivots and verify, with `N` from the constants.
pub fn certify_t2(inst: &GcdInstance, c: &Constants) -> Result<T2Certificate> {
    certify_t2_with_n(inst, c, c.dim())
}

pub(crate) fn certify_t2_with_n(inst: &GcdInstance, c: &Constants, n: usize) -> Result<T2Certificate> {
    let y = build_tilde_t2(inst, n)?;
    let idx = y.minimal_indices();
    form_product_t2(inst, &y, &idx, c)
}
