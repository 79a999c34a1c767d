use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::lemma::{lemma_diff, LemmaDiff};
use super::poly::{psi_forms, Poly2};
use super::report::{Check, CheckStatus};
use super::t2::power_row;
use crate::arith::{cmp_power, v_abs, Place, PlaceSet, RatPower};
use crate::error::{Error, Result};
use crate::gcdlab::{Constants, GcdInstance};
use crate::BigRat;

type Idx = (usize, usize);

/// A polynomial together with an instance whose point lies on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveInstance {
    pub poly: Poly2,
    pub inst: GcdInstance,
    pub d1: usize,
    pub d2: usize,
    /// Smallest `j2` with `alpha_{0, j2} != 0`.
    pub i: usize,
    /// Largest `j2` with `alpha_{d1, j2} != 0`.
    pub k: usize,
}

impl CurveInstance {
    /// Irreducibility is not required: the basis argument only uses
    /// `alpha_{d1,k} != 0` and `alpha_{0,i} != 0`.
    pub fn new(poly: Poly2, inst: GcdInstance, n: usize) -> Result<CurveInstance> {
        inst.validate()?;
        let (d1, d2) = (poly.d1(), poly.d2());
        if d1 == 0 || d2 == 0 {
            return Err(Error::Domain(format!("polynomial {poly} has degree 0 in a variable")));
        }
        if d1 >= n || d2 >= n {
            return Err(Error::Domain(format!("degrees ({d1}, {d2}) exceed N - 1 = {}", n.saturating_sub(1))));
        }
        let col0: Vec<usize> = poly.terms().filter(|(j, _)| j.0 == 0).map(|(j, _)| j.1).collect();
        let row0 = poly.terms().any(|(j, _)| j.1 == 0);
        let (Some(&i), true) = (col0.iter().min(), row0) else {
            return Err(Error::Domain(format!("{poly} is divisible by x1 or x2")));
        };
        let k = poly.terms().filter(|(j, _)| j.0 == d1).map(|(j, _)| j.1).max().expect("degree d1 attained");
        if !poly.eval(&inst.x1(), &inst.x2()).is_zero() {
            return Err(Error::Precondition(format!("({}, {}) is not on {poly}", inst.x1(), inst.x2())));
        }
        Ok(CurveInstance { poly, inst, d1, d2, i, k })
    }

    pub fn shift(&self) -> (usize, isize) {
        (self.d1, self.k as isize - self.i as isize)
    }
}

/// The `2 d1 x 2 d2` integer point on the curve's linear span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TildeP4 {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<BigInt>,
}

impl TildeP4 {
    pub fn get(&self, l: Idx) -> &BigInt {
        &self.entries[l.0 * self.cols + l.1]
    }

    pub fn grid(&self) -> Vec<Vec<BigInt>> {
        self.entries.chunks(self.cols).map(|r| r.to_vec()).collect()
    }

    fn rect(&self) -> impl Iterator<Item = Idx> + '_ {
        (0..self.rows).flat_map(move |a| (0..self.cols).map(move |b| (a, b)))
    }
}

pub fn build_tilde_p4(ci: &CurveInstance) -> Result<TildeP4> {
    let inst = &ci.inst;
    let (rows, cols) = (2 * ci.d1, 2 * ci.d2);
    let u = power_row(&(&inst.a1 * &inst.s1), &(&inst.b1 * &inst.t1), rows);
    let w = power_row(&(&inst.a2 * &inst.s2), &(&inst.b2 * &inst.t2), cols);
    let y = TildeP4 { rows, cols, entries: u.iter().flat_map(|x| w.iter().map(move |z| x * z)).collect() };
    for f in psi_forms(&ci.poly)? {
        if !f.eval(|a, b| BigRat::from_integer(y.get((a, b)).clone())).is_zero() {
            return Err(Error::Invariant(format!("form Psi_{:?} does not vanish on the point", f.m)));
        }
    }
    Ok(y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Selection {
    Form1,
    Form2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormSets {
    pub form1: BTreeSet<Idx>,
    pub form2: BTreeSet<Idx>,
    pub a: BTreeSet<Idx>,
    pub b: BTreeSet<Idx>,
    pub selection: BTreeMap<Place, Selection>,
    pub places: PlaceSet,
}

impl FormSets {
    pub fn selected(&self, v: Place) -> &BTreeSet<Idx> {
        match self.selection[&v] {
            Selection::Form1 => &self.form1,
            Selection::Form2 => &self.form2,
        }
    }
}

fn rank(mut m: Vec<Vec<BigRat>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &pivot;
            for j in c..cols {
                let t = &f * &m[r][j];
                m[i][j] -= t;
            }
        }
        r += 1;
    }
    r
}

/// Whether the coordinate forms on `set` restrict to a basis of the dual
/// of `{Psi = 0}`: the stacked system must have full rank.
fn spans_dual(ci: &CurveInstance, set: &BTreeSet<Idx>, rows: usize, cols: usize) -> Result<bool> {
    let dim = rows * cols;
    let mut m = Vec::new();
    for f in psi_forms(&ci.poly)? {
        let mut row = vec![BigRat::zero(); dim];
        for (l, c) in &f.terms {
            row[l.0 * cols + l.1] = c.clone();
        }
        m.push(row);
    }
    for l in set {
        let mut row = vec![BigRat::zero(); dim];
        row[l.0 * cols + l.1] = BigRat::one();
        m.push(row);
    }
    Ok(rank(m) == dim)
}

pub fn form_sets_p4(ci: &CurveInstance, y: &TildeP4, places: &PlaceSet) -> Result<FormSets> {
    let (d1, d2, i, k) = (ci.d1, ci.d2, ci.i, ci.k);
    let rect: Vec<Idx> = y.rect().collect();
    let form1: BTreeSet<Idx> =
        rect.iter().copied().filter(|&(a, b)| !(a >= d1 && (k..k + d2).contains(&b))).collect();
    let form2: BTreeSet<Idx> =
        rect.iter().copied().filter(|&(a, b)| !(a < d1 && (i..i + d2).contains(&b))).collect();
    let a: BTreeSet<Idx> = form1.intersection(&form2).copied().collect();
    let b: BTreeSet<Idx> = form1.difference(&form2).copied().collect();

    let (s1, s2) = ci.shift();
    let shifted: BTreeSet<Idx> = b.iter().map(|&(x, z)| (x + s1, (z as isize + s2) as usize)).collect();
    let disjoint = a.is_disjoint(&b) && a.is_disjoint(&shifted) && b.is_disjoint(&shifted);
    if !disjoint || a.len() + b.len() + shifted.len() != rect.len() {
        return Err(Error::Invariant("index rectangle is not A + B + (B + shift)".into()));
    }
    for set in [&form1, &form2] {
        if set.len() != 3 * d1 * d2 {
            return Err(Error::Invariant(format!("form set has {} elements, want {}", set.len(), 3 * d1 * d2)));
        }
        if !spans_dual(ci, set, y.rows, y.cols)? {
            return Err(Error::Invariant("coordinate forms are not a basis of the dual space".into()));
        }
    }

    let (top, bottom) = (BigRat::from_integer(y.get((d1, k)).clone()), BigRat::from_integer(y.get((0, i)).clone()));
    let mut selection = BTreeMap::new();
    for v in places.places() {
        let pick = if v_abs(&top, v)? >= v_abs(&bottom, v)? { Selection::Form1 } else { Selection::Form2 };
        selection.insert(v, pick);
    }
    Ok(FormSets { form1, form2, a, b, selection, places: places.clone() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct P4Certificate {
    pub d1: usize,
    pub d2: usize,
    pub i: usize,
    pub k: usize,
    pub sets: FormSets,
    /// `prod_v prod_{l in L_v} |y_l|_v`.
    pub product: BigRat,
    pub lemma: Vec<LemmaDiff<BigInt>>,
    pub checks: Vec<Check>,
}

fn rat(n: u64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

fn pow_h(h: &BigInt, e: BigRat) -> RatPower {
    RatPower::of_int(h, e).expect("H >= 1")
}

/// Check the chain behind the `H^(-delta d1 d2)` bound. A pair in `B` with
/// equal entries is a multiplicative relation between the coordinates.
pub fn product_bound_p4(ci: &CurveInstance, y: &TildeP4, sets: &FormSets, c: &Constants) -> Result<P4Certificate> {
    let inst = &ci.inst;
    let (d1, d2) = (ci.d1, ci.d2);
    let (s1, s2) = ci.shift();
    let partner = |l: Idx| (l.0 + s1, (l.1 as isize + s2) as usize);
    for &l in &sets.b {
        if y.get(l) == y.get(partner(l)) {
            return Err(Error::MultiplicativeDependence { left: l, right: partner(l) });
        }
    }
    let q = inst.qgcd();
    if q.is_zero() {
        return Err(Error::Precondition("gcd of the differences is 0".into()));
    }
    let places = &sets.places;

    let mut abs: BTreeMap<(Place, Idx), BigRat> = BTreeMap::new();
    for v in places.places() {
        for l in y.rect() {
            abs.insert((v, l), v_abs(&BigRat::from_integer(y.get(l).clone()), v)?);
        }
    }
    let mut direct = BigRat::one();
    let mut split = BigRat::one();
    let mut all = BigRat::one();
    for v in places.places() {
        for l in sets.selected(v) {
            direct *= &abs[&(v, *l)];
        }
        for l in &sets.a {
            split *= &abs[&(v, *l)];
        }
        for l in &sets.b {
            let (x, z) = (&abs[&(v, *l)], &abs[&(v, partner(*l))]);
            split *= if x < z { x } else { z };
        }
        for l in y.rect() {
            all *= &abs[&(v, l)];
        }
    }
    if direct != split {
        return Err(Error::Invariant(format!("selected product {direct} differs from the A/B split {split}")));
    }

    let lemma = sets
        .b
        .iter()
        .map(|&l| lemma_diff(y.get(l), y.get(partner(l)), &q, places))
        .collect::<Result<Vec<_>>>()?;
    let mut checks = Vec::new();
    let held = lemma.iter().filter(|r| r.holds).count();
    let mut lc = Check::le("lemma", &rat((lemma.len() - held) as u64), &BigRat::zero())
        .with_note(format!("{held}/{} pairs", lemma.len()));
    lc.lhs = format!("{}", lemma.len() - held);
    lc.rhs = "0".into();
    checks.push(lc);

    let two_over_q = num_traits::pow(BigRat::new(BigInt::from(2), q.abs()), sets.b.len());
    checks.push(Check::le("i", &direct, &(two_over_q * &all)));

    let h = inst.h();
    let spread = rat((2 * d1 + 2 * d2 - 2) as u64);
    let coeff_ok = inst.coeff_gate(&c.alpha);
    if coeff_ok {
        let worst = y
            .rect()
            .map(|l| places.places().map(|v| abs[&(v, l)].clone()).fold(BigRat::one(), |a, b| a * b))
            .max()
            .expect("nonempty");
        checks.push(Check::le_pow("ii", &worst, &pow_h(&h, &spread * &c.alpha)).with_note("largest entry"));
    } else {
        checks.push(Check::not_applicable("ii", "max |a_i|, |b_i| > H^alpha".into()));
    }

    let delta = c.two_delta_p4(d1, d2) / rat(2);
    let mut gates = Vec::new();
    if !inst.gcd_hypothesis(&c.epsilon) {
        gates.push("Q < H^eps".to_string());
    }
    if !coeff_ok {
        gates.push("max |a_i|, |b_i| > H^alpha".to_string());
    }
    if !delta.is_positive() {
        gates.push("delta <= 0".to_string());
    } else if cmp_power(&rat(2), &pow_h(&h, delta.clone())) == std::cmp::Ordering::Greater {
        gates.push("2 > H^delta".to_string());
    }
    if gates.is_empty() {
        checks.push(Check::le_pow("iii", &direct, &pow_h(&h, -(&delta * rat((d1 * d2) as u64)))));
    } else {
        checks.push(Check::not_applicable("iii", gates.join("; ")));
    }

    if coeff_ok {
        let height = sets
            .selected(Place::Infinity)
            .iter()
            .map(|&l| y.get(l).abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        let e = spread * (BigRat::one() + &c.alpha);
        checks.push(Check::le_pow("iv", &BigRat::from_integer(height), &pow_h(&h, e)));
    } else {
        checks.push(Check::not_applicable("iv", "max |a_i|, |b_i| > H^alpha".into()));
    }
    debug_assert!(checks.iter().all(|c| c.status != CheckStatus::Degenerate));

    Ok(P4Certificate { d1, d2, i: ci.i, k: ci.k, sets: sets.clone(), product: direct, lemma, checks })
}

pub fn certify_p4(ci: &CurveInstance, c: &Constants) -> Result<P4Certificate> {
    let y = build_tilde_p4(ci)?;
    let sets = form_sets_p4(ci, &y, &ci.inst.reduced_places())?;
    product_bound_p4(ci, &y, &sets, c)
}
