use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::constants::Constants;
use super::multdep::mult_dep_search;
use crate::arith::{cmp_power, is_smooth, PlaceSet, RatPower};
use crate::error::{Error, Result};
use crate::BigRat;

/// An octuple `(a1, b1, a2, b2, s1, t1, s2, t2)` over a place set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GcdInstance {
    pub a1: BigInt,
    pub b1: BigInt,
    pub a2: BigInt,
    pub b2: BigInt,
    pub s1: BigInt,
    pub t1: BigInt,
    pub s2: BigInt,
    pub t2: BigInt,
    pub places: PlaceSet,
}

impl GcdInstance {
    /// Coefficients `[a1, b1, a2, b2]` and units `[s1, t1, s2, t2]`; no
    /// validation (see [`GcdInstance::hypothesis_violation`]).
    pub fn new(coeffs: [BigInt; 4], units: [BigInt; 4], places: PlaceSet) -> GcdInstance {
        let [a1, b1, a2, b2] = coeffs;
        let [s1, t1, s2, t2] = units;
        GcdInstance { a1, b1, a2, b2, s1, t1, s2, t2, places }
    }

    pub fn from_i64(v: [i64; 8], places: PlaceSet) -> GcdInstance {
        let b = |i: usize| BigInt::from(v[i]);
        GcdInstance::new([b(0), b(1), b(2), b(3)], [b(4), b(5), b(6), b(7)], places)
    }

    pub fn coeffs(&self) -> [&BigInt; 4] {
        [&self.a1, &self.b1, &self.a2, &self.b2]
    }

    pub fn units(&self) -> [&BigInt; 4] {
        [&self.s1, &self.t1, &self.s2, &self.t2]
    }

    /// The first failed standing hypothesis, if any: nonzero coefficients
    /// free of `S_f` primes, `S`-smooth units, and
    /// `gcd(a1 s1, b1 t1) = gcd(a2 s2, b2 t2) = 1`.
    pub fn hypothesis_violation(&self) -> Option<String> {
        let names = ["a1", "b1", "a2", "b2"];
        for (name, a) in names.iter().zip(self.coeffs()) {
            if a.is_zero() {
                return Some(format!("{name} = 0"));
            }
            if let Some(p) = self.places.finite().iter().find(|&&p| (a % p).is_zero()) {
                return Some(format!("{name} = {a} is divisible by {p}"));
            }
        }
        let names = ["s1", "t1", "s2", "t2"];
        for (name, s) in names.iter().zip(self.units()) {
            if !is_smooth(s, &self.places) {
                return Some(format!("{name} = {s} is not an S-unit for S = {}", self.places));
            }
        }
        if !(&self.a1 * &self.s1).gcd(&(&self.b1 * &self.t1)).is_one() {
            return Some("gcd(a1 s1, b1 t1) != 1".into());
        }
        if !(&self.a2 * &self.s2).gcd(&(&self.b2 * &self.t2)).is_one() {
            return Some("gcd(a2 s2, b2 t2) != 1".into());
        }
        None
    }

    pub fn validate(&self) -> Result<()> {
        match self.hypothesis_violation() {
            Some(r) => Err(Error::Precondition(r)),
            None => Ok(()),
        }
    }

    /// `H = max(s1, t1, s2, t2)`.
    pub fn h(&self) -> BigInt {
        self.units().into_iter().max().expect("four units").clone()
    }

    pub fn diffs(&self) -> (BigInt, BigInt) {
        (&self.a1 * &self.s1 - &self.b1 * &self.t1, &self.a2 * &self.s2 - &self.b2 * &self.t2)
    }

    /// `gcd(a1 s1 - b1 t1, a2 s2 - b2 t2)` with `gcd(0, x) = |x|`.
    pub fn qgcd(&self) -> BigInt {
        let (d1, d2) = self.diffs();
        d1.gcd(&d2)
    }

    /// `x1 = a1 s1 / (b1 t1)`.
    pub fn x1(&self) -> BigRat {
        BigRat::new(&self.a1 * &self.s1, &self.b1 * &self.t1)
    }

    /// `x2 = a2 s2 / (b2 t2)`.
    pub fn x2(&self) -> BigRat {
        BigRat::new(&self.a2 * &self.s2, &self.b2 * &self.t2)
    }

    pub fn coeff_max_abs(&self) -> BigInt {
        self.coeffs().into_iter().map(|a| a.abs()).max().expect("four coefficients")
    }

    pub fn coeff_max_signed(&self) -> BigInt {
        self.coeffs().into_iter().max().expect("four coefficients").clone()
    }

    /// Whether `Q_gcd >= H^eps`, exactly.
    pub fn gcd_hypothesis(&self, epsilon: &BigRat) -> bool {
        let q = self.qgcd();
        if q.is_zero() {
            return false;
        }
        let hp = RatPower::of_int(&self.h(), epsilon.clone()).expect("H >= 1");
        cmp_power(&BigRat::from_integer(q), &hp) != Ordering::Less
    }

    /// Whether `max |a_i|, |b_i| <= H^alpha`.
    pub fn coeff_gate(&self, alpha: &BigRat) -> bool {
        let hp = RatPower::of_int(&self.h(), alpha.clone()).expect("H >= 1");
        cmp_power(&BigRat::from_integer(self.coeff_max_abs()), &hp) != Ordering::Greater
    }

    /// `S` without the primes dividing `Q_gcd`; such primes cannot divide
    /// any unit, so the instance stays admissible over the smaller set.
    pub fn reduced_places(&self) -> PlaceSet {
        let q = self.qgcd();
        if q.is_zero() {
            return self.places.clone();
        }
        let drop: Vec<u64> =
            self.places.finite().iter().copied().filter(|&p| (&q % p).is_zero()).collect();
        self.places.without(&drop)
    }

    /// Display-only `log Q_gcd / log H`.
    pub fn eps_actual_display(&self) -> Option<f64> {
        let (q, h) = (self.qgcd(), self.h());
        if q.is_zero() || h <= BigInt::one() {
            return None;
        }
        let lq = crate::arith::log2_approx(&BigRat::from_integer(q));
        let lh = crate::arith::log2_approx(&BigRat::from_integer(h));
        Some(lq / lh)
    }
}

impl fmt::Display for GcdInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {} {} {} {} |",
            self.a1, self.b1, self.a2, self.b2, self.s1, self.t1, self.s2, self.t2
        )?;
        for p in self.places.finite() {
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// (a): `H <= C`.
    HSmall,
    /// (b): `max |a_i|, |b_i| >= H^alpha`.
    CoeffLarge,
    /// (c): `x1^n1 = x2^n2` with `|n_i| <= N - 1`.
    MultDep { n1: i64, n2: i64 },
    HypothesisFail(String),
    BoundViolation,
}

impl Verdict {
    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::HSmall => "a",
            Verdict::CoeffLarge => "b",
            Verdict::MultDep { .. } => "c",
            Verdict::HypothesisFail(_) => "hypothesis-fail",
            Verdict::BoundViolation => "bound-violation",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::MultDep { n1, n2 } => write!(f, "c({n1},{n2})"),
            Verdict::HypothesisFail(r) => write!(f, "hypothesis-fail({r})"),
            other => f.write_str(other.tag()),
        }
    }
}

/// Classify an instance: hypotheses (including `Q_gcd >= H^eps`), then
/// items (a), (b), (c) in that order. An instance meeting the hypotheses
/// and none of the items is a `BoundViolation`.
pub fn classify(inst: &GcdInstance, c: &Constants, cthreshold: &BigInt) -> Result<Verdict> {
    if let Some(reason) = inst.hypothesis_violation() {
        return Ok(Verdict::HypothesisFail(reason));
    }
    if !inst.gcd_hypothesis(&c.epsilon) {
        return Ok(Verdict::HypothesisFail(format!(
            "gcd {} < H^eps with H = {}, eps = {}",
            inst.qgcd(),
            inst.h(),
            c.epsilon
        )));
    }
    if inst.h() <= *cthreshold {
        return Ok(Verdict::HSmall);
    }
    let hp = RatPower::of_int(&inst.h(), c.alpha.clone())?;
    if cmp_power(&BigRat::from_integer(inst.coeff_max_abs()), &hp) != Ordering::Less {
        return Ok(Verdict::CoeffLarge);
    }
    let n = c.n.to_i64().expect("N fits");
    if let Some((n1, n2)) = mult_dep_search(&inst.x1(), &inst.x2(), n as u64)? {
        return Ok(Verdict::MultDep { n1, n2 });
    }
    Ok(Verdict::BoundViolation)
}
