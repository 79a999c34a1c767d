//! Two-dimensional integer lattices: Hermite normal form and successive
//! minima for the sup-norm, plus the relation lattice of two primes mod `Q`.

mod relation;

pub use relation::{
    corollary_trace, ord_q, relation_lattice, subgroup_order, CorollaryRow, RelationLattice,
};

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Int;

pub type Vec2<T> = [T; 2];

pub fn sup_norm<T: Int>(v: &Vec2<T>) -> T {
    v[0].abs().max(v[1].abs())
}

/// Flip `v` so that its first nonzero coordinate is positive.
pub fn normalize_sign<T: Int>(v: &Vec2<T>) -> Vec2<T> {
    let first = if v[0].is_zero() { &v[1] } else { &v[0] };
    if first.is_negative() {
        [-v[0].clone(), -v[1].clone()]
    } else {
        v.clone()
    }
}

fn det2<T: Int>(a: &Vec2<T>, b: &Vec2<T>) -> T {
    a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone()
}

fn sub_mul<T: Int>(b: &Vec2<T>, mu: &T, a: &Vec2<T>) -> Vec2<T> {
    [b[0].clone() - mu.clone() * a[0].clone(), b[1].clone() - mu.clone() * a[1].clone()]
}

/// Successive minima of a 2-D lattice with respect to the sup-norm, with
/// attaining vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimaPair<T> {
    pub lambda1: T,
    pub lambda2: T,
    pub v1: Vec2<T>,
    pub v2: Vec2<T>,
}

impl<T: Int> MinimaPair<T> {
    /// Minkowski's second theorem for the sup-norm in the plane:
    /// `det/2 <= lambda1 * lambda2 <= det`.
    pub fn minkowski_holds(&self, det: &T) -> bool {
        let prod = self.lambda1.clone() * self.lambda2.clone();
        let two = T::one() + T::one();
        prod.clone() * two >= *det && prod <= *det
    }
}

/// A full-rank sublattice of `Z^2` given by a row basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice2<T> {
    basis: [Vec2<T>; 2],
}

impl<T: Int> Lattice2<T> {
    pub fn new(b1: Vec2<T>, b2: Vec2<T>) -> Result<Self> {
        if det2(&b1, &b2).is_zero() {
            return Err(Error::Domain("basis vectors are linearly dependent".into()));
        }
        Ok(Lattice2 { basis: [b1, b2] })
    }

    pub fn basis(&self) -> &[Vec2<T>; 2] {
        &self.basis
    }

    /// Index of the lattice in `Z^2`.
    pub fn det(&self) -> T {
        det2(&self.basis[0], &self.basis[1]).abs()
    }

    /// Hermite normal form: rows `(a, b)` and `(0, d)` with `a, d > 0` and
    /// `0 <= b < d`.
    pub fn hnf(&self) -> Lattice2<T> {
        let [r1, r2] = &self.basis;
        let e = r1[0].extended_gcd(&r2[0]);
        let g = e.gcd;
        // Unimodular: [[x, y], [r2_0/g, -r1_0/g]] has determinant -1.
        let top = [
            e.x.clone() * r1[0].clone() + e.y.clone() * r2[0].clone(),
            e.x.clone() * r1[1].clone() + e.y.clone() * r2[1].clone(),
        ];
        let c1 = r2[0].clone() / g.clone();
        let c2 = r1[0].clone() / g.clone();
        let mut d = c1.clone() * r1[1].clone() - c2.clone() * r2[1].clone();
        let (mut a, mut b) = (top[0].clone(), top[1].clone());
        if a.is_negative() {
            a = -a;
            b = -b;
        }
        if d.is_negative() {
            d = -d;
        }
        b = b.mod_floor(&d);
        Lattice2 { basis: [[a, b], [T::zero(), d]] }
    }

    pub fn contains(&self, v: &Vec2<T>) -> bool {
        let h = self.hnf();
        let [[a, b], [_, d]] = &h.basis;
        if !v[0].is_multiple_of(a) {
            return false;
        }
        let c1 = v[0].clone() / a.clone();
        (v[1].clone() - c1 * b.clone()).is_multiple_of(d)
    }

    /// Sup-norm reduced basis `(b1, b2)` with `|b1| <= |b2| <= |b2 - mu b1|`
    /// for every integer `mu` (generalized Gauss reduction).
    pub fn reduced_basis(&self) -> [Vec2<T>; 2] {
        let [mut b1, mut b2] = self.basis.clone();
        loop {
            if sup_norm(&b1) > sup_norm(&b2) {
                std::mem::swap(&mut b1, &mut b2);
            }
            let (mu, norm) = best_multiplier(&b1, &b2);
            if norm >= sup_norm(&b2) {
                return [b1, b2];
            }
            b2 = sub_mul(&b2, &mu, &b1);
        }
    }

    /// Successive minima in the sup-norm. Attaining vectors are picked among
    /// the combinations `c1 b1 + c2 b2`, `|c_i| <= 2`, of the reduced basis:
    /// the lexicographically smallest sign-normalized one of the right length.
    pub fn successive_minima(&self) -> MinimaPair<T> {
        let [b1, b2] = self.reduced_basis();
        let lambda1 = sup_norm(&b1);
        let lambda2 = sup_norm(&b2);
        let two = T::one() + T::one();
        let mut candidates = Vec::new();
        let mut c1 = -two.clone();
        while c1 <= two {
            let mut c2 = -two.clone();
            while c2 <= two {
                if !(c1.is_zero() && c2.is_zero()) {
                    let v = [
                        c1.clone() * b1[0].clone() + c2.clone() * b2[0].clone(),
                        c1.clone() * b1[1].clone() + c2.clone() * b2[1].clone(),
                    ];
                    candidates.push(normalize_sign(&v));
                }
                c2 += T::one();
            }
            c1 += T::one();
        }
        candidates.sort_by(|x, y| lex(x, y));
        let v1 = candidates
            .iter()
            .find(|v| sup_norm(v) == lambda1)
            .cloned()
            .expect("b1 is a candidate");
        let v2 = candidates
            .iter()
            .find(|v| sup_norm(v) == lambda2 && !det2(&v1, v).is_zero())
            .cloned()
            .expect("b2 is a candidate");
        MinimaPair { lambda1, lambda2, v1, v2 }
    }
}

impl<T: Int> Lattice2<T> {
    /// Shortest nonzero vector for the Euclidean norm by Lagrange-Gauss
    /// reduction, sign-normalized; ties go to the lexicographically smallest
    /// of `b1`, `b2`, `b1 + b2`, `b1 - b2`.
    pub fn euclidean_shortest(&self) -> Vec2<T> {
        let [mut b1, mut b2] = self.basis.clone();
        if norm2(&b1) > norm2(&b2) {
            std::mem::swap(&mut b1, &mut b2);
        }
        loop {
            // mu = round(<b1, b2> / <b1, b1>)
            let num = dot(&b1, &b2);
            let den = norm2(&b1);
            let two = T::one() + T::one();
            let mu = (num * two.clone() + den.clone()).div_floor(&(den * two));
            b2 = sub_mul(&b2, &mu, &b1);
            if norm2(&b2) >= norm2(&b1) {
                break;
            }
            std::mem::swap(&mut b1, &mut b2);
        }
        let best = norm2(&b1);
        let plus = [b1[0].clone() + b2[0].clone(), b1[1].clone() + b2[1].clone()];
        let minus = [b1[0].clone() - b2[0].clone(), b1[1].clone() - b2[1].clone()];
        let mut ties: Vec<Vec2<T>> = [b1, b2, plus, minus]
            .iter()
            .filter(|v| norm2(v) == best)
            .map(normalize_sign)
            .collect();
        ties.sort_by(lex);
        ties.swap_remove(0)
    }
}

fn dot<T: Int>(a: &Vec2<T>, b: &Vec2<T>) -> T {
    a[0].clone() * b[0].clone() + a[1].clone() * b[1].clone()
}

fn norm2<T: Int>(a: &Vec2<T>) -> T {
    dot(a, a)
}

fn lex<T: Int>(x: &Vec2<T>, y: &Vec2<T>) -> Ordering {
    x[0].cmp(&y[0]).then_with(|| x[1].cmp(&y[1]))
}

/// Integer `mu` minimizing `|b2 - mu b1|_sup`, with that norm. Ties prefer
/// `mu = 0`, then smaller `|mu|`, then smaller `mu`.
fn best_multiplier<T: Int>(b1: &Vec2<T>, b2: &Vec2<T>) -> (T, T) {
    // The objective is convex and piecewise linear in real mu; its breakpoints
    // are where a coordinate vanishes or where two coordinates tie in
    // absolute value. The integer optimum is next to one of them.
    let mut breakpoints: Vec<(T, T)> = Vec::with_capacity(4);
    let (x1, y1, x2, y2) = (&b1[0], &b1[1], &b2[0], &b2[1]);
    if !x1.is_zero() {
        breakpoints.push((x2.clone(), x1.clone()));
    }
    if !y1.is_zero() {
        breakpoints.push((y2.clone(), y1.clone()));
    }
    if x1 != y1 {
        breakpoints.push((x2.clone() - y2.clone(), x1.clone() - y1.clone()));
    }
    if x1.clone() + y1.clone() != T::zero() {
        breakpoints.push((x2.clone() + y2.clone(), x1.clone() + y1.clone()));
    }
    let mut best_mu = T::zero();
    let mut best_norm = sup_norm(b2);
    for (num, den) in breakpoints {
        let lo = num.div_floor(&den);
        let hi = lo.clone() + T::one();
        for mu in [lo, hi] {
            let norm = sup_norm(&sub_mul(b2, &mu, b1));
            let better = match norm.cmp(&best_norm) {
                Ordering::Less => true,
                Ordering::Equal => {
                    !best_mu.is_zero()
                        && (mu.abs() < best_mu.abs() || (mu.abs() == best_mu.abs() && mu < best_mu))
                }
                Ordering::Greater => false,
            };
            if better {
                best_mu = mu;
                best_norm = norm;
            }
        }
    }
    (best_mu, best_norm)
}
