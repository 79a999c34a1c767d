use std::collections::{HashMap, VecDeque};

use num_integer::Integer;
use rayon::prelude::*;

use super::{sup_norm, Lattice2, MinimaPair};
use crate::error::{Error, Result};
use crate::modular::{mul_mod, mult_order, pow_mod_signed};

fn check_generators(p: u64, q: u64, modulus: u64) -> Result<()> {
    if modulus < 2 {
        return Err(Error::Domain(format!("modulus must be >= 2, got {modulus}")));
    }
    if p < 2 || q < 2 {
        return Err(Error::Domain(format!("generators must be >= 2, got {p}, {q}")));
    }
    if (p as u128 * q as u128).gcd(&(modulus as u128)) != 1 {
        return Err(Error::Domain(format!("gcd({}, {modulus}) != 1", p as u128 * q as u128)));
    }
    Ok(())
}

/// `{(m, n) : p^m q^n = 1 mod Q}` in Hermite normal form; its index in
/// `Z^2` is the order of the subgroup generated by `p` and `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationLattice {
    pub p: u64,
    pub q: u64,
    pub modulus: u64,
    pub lattice: Lattice2<i64>,
    pub det: u64,
}

/// Build the relation lattice. With `ord_q` the order of `q`, the second
/// HNF row is `(0, ord_q)`; the first is `(m0, n0)` where `m0` is the least
/// positive exponent with `p^m0` in `<q>`.
pub fn relation_lattice(p: u64, q: u64, modulus: u64) -> Result<RelationLattice> {
    check_generators(p, q, modulus)?;
    let ord_q = mult_order(q as i64, modulus)?;
    let mut logs: HashMap<u64, u64> = HashMap::with_capacity(ord_q as usize);
    let mut acc = 1u64;
    for e in 0..ord_q {
        logs.insert(acc, e);
        acc = mul_mod(acc, q, modulus);
    }
    let mut m0 = 1u64;
    let mut pm = p % modulus;
    let n0 = loop {
        if let Some(&e) = logs.get(&pm) {
            break (ord_q - e) % ord_q;
        }
        pm = mul_mod(pm, p, modulus);
        m0 += 1;
    };
    let lattice = Lattice2::new([m0 as i64, n0 as i64], [0, ord_q as i64])?.hnf();
    let det = lattice.det() as u64;
    Ok(RelationLattice { p, q, modulus, lattice, det })
}

/// `|<p, q>|` in `(Z/QZ)*` by breadth-first closure from `1`.
pub fn subgroup_order(p: u64, q: u64, modulus: u64) -> Result<u64> {
    check_generators(p, q, modulus)?;
    let mut seen = vec![false; modulus as usize];
    let mut queue = VecDeque::from([1 % modulus]);
    seen[(1 % modulus) as usize] = true;
    let mut count = 1u64;
    while let Some(x) = queue.pop_front() {
        for g in [p, q] {
            let y = mul_mod(x, g, modulus);
            if !seen[y as usize] {
                seen[y as usize] = true;
                count += 1;
                queue.push_back(y);
            }
        }
    }
    Ok(count)
}

/// `ord(Q)` computed as the lattice index and by subgroup enumeration;
/// disagreement is an invariant violation.
pub fn ord_q(p: u64, q: u64, modulus: u64) -> Result<u64> {
    let lat = relation_lattice(p, q, modulus)?;
    let direct = subgroup_order(p, q, modulus)?;
    if lat.det != direct {
        return Err(Error::Invariant(format!(
            "ord({modulus}): lattice index {} != subgroup size {direct}",
            lat.det
        )));
    }
    Ok(direct)
}

impl RelationLattice {
    pub fn contains(&self, m: i64, n: i64) -> bool {
        let pm = pow_mod_signed(self.p, m, self.modulus).expect("p is a unit");
        let qn = pow_mod_signed(self.q, n, self.modulus).expect("q is a unit");
        mul_mod(pm, qn, self.modulus) == 1 % self.modulus
    }

    /// Whether both HNF rows are relations.
    pub fn basis_is_valid(&self) -> bool {
        self.lattice.basis().iter().all(|r| self.contains(r[0], r[1]))
    }

    pub fn minima(&self) -> MinimaPair<i64> {
        self.lattice.successive_minima()
    }

    /// Every nonzero lattice vector of length `lambda1` satisfies
    /// `p^|m| q^|n| >= Q`. Returns the number of vectors checked on success
    /// and `None` if some vector violates the bound.
    pub fn lambda1_lower_bound_check(&self) -> Option<usize> {
        let lambda1 = self.minima().lambda1;
        let [[a, b], [_, d]] = *self.lattice.basis();
        let mut checked = 0;
        let mut m = -(lambda1 / a) * a;
        while m <= lambda1 {
            let base = ((m / a) * b).rem_euclid(d);
            let mut n = (base + lambda1).rem_euclid(d) - lambda1;
            while n <= lambda1 {
                if (m, n) != (0, 0) && sup_norm(&[m, n]) == lambda1 {
                    checked += 1;
                    if !power_product_at_least(self.p, m, self.q, n, self.modulus) {
                        return None;
                    }
                }
                n += d;
            }
            m += a;
        }
        Some(checked)
    }
}

fn power_product_at_least(p: u64, m: i64, q: u64, n: i64, bound: u64) -> bool {
    let mut acc: u128 = 1;
    let target = bound as u128;
    for (g, e) in [(p, m.unsigned_abs()), (q, n.unsigned_abs())] {
        for _ in 0..e {
            acc *= g as u128;
            if acc >= target {
                return true;
            }
        }
    }
    acc >= target
}

/// One row of the trace of `ord(Q) / (log Q)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryRow {
    pub modulus: u64,
    pub ord: u64,
    /// Display only.
    pub ratio: f64,
    /// Minimum of `ratio` over rows with `modulus >= q0` up to this one.
    pub running_min: Option<f64>,
}

/// `ord(Q)` and `ord(Q)/(ln Q)^2` for every `2 <= Q <= qmax` coprime to
/// `pq`, in increasing `Q`.
pub fn corollary_trace(p: u64, q: u64, qmax: u64, q0: u64) -> Result<Vec<CorollaryRow>> {
    let moduli: Vec<u64> = (2..=qmax).filter(|m| (p * q).gcd(m) == 1).collect();
    let ords: Vec<u64> = moduli
        .par_iter()
        .map(|&m| ord_q(p, q, m))
        .collect::<Result<_>>()?;
    let mut running: Option<f64> = None;
    Ok(moduli
        .into_iter()
        .zip(ords)
        .map(|(modulus, ord)| {
            let ln = (modulus as f64).ln();
            let ratio = ord as f64 / (ln * ln);
            if modulus >= q0 {
                running = Some(running.map_or(ratio, |r| r.min(ratio)));
            }
            CorollaryRow { modulus, ord, ratio, running_min: running }
        })
        .collect())
}
