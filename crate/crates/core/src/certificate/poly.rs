use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gcdlab::parse_rational;
use crate::BigRat;

/// A polynomial in `x1, x2` with rational coefficients; only nonzero
/// coefficients are stored, keyed by `(j1, j2)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    coeffs: BTreeMap<(usize, usize), BigRat>,
}

impl Poly2 {
    pub fn new(terms: impl IntoIterator<Item = ((usize, usize), BigRat)>) -> Poly2 {
        let mut p = Poly2::default();
        for (j, c) in terms {
            p.add_term(j, c);
        }
        p
    }

    fn add_term(&mut self, j: (usize, usize), c: BigRat) {
        let e = self.coeffs.entry(j).or_insert_with(BigRat::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&j);
        }
    }

    pub fn coeff(&self, j1: usize, j2: usize) -> BigRat {
        self.coeffs.get(&(j1, j2)).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &BigRat)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `x1`.
    pub fn d1(&self) -> usize {
        self.coeffs.keys().map(|j| j.0).max().unwrap_or(0)
    }

    /// Degree in `x2`.
    pub fn d2(&self) -> usize {
        self.coeffs.keys().map(|j| j.1).max().unwrap_or(0)
    }

    pub fn eval(&self, x1: &BigRat, x2: &BigRat) -> BigRat {
        self.coeffs
            .iter()
            .map(|(&(j1, j2), c)| c * num_traits::pow(x1.clone(), j1) * num_traits::pow(x2.clone(), j2))
            .fold(BigRat::zero(), |a, b| a + b)
    }
}

/// `j1:j2:c` terms separated by `;`, e.g. `1:1:1;0:0:-1` for `x1 x2 - 1`.
impl FromStr for Poly2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Poly2> {
        let mut p = Poly2::default();
        for term in s.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            let parts: Vec<&str> = term.split(':').map(str::trim).collect();
            let [j1, j2, c] = parts[..] else {
                return Err(Error::Domain(format!("bad polynomial term {term:?}, want j1:j2:c")));
            };
            let deg = |x: &str| x.parse::<usize>().map_err(|_| Error::Domain(format!("bad exponent {x:?}")));
            p.add_term((deg(j1)?, deg(j2)?), parse_rational(c)?);
        }
        if p.is_zero() {
            return Err(Error::Domain("zero polynomial".into()));
        }
        Ok(p)
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .rev()
            .map(|(&(j1, j2), c)| format!("{j1}:{j2}:{}", super::report::fmt_rat(c)))
            .collect();
        f.write_str(&terms.join(";"))
    }
}

/// `Psi_m(y) = sum_j alpha_j y_{j + m}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiForm {
    pub m: (usize, usize),
    pub terms: Vec<((usize, usize), BigRat)>,
}

impl PsiForm {
    pub fn eval<F: Fn(usize, usize) -> BigRat>(&self, y: F) -> BigRat {
        self.terms.iter().map(|(l, c)| c * y(l.0, l.1)).fold(BigRat::zero(), |a, b| a + b)
    }
}

/// The `d1 d2` forms on the `2 d1 x 2 d2` array cutting out the subspace
/// containing all monomial vectors of points on `P = 0`.
pub fn psi_forms(p: &Poly2) -> Result<Vec<PsiForm>> {
    let (d1, d2) = (p.d1(), p.d2());
    if d1 == 0 || d2 == 0 {
        return Err(Error::Domain(format!("polynomial {p} has degree 0 in a variable")));
    }
    let mut out = Vec::with_capacity(d1 * d2);
    for m1 in 0..d1 {
        for m2 in 0..d2 {
            let terms = p.terms().map(|(&(j1, j2), c)| ((j1 + m1, j2 + m2), c.clone())).collect();
            out.push(PsiForm { m: (m1, m2), terms });
        }
    }
    Ok(out)
}

/// The curve carrying a relation `x1^n1 = x2^n2` with `n1 > 0`:
/// `x1^n1 - x2^n2`, or `x1^n1 x2^|n2| - 1` when `n2 < 0`.
pub fn planted_curve(n1: i64, n2: i64) -> Result<Poly2> {
    if n1 <= 0 || n2 == 0 {
        return Err(Error::Domain(format!("planted curve needs n1 > 0, n2 != 0, got ({n1}, {n2})")));
    }
    let one = BigRat::one();
    let neg = -BigRat::one();
    let (n1, m) = (n1 as usize, n2.unsigned_abs() as usize);
    Ok(if n2 > 0 {
        Poly2::new([((n1, 0), one), ((0, m), neg)])
    } else {
        Poly2::new([((n1, m), one), ((0, 0), neg)])
    })
}
