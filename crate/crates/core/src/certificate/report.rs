use std::cmp::Ordering;
use std::fmt;

use crate::arith::{cmp_power, RatPower};
use crate::BigRat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
    Degenerate,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::NotApplicable => "not-applicable",
            CheckStatus::Degenerate => "degenerate",
        })
    }
}

/// One verified inequality `lhs <= rhs` (or `>=`), with exact sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub lhs: String,
    pub rhs: String,
    /// Why a check was skipped, or which sub-inequality failed.
    pub note: String,
}

pub(crate) fn fmt_rat(x: &BigRat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

impl Check {
    fn new(name: &str, ok: bool, lhs: String, rhs: String) -> Check {
        let status = if ok { CheckStatus::Pass } else { CheckStatus::Fail };
        Check { name: name.into(), status, lhs, rhs, note: String::new() }
    }

    /// `lhs <= rhs` between rationals.
    pub(crate) fn le(name: &str, lhs: &BigRat, rhs: &BigRat) -> Check {
        Check::new(name, lhs <= rhs, fmt_rat(lhs), fmt_rat(rhs))
    }

    /// `lhs >= rhs` between rationals.
    pub(crate) fn ge(name: &str, lhs: &BigRat, rhs: &BigRat) -> Check {
        Check::new(name, lhs >= rhs, fmt_rat(lhs), fmt_rat(rhs))
    }

    /// `lhs <= rhs` against a rational power.
    pub(crate) fn le_pow(name: &str, lhs: &BigRat, rhs: &RatPower) -> Check {
        let ok = cmp_power(lhs, rhs) != Ordering::Greater;
        Check::new(name, ok, fmt_rat(lhs), rhs.to_string())
    }

    /// `lhs >= rhs` against a rational power.
    pub(crate) fn ge_pow(name: &str, lhs: &BigRat, rhs: &RatPower) -> Check {
        let ok = cmp_power(lhs, rhs) != Ordering::Less;
        Check::new(name, ok, fmt_rat(lhs), rhs.to_string())
    }

    pub(crate) fn not_applicable(name: &str, why: String) -> Check {
        Check {
            name: name.into(),
            status: CheckStatus::NotApplicable,
            lhs: String::new(),
            rhs: String::new(),
            note: why,
        }
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Check {
        self.note = note.into();
        self
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}
