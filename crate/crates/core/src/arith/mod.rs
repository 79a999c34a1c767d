//! Exact arithmetic substrate: places and their absolute values, S-parts,
//! factorization and comparison of rational powers.

pub mod factor;
mod place;
pub mod power;
mod srational;
mod valuation;

pub use factor::{exponent_vector, is_prime, is_prime_u64, Factorization, DEFAULT_TRIAL_BOUND};
pub use place::{Place, PlaceSet};
pub use power::{cmp_log_ratios, cmp_power, cmp_powers, log2_approx, RatPower};
pub use srational::SRational;
pub use valuation::{
    height_vec, is_smooth, s_part_split, s_product, v_abs, valuation, valuation_big, IntVector, SPart,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn of<T: crate::Int>(x: &T) -> Sign {
        if x.is_negative() {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    /// `self^e`.
    pub fn pow(self, e: i64) -> Sign {
        if e % 2 == 0 {
            Sign::Positive
        } else {
            self
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        })
    }
}
