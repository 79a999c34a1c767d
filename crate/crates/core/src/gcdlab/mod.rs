//! Greatest common divisors of S-unit differences: the explicit constants,
//! instance validation, the three-way classification, scans over
//! desk-scale boxes, extremal `gcd(a^n - 1, b^n - 1)` records and
//! box-principle witnesses.

mod constants;
mod instance;
mod multdep;
mod records;
mod scan;

pub use constants::{parse_rational, Constants};
pub use instance::{classify, GcdInstance, Verdict};
pub use multdep::{mult_dep_search, multiplicatively_independent};
pub use records::{box_witness, extremal_gcd_search, GcdRecord};
pub use scan::{smooth_numbers, theorem2_scan, ScanSpec, T2Row, T2Scan};
