//! Exact certificates for the inequality chains that precede each use of
//! the subspace theorem: the auxiliary point over the quotient space with
//! its minimal-index linear forms, the curve-restricted point with its two
//! families of coordinate forms, and the difference lemma linking them.
//!
//! Every check is reported independently with exact sides. A check whose
//! premises do not hold on the given instance is `NotApplicable`, never a
//! pass.

mod lemma;
mod p4;
mod poly;
mod report;
mod t2;

pub use lemma::{lemma_diff, LemmaDiff};
pub use p4::{
    build_tilde_p4, certify_p4, form_sets_p4, product_bound_p4, CurveInstance, FormSets,
    P4Certificate, Selection, TildeP4,
};
pub use poly::{planted_curve, psi_forms, Poly2, PsiForm};
pub use report::{Check, CheckStatus};
pub use t2::{
    build_tilde_t2, certify_t2, form_product_t2, minimal_indices, MinIndexMap, T2Certificate,
    TildeT2,
};

/// The auxiliary basis used for heights is the one at the Archimedean place.
pub const LAMBDA0_CONVENTION: &str = "lambda0=lambda_inf";
