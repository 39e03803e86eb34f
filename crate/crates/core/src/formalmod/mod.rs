//! Equal-characteristic formal modules as additive polynomials over
//! truncated Laurent series, torsion lifting and the determinant form
//! `mu_n`.
//!
//! Every module here has an additive model (`X + Y` is the group law), so
//! module arithmetic is arithmetic of q-linearized polynomials.

mod additive;
mod model;
mod series;
mod torsion;
mod verify;

pub use additive::{
    additive_root_lift, digit_action, lubin_tate, make_univ, AdditivePolynomial, RootLift, TieBreak,
};
pub use model::{E2Model, MODEL_ORDER_LIMIT};
pub use series::{Achieved, TruncatedSeries};
pub use torsion::{drinfeld_check, drinfeld_outcome, mu_n, DrinfeldBasis, DrinfeldOutcome};
pub use verify::{
    near_canonical_floor, near_canonical_sample, verify_sample, verify_formal_module, IdentityCheck,
    FormalModuleSample, FormalModuleReport, LINEARITY_TRIALS, TRACE_MATRICES,
};

#[cfg(test)]
mod tests;
