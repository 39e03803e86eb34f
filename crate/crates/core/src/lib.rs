//! Exact arithmetic laboratory for the level-two Lubin-Tate hypersurface.
//!
//! The crate is organised bottom-up:
//!
//! - [`ffield`]: finite fields with Conway moduli, additive characters and
//!   exact sums in `Z[zeta_p]`.
//! - [`symbolic`]: multivariate polynomials over finite fields and the
//!   polynomial identity suite.
//! - [`hypersurface`]: the determinant `d_full`, its Artin-Schreier form
//!   `d_as`, Moore determinants and point counting over `F_{q^{hn}}`.
//! - [`lfunc`]: character sums `S_n(psi)`, L-series assembly and the
//!   comparison against the closed-form prediction.
//! - [`skewpoly`]: the truncated twisted polynomial ring
//!   `F_{q^m}{tau}/(tau^{h+1})` and its action on the hypersurface.
//! - [`formalmod`]: truncated Laurent series, additive (q-linearized)
//!   polynomials, torsion lifting and the determinant form `mu_n`.
//! - [`congruence`]: the explicit tower model and the sampled congruence
//!   checks around the canonical point.
//! - [`cache`] and [`report`]: deterministic cache keys, atomic writes and
//!   exact rational formatting shared by the command-line front end.

pub mod cache;
pub mod congruence;
pub mod error;
pub mod ffield;
pub mod formalmod;
pub mod hypersurface;
pub mod lfunc;
pub mod report;
pub mod ring;
pub mod skewpoly;
pub mod symbolic;

pub use error::{Error, Result};
