//! Exact coefficient arithmetic: rationals, Laurent polynomials and rational
//! functions in `v = q^{1/2}`, q-numbers and contraction expansions.

pub mod qnum;
pub mod rat;
pub mod vpoly;
pub mod vrat;
pub mod window;

pub use qnum::{gauss_binomial, q_binomial, q_bracket, q_diff, q_int, q_units, v_int};
pub use rat::Rat;
pub use vpoly::{VPoly, UNITS_PER_Q, UNITS_PER_V};
pub use vrat::VRat;
pub use window::{expand_contraction, expand_contraction_scaled, LaurentWindow};
