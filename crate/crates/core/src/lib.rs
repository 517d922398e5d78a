//! Free-field realization of U_q(C_n^(1)) at level -1/2 with exact
//! verification of its defining relations.

pub mod coeff;
pub mod currents;
pub mod error;
pub mod fock;
pub mod modes;
pub mod linalg;
pub mod ope;
pub mod oscillator;
pub mod relations;
pub mod report;
pub mod roots;
pub mod screening;
pub mod symbolic;
pub mod vertex;

pub use error::{Error, Result};
