//! Exact-as-possible evaluation of Kloosterman sums, quadratic Gauss sums,
//! restricted Kloosterman sums `T_f`, and Kloosterman sums attached to pairs of
//! cusps of `Gamma_0(Q)`, together with sums over arithmetic progressions of
//! moduli and the verification suites that check every closed form against
//! brute-force enumeration.
//!
//! Phases are carried as rational angles wherever possible and converted to
//! `Complex64` only at summation time.

pub mod apsums;
pub mod characters;
pub mod cusp_kloosterman;
pub mod cusps;
pub mod error;
pub mod expsums;
pub mod modular;
pub mod roots;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
