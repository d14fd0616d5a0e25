//! Meromorphic quasi-modular forms on SL₂(ℤ): exact q-expansions, differential
//! operators, Rankin–Cohen brackets, regularized integrals and completed L-functions.

pub mod arith;
pub mod brackets;
pub mod error;
pub mod forms;
pub mod lfun;
pub mod numeric;
pub mod poles;
pub mod poly;
pub mod qseries;
pub mod reg;
pub mod scalar;
pub mod specfun;

pub use error::{QmfError, Result};
pub use qseries::{delta_series, eisenstein, QSeries};
pub use scalar::ScalarPi;
