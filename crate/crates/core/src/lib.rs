//! Numerical Mertens theorems for concrete Selberg-class L-functions.
//!
//! * [`primes`]: segmented sieve and Kronecker symbol.
//! * [`lfunc`]: built-in instances and their Euler data.
//! * [`mertens`]: partial Euler products, Mertens sums and constants, `psi_F`.
//! * [`analysis`]: special functions, quadrature and the contour checks.

pub mod analysis;
pub mod error;
pub mod lfunc;
pub mod mertens;
pub mod primes;
pub mod scan;
pub mod sum;

pub use error::{Error, Result};
pub use lfunc::{CoefficientTable, EulerRoots, LeadingCoefficient, LeadingSource, SelbergInstance};
pub use mertens::{Mertens, MertensConfig, MertensReport, ReportKind};
pub use scan::ScanOptions;
