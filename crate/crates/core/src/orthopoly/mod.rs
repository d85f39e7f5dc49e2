//! Monic orthogonal polynomial families of the two kernels.

mod polynomial;
mod recurrence;

pub use polynomial::{inner_product, normalize, MonicPolynomial, NormalizedPolynomial, Polynomial};
pub use recurrence::{generic_low_degree, moment_guard_digits, RecurrenceTable};
