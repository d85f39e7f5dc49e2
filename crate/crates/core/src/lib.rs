//! Gaussian quadrature rules for the weight functions (−log x)^m on [0, 1]
//! and cos(πx/2) on [−1, 1], computed in arbitrary precision and certified
//! to a requested number of printed digits.
//!
//! The pipeline runs moments → three-term recurrence → roots of the monic
//! orthogonal polynomial → weights, inside a precision-escalation loop that
//! accepts a result once two working precisions print the same digits.

pub mod error;
pub mod moments;
pub mod numerics;
pub mod orthopoly;
pub mod par;
pub mod rulegen;
pub mod tableio;

pub use error::{QuadError, Result};
pub use moments::{Kernel, MomentSequence};
pub use numerics::{BigNum, PrecisionPolicy, Rational};
pub use rulegen::{apply_rule, generate_rule, generate_rules, QuadratureRule};

