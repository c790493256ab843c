//! Positive linear operators of Bernstein type driven by Pólya urn
//! distributions, including urns with negative replacement, together with
//! tools that check the classical error bounds and asymptotic limits these
//! operators satisfy.
//!
//! The crate is organised in four layers:
//!
//! * [`distribution`]: the urn distribution itself (pmf, moments, an exact
//!   rational oracle). The numeric kernels are generic over a [`Scalar`],
//!   so the same formulas run in `f64` and in arbitrary-precision rationals.
//! * [`operators`]: the operators built from the distribution (classical
//!   Bernstein, Stancu, Lupaş, the negative-replacement operator `R`, and
//!   the q / (p,q) comparison variants).
//! * [`analysis`]: moduli of continuity, bound reports, asymptotic-limit
//!   sampling, minimal-degree search.
//! * [`fixtures`]: the built-in target functions used by the test suite and
//!   the command line front end.

pub mod analysis;
pub mod distribution;
pub mod fixtures;
pub mod operators;
pub mod scalar;

pub use scalar::Scalar;

/// Arbitrary-precision rational scalar used by the exact oracle.
pub type Rational = num_rational::BigRational;

/// Urn parameters over `f64`, the default working precision.
pub type Params = distribution::PolyaParams<f64>;

/// Urn parameters over exact rationals.
pub type ExactParams = distribution::PolyaParams<Rational>;

use std::fmt;

/// Errors shared by the distribution, operator and analysis layers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Parameter set violates a documented precondition.
    InvalidParams(String),
    /// A total-weight factor a+b+jc vanishes inside the pmf denominator.
    DegenerateTotal { index: usize },
    /// Operator degree outside the supported range.
    InvalidDegree { n: u64 },
    /// Shape parameter (alpha, q, p) outside its admissible interval.
    InvalidParameter(String),
    /// Target function evaluation produced a non-finite value.
    EvalError { x: f64 },
    /// Requested check needs derivative data the caller did not supply.
    MissingDerivative(String),
    /// Exact-arithmetic computation exceeded its configured size budget.
    OverflowBudget { detail: String },
    /// A pmf entry fell below the tolerated round-off floor.
    NegativeMass { index: usize, value: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::DegenerateTotal { index } => {
                write!(f, "total weight a+b+{index}c vanishes: distribution undefined")
            }
            Error::InvalidDegree { n } => write!(f, "degree n={n} not supported here"),
            Error::InvalidParameter(msg) => write!(f, "invalid operator parameter: {msg}"),
            Error::EvalError { x } => write!(f, "target function not finite at x={x}"),
            Error::MissingDerivative(msg) => write!(f, "missing derivative data: {msg}"),
            Error::OverflowBudget { detail } => write!(f, "exact arithmetic budget exceeded: {detail}"),
            Error::NegativeMass { index, value } => {
                write!(f, "pmf entry {index} is {value}, below the round-off floor")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
