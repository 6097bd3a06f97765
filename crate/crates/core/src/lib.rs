//! Exact verification and numerical simulation for a three-dimensional
//! quadratic dynamo model, its Poisson structures and its canonical
//! realization on R^4.
//!
//! The symbolic layer works over sparse polynomials with big-rational
//! coefficients: every structural claim reduces to a residual that is
//! compared with the zero polynomial. The numeric layer integrates the same
//! fields in binary64.

pub mod algebra;
pub mod error;
pub mod integrate;
pub mod models;
pub mod parser;
pub mod poisson;
pub mod symmetry;
pub mod verify;

pub use algebra::{format_rational, parse_rational, MultiPoly, Rational, RationalFn, Ring};
pub use error::{Error, Result};
pub use integrate::{Method, NumericState, NumericSystem, SystemId, Trajectory};
pub use models::{PoissonTensor, PolyMap, VectorField};
pub use parser::{parse_expr, parse_poly, ParseContext};
pub use verify::{run_suite, CheckResult, Status, VerifyReport};
