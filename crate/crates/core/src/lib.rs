//! Modified Patankar schemes for production-destruction systems.
//!
//! The crate integrates positive, conservative systems `y' = P(y) - D(y)` with
//! unconditionally positive one-step schemes and analyses their linear
//! stability:
//!
//! * [`pds`]: system traits, linear systems `y' = A y` and a catalog of test
//!   problems with exact solutions.
//! * [`schemes`]: modified Patankar-Euler, the second order three-solve scheme
//!   and the two third order families.
//! * [`mpdec`]: modified Patankar deferred correction of arbitrary order on
//!   equispaced or Gauss-Lobatto subtimenodes.
//! * [`stability`]: stability functions, Jacobians of the step maps at steady
//!   states, stability regions and step-size thresholds.
//! * [`linalg`]: the dense kernels used by all of the above.
//!
//! ```
//! use patankar::pds::{test_problem, TestProblem};
//! use patankar::schemes::Scheme;
//!
//! let problem = test_problem::<f64>(TestProblem::Real3);
//! let path = Scheme::Mprk32.integrate(&problem.pds, &problem.y0, 25.0, 40).unwrap();
//! let last = path.last().unwrap();
//! assert!((last[0] - 5.0).abs() < 1e-8);
//! ```

pub mod error;
pub mod linalg;
pub mod mpdec;
pub mod pds;
pub mod scalar;
pub mod schemes;
pub mod stability;

pub use error::{Error, Result};
pub use scalar::{Field, Scalar};

/// Exact rational numbers for coefficient identities.
pub type Rational = num_rational::Ratio<i128>;
pub type Matrix64 = linalg::Matrix<f64>;
pub type Matrix32 = linalg::Matrix<f32>;
pub type Polynomial64 = linalg::Polynomial<f64>;
pub type RationalPolynomial = linalg::Polynomial<Rational>;
pub type LinearPds64 = pds::LinearPds<f64>;
pub type Scheme64 = schemes::Scheme<f64>;
pub type Scheme32 = schemes::Scheme<f32>;
pub type MpdecConfig64 = mpdec::MpdecConfig<f64>;
pub type StabilityFunction64 = stability::RationalStabilityFunction<f64>;
pub type ExactStabilityFunction = stability::RationalStabilityFunction<Rational>;
