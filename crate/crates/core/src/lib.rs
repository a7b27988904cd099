//! Prabhakar-type fractional calculus and the stochastic processes behind it.
//!
//! The crate has three layers:
//!
//! - [`specfun`]: Prabhakar (three-parameter Mittag-Leffler), Wright and
//!   M-Wright functions, the Prabhakar convolution and the regularized
//!   Prabhakar derivative.
//! - [`laplace`], [`stoch`], [`levy`]: numerical Laplace inversion
//!   (Gaver-Stehfest in double-double, fixed Talbot), stable subordinators,
//!   the subordinator 𝔙 with Laplace exponent `z^{γ+ν}(1 + λz^{-ν})^δ`, its
//!   first-passage process 𝔈, and Lévy processes run at that clock.
//! - [`pde`], [`verify`], [`cli`]: solutions of the fractional diffusion
//!   problem, an end-to-end verification suite, and the `fracstoch` command
//!   line tool.
//!
//! Random streams come from [`stoch::StreamFactory`]: a master seed, a path
//! index and a [`stoch::Role`] pick an independent ChaCha8 stream, so Monte
//! Carlo results do not depend on the thread schedule.
//!
//! ```
//! use fracstoch::specfun::ml2;
//!
//! // E_1(x) = e^x
//! let v = ml2(1.0, 1.0, 1.0).unwrap();
//! assert!((v - std::f64::consts::E).abs() < 1e-14);
//! ```

pub mod cli;
pub mod dd;
pub mod error;
pub mod laplace;
pub mod levy;
pub mod params;
pub mod pde;
pub mod quad;
pub mod specfun;
pub mod stats;
pub mod stoch;
pub mod verify;

pub use error::{Error, Result};
