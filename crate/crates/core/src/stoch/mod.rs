//! Stable subordinators, the process 𝔙, its inverse 𝔈, the inverse stable
//! subordinator L and the inner inverse 𝔎.

mod density;
mod frakv;
mod inverse;
pub mod rng;
mod stable;

pub use crate::params::TimeChangeParams;
pub use density::{inverse_stable_density, k_density, stable_density, stable_density_with};
pub(crate) use frakv::check_grid;
pub use frakv::{sample_frak_v_path, uniform_grid, FrakV, SamplePath, Stepper};
pub use inverse::{
    horizon, sample_inverse_e, sample_inverse_e_composed, sample_inverse_stable_exact, sample_k,
    FirstPassage,
};
pub use rng::{ensure_independent, RngStream, Role, StreamFactory, StreamTag};
pub use stable::{sample_stable_increment, PositiveStable};
