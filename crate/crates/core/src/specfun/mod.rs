//! Special functions and the Prabhakar operators.

pub mod gamma;
mod mittag;
mod operator;
mod series;
mod wright;

pub use mittag::{ml2, ml_prabhakar, ml_prabhakar_traced, ml_series, pochhammer, MlMethod, PrabhakarParams};
pub use operator::{
    apply_regularized_d, caputo_monomial, prabhakar_convolve, prabhakar_convolve_closed,
    wright_operator_series,
};
pub(crate) use series::sum_series;
pub use series::{SeriesSum, TERM_CAP};
pub use wright::{generalized_wright, m_wright, wright, wright_series, GenWrightSpec, WrightParams};
