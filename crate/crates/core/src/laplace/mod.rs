//! Numerical Laplace inversion, forward transforms and the closed-form
//! transform catalog.

mod catalog;
mod forward;
mod invert;

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::dd::Dd;

pub(crate) use catalog::outer_prabhakar_series;
pub use catalog::{analytic_transform, h_x_series, CatalogTransform, Part, PartTransform, TransformId};
pub use forward::{forward_laplace, forward_laplace_tol};
pub use invert::{
    gaver_stehfest, gaver_stehfest_weights, invert_laplace, talbot, Inversion, InversionConfig,
    InversionMethod, TALBOT_DEFAULT_NODES, TALBOT_F64_BEST_NODES, GS_DEFAULT_ORDER_DD, GS_DEFAULT_ORDER_F64,
};

/// Arithmetic shared by the complex Talbot contour and the double-double
/// real axis, so a transform can be written once for both.
pub trait Field:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(v: f64) -> Self;
    fn powf(self, e: f64) -> Self;
    fn exp(self) -> Self;
    fn sqrt(self) -> Self;
}

impl Field for Complex64 {
    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }
    fn powf(self, e: f64) -> Self {
        Complex64::powf(self, e)
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn sqrt(self) -> Self {
        Complex64::sqrt(self)
    }
}

impl Field for Dd {
    fn from_f64(v: f64) -> Self {
        Dd::from(v)
    }
    fn powf(self, e: f64) -> Self {
        Dd::powf(self, Dd::from(e))
    }
    fn exp(self) -> Self {
        Dd::exp(self)
    }
    fn sqrt(self) -> Self {
        Dd::sqrt(self)
    }
}

/// A Laplace transform `F(s)`.
///
/// `eval_dd` is the same function on the positive real axis in
/// double-double precision; Gaver–Stehfest needs it to run at high order.
pub trait Transform: Sync {
    fn eval(&self, s: Complex64) -> Complex64;

    fn eval_dd(&self, _s: Dd) -> Option<Dd> {
        None
    }
}

/// Transforms written generically over [`Field`] get both evaluation paths.
pub trait FieldTransform: Sync {
    fn at<T: Field>(&self, s: T) -> T;
}

impl<G: FieldTransform> Transform for G {
    fn eval(&self, s: Complex64) -> Complex64 {
        self.at(s)
    }
    fn eval_dd(&self, s: Dd) -> Option<Dd> {
        Some(self.at(s))
    }
}

/// Wraps a complex closure. Without a double-double path Gaver–Stehfest is
/// limited to low order.
pub struct FnTransform<F>(pub F);

impl<F> Transform for FnTransform<F>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    fn eval(&self, s: Complex64) -> Complex64 {
        (self.0)(s)
    }
}
