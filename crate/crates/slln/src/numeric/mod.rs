//! Scalar-generic numerical kernels.
//!
//! Everything in here is plain numerics with no knowledge of the domain
//! layer: adaptive quadrature, monotone root bracketing, compensated
//! summation, and small order-statistics helpers. The kernels are generic
//! over any IEEE float via [`Scalar`]; the crate-level [`crate::Real`] alias
//! pins `f64` where the advertised tolerances require it.

pub mod quad;
pub mod root;
pub mod stats;
pub mod sum;

use num_traits::Float;
use std::fmt::Debug;

/// Floating scalar bound for the numerical kernels.
pub trait Scalar: Float + Debug + 'static {
    /// Lossy conversion from an `f64` constant.
    fn of(x: f64) -> Self {
        Self::from(x).expect("constant representable in scalar type")
    }
}

impl<T: Float + Debug + 'static> Scalar for T {}
