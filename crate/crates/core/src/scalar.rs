use std::fmt::Debug;

use num_traits::{Float, FromPrimitive};

/// Floating-point type the physics kernels are written against.
pub trait Scalar: Float + FromPrimitive + Debug + Send + Sync + 'static {
    /// Converts an f64 constant. Every `Float` type can represent (or round)
    /// finite f64 literals, so this never fails for the constants we use.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite constant")
    }
}

impl<T> Scalar for T where T: Float + FromPrimitive + Debug + Send + Sync + 'static {}

#[inline]
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::lit(x)
}
