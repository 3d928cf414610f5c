use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point type usable as an edge or node weight.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `base^exponent` with the convention `0^0 = 1`.
#[inline]
pub(crate) fn pow_weight<T: Real>(base: T, exponent: T) -> T {
    if exponent == T::zero() {
        T::one()
    } else if exponent == T::one() {
        base
    } else {
        base.powf(exponent)
    }
}
