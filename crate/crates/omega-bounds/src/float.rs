//! Generic scalar abstraction for the real-valued formula layer.
//!
//! Everything in [`crate::envelopes`] is written against [`Real`] so the same
//! expressions evaluate in `f32` or `f64`; `f64` is the default throughout
//! the crate (see [`crate::Scalar`]).

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + std::fmt::Debug + std::fmt::Display {
    /// Euler's number e.
    fn e() -> Self {
        Self::from_f64(std::f64::consts::E).unwrap()
    }

    /// Shorthand for lossy conversion of small integer constants.
    fn of(v: f64) -> Self {
        Self::from_f64(v).unwrap()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// m! as a scalar; exact for every m that fits the mantissa (m ≤ 20 in f64).
pub fn factorial<F: Real>(m: u32) -> F {
    let mut acc = F::one();
    for i in 2..=m {
        acc = acc * F::from_u32(i).unwrap();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorial_small() {
        assert_eq!(factorial::<f64>(0), 1.0);
        assert_eq!(factorial::<f64>(1), 1.0);
        assert_eq!(factorial::<f64>(5), 120.0);
        assert_eq!(factorial::<f64>(12), 479_001_600.0);
    }
}
