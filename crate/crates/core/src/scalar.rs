//! Scalar abstractions.
//!
//! Exact coefficient work is generic over [`Coeff`], which is satisfied by
//! `BigRational` as well as by plain floats. Numerical linear algebra and the
//! interior-point solver are generic over [`Real`] (`f32`, `f64`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};
use std::fmt::{Debug, Display, LowerExp};
use std::ops::Neg;

/// Coefficient ring used by the dual-basis polynomials and block assembly.
pub trait Coeff: Num + Neg<Output = Self> + Clone + Debug + Display + PartialOrd + Send + Sync + 'static {
    fn from_int(v: i64) -> Self;

    /// Lossy conversion to a float, used at the solver boundary.
    fn to_float<T: Real>(&self) -> T;

    /// True if converting to `f64` loses information.
    fn inexact_in_f64(&self) -> bool {
        false
    }
}

impl Coeff for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_float<T: Real>(&self) -> T {
        T::from_f64(self.to_f64().unwrap_or(f64::NAN)).unwrap()
    }

    fn inexact_in_f64(&self) -> bool {
        match self.to_f64().and_then(BigRational::from_float) {
            Some(back) => &back != self,
            None => true,
        }
    }
}

impl Coeff for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn to_float<T: Real>(&self) -> T {
        T::from_f64(*self).unwrap()
    }
}

/// Floating-point scalar for the numerical side.
pub trait Real: Float + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Send + Sync + 'static {
    /// Convert from `f64`, panicking only on NaN-free inputs that cannot be represented.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts")
    }
}

impl<T> Real for T where T: Float + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Send + Sync + 'static {}
