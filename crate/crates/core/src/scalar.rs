//! Scalar abstractions shared by the exact and numeric parts of the crate.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use nalgebra::RealField;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use rand::Rng;
use rand_distr::StandardNormal;

/// Exact integer scalar: machine integers for fast enumeration, `BigInt` for
/// anything that grows along a direct system.
pub trait Int:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn lit(v: i64) -> Self {
        <Self as FromPrimitive>::from_i64(v).expect("integer literal out of range for scalar type")
    }
}

impl<T> Int for T where
    T: Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Floating-point scalar for the numeric laboratory.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync + 'static {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("float literal not representable")
    }

    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Real for f64 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

pub(crate) fn int<I: Int>(v: i64) -> I {
    I::lit(v)
}
