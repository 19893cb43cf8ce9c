//! Coefficient rings for formal sums of monomials.

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::Num;

/// Anything usable as a coefficient: exact rationals and integers are the
/// intended instances, machine floats work for sums whose coefficients stay
/// exactly representable.
pub trait Scalar: Clone + PartialEq + Debug + Num + Neg<Output = Self> + Send + Sync + 'static {}

impl<T> Scalar for T where T: Clone + PartialEq + Debug + Num + Neg<Output = T> + Send + Sync + 'static {}
