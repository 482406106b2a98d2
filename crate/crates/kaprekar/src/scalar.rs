use std::fmt::{Debug, Display};

use num_rational::Ratio;
use num_traits::Signed;

/// Coefficient type for affine expressions and constraints.
///
/// Integers cover the K functions; rationals are needed for equivalence maps
/// with halved coefficients.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Signed + From<i64> + Send + Sync + 'static
{
    /// The exact integer value, if this is an integer that fits in `i64`.
    fn to_exact_i64(&self) -> Option<i64>;
}

impl Scalar for i64 {
    fn to_exact_i64(&self) -> Option<i64> {
        Some(*self)
    }
}

impl Scalar for i128 {
    fn to_exact_i64(&self) -> Option<i64> {
        i64::try_from(*self).ok()
    }
}

impl Scalar for Ratio<i64> {
    fn to_exact_i64(&self) -> Option<i64> {
        self.is_integer().then(|| self.to_integer())
    }
}
