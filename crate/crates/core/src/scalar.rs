use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{FromPrimitive, NumAssign, One, Signed, ToPrimitive, Zero};

/// Real field underlying every complex computation in the crate.
///
/// Floating types decide ranks against a relative tolerance; exact types
/// decide them against zero.
pub trait Scalar:
    Clone + Debug + PartialEq + PartialOrd + Signed + NumAssign + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Pivots at or below `rank_tolerance() * scale` count as zero.
    fn rank_tolerance() -> Self;

    fn is_exact() -> bool;

    fn try_sqrt(&self) -> Option<Self>;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite value")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn rank_tolerance() -> Self {
        1e-10
    }
    fn is_exact() -> bool {
        false
    }
    fn try_sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for f32 {
    fn rank_tolerance() -> Self {
        1e-4
    }
    fn is_exact() -> bool {
        false
    }
    fn try_sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        (num as f64 / den as f64) as f32
    }
}

impl Scalar for BigRational {
    fn rank_tolerance() -> Self {
        BigRational::zero()
    }
    fn is_exact() -> bool {
        true
    }
    fn try_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        (&n * &n == *self.numer() && &d * &d == *self.denom()).then(|| BigRational::new(n, d))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

pub type C<T> = Complex<T>;

pub fn re<T: Scalar>(num: i64) -> C<T> {
    Complex::new(T::from_ratio(num, 1), T::zero())
}

pub fn ratio<T: Scalar>(num: i64, den: i64) -> C<T> {
    Complex::new(T::from_ratio(num, den), T::zero())
}

pub fn imag<T: Scalar>(num: i64, den: i64) -> C<T> {
    Complex::new(T::zero(), T::from_ratio(num, den))
}

pub fn i_unit<T: Scalar>() -> C<T> {
    Complex::new(T::zero(), T::one())
}

pub fn from_c64<T: Scalar>(z: Complex<f64>) -> C<T> {
    Complex::new(T::from_f64_lossy(z.re), T::from_f64_lossy(z.im))
}

pub fn to_c64<T: Scalar>(z: &C<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

/// L1 magnitude |re| + |im|; exact in every field.
pub fn mag<T: Scalar>(z: &C<T>) -> T {
    z.re.abs() + z.im.abs()
}

pub fn is_zero<T: Scalar>(z: &C<T>) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

/// Complex square root where the field allows it; the principal branch for
/// floats, perfect squares only for rationals.
pub fn csqrt<T: Scalar>(z: &C<T>) -> Option<C<T>> {
    if T::is_exact() {
        if z.im.is_zero() {
            if let Some(r) = z.re.try_sqrt() {
                return Some(Complex::new(r, T::zero()));
            }
            return (-z.re.clone()).try_sqrt().map(|r| Complex::new(T::zero(), r));
        }
        return None;
    }
    let w = to_c64(z).sqrt();
    Some(from_c64(w))
}

pub fn one<T: Scalar>() -> C<T> {
    Complex::one()
}

pub fn zero<T: Scalar>() -> C<T> {
    Complex::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sqrt_only_for_squares() {
        let q = BigRational::from_ratio(9, 4);
        assert_eq!(q.try_sqrt(), Some(BigRational::from_ratio(3, 2)));
        assert_eq!(BigRational::from_ratio(2, 1).try_sqrt(), None);
    }

    #[test]
    fn complex_sqrt_of_negative_rational_is_imaginary() {
        let z: C<BigRational> = re(-4);
        assert_eq!(csqrt(&z), Some(imag(2, 1)));
    }

    #[test]
    fn l1_magnitude() {
        let z = Complex::new(-3.0f64, 4.0);
        assert_eq!(mag(&z), 7.0);
    }
}
