//! Exact scalar types: rationals and complex rationals. No floats anywhere.

use num::{BigRational, Complex, One, Zero};

/// Exact rational number.
pub type Q = BigRational;

/// Complex number with exact rational parts.
pub type CQ = Complex<Q>;

/// Coefficient ring for polynomials and forms. Implemented by `Q` and `CQ`.
pub trait Coeff:
    Clone
    + PartialEq
    + Eq
    + std::fmt::Debug
    + std::fmt::Display
    + Zero
    + One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_q(r: &Q) -> Self;
    /// Complex conjugation; identity on `Q`.
    fn conj(&self) -> Self;
    /// 1-norm magnitude, used to accumulate exact residuals.
    fn abs1(&self) -> Q;
}

impl Coeff for Q {
    fn from_q(r: &Q) -> Self {
        r.clone()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn abs1(&self) -> Q {
        num::Signed::abs(self)
    }
}

impl Coeff for CQ {
    fn from_q(r: &Q) -> Self {
        Complex::new(r.clone(), Q::zero())
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn abs1(&self) -> Q {
        num::Signed::abs(&self.re) + num::Signed::abs(&self.im)
    }
}

pub fn q(num: i64, den: i64) -> Q {
    BigRational::new(num.into(), den.into())
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(n.into())
}

pub fn cq(re: Q, im: Q) -> CQ {
    Complex::new(re, im)
}

pub fn ci(n: i64) -> CQ {
    Complex::new(qi(n), Q::zero())
}

/// Real rational as a complex scalar.
pub fn cqr(num: i64, den: i64) -> CQ {
    Complex::new(q(num, den), Q::zero())
}

/// The imaginary unit.
pub fn im() -> CQ {
    Complex::new(Q::zero(), Q::one())
}
