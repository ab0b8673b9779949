use std::fmt;

use rug::{Float, Rational};

/// Coefficient field of a [`TruncSeries`](super::TruncSeries).
///
/// Implemented for exact rationals and for MPFR floats. Float values carry
/// their precision, so constructors take a context: `()` for rationals and the
/// working precision in bits for floats.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    type Ctx: Copy + fmt::Debug + PartialEq + Eq + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: Self::Ctx) -> Self;
    fn from_q(q: &Rational, ctx: Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul_q(&self, q: &Rational) -> Self;
    fn to_f64(&self) -> f64;

    fn one(ctx: Self::Ctx) -> Self {
        Self::from_q(&Rational::from(1), ctx)
    }

    fn from_i64(v: i64, ctx: Self::Ctx) -> Self {
        Self::from_q(&Rational::from(v), ctx)
    }

    fn div_u(&self, d: u64) -> Self {
        self.mul_q(&Rational::from((1, d)))
    }
}

impl Coeff for Rational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: ()) -> Self {
        Rational::new()
    }
    fn from_q(q: &Rational, _: ()) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Self {
        Rational::from(self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Rational::from(self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Rational::from(self * o)
    }
    fn div(&self, o: &Self) -> Self {
        Rational::from(self / o)
    }
    fn neg(&self) -> Self {
        Rational::from(-self)
    }
    fn mul_q(&self, q: &Rational) -> Self {
        Rational::from(self * q)
    }
    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
}

/// Working precision of a float coefficient field, in bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Prec(pub u32);

impl Prec {
    /// Smallest bit precision that carries `digits` significant decimal digits.
    pub fn from_digits(digits: u32) -> Prec {
        Prec((digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8)
    }
}

impl Coeff for Float {
    type Ctx = Prec;

    fn ctx(&self) -> Prec {
        Prec(self.prec())
    }
    fn zero(ctx: Prec) -> Self {
        Float::new(ctx.0)
    }
    fn from_q(q: &Rational, ctx: Prec) -> Self {
        Float::with_val(ctx.0, q)
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self * o)
    }
    fn div(&self, o: &Self) -> Self {
        Float::with_val(self.prec(), self / o)
    }
    fn neg(&self) -> Self {
        Float::with_val(self.prec(), -self)
    }
    fn mul_q(&self, q: &Rational) -> Self {
        Float::with_val(self.prec(), self * q)
    }
    fn to_f64(&self) -> f64 {
        Float::to_f64(self)
    }
}
