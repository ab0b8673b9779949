//! Truncated univariate power series `c_0 + c_1 z + ... + c_N z^N + O(z^{N+1})`.
//!
//! Binary operations truncate to the smaller order of their operands; the
//! order is never silently extended. The coefficient field is either exact
//! ([`rug::Rational`]) or an MPFR [`rug::Float`] at a fixed precision.

mod coeff;
mod compose;
mod elem;
mod tree;

pub use coeff::{Coeff, Prec};
pub use tree::{q_nu, tree_function, tree_inverse, TreeFunctionFamily};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Rational};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("division by a series with zero constant term")]
    DivByNonUnit,
    #[error("constant term {found} not allowed here (expected {expected})")]
    BadConstantTerm { expected: &'static str, found: String },
    #[error("series is not reversible (needs zero constant and non-zero linear term)")]
    NotReversible,
}

/// Series with exact rational coefficients.
pub type QSeries = TruncSeries<Rational>;
/// Series with MPFR float coefficients.
pub type FSeries = TruncSeries<Float>;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<F: Coeff> {
    coeffs: Vec<F>,
    ctx: F::Ctx,
}

impl<F: Coeff> TruncSeries<F> {
    /// Builds a series of order `order` from leading coefficients; missing
    /// coefficients are zero and extra ones are dropped.
    pub fn new(mut coeffs: Vec<F>, order: usize, ctx: F::Ctx) -> Self {
        coeffs.truncate(order + 1);
        coeffs.resize(order + 1, F::zero(ctx));
        TruncSeries { coeffs, ctx }
    }

    pub fn zero(order: usize, ctx: F::Ctx) -> Self {
        Self::new(Vec::new(), order, ctx)
    }

    pub fn constant(c: F, order: usize) -> Self {
        let ctx = c.ctx();
        Self::new(vec![c], order, ctx)
    }

    pub fn one(order: usize, ctx: F::Ctx) -> Self {
        Self::constant(F::one(ctx), order)
    }

    /// The identity series `z`.
    pub fn var(order: usize, ctx: F::Ctx) -> Self {
        Self::new(vec![F::zero(ctx), F::one(ctx)], order, ctx)
    }

    /// `c0 + c1 z` from rationals.
    pub fn linear_q(c0: &Rational, c1: &Rational, order: usize, ctx: F::Ctx) -> Self {
        Self::new(vec![F::from_q(c0, ctx), F::from_q(c1, ctx)], order, ctx)
    }

    pub fn from_rationals(q: &[Rational], order: usize, ctx: F::Ctx) -> Self {
        Self::new(q.iter().map(|c| F::from_q(c, ctx)).collect(), order, ctx)
    }

    /// Lifts an exact series into this coefficient field.
    pub fn lift(s: &QSeries, ctx: F::Ctx) -> Self {
        Self::from_rationals(s.coeffs(), s.order(), ctx)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn ctx(&self) -> F::Ctx {
        self.ctx
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(|| F::zero(self.ctx))
    }

    pub fn constant_term(&self) -> &F {
        &self.coeffs[0]
    }

    /// Same series at a lower (or equal) order.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        Self::new(self.coeffs[..=order].to_vec(), order, self.ctx)
    }

    pub fn map<G: Coeff>(&self, ctx: G::Ctx, f: impl Fn(&F) -> G) -> TruncSeries<G> {
        TruncSeries { coeffs: self.coeffs.iter().map(f).collect(), ctx }
    }

    pub fn scale(&self, c: &F) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(), ctx: self.ctx }
    }

    pub fn scale_q(&self, q: &Rational) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|a| a.mul_q(q)).collect(), ctx: self.ctx }
    }

    /// `self + c`
    pub fn add_const(&self, c: &F) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].add(c);
        out
    }

    /// Substitutes `z -> c z`.
    pub fn dilate(&self, c: &F) -> Self {
        let mut pw = F::one(self.ctx);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            coeffs.push(a.mul(&pw));
            pw = pw.mul(c);
        }
        TruncSeries { coeffs, ctx: self.ctx }
    }

    /// Formal derivative; the result is known to order `N - 1`.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        let coeffs: Vec<F> = (1..=n.max(1)).map(|i| self.coeff(i).mul_q(&Rational::from(i as u64))).collect();
        Self::new(coeffs, n.saturating_sub(1), self.ctx)
    }

    /// Antiderivative with zero constant term, of order `N + 1`.
    pub fn integral(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(F::zero(self.ctx));
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs.push(a.div_u(i as u64 + 1));
        }
        TruncSeries { coeffs, ctx: self.ctx }
    }

    /// `f / z` for `f` with zero constant term; the order drops by one.
    pub fn div_z(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::BadConstantTerm { expected: "0", found: self.coeffs[0].to_string() });
        }
        let n = self.order();
        Ok(Self::new(self.coeffs[1..].to_vec(), n.saturating_sub(1), self.ctx))
    }

    pub fn mul_trunc(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let mut out = vec![F::zero(self.ctx); n + 1];
        for (i, a) in self.coeffs.iter().take(n + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().take(n + 1 - i).enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        TruncSeries { coeffs: out, ctx: self.ctx }
    }

    /// `1 / f`, requires a non-zero constant term.
    pub fn recip(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(SeriesError::DivByNonUnit);
        }
        let n = self.order();
        let inv0 = F::one(self.ctx).div(c0);
        let mut out: Vec<F> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for m in 1..=n {
            let mut acc = F::zero(self.ctx);
            for k in 1..=m {
                acc = acc.add(&self.coeffs[k].mul(&out[m - k]));
            }
            out.push(acc.neg().mul(&inv0));
        }
        Ok(TruncSeries { coeffs: out, ctx: self.ctx })
    }

    pub fn div(&self, o: &Self) -> Result<Self, SeriesError> {
        let n = self.order().min(o.order());
        Ok(self.truncate(n).mul_trunc(&o.truncate(n).recip()?))
    }

    /// Integer power; negative exponents need a non-zero constant term.
    pub fn powi(&self, e: i64) -> Result<Self, SeriesError> {
        let mut base = if e < 0 { self.recip()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one(self.order(), self.ctx);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_trunc(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_trunc(&base);
            }
        }
        Ok(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl<F: Coeff> Add for &TruncSeries<F> {
    type Output = TruncSeries<F>;
    fn add(self, o: &TruncSeries<F>) -> TruncSeries<F> {
        let n = self.order().min(o.order());
        let coeffs = (0..=n).map(|i| self.coeffs[i].add(&o.coeffs[i])).collect();
        TruncSeries { coeffs, ctx: self.ctx }
    }
}

impl<F: Coeff> Sub for &TruncSeries<F> {
    type Output = TruncSeries<F>;
    fn sub(self, o: &TruncSeries<F>) -> TruncSeries<F> {
        let n = self.order().min(o.order());
        let coeffs = (0..=n).map(|i| self.coeffs[i].sub(&o.coeffs[i])).collect();
        TruncSeries { coeffs, ctx: self.ctx }
    }
}

impl<F: Coeff> Mul for &TruncSeries<F> {
    type Output = TruncSeries<F>;
    fn mul(self, o: &TruncSeries<F>) -> TruncSeries<F> {
        self.mul_trunc(o)
    }
}

impl<F: Coeff> Neg for &TruncSeries<F> {
    type Output = TruncSeries<F>;
    fn neg(self) -> TruncSeries<F> {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| c.neg()).collect(), ctx: self.ctx }
    }
}

impl<F: Coeff> fmt::Display for TruncSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

impl QSeries {
    pub fn from_ints(v: &[i64], order: usize) -> Self {
        Self::new(v.iter().map(|&c| Rational::from(c)).collect(), order, ())
    }
}
