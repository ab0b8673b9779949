//! Exponential generating functions `F(x, y) = sum_n P_n(x) y^n / n!`.
//!
//! Closed forms are checked at a fixed rational `x0` as univariate series in
//! `y`. Each formula is assembled as a product of factors `base(y)^e` and
//! `exp(arg(y))`; every factor is split into its value at `y = 0`, collected
//! symbolically in a [`PowerProduct`], and a unit series. The unit part only
//! ever needs rational arithmetic, so the exact field is available whenever
//! the collected constant is rational.

mod cases;
mod gen_series;
mod general;
mod power_product;

pub use cases::{egf_closed_form, matching_cases, special_case_detect, SpecialCase};
pub use gen_series::{g_inverse, GenSeries, GenVar};
pub use general::{delta_g, egf_general, g_inverse_derivative, gen_var_at, unit_integrand};
pub use power_product::PowerProduct;

use rug::{Float, Rational};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{triangle, Poly};
use crate::params::{ParamTuple, RecType};
use crate::series::{Coeff, FSeries, Prec, QSeries, SeriesError, TruncSeries};
use crate::util::factorial;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EgfError {
    #[error("special case {case} does not apply to {params}")]
    CaseMismatch { case: SpecialCase, params: String },
    #[error("outside the domain of the formula: {0}")]
    DomainError(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("the constant factor is irrational; request the float field")]
    NotExact,
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Coefficient field requested for a closed-form expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Exact,
    Float(Prec),
    /// Exact when possible, float at the given precision otherwise.
    Auto(Prec),
}

/// A series in `y` over whichever field the evaluation ended up in.
#[derive(Clone, Debug, PartialEq)]
pub enum EgfSeries {
    Exact(QSeries),
    Float(FSeries),
}

impl EgfSeries {
    pub fn order(&self) -> usize {
        match self {
            EgfSeries::Exact(s) => s.order(),
            EgfSeries::Float(s) => s.order(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, EgfSeries::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&QSeries> {
        match self {
            EgfSeries::Exact(s) => Some(s),
            EgfSeries::Float(_) => None,
        }
    }

    pub fn coeff_float(&self, i: usize, prec: u32) -> Float {
        match self {
            EgfSeries::Exact(s) => Float::with_val(prec, &s.coeff(i)),
            EgfSeries::Float(s) => Float::with_val(prec, &s.coeff(i)),
        }
    }

    /// Largest relative deviation from an exact reference over the common
    /// orders. A zero reference coefficient is compared absolutely.
    pub fn max_rel_error(&self, reference: &QSeries, prec: u32) -> Float {
        let n = self.order().min(reference.order());
        let mut worst = Float::new(prec);
        for i in 0..=n {
            let want = Float::with_val(prec, &reference.coeff(i));
            let got = self.coeff_float(i, prec);
            let mut err = Float::with_val(prec, &got - &want).abs();
            if !want.is_zero() {
                err /= want.abs();
            }
            if err > worst {
                worst = err;
            }
        }
        worst
    }

    /// Coefficients as strings (exact fractions or decimal floats).
    pub fn coeff_strings(&self, digits: usize) -> Vec<String> {
        match self {
            EgfSeries::Exact(s) => s.coeffs().iter().map(|c| c.to_string()).collect(),
            EgfSeries::Float(s) => s.coeffs().iter().map(|c| c.to_string_radix(10, Some(digits))).collect(),
        }
    }
}

impl Serialize for EgfSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coeff_strings(40).serialize(s)
    }
}

/// Accumulates `prod base_i^{e_i} * prod exp(arg_j)` as a symbolic constant
/// times a unit series.
pub(crate) struct Builder<F: Coeff> {
    constant: PowerProduct,
    unit: TruncSeries<F>,
}

fn near<F: Coeff>(c: &F, q: &Rational) -> bool {
    let qf = q.to_f64();
    (c.to_f64() - qf).abs() <= 1e-12 * qf.abs().max(1.0)
}

/// Divides out the constant term and pins it to exactly one, which keeps
/// float round-off from tripping the constant-term checks of `pow`/`log`.
fn normalize<F: Coeff>(s: &TruncSeries<F>, c0: &Rational) -> TruncSeries<F> {
    let mut c: Vec<F> = s.scale_q(&Rational::from(c0.recip_ref())).coeffs().to_vec();
    c[0] = F::one(s.ctx());
    TruncSeries::new(c, s.order(), s.ctx())
}

impl<F: Coeff> Builder<F> {
    pub(crate) fn new(order: usize, ctx: F::Ctx) -> Self {
        Builder { constant: PowerProduct::one(), unit: TruncSeries::one(order, ctx) }
    }

    pub(crate) fn order(&self) -> usize {
        self.unit.order()
    }

    pub(crate) fn ctx(&self) -> F::Ctx {
        self.unit.ctx()
    }

    /// Multiplies by the constant `c^e`. Rational powers are taken on the
    /// positive real branch only, so a negative `c` needs an integer `e`.
    pub(crate) fn constant(&mut self, c: &Rational, e: &Rational) -> Result<(), EgfError> {
        if *c < 0 && !crate::util::is_int(e) {
            return Err(EgfError::DomainError(format!("negative base {c} raised to {e}")));
        }
        if !self.constant.mul_pow(c, e) {
            return Err(EgfError::DomainError(format!("zero base raised to {e}")));
        }
        Ok(())
    }

    /// Multiplies by `base^e`, where `base(0) = base0`.
    pub(crate) fn pow(&mut self, base: &TruncSeries<F>, base0: &Rational, e: &Rational) -> Result<(), EgfError> {
        debug_assert!(near(base.constant_term(), base0), "base0 {base0} vs {}", base.constant_term());
        if *base0 == 0 {
            return Err(EgfError::DomainError("factor vanishes at y = 0".into()));
        }
        self.constant(base0, e)?;
        let u = normalize(base, base0).pow(e)?;
        self.unit = &self.unit * &u;
        Ok(())
    }

    /// Multiplies by `exp(arg)`, where `arg(0) = arg0`.
    pub(crate) fn exp(&mut self, arg: &TruncSeries<F>, arg0: &Rational) -> Result<(), EgfError> {
        debug_assert!(near(arg.constant_term(), arg0), "arg0 {arg0} vs {}", arg.constant_term());
        self.constant.mul_exp(arg0);
        let mut c: Vec<F> = arg.coeffs().to_vec();
        c[0] = F::zero(arg.ctx());
        let e = TruncSeries::new(c, arg.order(), arg.ctx()).exp()?;
        self.unit = &self.unit * &e;
        Ok(())
    }
}

impl Builder<Rational> {
    pub(crate) fn finish_exact(self) -> Result<QSeries, EgfError> {
        let c = self.constant.to_rational().ok_or(EgfError::NotExact)?;
        Ok(self.unit.scale(&c))
    }
}

impl Builder<Float> {
    pub(crate) fn finish_float(self) -> Result<FSeries, EgfError> {
        let prec = self.unit.ctx().0;
        let c = self
            .constant
            .to_float(prec)
            .ok_or_else(|| EgfError::DomainError("constant factor is not real on the principal branch".into()))?;
        Ok(self.unit.scale(&c))
    }
}

/// Runs a generic factor assembly in the requested field.
pub(crate) fn run_in_field(
    order: usize,
    field: Field,
    exact: impl Fn(&mut Builder<Rational>) -> Result<(), EgfError>,
    float: impl Fn(&mut Builder<Float>) -> Result<(), EgfError>,
) -> Result<EgfSeries, EgfError> {
    let do_float = |prec: Prec| -> Result<EgfSeries, EgfError> {
        let mut b = Builder::<Float>::new(order, prec);
        float(&mut b)?;
        Ok(EgfSeries::Float(b.finish_float()?))
    };
    match field {
        Field::Float(prec) => do_float(prec),
        Field::Exact | Field::Auto(_) => {
            let mut b = Builder::<Rational>::new(order, ());
            exact(&mut b)?;
            match (b.finish_exact(), field) {
                (Ok(s), _) => Ok(EgfSeries::Exact(s)),
                (Err(EgfError::NotExact), Field::Auto(prec)) => do_float(prec),
                (Err(e), _) => Err(e),
            }
        }
    }
}

/// Validity domain for evaluation points: `x0 > 0` always, and `x0 < 1`
/// for the three types whose `G^{-1}` is a series in `x`.
pub(crate) fn check_x0(p: &ParamTuple, x0: &Rational) -> Result<(), EgfError> {
    if *x0 <= 0 {
        return Err(EgfError::DomainError(format!("x0 = {x0} must be positive")));
    }
    if p.classify() != RecType::IV && *x0 >= 1 {
        return Err(EgfError::DomainError(format!("x0 = {x0} must lie in (0, 1)")));
    }
    Ok(())
}

/// `sum_{n <= N} P_n(x0) y^n / n!` straight from the triangle.
pub fn egf_from_triangle(p: &ParamTuple, x0: &Rational, order: usize) -> QSeries {
    let t = triangle(p, order);
    let coeffs = (0..=order)
        .map(|n| {
            let v = t.row_poly(n).expect("row within triangle").eval(x0);
            v / Rational::from(factorial(n as u32))
        })
        .collect();
    QSeries::new(coeffs, order, ())
}

/// Residuals `R_n`, `n < N`, of the order-by-order form of the EGF's PDE,
/// using the row polynomials of `p` itself.
pub fn pde_residual(p: &ParamTuple, order: usize) -> Vec<Poly> {
    let t = triangle(p, order);
    let polys: Vec<Poly> = (0..=order).map(|n| t.row_poly(n).expect("row within triangle")).collect();
    pde_residual_with(p, &polys)
}

/// `R_n = -(b + b'x) x P_n' + P_{n+1} - n (a + a'x) P_n - (a + c + (a' + b' + c') x) P_n`
/// for `n = 0 .. polys.len() - 2`, with arbitrary candidate polynomials.
pub fn pde_residual_with(p: &ParamTuple, polys: &[Poly]) -> Vec<Poly> {
    let bx = Poly::from_coeffs(vec![Rational::new(), p.beta.clone(), p.beta_p.clone()]);
    let ax = Poly::linear(p.alpha.clone(), p.alpha_p.clone());
    let cx = Poly::linear(p.g(), p.h());
    polys
        .windows(2)
        .enumerate()
        .map(|(n, w)| {
            let (pn, pn1) = (&w[0], &w[1]);
            let t1 = &bx * &pn.derivative();
            let t2 = &ax.scale(&Rational::from(n)) * pn;
            let t3 = &cx * pn;
            &(&(pn1 - &t1) - &t2) - &t3
        })
        .collect()
}

#[cfg(test)]
mod tests;
