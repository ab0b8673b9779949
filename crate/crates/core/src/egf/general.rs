//! Assembly of the characteristic-curve solution for arbitrary rational
//! parameters. Instead of inverting the generalized series itself, the
//! increment `G^{-1}(v + t) - G^{-1}(v)` is written as `D(v) * L(t)`, where
//! `D` is the elementary closed form of `(G^{-1})'` and `L` is an exact
//! power series with `L(t) = t + O(t^2)`. Solving
//! `G^{-1}(v + delta) = G^{-1}(v) + shift(y)` then reduces to one series
//! reversion.

use rug::Rational;

use super::{cases, check_x0, run_in_field, Builder, EgfError, EgfSeries, Field, PowerProduct};
use crate::params::{derived_type_i, ParamTuple, RecType};
use crate::series::{Coeff, TruncSeries};

/// Value of the variable of `G^{-1}` at `x0`: `X = |b'/b| x0` for Type I,
/// `x0` otherwise.
pub fn gen_var_at(p: &ParamTuple, x0: &Rational) -> Rational {
    match p.classify() {
        RecType::I => Rational::from(&p.beta_p / &p.beta).abs() * x0,
        _ => x0.clone(),
    }
}

fn type_i_shift(p: &ParamTuple, v: &Rational) -> Result<(Rational, Rational), EgfError> {
    let d = derived_type_i(p).expect("type I");
    let one_sx = Rational::from(1) + d.sigma_q() * v;
    if one_sx == 0 {
        return Err(EgfError::DomainError("1 + sigma X vanishes".into()));
    }
    Ok((d.sigma_q(), one_sx))
}

/// The integrand `I(u) = D(v + u) / D(v)` as a power series in `u`, where
/// `D = (G^{-1})'` and `v` is the value of the variable of `G^{-1}`.
pub fn unit_integrand<F: Coeff>(
    p: &ParamTuple,
    v: &Rational,
    order: usize,
    ctx: F::Ctx,
) -> Result<TruncSeries<F>, EgfError> {
    if *v == 0 {
        return Err(EgfError::DomainError("G^{-1} is singular at 0".into()));
    }
    let one = Rational::from(1);
    let lin = |c1: Rational| TruncSeries::<F>::linear_q(&one, &c1, order, ctx);
    let inv_v = Rational::from(v.recip_ref());
    match p.classify() {
        RecType::I => {
            let d = derived_type_i(p).expect("type I");
            let (sigma, one_sx) = type_i_shift(p, v)?;
            let a = lin(inv_v).pow(&(-d.r.clone() - 1))?;
            let b = lin(sigma / one_sx).pow(&d.m())?;
            Ok(&a * &b)
        }
        RecType::II => {
            let a = lin(inv_v).pow(&(-Rational::from(&p.alpha / &p.beta) - 1))?;
            let e = TruncSeries::<F>::linear_q(&Rational::new(), &-Rational::from(&p.alpha_p / &p.beta), order, ctx);
            Ok(&a * &e.exp()?)
        }
        RecType::III => {
            let base = lin(inv_v);
            let a = base.pow(&(-Rational::from(&p.alpha_p / &p.beta_p) - 2))?;
            let c = -Rational::from(&p.alpha / &p.beta_p) / Rational::from(v * v);
            let arg = (&TruncSeries::var(order, ctx) * &base.recip()?).scale_q(&c);
            Ok(&a * &arg.exp()?)
        }
        RecType::IV => Err(EgfError::NotApplicable("Type IV has no generalized series".into())),
    }
}

/// `L(t) = (G^{-1}(v + t) - G^{-1}(v)) / D(v)` to order `order`.
pub fn delta_g<F: Coeff>(p: &ParamTuple, v: &Rational, order: usize, ctx: F::Ctx) -> Result<TruncSeries<F>, EgfError> {
    let i = unit_integrand::<F>(p, v, order.saturating_sub(1), ctx)?;
    Ok(i.integral().truncate(order))
}

/// `D(v) = (G^{-1})'(v)` as a symbolic constant.
pub fn g_inverse_derivative(p: &ParamTuple, v: &Rational) -> Result<PowerProduct, EgfError> {
    let mut pp = PowerProduct::one();
    let bad = || EgfError::DomainError("G^{-1} is singular here".into());
    match p.classify() {
        RecType::I => {
            let d = derived_type_i(p).expect("type I");
            let (_, one_sx) = type_i_shift(p, v)?;
            (pp.mul_pow(v, &(-d.r.clone() - 1)) && pp.mul_pow(&one_sx, &d.m())).then_some(()).ok_or_else(bad)?;
        }
        RecType::II => {
            let a = Rational::from(&p.alpha / &p.beta);
            (pp.mul_pow(&p.beta, &Rational::from(-1)) && pp.mul_pow(v, &(-a - 1))).then_some(()).ok_or_else(bad)?;
            pp.mul_exp(&(-Rational::from(&p.alpha_p * v) / &p.beta));
        }
        RecType::III => {
            let t = Rational::from(&p.alpha_p / &p.beta_p);
            (pp.mul_pow(&p.beta_p, &Rational::from(-1)) && pp.mul_pow(v, &(-t - 2))).then_some(()).ok_or_else(bad)?;
            pp.mul_exp(&(Rational::from(&p.alpha / &p.beta_p) / v));
        }
        RecType::IV => return Err(EgfError::NotApplicable("Type IV has no generalized series".into())),
    }
    Ok(pp)
}

fn assemble<F: Coeff>(b: &mut Builder<F>, p: &ParamTuple, x0: &Rational) -> Result<(), EgfError> {
    let (n, ctx) = (b.order(), b.ctx());
    let one = Rational::from(1);
    let zero = Rational::new();
    let v = gen_var_at(p, x0);
    let l = delta_g::<F>(p, &v, n, ctx)?;
    let shift = match p.classify() {
        RecType::I => {
            let (_, one_sx) = type_i_shift(p, &v)?;
            Rational::from(&v * &one_sx) * &p.beta
        }
        RecType::II => Rational::from(&p.beta * &v),
        RecType::III => Rational::from(&p.beta_p * &v) * &v,
        RecType::IV => unreachable!(),
    };
    let rhs = TruncSeries::<F>::linear_q(&zero, &shift, n, ctx);
    let delta = l.reversion()?.compose(&rhs)?;
    let ratio = delta.scale_q(&Rational::from(v.recip_ref())).add_const(&F::one(ctx)); // 1 + delta / v
    match p.classify() {
        RecType::I => {
            let d = derived_type_i(p).expect("type I");
            let (sigma, one_sx) = type_i_shift(p, &v)?;
            b.pow(&ratio, &one, &d.s)?;
            let second = delta.scale_q(&(sigma / one_sx)).add_const(&F::one(ctx));
            b.pow(&second, &one, &-Rational::from(&d.s + &d.sp))?;
        }
        RecType::II => {
            b.pow(&ratio, &one, &(p.g() / &p.beta))?;
            let c = Rational::from(&p.alpha_p + &p.gamma_p) / &p.beta;
            b.exp(&delta.scale_q(&c), &zero)?;
        }
        RecType::III => {
            b.pow(&ratio, &one, &(Rational::from(&p.alpha_p + &p.gamma_p) / &p.beta_p + 1))?;
            // 1/v - 1/(v + delta) = (delta / v^2) / (1 + delta / v)
            let c = p.g() / Rational::from(&p.beta_p * &v) / &v;
            let arg = delta.div(&ratio)?.scale_q(&c);
            b.exp(&arg, &zero)?;
        }
        RecType::IV => unreachable!(),
    }
    Ok(())
}

/// EGF at `x0` for arbitrary rational parameters, via the reversion of the
/// exact increment series of `G^{-1}`. Type IV uses its closed form.
pub fn egf_general(p: &ParamTuple, x0: &Rational, order: usize, field: Field) -> Result<EgfSeries, EgfError> {
    if p.classify() == RecType::IV {
        return cases::egf_closed_form(p, cases::SpecialCase::TypeIV, x0, order, field);
    }
    check_x0(p, x0)?;
    if order == 0 {
        return run_in_field(0, field, |_| Ok(()), |_| Ok(()));
    }
    run_in_field(order, field, |b| assemble(b, p, x0), |b| assemble(b, p, x0))
}
