use std::fmt;
use std::str::FromStr;

use rug::Rational;
use serde::{Serialize, Serializer};

use super::{check_x0, run_in_field, Builder, EgfError, EgfSeries, Field};
use crate::params::{derived_type_i, ParamTuple, RecType};
use crate::series::{q_nu, Coeff, TruncSeries};
use crate::util::as_nonneg_int;

/// Parameter families with an elementary (or tree-function) EGF.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpecialCase {
    S3RpPlus1EqR,
    S1REqMinus1,
    R1R1,
    NeuwirthRp0,
    NuEulerian,
    NuWard,
    IIAlphaEqMinusBeta,
    IIAlphap0,
    IIIApEqBp,
    IIIAlpha0,
    IIIAp0,
    TypeIV,
    None,
}

impl SpecialCase {
    /// Detection order; earlier entries win on overlaps.
    pub const PRIORITY: [SpecialCase; 12] = [
        SpecialCase::TypeIV,
        SpecialCase::S3RpPlus1EqR,
        SpecialCase::S1REqMinus1,
        SpecialCase::R1R1,
        SpecialCase::NeuwirthRp0,
        SpecialCase::NuEulerian,
        SpecialCase::NuWard,
        SpecialCase::IIAlphaEqMinusBeta,
        SpecialCase::IIAlphap0,
        SpecialCase::IIIApEqBp,
        SpecialCase::IIIAlpha0,
        SpecialCase::IIIAp0,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            SpecialCase::S3RpPlus1EqR => "S3_rp_plus1_eq_r",
            SpecialCase::S1REqMinus1 => "S1_r_eq_minus1",
            SpecialCase::R1R1 => "R1R1",
            SpecialCase::NeuwirthRp0 => "Neuwirth_rp0",
            SpecialCase::NuEulerian => "NuEulerian",
            SpecialCase::NuWard => "NuWard",
            SpecialCase::IIAlphaEqMinusBeta => "II_alpha_eq_minus_beta",
            SpecialCase::IIAlphap0 => "II_alphap0",
            SpecialCase::IIIApEqBp => "III_ap_eq_bp",
            SpecialCase::IIIAlpha0 => "III_alpha0",
            SpecialCase::IIIAp0 => "III_ap0",
            SpecialCase::TypeIV => "TypeIV",
            SpecialCase::None => "None",
        }
    }

    /// Exact membership predicate.
    pub fn matches(self, p: &ParamTuple) -> bool {
        let t = p.classify();
        match self {
            SpecialCase::TypeIV => t == RecType::IV,
            SpecialCase::None => false,
            SpecialCase::IIAlphaEqMinusBeta => t == RecType::II && p.alpha == -p.beta.clone(),
            SpecialCase::IIAlphap0 => t == RecType::II && p.alpha_p == 0,
            SpecialCase::IIIApEqBp => t == RecType::III && p.alpha_p == p.beta_p,
            SpecialCase::IIIAlpha0 => t == RecType::III && p.alpha == 0,
            SpecialCase::IIIAp0 => t == RecType::III && p.alpha_p == 0,
            _ => {
                let Ok(d) = derived_type_i(p) else { return false };
                let pos_int = |q: &Rational| as_nonneg_int(q).is_some_and(|v| v > 0);
                match self {
                    SpecialCase::S3RpPlus1EqR => Rational::from(&d.rp + 1) == d.r,
                    SpecialCase::S1REqMinus1 => d.r == -1,
                    SpecialCase::R1R1 => d.r == 1 && d.rp == 1,
                    SpecialCase::NeuwirthRp0 => d.rp == 0,
                    SpecialCase::NuEulerian => d.r == 0 && pos_int(&-d.rp.clone()),
                    SpecialCase::NuWard => d.r == 0 && pos_int(&d.rp),
                    _ => unreachable!(),
                }
            }
        }
    }
}

impl fmt::Display for SpecialCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for SpecialCase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        SpecialCase::PRIORITY
            .iter()
            .chain([SpecialCase::None].iter())
            .find(|c| c.tag().eq_ignore_ascii_case(s))
            .copied()
            .ok_or_else(|| format!("unknown special case {s:?}"))
    }
}

impl Serialize for SpecialCase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// Every special case whose predicate holds, in priority order.
pub fn matching_cases(p: &ParamTuple) -> Vec<SpecialCase> {
    SpecialCase::PRIORITY.iter().copied().filter(|c| c.matches(p)).collect()
}

pub fn special_case_detect(p: &ParamTuple) -> SpecialCase {
    matching_cases(p).first().copied().unwrap_or(SpecialCase::None)
}

fn q(v: i64) -> Rational {
    Rational::from(v)
}

fn nonzero(v: &Rational, what: &str) -> Result<(), EgfError> {
    if *v == 0 {
        Err(EgfError::DomainError(format!("{what} vanishes at x0")))
    } else {
        Ok(())
    }
}

/// Re-centres `T_nu` at `a`: returns the `delta(y)` with `delta(0) = 0` and
/// `(a + delta) exp(Q_nu(a + delta) - Q_nu(a)) - a = rhs(y)`, which is
/// `T_nu = a + delta` on the branch through `T_nu(T_nu^{-1}(a)) = a`.
fn tree_shift<F: Coeff>(nu: u32, a: &Rational, rhs: &TruncSeries<F>) -> Result<TruncSeries<F>, EgfError> {
    let (n, ctx) = (rhs.order(), rhs.ctx());
    let s = TruncSeries::<F>::linear_q(a, &q(1), n, ctx);
    let poly = q_nu(nu);
    let mut acc = TruncSeries::<F>::zero(n, ctx);
    for c in poly.coeffs().iter().rev() {
        acc = acc.mul_trunc(&s).add_const(&F::from_q(c, ctx));
    }
    let qa = poly.eval(a);
    let mut shifted: Vec<F> = acc.coeffs().to_vec();
    shifted[0] = F::zero(ctx);
    debug_assert!((acc.coeff(0).to_f64() - qa.to_f64()).abs() < 1e-9 * qa.to_f64().abs().max(1.0));
    let e = TruncSeries::new(shifted, n, ctx).exp()?;
    let mut h: Vec<F> = (&s * &e).coeffs().to_vec();
    h[0] = F::zero(ctx);
    let h = TruncSeries::new(h, n, ctx);
    if h.coeff(1).is_zero() {
        return Err(EgfError::DomainError("tree function evaluated at a branch point".into()));
    }
    Ok(h.reversion()?.compose(rhs)?)
}

/// `exp(c y) - 1`
fn expm1<F: Coeff>(c: &Rational, n: usize, ctx: F::Ctx) -> Result<TruncSeries<F>, EgfError> {
    let e = TruncSeries::<F>::linear_q(&Rational::new(), c, n, ctx).exp()?;
    Ok(e.add_const(&F::from_i64(-1, ctx)))
}

fn build<F: Coeff>(b: &mut Builder<F>, p: &ParamTuple, case: SpecialCase, x: &Rational) -> Result<(), EgfError> {
    let (n, ctx) = (b.order(), b.ctx());
    let (al, be, ga) = (&p.alpha, &p.beta, &p.gamma);
    let (alp, bep, gap) = (&p.alpha_p, &p.beta_p, &p.gamma_p);
    let zero = Rational::new();
    let one = q(1);
    let lin = |c0: &Rational, c1: Rational| TruncSeries::<F>::linear_q(c0, &c1, n, ctx);
    let k = |v: &Rational| F::from_q(v, ctx);
    let bx = be + Rational::from(bep * x); // b + b' x
    let bpx = Rational::from(bep * x); // b' x

    match case {
        SpecialCase::TypeIV => {
            let a = al + Rational::from(alp * x);
            let c = p.g() + Rational::from(alp + gap) * x;
            if a != 0 {
                b.pow(&lin(&one, -a.clone()), &one, &(-c / a))?;
            } else {
                b.exp(&lin(&zero, c), &zero)?;
            }
        }
        SpecialCase::S3RpPlus1EqR => {
            nonzero(&bx, "beta + beta' x")?;
            let e = Rational::from(gap / bep) - Rational::from(ga / be);
            if *al != 0 {
                let u = lin(&one, -Rational::from(al * &bx) / be);
                let num =
                    u.pow(&-Rational::from(be / al))?.scale_q(&(bpx.clone() / &bx)).add_const(&k(&(be.clone() / &bx)));
                b.pow(&num, &one, &e)?;
                b.pow(&u, &one, &-(p.g() / al))?;
            } else {
                b.exp(&lin(&zero, Rational::from(&bx * ga) / be), &zero)?;
                let ex = TruncSeries::<F>::linear_q(&zero, &bx, n, ctx).exp()?;
                let num = ex.scale_q(&(bpx.clone() / &bx)).add_const(&k(&(be.clone() / &bx)));
                b.pow(&num, &one, &e)?;
            }
        }
        SpecialCase::S1REqMinus1 => {
            let s = Rational::from(alp + bep);
            if s != 0 {
                let w = lin(&one, -Rational::from(&s * x));
                let inner = w
                    .pow(&-Rational::from(bep / &s))?
                    .scale_q(&(bx.clone() / &bpx))
                    .add_const(&k(&-(be.clone() / &bpx)));
                b.pow(&inner, &one, &(Rational::from(ga / be) - 1))?;
                let num: Rational =
                    Rational::from(be * bep) * 2 + Rational::from(alp + gap) * be - Rational::from(ga * bep);
                let ex = num / Rational::from(be * &s);
                b.pow(&w, &one, &-ex)?;
            } else {
                let c = bpx.clone() * (Rational::from(gap / bep) + 1 - Rational::from(ga / be));
                b.exp(&lin(&zero, c), &zero)?;
                let ex = TruncSeries::<F>::linear_q(&zero, &bpx, n, ctx).exp()?;
                let inner = ex.scale_q(&(bx.clone() / &bpx)).add_const(&k(&-(be.clone() / &bpx)));
                b.pow(&inner, &one, &(Rational::from(ga / be) - 1))?;
            }
        }
        SpecialCase::R1R1 => {
            nonzero(&bx, "beta + beta' x")?;
            let w0 = Rational::from(be / &bpx) + 1;
            let c = Rational::from(be * be) / &bpx;
            let rhs = expm1::<F>(&c, n, ctx)?.scale_q(&w0);
            let t = tree_shift(2, &w0, &rhs)?.add_const(&k(&w0));
            b.constant(&bpx, &-(Rational::from(ga / be) + 1u32))?;
            let e1 = Rational::from(gap / bep) + 1 - Rational::from(ga / be);
            b.pow(&t.scale_q(&Rational::from(bx.recip_ref())), &(w0.clone() / &bx), &e1)?;
            let tm1 = t.add_const(&k(&q(-1)));
            let e2 = Rational::from(gap / bep) + 2;
            b.pow(&tm1.recip()?.scale_q(be), &(be.clone() / (w0 - 1)), &e2)?;
        }
        SpecialCase::NeuwirthRp0 => {
            let e1 = Rational::from(gap / bep) + 1;
            if *al != 0 {
                let u = lin(&one, -al.clone());
                let den = u.pow(&Rational::from(be / al))?.scale_q(&bx).add_const(&k(&-bpx.clone()));
                b.pow(&den.recip()?.scale_q(be), &one, &e1)?;
                let e2 = Rational::from(be / al) * (e1.clone() - p.g() / be);
                b.pow(&u, &one, &e2)?;
            } else {
                b.exp(&lin(&zero, ga.clone()), &zero)?;
                let den = expm1::<F>(be, n, ctx)?.scale_q(&-bpx.clone()).add_const(&k(be));
                b.pow(&den.recip()?.scale_q(be), &one, &e1)?;
            }
        }
        SpecialCase::NuEulerian => {
            nonzero(&bx, "beta + beta' x")?;
            let nu = as_nonneg_int(&-Rational::from(alp / bep)).expect("nu in N");
            let a = -Rational::from(&bpx / be);
            let c = crate::util::pow_int(be, 1 - nu as i64) * crate::util::pow_int(&bx, nu as i64);
            let rhs = expm1::<F>(&c, n, ctx)?.scale_q(&a);
            let t = tree_shift(nu, &a, &rhs)?.add_const(&k(&a));
            b.constant(be, &(Rational::from(gap / bep) + 1 - nu))?;
            let m_bpx = -bpx.clone();
            b.pow(&t.scale_q(&Rational::from(m_bpx.recip_ref())), &(a.clone() / &m_bpx), &Rational::from(ga / be))?;
            let one_m_t = (-&t).add_const(&k(&one)).scale_q(&Rational::from(bx.recip_ref()));
            let e = Rational::from(gap / bep) + 1 - nu - Rational::from(ga / be);
            b.pow(&one_m_t, &((one.clone() - &a) / &bx), &e)?;
        }
        SpecialCase::NuWard => {
            nonzero(&bx, "beta + beta' x")?;
            let nu = as_nonneg_int(&Rational::from(alp / bep)).expect("nu in N");
            let a = bpx.clone() / &bx;
            let c = crate::util::pow_int(be, 1 + nu as i64) * crate::util::pow_int(&bx, -(nu as i64));
            let rhs = expm1::<F>(&c, n, ctx)?.scale_q(&a);
            let t = tree_shift(nu + 1, &a, &rhs)?.add_const(&k(&a));
            let e0 = Rational::from(gap / bep) + 1 + nu;
            b.constant(be, &e0)?;
            b.constant(&bx, &-(e0.clone() - Rational::from(ga / be)))?;
            b.pow(&t.scale_q(&Rational::from(bpx.recip_ref())), &(a.clone() / &bpx), &Rational::from(ga / be))?;
            let one_m_t = (-&t).add_const(&k(&one));
            b.pow(&one_m_t, &(one.clone() - &a), &-e0)?;
        }
        SpecialCase::IIAlphaEqMinusBeta => {
            if *alp != 0 {
                let w = lin(&one, -Rational::from(alp * x));
                let l = w.log()?.scale_q(&-(be.clone() / Rational::from(alp * x))).add_const(&k(&one));
                b.pow(&l, &one, &(Rational::from(ga / be) - 1))?;
                b.pow(&w, &one, &(-Rational::from(gap / alp) - 1))?;
            } else {
                b.pow(&lin(&one, be.clone()), &one, &(Rational::from(ga / be) - 1))?;
                b.exp(&lin(&zero, Rational::from(gap * x)), &zero)?;
            }
        }
        SpecialCase::IIAlphap0 => {
            if *al != 0 {
                let u = lin(&one, -al.clone());
                b.pow(&u, &one, &(-Rational::from(ga / al) - 1))?;
                let arg =
                    (-&u.pow(&-Rational::from(be / al))?).add_const(&k(&one)).scale_q(&-(Rational::from(gap * x) / be));
                b.exp(&arg, &zero)?;
            } else {
                let arg = &lin(&zero, ga.clone()) + &expm1::<F>(be, n, ctx)?.scale_q(&(Rational::from(gap * x) / be));
                b.exp(&arg, &zero)?;
            }
        }
        SpecialCase::IIIApEqBp => {
            if *al != 0 {
                let w0 = Rational::from(1) - Rational::from(al / &bpx);
                let rhs = lin(&zero, Rational::from(al * al) / &bpx);
                let t = tree_shift(2, &w0, &rhs)?.add_const(&k(&w0));
                let one_m_t = (-&t).add_const(&k(&one));
                let one_m_w0 = one.clone() - &w0;
                let base = one_m_t.recip()?.scale_q(&(al.clone() / &bpx));
                b.pow(&base, &(al.clone() / &bpx / &one_m_w0), &(Rational::from(gap / bep) + 2))?;
                let c = p.g() / bep;
                let inv_x = Rational::from(x.recip_ref());
                let arg = one_m_t.scale_q(&-Rational::from(bep / al)).add_const(&k(&inv_x)).scale_q(&c);
                let arg0 = c * (inv_x - Rational::from(bep / al) * one_m_w0);
                b.exp(&arg, &arg0)?;
            } else {
                let v = lin(&one, -Rational::from(&bpx * 2));
                let e: Rational = Rational::from(gap / bep) / 2 + 1;
                b.pow(&v, &one, &-e)?;
                let arg = (-&v.pow(&Rational::from((1, 2)))?).add_const(&k(&one)).scale_q(&(ga.clone() / &bpx));
                b.exp(&arg, &zero)?;
            }
        }
        SpecialCase::IIIAlpha0 => {
            let s = Rational::from(alp + bep);
            if s != 0 {
                let w = lin(&one, -Rational::from(x * &s));
                let arg = (-&w.pow(&(bep.clone() / &s))?).add_const(&k(&one)).scale_q(&(ga.clone() / &bpx));
                b.exp(&arg, &zero)?;
                b.pow(&w, &one, &-(Rational::from(gap / &s) + 1u32))?;
            } else {
                b.exp(&lin(&zero, Rational::from(gap * x)), &zero)?;
                let arg = expm1::<F>(&-bpx.clone(), n, ctx)?.scale_q(&-(ga.clone() / &bpx));
                b.exp(&arg, &zero)?;
            }
        }
        SpecialCase::IIIAp0 => {
            let e1 = Rational::from(gap / bep) + 1;
            if *al != 0 {
                let u = lin(&one, -al.clone());
                let den = u.log()?.scale_q(&bpx).add_const(&k(al));
                b.pow(&den.recip()?.scale_q(al), &one, &e1)?;
                b.pow(&u, &one, &(-Rational::from(ga / al) - 1))?;
            } else {
                b.exp(&lin(&zero, ga.clone()), &zero)?;
                b.pow(&lin(&one, -bpx.clone()), &one, &-e1)?;
            }
        }
        SpecialCase::None => unreachable!(),
    }
    Ok(())
}

/// Closed-form EGF of a special case at `x0`, expanded to order `N` in `y`.
pub fn egf_closed_form(
    p: &ParamTuple,
    case: SpecialCase,
    x0: &Rational,
    order: usize,
    field: Field,
) -> Result<EgfSeries, EgfError> {
    if case == SpecialCase::None {
        return Err(EgfError::NotApplicable("no closed form for this tuple".into()));
    }
    if !case.matches(p) {
        return Err(EgfError::CaseMismatch { case, params: p.to_string() });
    }
    check_x0(p, x0)?;
    run_in_field(order, field, |b| build(b, p, case, x0), |b| build(b, p, case, x0))
}
