//! Row polynomials `P_n(x0)` from the residue (limit-of-derivative) formulas.
//!
//! Each formula has the shape `prefactor * d^n/dz^n [bracket(z)]` at `z = x0`.
//! The bracket is expanded as a float series in `t = z - x0` and the
//! derivative read off as `n! [t^n]`. Constant parts of the bracket are
//! pulled out symbolically and combined with the prefactor.

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;
use thiserror::Error;

use crate::egf::{delta_g, g_inverse_derivative, gen_var_at, EgfError, GenSeries, GenVar, PowerProduct};
use crate::params::{derived_type_i, ParamTuple, RecType, TypeIDerived};
use crate::series::{FSeries, Prec, TruncSeries};
use crate::util::{as_nonneg_int, binomial_q, factorial};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ResidueError {
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("outside the domain of the formula: {0}")]
    DomainError(String),
    #[error("estimated relative error {estimate:e} exceeds tolerance {tol:e}")]
    PrecisionLoss { estimate: f64, tol: f64 },
    #[error(transparent)]
    Egf(#[from] EgfError),
}

/// Which residue formula to evaluate for Type I.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ResidueForm {
    /// The form built on `G^{-1}(z) - G^{-1}(x0)` (all types).
    Main,
    /// The logarithmic form through `Q^0` (Type I with `r` a non-negative integer).
    Alternative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidueJob {
    pub params: ParamTuple,
    pub n: usize,
    pub x0: Rational,
    /// Working precision in decimal digits.
    pub precision: u32,
    pub form: ResidueForm,
}

impl ResidueJob {
    /// Job at the default precision `max(50, 10 n)` digits.
    pub fn new(params: ParamTuple, n: usize, x0: Rational) -> Self {
        let precision = 50.max(10 * n as u32);
        ResidueJob { params, n, x0, precision, form: ResidueForm::Main }
    }

    pub fn with_precision(mut self, digits: u32) -> Self {
        self.precision = digits;
        self
    }

    pub fn with_form(mut self, form: ResidueForm) -> Self {
        self.form = form;
        self
    }

    /// Default tolerance on the estimated relative error.
    pub fn default_tol(&self) -> f64 {
        10f64.powi(-(self.precision as i32 - 20).max(10))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidueValue {
    pub value: Float,
    /// `|v(p) - v(2p)| / max(1, |v(2p)|)` for working precision `p`.
    pub est_rel_error: Float,
    pub digits: u32,
}

/// `Q^0 = sum_{k in Z_0 \ {r}} sigma^k C(-1-r'+r, k) X^{k-r} / (k-r)`, the
/// generalized series without its log term, summed over `k = 0 ..= order`.
pub fn q0_series(d: &TypeIDerived, order: usize) -> Result<GenSeries, ResidueError> {
    let Some(r) = as_nonneg_int(&d.r) else {
        return Err(ResidueError::NotApplicable(format!("r = {} is not a non-negative integer", d.r)));
    };
    let m = d.m();
    let mut terms = Vec::new();
    for k in 0..=order as u32 {
        if k == r {
            continue;
        }
        let sign = if d.sigma < 0 && k % 2 == 1 { -1 } else { 1 };
        let e = Rational::from(k) - r;
        let c = binomial_q(&m, k) * sign / &e;
        if c != 0 {
            terms.push((e, c));
        }
    }
    Ok(GenSeries { var: GenVar::Rescaled, terms, log_coeff: Rational::new(), trunc_order: order })
}

/// Evaluates `P_n(x0)` at the job's precision and at twice that precision,
/// failing with `PrecisionLoss` when the two disagree beyond `tol`.
pub fn row_poly_residue(job: &ResidueJob) -> Result<ResidueValue, ResidueError> {
    row_poly_residue_tol(job, job.default_tol())
}

pub fn row_poly_residue_tol(job: &ResidueJob, tol: f64) -> Result<ResidueValue, ResidueError> {
    let lo = evaluate(job, job.precision, ExpSign::Minus)?;
    let hi = evaluate(job, job.precision * 2, ExpSign::Minus)?;
    let prec = Prec::from_digits(job.precision * 2).0;
    let diff = Float::with_val(prec, &lo - &hi).abs();
    let scale = Float::with_val(prec, hi.abs_ref()).max(&Float::with_val(prec, 1));
    let est = diff / scale;
    if est.to_f64() > tol {
        return Err(ResidueError::PrecisionLoss { estimate: est.to_f64(), tol });
    }
    Ok(ResidueValue {
        value: Float::with_val(Prec::from_digits(job.precision).0, &hi),
        est_rel_error: est,
        digits: job.precision,
    })
}

/// Sign of the `exp(gamma / (beta' z))` factor in the Type III bracket.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ExpSign {
    /// `exp(-gamma / (beta' z))`, which makes `P_0 = 1`.
    Minus,
    /// `exp(+gamma / (beta' z))`; breaks `P_0 = 1`, only used by a test.
    #[cfg_attr(not(test), allow(dead_code))]
    Plus,
}

fn domain(msg: &str) -> ResidueError {
    ResidueError::DomainError(msg.into())
}

fn one_plus(c: &Rational, order: usize, prec: Prec) -> FSeries {
    TruncSeries::linear_q(&Rational::from(1), c, order, prec)
}

fn evaluate(job: &ResidueJob, digits: u32, sign: ExpSign) -> Result<Float, ResidueError> {
    let p = &job.params;
    let x0 = &job.x0;
    if *x0 <= 0 || *x0 >= 1 {
        return Err(domain("x0 must lie in (0, 1)"));
    }
    if job.form == ResidueForm::Alternative && p.classify() != RecType::I {
        return Err(ResidueError::NotApplicable("the logarithmic form is stated for Type I only".into()));
    }
    let n = job.n;
    let prec = Prec::from_digits(digits);
    let np1 = Rational::from(n + 1);
    let mut konst = PowerProduct::one();
    let push = |pp: &mut PowerProduct, b: &Rational, e: &Rational| -> Result<(), ResidueError> {
        if *b < 0 && *e.denom() != 1 {
            return Err(domain("negative base raised to a fractional power"));
        }
        pp.mul_pow(b, e).then_some(()).ok_or_else(|| domain("prefactor singular at x0"))
    };

    let unit: FSeries = match p.classify() {
        RecType::I => {
            let d = derived_type_i(p).expect("type I");
            let x = gen_var_at(p, x0);
            let sigma = d.sigma_q();
            let one_sx = Rational::from(1) + Rational::from(&sigma * &x);
            if one_sx <= 0 {
                return Err(domain("1 + sigma X must be positive"));
            }
            // prefactor (1 + sigma X)^{n(r - r') + s + s'} / X^{s + r n}
            let e1 = Rational::from(&d.r - &d.rp) * n as u64 + &d.s + &d.sp;
            push(&mut konst, &one_sx, &e1)?;
            push(&mut konst, &x, &-(Rational::from(&d.r * n as u64) + &d.s))?;
            // Z^{s-r-1} (1 + sigma Z)^{-eta}
            let ez = Rational::from(&d.s - &d.r) - 1;
            push(&mut konst, &x, &ez)?;
            push(&mut konst, &one_sx, &-d.eta())?;
            let a = one_plus(&Rational::from(x.recip_ref()), n, prec).pow(&ez).map_err(EgfError::from)?;
            let b = one_plus(&(sigma.clone() / &one_sx), n, prec).pow(&-d.eta()).map_err(EgfError::from)?;
            // P_n(x) = beta^n calP_n(X)
            push(&mut konst, &p.beta, &Rational::from(n))?;
            let ratio = match job.form {
                ResidueForm::Main => {
                    let dv = g_inverse_derivative(p, &x)?;
                    konst.mul_power_of(&dv, &-np1.clone());
                    delta_g::<Float>(p, &x, n + 1, prec)?
                }
                ResidueForm::Alternative => {
                    let r = as_nonneg_int(&d.r)
                        .ok_or_else(|| ResidueError::NotApplicable(format!("r = {} is not in Z_0", d.r)))?;
                    let c = binomial_q(&d.m(), r);
                    if c == 0 {
                        return Err(ResidueError::NotApplicable("C(-1-r'+r, r) vanishes".into()));
                    }
                    if x >= 1 {
                        return Err(domain("the Q^0 series needs X < 1"));
                    }
                    // sigma^{(n+1) r} C^{-n-1}
                    push(&mut konst, &sigma, &(Rational::from(r) * &np1))?;
                    push(&mut konst, &c, &-np1.clone())?;
                    let lead = if d.sigma < 0 && r % 2 == 1 { -c } else { c };
                    log_ratio_series(&d, &x, &lead, n + 1, prec)
                }
            };
            let c = ratio.div_z().map_err(EgfError::from)?.powi(-(n as i64) - 1).map_err(EgfError::from)?;
            &(&a * &b) * &c
        }
        RecType::II => {
            let x = x0.clone();
            let (al, be, ga) = (&p.alpha, &p.beta, &p.gamma);
            let (alp, gap) = (&p.alpha_p, &p.gamma_p);
            // e^{-((n+1) a' + c') x / b} / (b x^{((n+1) a + c) / b})
            let e_arg = -(Rational::from(alp * &np1) + gap) * &x / be;
            konst.mul_exp(&e_arg);
            push(&mut konst, be, &Rational::from(-1))?;
            push(&mut konst, &x, &-((Rational::from(al * &np1) + ga) / be))?;
            // z^{c/b - 1} e^{c' z / b}
            let ez = Rational::from(ga / be) - 1;
            push(&mut konst, &x, &ez)?;
            konst.mul_exp(&(Rational::from(gap * &x) / be));
            let a = one_plus(&Rational::from(x.recip_ref()), n, prec).pow(&ez).map_err(EgfError::from)?;
            let e = TruncSeries::linear_q(&Rational::new(), &Rational::from(gap / be), n, prec)
                .exp()
                .map_err(EgfError::from)?;
            let dv = g_inverse_derivative(p, &x)?;
            konst.mul_power_of(&dv, &-np1.clone());
            let l = delta_g::<Float>(p, &x, n + 1, prec)?;
            let c = l.div_z().map_err(EgfError::from)?.powi(-(n as i64) - 1).map_err(EgfError::from)?;
            &(&a * &e) * &c
        }
        RecType::III => {
            let x = x0.clone();
            let (al, ga) = (&p.alpha, &p.gamma);
            let (alp, bep, gap) = (&p.alpha_p, &p.beta_p, &p.gamma_p);
            // e^{((n+1) a + c) / (b' x)} / (b' x^{1 + ((n+1) a' + c') / b'})
            konst.mul_exp(&((Rational::from(al * &np1) + ga) / Rational::from(bep * &x)));
            push(&mut konst, bep, &Rational::from(-1))?;
            let ex: Rational = (Rational::from(alp * &np1) + gap) / bep + 1u32;
            push(&mut konst, &x, &-ex)?;
            // z^{c'/b' - 1} e^{-+ c / (b' z)}
            let ez = Rational::from(gap / bep) - 1;
            push(&mut konst, &x, &ez)?;
            let s = match sign {
                ExpSign::Minus => Rational::from(-1),
                ExpSign::Plus => Rational::from(1),
            };
            let g0 = Rational::from(ga / bep) / &x;
            konst.mul_exp(&Rational::from(&s * &g0));
            let a = one_plus(&Rational::from(x.recip_ref()), n, prec).pow(&ez).map_err(EgfError::from)?;
            // s c/(b' (x + t)) - s c/(b' x) = -s (c / (b' x^2)) t / (1 + t/x)
            let inv = one_plus(&Rational::from(x.recip_ref()), n, prec).recip().map_err(EgfError::from)?;
            let arg = (&TruncSeries::var(n, prec) * &inv).scale_q(&(-s * g0 / &x));
            let e = arg.exp().map_err(EgfError::from)?;
            let dv = g_inverse_derivative(p, &x)?;
            konst.mul_power_of(&dv, &-np1.clone());
            let l = delta_g::<Float>(p, &x, n + 1, prec)?;
            let c = l.div_z().map_err(EgfError::from)?.powi(-(n as i64) - 1).map_err(EgfError::from)?;
            &(&a * &e) * &c
        }
        RecType::IV => return Err(ResidueError::NotApplicable("Type IV has a product formula instead".into())),
    };
    let k = konst.to_float(prec.0).ok_or_else(|| domain("prefactor is not real"))?;
    let nf = Float::with_val(prec.0, factorial(n as u32));
    Ok(k * unit.coeff(n) * nf)
}

/// Series in `t` of `log(Z Qhat(Z) / (X Qhat(X)))` with `Z = X + t`, i.e.
/// `log(1 + t/X) + (Q^0(X + t) - Q^0(X)) / lead`, where `lead` is
/// `sigma^r C(-1-r'+r, r)`. The `Q^0` increment is summed termwise until
/// the terms fall below the working precision.
fn log_ratio_series(d: &TypeIDerived, x: &Rational, lead: &Rational, order: usize, prec: Prec) -> FSeries {
    let bits = prec.0;
    let xf = Float::with_val(bits, x);
    let r = as_nonneg_int(&d.r).expect("r in Z_0");
    let m = d.m();
    // a non-negative integer m makes the binomial sum finite
    let k_max = as_nonneg_int(&m).unwrap_or(u32::MAX);
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32) - 8));
    let mut acc: Vec<Float> = vec![Float::new(bits); order + 1];
    let mut small_run = 0;
    let mut k: u32 = 0;
    // the t^j coefficient of X^e ((1 + t/X)^e - 1) is C(e, j) X^{e - j}
    while small_run < 8 && k <= k_max && k < 1_000_000 {
        if k != r {
            let sign = if d.sigma < 0 && k % 2 == 1 { -1 } else { 1 };
            let e = i64::from(k) - i64::from(r);
            let c = binomial_q(&m, k) * sign / Rational::from(e) / lead;
            let mut biggest = Float::new(bits);
            let mut binom = Float::with_val(bits, 1);
            let mut xpow = Float::with_val(bits, (&xf).pow(e as i32));
            for (j, slot) in acc.iter_mut().enumerate().skip(1) {
                binom = binom * (e - j as i64 + 1) / j as u32;
                xpow /= &xf;
                let term: Float = Float::with_val(bits, &binom * &xpow) * &c;
                let mag = Float::with_val(bits, term.abs_ref());
                if mag > biggest {
                    biggest = mag;
                }
                *slot += term;
            }
            let scale = acc.iter().fold(Float::with_val(bits, 1), |a, v| a.max(&Float::with_val(bits, v.abs_ref())));
            if biggest < Float::with_val(bits, &eps * &scale) {
                small_run += 1;
            } else {
                small_run = 0;
            }
        }
        k += 1;
    }
    let lead_log = one_plus(&Rational::from(x.recip_ref()), order, prec).log().expect("unit series");
    &lead_log + &TruncSeries::new(acc, order, prec)
}
