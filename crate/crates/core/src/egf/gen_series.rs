use std::fmt;

use rug::{Float, Rational};
use serde::Serialize;

use super::EgfError;
use crate::params::{derived_type_i, ParamTuple, RecType};
use crate::util::{as_nonneg_int, binomial_q, factorial, pow_int};

/// Variable of a generalized series: the rescaled `X` (Type I) or `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GenVar {
    Rescaled,
    Plain,
}

/// `sum_i c_i v^{e_i} + c_log log v`, exponents strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct GenSeries {
    pub var: GenVar,
    pub terms: Vec<(Rational, Rational)>,
    pub log_coeff: Rational,
    /// Number of summation indices `k` that were considered.
    pub trunc_order: usize,
}

impl GenSeries {
    fn build(var: GenVar, mut terms: Vec<(Rational, Rational)>, log_coeff: Rational, trunc_order: usize) -> Self {
        terms.retain(|(_, c)| *c != 0);
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        GenSeries { var, terms, log_coeff, trunc_order }
    }

    /// Numerical value of the truncated sum at `v > 0`.
    pub fn eval(&self, v: &Float) -> Float {
        let prec = v.prec();
        let lv = Float::with_val(prec, v.ln_ref());
        let mut acc = Float::with_val(prec, &self.log_coeff * &lv);
        for (e, c) in &self.terms {
            let ef = Float::with_val(prec, e);
            acc += Float::with_val(prec, &lv * &ef).exp() * c;
        }
        acc
    }

    /// True when the sum part vanishes and only the log term survives.
    pub fn is_pure_log(&self) -> bool {
        self.terms.is_empty() && self.log_coeff != 0
    }
}

impl fmt::Display for GenSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match self.var {
            GenVar::Rescaled => "X",
            GenVar::Plain => "x",
        };
        let mut parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("({c}) {v}^({e})")).collect();
        if self.log_coeff != 0 {
            parts.push(format!("({}) log {v}", self.log_coeff));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// The generalized series `G^{-1}` whose inverse drives the EGF of Types
/// I, II and III, summed over `k = 0 ..= order`.
pub fn g_inverse(p: &ParamTuple, order: usize) -> Result<GenSeries, EgfError> {
    match p.classify() {
        RecType::I => {
            let d = derived_type_i(p).expect("type I");
            let m = d.m();
            let skip = as_nonneg_int(&d.r);
            let sig = |k: u32| if d.sigma < 0 && k % 2 == 1 { -1 } else { 1 };
            let mut terms = Vec::new();
            for k in 0..=order as u32 {
                if skip == Some(k) {
                    continue;
                }
                let e = Rational::from(k) - &d.r;
                let c = binomial_q(&m, k) * sig(k) / &e;
                terms.push((e, c));
            }
            let log = skip.map_or_else(Rational::new, |r| binomial_q(&m, r) * sig(r));
            Ok(GenSeries::build(GenVar::Rescaled, terms, log, order))
        }
        RecType::II => {
            let a = Rational::from(&p.alpha / &p.beta);
            let b = -Rational::from(&p.alpha_p / &p.beta);
            let skip = as_nonneg_int(&a);
            let mut terms = Vec::new();
            for k in 0..=order as u32 {
                if skip == Some(k) {
                    continue;
                }
                let e = Rational::from(k) - &a;
                let c = pow_int(&b, k as i64) / Rational::from(factorial(k)) / &p.beta / &e;
                terms.push((e, c));
            }
            let log =
                skip.map_or_else(Rational::new, |j| pow_int(&b, j as i64) / Rational::from(factorial(j)) / &p.beta);
            Ok(GenSeries::build(GenVar::Plain, terms, log, order))
        }
        RecType::III => {
            let c = Rational::from(&p.alpha / &p.beta_p);
            let t = Rational::from(&p.alpha_p / &p.beta_p);
            let skip = as_nonneg_int(&(Rational::from(-1) - &t));
            let mut terms = Vec::new();
            for k in 0..=order as u32 {
                if skip == Some(k) {
                    continue;
                }
                let w: Rational = Rational::from(k) + 1 + &t;
                let coeff: Rational = -pow_int(&c, k as i64) / Rational::from(factorial(k)) / &p.beta_p / &w;
                terms.push((-w, coeff));
            }
            let log =
                skip.map_or_else(Rational::new, |j| pow_int(&c, j as i64) / Rational::from(factorial(j)) / &p.beta_p);
            Ok(GenSeries::build(GenVar::Plain, terms, log, order))
        }
        RecType::IV => Err(EgfError::NotApplicable("Type IV has no generalized series".into())),
    }
}
