//! Parameter families whose members all generate the same triangle.
//!
//! Four families exist:
//!
//! ```text
//! TrivialKernel    a + c = 0, a' + b' + c' = 0          |n k| = [n = k = 0]
//! BinomialScaled   (a, a + rho G, G - a; -rho H, rho H + a H/G, H - a H/G)
//!                  |n k| = C(n, k) (H/G)^k prod_{j<n} (G + a j)
//! DiagonalProduct  b = -a, c = -a                       |n k| = [n = k] prod_{j=1..n} (c' + L j)
//! LeftColumn       a' = 0, c' = -b'                     |n k| = [k = 0] prod_{j<n} (M + a j)
//! ```
//!
//! with `G = a + c`, `H = a' + b' + c'`, `L = a' + b'` and `M = a + c`.
//! Detection is by exact pattern solving; [`same_numbers`] is the
//! independent oracle.

use rug::Rational;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::exact::triangle;
use crate::params::ParamTuple;
use crate::util::{binomial_q, pow_int};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DegError {
    #[error("the tuple is not in a degenerate family")]
    NotDegenerate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegClass {
    TrivialKernel,
    BinomialScaled { alpha: Rational, g: Rational, h: Rational },
    DiagonalProduct { l: Rational, gamma_p: Rational },
    LeftColumn { m: Rational, alpha: Rational },
    NonDegenerate,
}

impl DegClass {
    pub fn tag(&self) -> &'static str {
        match self {
            DegClass::TrivialKernel => "TrivialKernel",
            DegClass::BinomialScaled { .. } => "BinomialScaled",
            DegClass::DiagonalProduct { .. } => "DiagonalProduct",
            DegClass::LeftColumn { .. } => "LeftColumn",
            DegClass::NonDegenerate => "NonDegenerate",
        }
    }

    /// Invariant parameters as `(name, value)` pairs.
    pub fn invariants(&self) -> Vec<(&'static str, &Rational)> {
        match self {
            DegClass::BinomialScaled { alpha, g, h } => vec![("alpha", alpha), ("G", g), ("H", h)],
            DegClass::DiagonalProduct { l, gamma_p } => vec![("L", l), ("gamma_p", gamma_p)],
            DegClass::LeftColumn { m, alpha } => vec![("M", m), ("alpha", alpha)],
            DegClass::TrivialKernel | DegClass::NonDegenerate => vec![],
        }
    }
}

impl std::fmt::Display for DegClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let inv = self.invariants();
        if inv.is_empty() {
            return write!(f, "{}", self.tag());
        }
        let parts: Vec<String> = inv.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}({})", self.tag(), parts.join(", "))
    }
}

impl Serialize for DegClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("DegClass", 2)?;
        st.serialize_field("tag", self.tag())?;
        let inv: std::collections::BTreeMap<&str, String> =
            self.invariants().into_iter().map(|(k, v)| (k, v.to_string())).collect();
        st.serialize_field("invariants", &inv)?;
        st.end()
    }
}

fn trivial_kernel(p: &ParamTuple) -> bool {
    p.g() == 0 && p.h() == 0
}

fn binomial_scaled(p: &ParamTuple) -> Option<DegClass> {
    let g = p.g();
    if g == 0 {
        return None;
    }
    let h = p.h();
    let rho = Rational::from(&p.beta - &p.alpha) / &g;
    let rho_h = Rational::from(&rho * &h);
    let ah_g = Rational::from(&p.alpha * &h) / &g;
    (p.alpha_p == -rho_h.clone() && p.beta_p == rho_h + ah_g).then(|| DegClass::BinomialScaled {
        alpha: p.alpha.clone(),
        g,
        h,
    })
}

fn diagonal_product(p: &ParamTuple) -> Option<DegClass> {
    let minus_a = -p.alpha.clone();
    (p.beta == minus_a && p.gamma == minus_a)
        .then(|| DegClass::DiagonalProduct { l: Rational::from(&p.alpha_p + &p.beta_p), gamma_p: p.gamma_p.clone() })
}

fn left_column(p: &ParamTuple) -> Option<DegClass> {
    (p.alpha_p == 0 && p.gamma_p == -p.beta_p.clone())
        .then(|| DegClass::LeftColumn { m: p.g(), alpha: p.alpha.clone() })
}

/// First matching family in the order TrivialKernel, BinomialScaled,
/// DiagonalProduct, LeftColumn.
pub fn degeneracy_class(p: &ParamTuple) -> DegClass {
    matching_classes(p).into_iter().next().unwrap_or(DegClass::NonDegenerate)
}

/// Every family pattern the tuple satisfies, in precedence order.
pub fn matching_classes(p: &ParamTuple) -> Vec<DegClass> {
    let mut out = Vec::new();
    if trivial_kernel(p) {
        out.push(DegClass::TrivialKernel);
    }
    out.extend(binomial_scaled(p));
    out.extend(diagonal_product(p));
    out.extend(left_column(p));
    out
}

/// Entrywise equality of the two triangles through row `n_max`.
pub fn same_numbers(p1: &ParamTuple, p2: &ParamTuple, n_max: usize) -> bool {
    triangle(p1, n_max).rows == triangle(p2, n_max).rows
}

fn rising(start: &Rational, step: &Rational, from: u64, to: u64) -> Rational {
    (from..=to).fold(Rational::from(1), |acc, j| acc * (Rational::from(step * j) + start))
}

/// Closed-form `|n k|` for a degenerate class; zero outside `0 <= k <= n`.
pub fn degenerate_value(c: &DegClass, n: u64, k: u64) -> Result<Rational, DegError> {
    if matches!(c, DegClass::NonDegenerate) {
        return Err(DegError::NotDegenerate);
    }
    if k > n {
        return Ok(Rational::new());
    }
    Ok(match c {
        DegClass::TrivialKernel => Rational::from((n == 0) as u32),
        DegClass::BinomialScaled { alpha, g, h } => {
            let ratio = Rational::from(h / g);
            let prod = if n == 0 { Rational::from(1) } else { rising(g, alpha, 0, n - 1) };
            binomial_q(&Rational::from(n), k as u32) * pow_int(&ratio, k as i64) * prod
        }
        DegClass::DiagonalProduct { l, gamma_p } => {
            if k == n {
                rising(gamma_p, l, 1, n)
            } else {
                Rational::new()
            }
        }
        DegClass::LeftColumn { m, alpha } => {
            if k == 0 && n > 0 {
                rising(m, alpha, 0, n - 1)
            } else {
                Rational::from((n == 0) as u32)
            }
        }
        DegClass::NonDegenerate => unreachable!(),
    })
}
