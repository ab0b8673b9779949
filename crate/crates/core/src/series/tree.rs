use rug::Rational;

use super::{QSeries, TruncSeries};
use crate::exact::Poly;
use crate::util::binomial_q;

/// `Q_nu(z) = sum_{k=1}^{nu-1} C(nu-1, k) (-z)^k / k`.
pub fn q_nu(nu: u32) -> Poly {
    let top = Rational::from(nu - 1);
    let mut coeffs = vec![Rational::new()];
    for k in 1..nu {
        let sign = if k % 2 == 1 { -1 } else { 1 };
        coeffs.push(binomial_q(&top, k) * sign / k);
    }
    Poly::from_coeffs(coeffs)
}

/// `T_nu^{-1}(z) = z exp(Q_nu(z))` to order `n`.
pub fn tree_inverse(nu: u32, n: usize) -> QSeries {
    let q = QSeries::from_rationals(q_nu(nu).coeffs(), n, ());
    let z = QSeries::var(n, ());
    &z * &q.exp().expect("Q_nu has zero constant term")
}

/// Series of the generalized tree function `T_nu`, the compositional inverse
/// of `z exp(Q_nu(z))`. `T_1` is the identity and `T_2` the classical tree
/// function with coefficients `n^{n-1}/n!`.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeFunctionFamily {
    pub nu: u32,
    pub order: usize,
    pub series: QSeries,
}

pub fn tree_function(nu: u32, order: usize) -> TreeFunctionFamily {
    assert!(nu >= 1 && order >= 1, "tree function needs nu >= 1 and order >= 1");
    let series = tree_inverse(nu, order).reversion().expect("z exp(Q) has unit linear term");
    TreeFunctionFamily { nu, order, series }
}

impl TreeFunctionFamily {
    /// `T_nu^{-1}(T_nu(z))`, which must be the identity series.
    pub fn round_trip(&self) -> QSeries {
        tree_inverse(self.nu, self.order).compose(&self.series).expect("T_nu has zero constant term")
    }
}

impl TruncSeries<Rational> {
    /// Exact equality with `z` through the series order.
    pub fn is_identity(&self) -> bool {
        *self == QSeries::var(self.order(), ())
    }
}
