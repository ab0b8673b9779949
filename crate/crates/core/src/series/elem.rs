use rug::Rational;

use super::{Coeff, SeriesError, TruncSeries};

fn require_constant<F: Coeff>(f: &TruncSeries<F>, one: bool) -> Result<(), SeriesError> {
    let c0 = f.constant_term();
    let ok = if one { c0.sub(&F::one(f.ctx())).is_zero() } else { c0.is_zero() };
    if ok {
        Ok(())
    } else {
        Err(SeriesError::BadConstantTerm { expected: if one { "1" } else { "0" }, found: c0.to_string() })
    }
}

impl<F: Coeff> TruncSeries<F> {
    /// `exp(f)` for `f(0) = 0`, from `n g_n = sum_k k f_k g_{n-k}`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        require_constant(self, false)?;
        let n = self.order();
        let ctx = self.ctx();
        let f = self.coeffs();
        let mut g: Vec<F> = Vec::with_capacity(n + 1);
        g.push(F::one(ctx));
        for m in 1..=n {
            let mut acc = F::zero(ctx);
            for k in 1..=m {
                if f[k].is_zero() {
                    continue;
                }
                acc = acc.add(&f[k].mul(&g[m - k]).mul_q(&Rational::from(k as u64)));
            }
            g.push(acc.div_u(m as u64));
        }
        Ok(TruncSeries::new(g, n, ctx))
    }

    /// `log(f)` for `f(0) = 1`.
    pub fn log(&self) -> Result<Self, SeriesError> {
        require_constant(self, true)?;
        let n = self.order();
        let ctx = self.ctx();
        let f = self.coeffs();
        let mut h: Vec<F> = Vec::with_capacity(n + 1);
        h.push(F::zero(ctx));
        for m in 1..=n {
            // m h_m = m f_m - sum_{k=1}^{m-1} (m-k) f_k h_{m-k}
            let mut acc = f[m].mul_q(&Rational::from(m as u64));
            for k in 1..m {
                if f[k].is_zero() {
                    continue;
                }
                acc = acc.sub(&f[k].mul(&h[m - k]).mul_q(&Rational::from((m - k) as u64)));
            }
            h.push(acc.div_u(m as u64));
        }
        Ok(TruncSeries::new(h, n, ctx))
    }

    /// `f^e` for `f(0) = 1` and rational `e`, on the principal branch
    /// (`exp(e log f)`). Uses `f g' = e f' g`, which keeps exact coefficients
    /// exact.
    pub fn pow(&self, e: &Rational) -> Result<Self, SeriesError> {
        require_constant(self, true)?;
        let n = self.order();
        let ctx = self.ctx();
        let f = self.coeffs();
        let mut g: Vec<F> = Vec::with_capacity(n + 1);
        g.push(F::one(ctx));
        for m in 1..=n {
            let mut acc = F::zero(ctx);
            for k in 1..=m {
                if f[k].is_zero() {
                    continue;
                }
                let w = Rational::from(e * k as u64) - (m - k) as u64;
                acc = acc.add(&f[k].mul(&g[m - k]).mul_q(&w));
            }
            g.push(acc.div_u(m as u64));
        }
        Ok(TruncSeries::new(g, n, ctx))
    }
}
