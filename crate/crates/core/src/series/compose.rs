use super::{Coeff, SeriesError, TruncSeries};

impl<F: Coeff> TruncSeries<F> {
    /// `f(g(z))` for `g(0) = 0`, to order `min(N_f, N_g)`.
    pub fn compose(&self, g: &Self) -> Result<Self, SeriesError> {
        if !g.constant_term().is_zero() {
            return Err(SeriesError::BadConstantTerm { expected: "0", found: g.constant_term().to_string() });
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        let f = self.coeffs();
        // Horner: f_0 + g (f_1 + g (f_2 + ...))
        let mut acc = TruncSeries::constant(f[n].clone(), n);
        for i in (0..n).rev() {
            acc = acc.mul_trunc(&g).add_const(&f[i]);
        }
        Ok(acc)
    }

    /// Compositional inverse `g` with `f(g(z)) = g(f(z)) = z`, by Newton
    /// iteration `g <- g - (f(g) - z) / f'(g)` with doubling precision.
    pub fn reversion(&self) -> Result<Self, SeriesError> {
        let n = self.order();
        if n == 0 || !self.coeff(0).is_zero() || self.coeff(1).is_zero() {
            return Err(SeriesError::NotReversible);
        }
        let ctx = self.ctx();
        let inv1 = F::one(ctx).div(&self.coeff(1));
        let mut g = TruncSeries::new(vec![F::zero(ctx), inv1], 1, ctx);
        // f' is only known to order n-1; its missing top coefficient never
        // reaches order n because the Newton residual has valuation >= 2.
        let fprime = TruncSeries::new(self.derivative().coeffs().to_vec(), n, ctx);
        let mut prec = 1;
        while prec < n {
            prec = (2 * prec).min(n);
            let gp = TruncSeries::new(g.coeffs().to_vec(), prec, ctx);
            let fg = self.truncate(prec).compose(&gp)?;
            let resid = &fg - &TruncSeries::var(prec, ctx);
            let dg = fprime.truncate(prec).compose(&gp)?;
            let step = resid.div(&dg)?;
            g = &gp - &step;
        }
        Ok(TruncSeries::new(g.coeffs().to_vec(), n, ctx))
    }
}
