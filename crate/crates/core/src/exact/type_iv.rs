use rug::{Integer, Rational};

use super::{ExactError, Poly};
use crate::params::{classify, ParamTuple, RecType};
use crate::util::pow_int;

/// Unsigned Stirling numbers of the first kind, `c(n, t)`.
pub fn stirling_cycle(n: usize, t: usize) -> Integer {
    stirling_cycle_row(n).get(t).cloned().unwrap_or_default()
}

/// `[c(n, 0), ..., c(n, n)]` by `c(n, t) = (n-1) c(n-1, t) + c(n-1, t-1)`.
pub fn stirling_cycle_row(n: usize) -> Vec<Integer> {
    let mut row = vec![Integer::from(1)];
    for m in 1..=n {
        let mut next = vec![Integer::new(); m + 1];
        for (t, v) in row.iter().enumerate() {
            next[t] += Integer::from(v * (m as u64 - 1));
            next[t + 1] += v;
        }
        row = next;
    }
    row
}

fn require_type_iv(p: &ParamTuple) -> Result<(), ExactError> {
    if classify(p) == RecType::IV {
        Ok(())
    } else {
        Err(ExactError::NotTypeIV)
    }
}

/// `P_n(x) = prod_{k=1}^{n} (k a + c + (k a' + c') x)`.
pub fn row_poly_product_type_iv(p: &ParamTuple, n: usize) -> Result<Poly, ExactError> {
    require_type_iv(p)?;
    let mut acc = Poly::one();
    for k in 1..=n as u64 {
        let c0 = Rational::from(&p.alpha * k) + &p.gamma;
        let c1 = Rational::from(&p.alpha_p * k) + &p.gamma_p;
        acc = &acc * &Poly::linear(c0, c1);
    }
    Ok(acc)
}

/// Double-sum expression for `|n k|` in Type IV:
///
/// ```text
/// sum_t sum_s c(n,t) C(t,s) C(n-t,k-s) (a+c)^(t-s) (a'+c')^s a^(n-t+s-k) a'^(k-s)
/// ```
///
/// with `0^0 = 1`. Terms whose binomials vanish are skipped, so no negative
/// powers of zero are ever formed.
pub fn coeff_type_iv(p: &ParamTuple, n: usize, k: usize) -> Result<Rational, ExactError> {
    require_type_iv(p)?;
    if k > n {
        return Err(ExactError::IndexOutOfRange { n, k, max: n });
    }
    let g = p.g();
    let gp = Rational::from(&p.alpha_p + &p.gamma_p);
    let cycles = stirling_cycle_row(n);
    let mut total = Rational::new();
    for (t, c) in cycles.iter().enumerate() {
        if *c == 0 {
            continue;
        }
        // s ranges over max(0, k-(n-t)) ..= min(t, k)
        let s_lo = k.saturating_sub(n - t);
        let s_hi = t.min(k);
        for s in s_lo..=s_hi {
            let u = k - s;
            let binoms = Integer::from(Integer::binomial_u(t as u32, s as u32))
                * Integer::from(Integer::binomial_u((n - t) as u32, u as u32));
            let term = pow_int(&g, (t - s) as i64)
                * pow_int(&gp, s as i64)
                * pow_int(&p.alpha, (n - t - u) as i64)
                * pow_int(&p.alpha_p, u as i64);
            total += term * Rational::from(c * binoms);
        }
    }
    Ok(total)
}
