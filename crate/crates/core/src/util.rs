use rug::{Integer, Rational};

/// Parses `"p/q"`, `"-p/q"` or an integer literal into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty rational literal".into());
    }
    let q = Rational::parse(t).map_err(|e| format!("bad rational {t:?}: {e}"))?;
    Ok(Rational::from(q))
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Generalized binomial coefficient `m (m-1) ... (m-k+1) / k!` for rational `m`.
pub fn binomial_q(m: &Rational, k: u32) -> Rational {
    let mut acc = Rational::from(1);
    for j in 0..k {
        acc *= Rational::from(m - j);
        acc /= j + 1;
    }
    acc
}

/// Returns `Some(v)` when `q` is a non-negative integer that fits in `u32`.
pub(crate) fn as_nonneg_int(q: &Rational) -> Option<u32> {
    if *q.denom() != 1 || *q.numer() < 0 {
        return None;
    }
    q.numer().to_u32()
}

pub(crate) fn is_int(q: &Rational) -> bool {
    *q.denom() == 1
}

/// `q^e` for integer `e` (negative allowed when `q != 0`).
pub(crate) fn pow_int(q: &Rational, e: i64) -> Rational {
    if e == 0 {
        return Rational::from(1);
    }
    let mut base = if e < 0 { Rational::from(q.recip_ref()) } else { q.clone() };
    let mut n = e.unsigned_abs();
    let mut acc = Rational::from(1);
    while n > 0 {
        if n & 1 == 1 {
            acc *= &base;
        }
        base = Rational::from(&base * &base);
        n >>= 1;
    }
    acc
}
