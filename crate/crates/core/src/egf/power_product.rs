use std::collections::BTreeMap;

use rug::{Float, Integer, Rational};

use crate::util::{is_int, pow_int};

const TRIAL_LIMIT: u32 = 1 << 16;

/// Symbolic product `(-1)^a * prod p_i^{e_i} * exp(E)` with rational
/// exponents. Bases are split into prime powers by trial division (an
/// unfactored cofactor is kept as its own key), so products such as
/// `2^{1/2} * 8^{-1/6}` collapse to exact rationals.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PowerProduct {
    sign: Rational,
    primes: BTreeMap<Integer, Rational>,
    exp_arg: Rational,
}

fn factor(n: &Integer) -> Vec<(Integer, u32)> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut p = 2u32;
    while p < TRIAL_LIMIT && Integer::from(p) * p <= n {
        let mut k = 0;
        while n.is_divisible_u(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((Integer::from(p), k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        // a cofactor that is a perfect power is stored by its root
        let bits = n.significant_bits();
        let (mut root, mut k) = (n.clone(), 1);
        for j in (2..=bits).rev() {
            let (r, rem) = n.clone().root_rem(Integer::new(), j);
            if rem == 0 {
                (root, k) = (r, j);
                break;
            }
        }
        out.push((root, k));
    }
    out
}

impl PowerProduct {
    pub fn one() -> Self {
        Self::default()
    }

    /// Multiplies in `base^e` on the principal branch. Returns `false` for a
    /// zero base with non-zero exponent, which this form cannot represent.
    pub fn mul_pow(&mut self, base: &Rational, e: &Rational) -> bool {
        if *e == 0 {
            return true;
        }
        if *base == 0 {
            return false;
        }
        if *base < 0 {
            self.sign += e;
        }
        for (n, sgn) in [(base.numer(), 1i32), (base.denom(), -1)] {
            let n = Integer::from(n.abs_ref());
            for (p, k) in factor(&n) {
                let add = Rational::from(e * k) * sgn;
                *self.primes.entry(p).or_default() += add;
            }
        }
        self.primes.retain(|_, v| *v != 0);
        true
    }

    /// Multiplies in `exp(c)`.
    pub fn mul_exp(&mut self, c: &Rational) {
        self.exp_arg += c;
    }

    /// Multiplies in `other^e`.
    pub fn mul_power_of(&mut self, other: &PowerProduct, e: &Rational) {
        self.sign += Rational::from(&other.sign * e);
        for (p, v) in &other.primes {
            *self.primes.entry(p.clone()).or_default() += Rational::from(v * e);
        }
        self.primes.retain(|_, v| *v != 0);
        self.exp_arg += Rational::from(&other.exp_arg * e);
    }

    pub fn is_one(&self) -> bool {
        self.primes.is_empty() && self.exp_arg == 0 && is_int(&self.sign) && self.sign.numer().is_even()
    }

    /// The exact value when it is rational.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.exp_arg != 0 || !is_int(&self.sign) || !self.primes.values().all(is_int) {
            return None;
        }
        let mut acc = Rational::from(if self.sign.numer().is_even() { 1 } else { -1 });
        for (p, e) in &self.primes {
            acc *= pow_int(&Rational::from(p), e.numer().to_i64()?);
        }
        Some(acc)
    }

    /// Numerical value; `None` when the accumulated sign exponent is not an
    /// integer (the principal-branch value is then not real).
    pub fn to_float(&self, prec: u32) -> Option<Float> {
        if !is_int(&self.sign) {
            return None;
        }
        let mut log = Float::with_val(prec, &self.exp_arg);
        for (p, e) in &self.primes {
            let lp = Float::with_val(prec, p).ln();
            log += lp * e;
        }
        let v = log.exp();
        Some(if self.sign.numer().is_even() { v } else { -v })
    }
}
