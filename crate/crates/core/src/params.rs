//! Parameter tuples `(alpha, beta, gamma; alpha', beta', gamma')`, the
//! type classification of their generating-function PDE, and the tabulated
//! sign/reversal involutions.

use std::fmt;
use std::str::FromStr;

use rug::Rational;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::util::parse_rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("expected 6 comma-separated rationals, got {0}")]
    Arity(usize),
    #[error("{0}")]
    Parse(String),
    #[error("parameters are not of Type I (beta * beta' = 0)")]
    NotTypeI,
    #[error("unknown involution {0:?}")]
    UnknownInvolution(String),
}

/// The six exact recurrence coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamTuple {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub alpha_p: Rational,
    pub beta_p: Rational,
    pub gamma_p: Rational,
}

impl ParamTuple {
    pub fn new(
        alpha: Rational,
        beta: Rational,
        gamma: Rational,
        alpha_p: Rational,
        beta_p: Rational,
        gamma_p: Rational,
    ) -> Self {
        ParamTuple { alpha, beta, gamma, alpha_p, beta_p, gamma_p }
    }

    pub fn from_ints(v: [i64; 6]) -> Self {
        Self::from_array(v.map(Rational::from))
    }

    pub fn from_array(v: [Rational; 6]) -> Self {
        let [alpha, beta, gamma, alpha_p, beta_p, gamma_p] = v;
        ParamTuple { alpha, beta, gamma, alpha_p, beta_p, gamma_p }
    }

    /// Order `(alpha, beta, gamma, alpha', beta', gamma')`.
    pub fn to_array(&self) -> [Rational; 6] {
        [
            self.alpha.clone(),
            self.beta.clone(),
            self.gamma.clone(),
            self.alpha_p.clone(),
            self.beta_p.clone(),
            self.gamma_p.clone(),
        ]
    }

    pub fn as_refs(&self) -> [&Rational; 6] {
        [&self.alpha, &self.beta, &self.gamma, &self.alpha_p, &self.beta_p, &self.gamma_p]
    }

    /// Parses `"a,b,c,a',b',c'"` where each entry is an integer or `p/q`.
    pub fn parse_list(s: &str) -> Result<Self, ParamError> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 6 {
            return Err(ParamError::Arity(parts.len()));
        }
        let mut v = Vec::with_capacity(6);
        for p in parts {
            v.push(parse_rational(p).map_err(ParamError::Parse)?);
        }
        let arr: [Rational; 6] = v.try_into().expect("length checked");
        Ok(Self::from_array(arr))
    }

    pub fn classify(&self) -> RecType {
        classify(self)
    }

    /// `alpha + gamma`, the constant term of the `F` coefficient in the PDE.
    pub fn g(&self) -> Rational {
        Rational::from(&self.alpha + &self.gamma)
    }

    /// `alpha' + beta' + gamma'`, the linear term of the `F` coefficient in the PDE.
    pub fn h(&self) -> Rational {
        Rational::from(&self.alpha_p + &self.beta_p) + &self.gamma_p
    }
}

impl FromStr for ParamTuple {
    type Err = ParamError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_list(s)
    }
}

impl fmt::Display for ParamTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{};{},{},{})", self.alpha, self.beta, self.gamma, self.alpha_p, self.beta_p, self.gamma_p)
    }
}

impl Serialize for ParamTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(6))?;
        for q in self.as_refs() {
            seq.serialize_element(&q.to_string())?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ParamTuple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = ParamTuple;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of six rational strings")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<ParamTuple, A::Error> {
                let mut v = Vec::with_capacity(6);
                while let Some(s) = seq.next_element::<String>()? {
                    v.push(parse_rational(&s).map_err(de::Error::custom)?);
                }
                let n = v.len();
                let arr: [Rational; 6] = v.try_into().map_err(|_| de::Error::invalid_length(n, &self))?;
                Ok(ParamTuple::from_array(arr))
            }
        }
        deserializer.deserialize_seq(V)
    }
}

/// PDE type, decided by which of `beta`, `beta'` vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RecType {
    I,
    II,
    III,
    IV,
}

impl fmt::Display for RecType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RecType::I => "I",
            RecType::II => "II",
            RecType::III => "III",
            RecType::IV => "IV",
        };
        write!(f, "Type {s}")
    }
}

pub fn classify(p: &ParamTuple) -> RecType {
    match (p.beta == 0, p.beta_p == 0) {
        (false, false) => RecType::I,
        (false, true) => RecType::II,
        (true, false) => RecType::III,
        (true, true) => RecType::IV,
    }
}

/// Reduced parameters of a Type-I equation after the rescaling
/// `X = sigma (beta'/beta) x`, `Y = beta y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeIDerived {
    #[serde(serialize_with = "ser_q")]
    pub r: Rational,
    #[serde(serialize_with = "ser_q")]
    pub rp: Rational,
    #[serde(serialize_with = "ser_q")]
    pub s: Rational,
    #[serde(serialize_with = "ser_q")]
    pub sp: Rational,
    pub sigma: i8,
}

fn ser_q<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

impl TypeIDerived {
    /// `-1 - r' + r`, the upper index of the binomials in `G^{-1}`.
    pub fn m(&self) -> Rational {
        Rational::from(&self.r - &self.rp) - 1
    }

    /// `eta = s + s' + 1 + r' - r`.
    pub fn eta(&self) -> Rational {
        Rational::from(&self.s + &self.sp) + 1 + &self.rp - &self.r
    }

    pub fn sigma_q(&self) -> Rational {
        Rational::from(self.sigma)
    }
}

pub fn derived_type_i(p: &ParamTuple) -> Result<TypeIDerived, ParamError> {
    if classify(p) != RecType::I {
        return Err(ParamError::NotTypeI);
    }
    let r = Rational::from(&p.alpha / &p.beta);
    let rp = Rational::from(&p.alpha_p / &p.beta_p);
    let s = p.g() / &p.beta;
    let sp = -Rational::from(&p.alpha_p + &p.gamma_p) / &p.beta_p - 1;
    let sigma = if (p.beta.clone() * &p.beta_p) > 0 { 1 } else { -1 };
    Ok(TypeIDerived { r, rp, s, sp, sigma })
}

/// The five tabulated sign/reversal maps on triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InvolutionKind {
    /// `|n k| -> |n n-k|`
    Star,
    /// `|n k| -> (-1)^k |n n-k|`
    SignedStar,
    /// `|n k| -> (-1)^k |n k|`
    AltK,
    /// `|n k| -> (-1)^(n-k) |n k|`
    AltNminusK,
    /// `|n k| -> (-1)^n |n k|`
    AltN,
}

impl InvolutionKind {
    pub const ALL: [InvolutionKind; 5] = [
        InvolutionKind::Star,
        InvolutionKind::SignedStar,
        InvolutionKind::AltK,
        InvolutionKind::AltNminusK,
        InvolutionKind::AltN,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InvolutionKind::Star => "star",
            InvolutionKind::SignedStar => "signed-star",
            InvolutionKind::AltK => "alt-k",
            InvolutionKind::AltNminusK => "alt-n-minus-k",
            InvolutionKind::AltN => "alt-n",
        }
    }

    /// Where entry `(n, k)` of the image triangle comes from: the image is
    /// `sign * |n source_k|` of the original.
    pub fn entry_source(self, n: usize, k: usize) -> (usize, bool) {
        let odd = |e: usize| e % 2 == 1;
        match self {
            InvolutionKind::Star => (n - k, false),
            InvolutionKind::SignedStar => (n - k, odd(k)),
            InvolutionKind::AltK => (k, odd(k)),
            InvolutionKind::AltNminusK => (k, odd(n - k)),
            InvolutionKind::AltN => (k, odd(n)),
        }
    }
}

impl FromStr for InvolutionKind {
    type Err = ParamError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        InvolutionKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| ParamError::UnknownInvolution(s.to_string()))
    }
}

impl fmt::Display for InvolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn apply_involution(kind: InvolutionKind, p: &ParamTuple) -> ParamTuple {
    let [a, b, c, ap, bp, cp] = p.to_array();
    match kind {
        InvolutionKind::Star => ParamTuple::new(Rational::from(&ap + &bp), -bp, cp, Rational::from(&a + &b), -b, c),
        InvolutionKind::SignedStar => {
            ParamTuple::new(Rational::from(&ap + &bp), -bp, cp, -Rational::from(&a + &b), b, -c)
        }
        InvolutionKind::AltK => ParamTuple::new(a, b, c, -ap, -bp, -cp),
        InvolutionKind::AltNminusK => ParamTuple::new(-a, -b, -c, ap, bp, cp),
        InvolutionKind::AltN => ParamTuple::new(-a, -b, -c, -ap, -bp, -cp),
    }
}
