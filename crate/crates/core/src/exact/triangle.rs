use rug::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ExactError, Poly};
use crate::params::ParamTuple;
use crate::util::parse_rational;

/// Rows `0..=N` of the number triangle. Row `n` stores `|n 0| .. |n n|`;
/// every entry with `k > n` is zero (induction from row 0) and is not stored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triangle {
    pub params: ParamTuple,
    #[serde(serialize_with = "ser_rows", deserialize_with = "de_rows")]
    pub rows: Vec<Vec<Rational>>,
}

pub fn triangle(p: &ParamTuple, n_max: usize) -> Triangle {
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n_max + 1);
    rows.push(vec![Rational::from(1)]);
    for n in 1..=n_max {
        let prev = &rows[n - 1];
        let n_q = Rational::from(n as u64);
        // a n + c and a' n + c' are shared by the whole row
        let left = Rational::from(&p.alpha * &n_q) + &p.gamma;
        let diag = Rational::from(&p.alpha_p * &n_q) + &p.gamma_p;
        let mut row = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut v = Rational::new();
            if k < n && prev[k] != 0 {
                let coef = Rational::from(&p.beta * k as u64) + &left;
                v += coef * &prev[k];
            }
            if k >= 1 && prev[k - 1] != 0 {
                let coef = Rational::from(&p.beta_p * k as u64) + &diag;
                v += coef * &prev[k - 1];
            }
            row.push(v);
        }
        rows.push(row);
    }
    Triangle { params: p.clone(), rows }
}

impl Triangle {
    /// Largest stored row index.
    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `|n k|` with the zero convention outside `0 <= k <= n <= N`.
    /// Panics if `n` exceeds the computed rows.
    pub fn get(&self, n: i64, k: i64) -> Rational {
        if n < 0 || k < 0 || k > n {
            return Rational::new();
        }
        self.rows[n as usize][k as usize].clone()
    }

    pub fn row_poly(&self, n: usize) -> Result<Poly, ExactError> {
        let row = self.rows.get(n).ok_or(ExactError::IndexOutOfRange { n, k: 0, max: self.n_max() })?;
        Ok(Poly::from_coeffs(row.clone()))
    }

    /// `true` when every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.rows.iter().flatten().all(|q| *q.denom() == 1)
    }

    /// `|n k|` minus the right-hand side of the recurrence, for `n >= 1`.
    pub fn recurrence_residual(&self, n: usize, k: usize) -> Rational {
        let p = &self.params;
        let (ni, ki) = (n as i64, k as i64);
        let left = Rational::from(&p.alpha * ni) + Rational::from(&p.beta * ki) + &p.gamma;
        let diag = Rational::from(&p.alpha_p * ni) + Rational::from(&p.beta_p * ki) + &p.gamma_p;
        self.get(ni, ki) - left * self.get(ni - 1, ki) - diag * self.get(ni - 1, ki - 1)
    }
}

fn ser_rows<S: Serializer>(rows: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    let strs: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|q| q.to_string()).collect()).collect();
    strs.serialize(s)
}

fn de_rows<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
    let strs = Vec::<Vec<String>>::deserialize(d)?;
    strs.iter().map(|r| r.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect()).collect()
}

/// Serializes rows of rationals as nested arrays of `"p/q"` strings.
pub fn rows_to_strings(rows: &[Vec<Rational>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|q| q.to_string()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{apply_involution, InvolutionKind};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from(x)).collect()
    }

    // all permutations of 0..n, Heap's algorithm
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k <= 1 {
                out.push(a.clone());
                return;
            }
            for i in 0..k {
                heap(k - 1, a, out);
                let j = if k.is_multiple_of(2) { i } else { 0 };
                a.swap(j, k - 1);
            }
        }
        let mut a: Vec<usize> = (0..n).collect();
        let mut out = Vec::new();
        heap(n, &mut a, &mut out);
        out
    }

    fn descent_counts(n: usize) -> Vec<i64> {
        let mut c = vec![0i64; n.max(1)];
        for perm in permutations(n) {
            let d = perm.windows(2).filter(|w| w[0] > w[1]).count();
            c[d] += 1;
        }
        c
    }

    fn cycle_counts(n: usize) -> Vec<i64> {
        let mut c = vec![0i64; n + 1];
        for perm in permutations(n) {
            let mut seen = vec![false; n];
            let mut cycles = 0;
            for s in 0..n {
                if !seen[s] {
                    cycles += 1;
                    let mut j = s;
                    while !seen[j] {
                        seen[j] = true;
                        j = perm[j];
                    }
                }
            }
            c[cycles] += 1;
        }
        c
    }

    // restricted growth strings enumerate set partitions
    fn partition_counts(n: usize) -> Vec<i64> {
        let mut c = vec![0i64; n + 1];
        fn rec(i: usize, n: usize, max: usize, c: &mut Vec<i64>) {
            if i == n {
                c[max] += 1;
                return;
            }
            for b in 0..=max {
                rec(i + 1, n, if b == max { max + 1 } else { max }, c);
            }
        }
        if n == 0 {
            c[0] = 1;
        } else {
            rec(0, n, 0, &mut c);
        }
        c
    }

    #[test]
    fn eulerian_row_four_matches_descents() {
        let t = triangle(&ParamTuple::from_ints([0, 1, 1, 1, -1, 0]), 4);
        let d = descent_counts(4);
        assert_eq!(&t.rows[4][..4], &ints(&d)[..]);
        assert_eq!(t.rows[4], ints(&[1, 11, 11, 1, 0]));
    }

    #[test]
    fn stirling_subset_row_four_matches_partitions() {
        let t = triangle(&ParamTuple::from_ints([0, 1, 0, 0, 0, 1]), 4);
        assert_eq!(t.rows[4], ints(&partition_counts(4)));
        assert_eq!(t.rows[4], ints(&[0, 1, 7, 6, 1]));
    }

    #[test]
    fn stirling_cycle_matches_cycle_counts() {
        let t = triangle(&ParamTuple::from_ints([1, 0, -1, 0, 0, 1]), 6);
        for n in 0..=6 {
            assert_eq!(t.rows[n], ints(&cycle_counts(n)), "row {n}");
        }
    }

    #[test]
    fn trivial_kernel_gives_delta() {
        let t = triangle(&ParamTuple::from_ints([2, 3, -2, 5, 7, -12]), 8);
        assert_eq!(t.rows[0], ints(&[1]));
        for row in &t.rows[1..] {
            assert!(row.iter().all(|q| *q == 0));
        }
    }

    #[test]
    fn row_polys() {
        let t = triangle(&ParamTuple::from_ints([0, 1, 1, 1, -1, 0]), 3);
        assert_eq!(t.row_poly(3).unwrap(), Poly::from_ints(&[1, 4, 1]));
        assert_eq!(t.row_poly(0).unwrap(), Poly::one());
        assert!(matches!(t.row_poly(4), Err(ExactError::IndexOutOfRange { .. })));
        let c = triangle(&ParamTuple::from_ints([1, 0, -1, 0, 0, 1]), 2);
        assert_eq!(c.row_poly(2).unwrap(), Poly::from_ints(&[0, 1, 1]));
    }

    #[test]
    fn json_round_trip() {
        let p: ParamTuple = "1/2,1,0,0,0,1".parse().unwrap();
        let t = triangle(&p, 3);
        let js = serde_json::to_string(&t).unwrap();
        assert!(js.starts_with(r#"{"params":["1/2","1","0","0","0","1"],"rows":[["1"],"#));
        let back: Triangle = serde_json::from_str(&js).unwrap();
        assert_eq!(back, t);
    }

    fn small_q() -> impl Strategy<Value = Rational> {
        (-5i64..=5, 1i64..=3).prop_map(|(n, d)| Rational::from((n, d)))
    }

    fn tuple() -> impl Strategy<Value = ParamTuple> {
        proptest::array::uniform6(small_q()).prop_map(ParamTuple::from_array)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn recurrence_holds_everywhere(p in tuple()) {
            let t = triangle(&p, 7);
            for n in 1..=7 {
                for k in 0..=n {
                    prop_assert_eq!(t.recurrence_residual(n, k), 0);
                }
            }
        }

        #[test]
        fn involutions_act_on_entries(p in tuple()) {
            let t = triangle(&p, 6);
            for kind in InvolutionKind::ALL {
                let img = triangle(&apply_involution(kind, &p), 6);
                for n in 0..=6 {
                    for k in 0..=n {
                        let (src, neg) = kind.entry_source(n, k);
                        let v = t.rows[n][src].clone();
                        let expect = if neg { -v } else { v };
                        prop_assert_eq!(&img.rows[n][k], &expect, "{} at ({}, {})", kind, n, k);
                    }
                }
            }
        }

        #[test]
        fn self_dual_rows_are_palindromic(a in small_q(), b in small_q(), c in small_q()) {
            let p = ParamTuple::new(a.clone(), b.clone(), c.clone(), Rational::from(&a + &b), -b, c);
            let t = triangle(&p, 6);
            for row in &t.rows {
                let rev: Vec<_> = row.iter().rev().cloned().collect();
                prop_assert_eq!(row, &rev);
            }
        }

        #[test]
        fn trivial_kernel_whenever_g_and_h_vanish(a in small_q(), b in small_q(), ap in small_q(), bp in small_q()) {
            let g = -a.clone();
            let gp = -Rational::from(&ap + &bp);
            let t = triangle(&ParamTuple::new(a, b, g, ap, bp, gp), 6);
            prop_assert!(t.rows[1..].iter().flatten().all(|q| *q == 0));
        }
    }
}
