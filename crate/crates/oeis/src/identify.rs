//! Recovery of `(alpha, beta, gamma; alpha', beta', gamma')` from a triangle
//! prefix. The recurrence is linear in the six parameters, so every entry
//! `|n k|` with `n >= 1` contributes one exact linear equation.

use gkp_core::ParamTuple;
use rug::Rational;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentifyError {
    #[error("no parameter tuple reproduces the prefix")]
    Infeasible,
    #[error("prefix too shallow: rank {rank} with every row, {prev_rank} without the last row; more rows are needed")]
    PrefixTooShallow { rank: usize, prev_rank: usize },
    #[error("malformed prefix: {0}")]
    Malformed(String),
}

/// `particular + sum t_i basis_i`, every member reproducing the prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamFamily {
    pub particular: ParamTuple,
    pub nullspace_basis: Vec<[Rational; 6]>,
    pub dim: usize,
}

impl ParamFamily {
    /// `particular + sum t_i basis_i`; missing coordinates count as zero.
    pub fn member(&self, t: &[Rational]) -> ParamTuple {
        let mut v = self.particular.to_array();
        for (ti, b) in t.iter().zip(&self.nullspace_basis) {
            for (x, bj) in v.iter_mut().zip(b) {
                *x += Rational::from(ti * bj);
            }
        }
        ParamTuple::from_array(v)
    }

    /// Exact membership: `p - particular` lies in the span of the basis.
    pub fn contains(&self, p: &ParamTuple) -> bool {
        let d: Vec<Rational> =
            p.to_array().iter().zip(self.particular.to_array()).map(|(a, b)| Rational::from(a - &b)).collect();
        if d.iter().all(|x| *x == 0) {
            return true;
        }
        let mut m: Vec<Vec<Rational>> = self.nullspace_basis.iter().map(|b| b.to_vec()).collect();
        let r0 = rank(m.clone());
        m.push(d);
        rank(m) == r0
    }
}

impl Serialize for ParamFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let basis: Vec<Vec<String>> =
            self.nullspace_basis.iter().map(|b| b.iter().map(|x| x.to_string()).collect()).collect();
        let mut st = s.serialize_struct("ParamFamily", 3)?;
        st.serialize_field("particular", &self.particular)?;
        st.serialize_field("nullspace_basis", &basis)?;
        st.serialize_field("dim", &self.dim)?;
        st.end()
    }
}

/// Reduces `m` in place to reduced row echelon form; returns pivot columns.
fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0;
    for c in 0..cols {
        let Some(pr) = (row..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(row, pr);
        let inv = Rational::from(m[row][c].recip_ref());
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m.len() {
            if r != row && m[r][c] != 0 {
                let f = m[r][c].clone();
                let pivot_row = m[row].clone();
                for (dst, src) in m[r][c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                    *dst -= Rational::from(&f * src);
                }
            }
        }
        pivots.push(c);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// Exact rank of a rational matrix.
pub fn rank(mut m: Vec<Vec<Rational>>) -> usize {
    rref(&mut m).len()
}

fn get(rows: &[Vec<Rational>], n: usize, k: isize) -> Rational {
    if k < 0 || k as usize > n {
        return Rational::new();
    }
    rows[n][k as usize].clone()
}

/// Augmented system `[A | b]` from rows `1 ..= n_max`.
fn system(rows: &[Vec<Rational>], n_max: usize) -> Vec<Vec<Rational>> {
    let mut eqs = Vec::new();
    for n in 1..=n_max {
        for k in 0..=n {
            let a = get(rows, n - 1, k as isize);
            let b = get(rows, n - 1, k as isize - 1);
            let (nq, kq) = (Rational::from(n), Rational::from(k));
            eqs.push(vec![
                Rational::from(&nq * &a),
                Rational::from(&kq * &a),
                a.clone(),
                Rational::from(&nq * &b),
                Rational::from(&kq * &b),
                b.clone(),
                rows[n][k].clone(),
            ]);
        }
    }
    eqs
}

fn coefficient_rank(rows: &[Vec<Rational>], n_max: usize) -> usize {
    let a: Vec<Vec<Rational>> = system(rows, n_max)
        .into_iter()
        .map(|mut r| {
            r.pop();
            r
        })
        .collect();
    rank(a)
}

/// Solves for every tuple reproducing rows `0 ..= N` of the prefix.
///
/// A positive-dimensional solution set is reported as
/// [`IdentifyError::PrefixTooShallow`] when dropping the last row lowers
/// the rank, since the deficit may then be an artifact of too little data.
pub fn identify(rows: &[Vec<Rational>]) -> Result<ParamFamily, IdentifyError> {
    for (n, r) in rows.iter().enumerate() {
        if r.len() != n + 1 {
            return Err(IdentifyError::Malformed(format!("row {n} has {} entries", r.len())));
        }
    }
    let n_max = rows.len().saturating_sub(1);
    if n_max < 2 {
        return Err(IdentifyError::PrefixTooShallow { rank: coefficient_rank(rows, n_max), prev_rank: 0 });
    }
    if rows[0][0] != 1 {
        return Err(IdentifyError::Infeasible);
    }
    let mut m = system(rows, n_max);
    let pivots = rref(&mut m);
    if pivots.contains(&6) {
        return Err(IdentifyError::Infeasible);
    }
    let mut particular: [Rational; 6] = Default::default();
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = m[i][6].clone();
    }
    let free: Vec<usize> = (0..6).filter(|c| !pivots.contains(c)).collect();
    let basis: Vec<[Rational; 6]> = free
        .iter()
        .map(|&f| {
            let mut v: [Rational; 6] = Default::default();
            v[f] = Rational::from(1);
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -m[i][f].clone();
            }
            v
        })
        .collect();
    if !basis.is_empty() {
        let prev_rank = coefficient_rank(rows, n_max - 1);
        if prev_rank < pivots.len() {
            return Err(IdentifyError::PrefixTooShallow { rank: pivots.len(), prev_rank });
        }
    }
    Ok(ParamFamily { particular: ParamTuple::from_array(particular), dim: basis.len(), nullspace_basis: basis })
}
