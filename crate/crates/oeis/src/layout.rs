use serde::{Deserialize, Serialize};

/// How a b-file enumerates a triangle: rows `n = row_offset, row_offset + 1, ..`
/// in order, and within row `n` the entries `|n k|` for
/// `k = k_offset ..= n - k_trim`.
///
/// Entries that are identically zero on the diagonal (Eulerian-type
/// triangles) are dropped with `k_trim = 1`; a zero first column with
/// `k_offset = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleLayout {
    pub row_offset: usize,
    pub k_offset: usize,
    #[serde(default)]
    pub k_trim: usize,
}

impl TriangleLayout {
    pub fn new(row_offset: usize, k_offset: usize, k_trim: usize) -> Self {
        TriangleLayout { row_offset, k_offset, k_trim }
    }

    /// Column range stored for row `n` (empty when the row is too short).
    pub fn columns(&self, n: usize) -> std::ops::Range<usize> {
        let end = (n + 1).saturating_sub(self.k_trim);
        self.k_offset..end.max(self.k_offset)
    }

    /// Position of `|n k|` in the value list, if stored.
    pub fn index(&self, n: usize, k: usize) -> Option<usize> {
        if n < self.row_offset || !self.columns(n).contains(&k) {
            return None;
        }
        let before: usize = (self.row_offset..n).map(|m| self.columns(m).len()).sum();
        Some(before + k - self.k_offset)
    }

    /// Number of values covering rows `row_offset ..= n`.
    pub fn len_through(&self, n: usize) -> usize {
        (self.row_offset..=n).map(|m| self.columns(m).len()).sum()
    }

    /// Inverse of [`index`](Self::index).
    pub fn position(&self, mut idx: usize) -> (usize, usize) {
        let mut n = self.row_offset;
        loop {
            let len = self.columns(n).len();
            if idx < len {
                return (n, self.k_offset + idx);
            }
            idx -= len;
            n += 1;
        }
    }
}
