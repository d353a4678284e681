use std::collections::HashMap;

use crate::complex::FlagSkeleton;

use super::HomologyError;

/// Signed incidence matrix from `d`-chains to `(d - 1)`-chains.
///
/// Rows are the `(d - 1)`-faces and columns the `d`-faces, both in
/// lexicographic order. Column `c` has exactly `d + 1` nonzeros: the facet
/// omitting position `i` of the face carries sign `(-1)^i`. Row indices are
/// stored per column in omitted-position order, so signs are implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMatrix {
    dim: usize,
    rows: usize,
    cols: usize,
    facets: Vec<u32>,
}

impl BoundaryMatrix {
    pub fn new(sk: &FlagSkeleton, d: usize) -> Result<BoundaryMatrix, HomologyError> {
        if d == 0 || d > sk.cap() {
            return Err(HomologyError::DimensionOutOfRange { d, cap: sk.cap() });
        }
        let lower = sk.face_list(d - 1).expect("d - 1 <= cap");
        let upper = sk.face_list(d).expect("d <= cap");
        let mut facets = Vec::with_capacity(upper.len() * (d + 1));
        let mut buf = Vec::with_capacity(d);
        for face in upper.iter() {
            for skip in 0..=d {
                buf.clear();
                buf.extend_from_slice(&face[..skip]);
                buf.extend_from_slice(&face[skip + 1..]);
                let row = lower
                    .index_of(&buf)
                    .expect("flag skeletons are closed under taking facets");
                facets.push(row as u32);
            }
        }
        Ok(BoundaryMatrix {
            dim: d,
            rows: lower.len(),
            cols: upper.len(),
            facets,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Nonzeros `(row, sign)` of column `c`, in omitted-position order.
    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, i8)> + '_ {
        let w = self.dim + 1;
        self.facets[c * w..(c + 1) * w]
            .iter()
            .enumerate()
            .map(|(i, &r)| (r as usize, if i % 2 == 0 { 1 } else { -1 }))
    }

    /// Column `c` as a row-sorted sparse vector.
    pub(crate) fn sorted_column(&self, c: usize) -> Vec<(u32, i8)> {
        let mut v: Vec<(u32, i8)> = self.column(c).map(|(r, s)| (r as u32, s)).collect();
        v.sort_unstable_by_key(|&(r, _)| r);
        v
    }

    /// Rows as column-sorted sparse vectors (the coboundary view).
    pub(crate) fn sorted_rows(&self) -> Vec<Vec<(u32, i8)>> {
        let mut rows: Vec<Vec<(u32, i8)>> = vec![Vec::new(); self.rows];
        for c in 0..self.cols {
            for (r, s) in self.column(c) {
                rows[r].push((c as u32, s));
            }
        }
        rows
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<i8> {
        let mut out = vec![0i8; self.rows * self.cols];
        for c in 0..self.cols {
            for (r, s) in self.column(c) {
                out[r * self.cols + c] = s;
            }
        }
        out
    }

    pub fn transpose_dense(&self) -> Vec<i8> {
        let mut out = vec![0i8; self.rows * self.cols];
        for c in 0..self.cols {
            for (r, s) in self.column(c) {
                out[c * self.rows + r] = s;
            }
        }
        out
    }

    pub fn nnz(&self) -> usize {
        self.facets.len()
    }
}

/// Whether `lower * upper` is exactly the zero matrix, where `lower` is
/// `∂_d` and `upper` is `∂_{d+1}`.
pub fn composes_to_zero(lower: &BoundaryMatrix, upper: &BoundaryMatrix) -> bool {
    if lower.dim + 1 != upper.dim || lower.cols != upper.rows {
        return false;
    }
    let mut acc: HashMap<usize, i64> = HashMap::new();
    for c in 0..upper.cols {
        acc.clear();
        for (mid, s) in upper.column(c) {
            for (r, t) in lower.column(mid) {
                *acc.entry(r).or_insert(0) += (s * t) as i64;
            }
        }
        if acc.values().any(|&x| x != 0) {
            return false;
        }
    }
    true
}
