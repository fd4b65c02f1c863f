//! Compressed-row sparse matrix with just the operations the pipeline needs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sparse matrix in compressed row storage. Within each row, columns are
/// strictly increasing and coordinates are unique.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Matrix with no stored entries.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// Build from (row, col, value) triplets. Rejects out-of-range indices,
    /// non-finite values and duplicate coordinates.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for &(r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({r}, {c}) out of bounds for {rows}x{cols} matrix"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidMatrix(format!(
                    "non-finite value {v} at ({r}, {c})"
                )));
            }
            entries.push((r, c, v));
        }
        entries.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(Error::InvalidMatrix(format!(
                    "duplicate coordinate ({}, {})",
                    w[0].0, w[0].1
                )));
            }
        }
        let mut row_ptr = vec![0usize; rows + 1];
        for &(r, _, _) in &entries {
            row_ptr[r + 1] += 1;
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(SparseMatrix {
            rows,
            cols,
            row_ptr,
            col_idx: entries.iter().map(|e| e.1).collect(),
            values: entries.iter().map(|e| e.2).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Entries of one row as (col, value), columns ascending.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        self.col_idx[lo..hi]
            .iter()
            .copied()
            .zip(self.values[lo..hi].iter().copied())
    }

    /// All stored entries as (row, col, value) in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    /// Value at (r, c); zero if not stored.
    pub fn get(&self, r: usize, c: usize) -> f64 {
        let lo = self.row_ptr[r];
        let hi = self.row_ptr[r + 1];
        match self.col_idx[lo..hi].binary_search(&c) {
            Ok(pos) => self.values[lo + pos],
            Err(_) => 0.0,
        }
    }

    /// y = M x
    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "spmv: matrix has {} columns, vector has length {}",
                self.cols,
                x.len()
            )));
        }
        let mut y = vec![0.0; self.rows];
        for r in 0..self.rows {
            let mut acc = 0.0;
            for (c, v) in self.row(r) {
                acc += v * x[c];
            }
            y[r] = acc;
        }
        Ok(y)
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.cols];
        for (_, c, v) in self.iter() {
            sums[c] += v;
        }
        sums
    }

    /// Number of stored entries per row.
    pub fn row_nnz_counts(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|r| self.row_ptr[r + 1] - self.row_ptr[r])
            .collect()
    }

    /// Number of stored entries per column.
    pub fn col_nnz_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.cols];
        for &c in &self.col_idx {
            counts[c] += 1;
        }
        counts
    }

    /// Multiply each column by a factor. Factors of 1.0 leave columns untouched.
    pub fn scale_cols(&self, factors: &[f64]) -> Result<Self> {
        if factors.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "scale_cols: {} factors for {} columns",
                factors.len(),
                self.cols
            )));
        }
        let mut out = self.clone();
        for i in 0..out.values.len() {
            out.values[i] *= factors[out.col_idx[i]];
        }
        Ok(out)
    }

    /// Drop explicitly stored zeros.
    pub fn canonicalize(self) -> Self {
        let triplets: Vec<_> = self.iter().filter(|&(_, _, v)| v != 0.0).collect();
        SparseMatrix::from_triplets(self.rows, self.cols, &triplets)
            .expect("canonicalize preserves validity")
    }

    pub fn transpose(&self) -> Self {
        let triplets: Vec<_> = self.iter().map(|(r, c, v)| (c, r, v)).collect();
        SparseMatrix::from_triplets(self.cols, self.rows, &triplets)
            .expect("transpose preserves validity")
    }

    /// Dense row-major copy, for small oracles and direct solves.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.cols]; self.rows];
        for (r, c, v) in self.iter() {
            dense[r][c] = v;
        }
        dense
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn spmv_identity() {
        let m = SparseMatrix::identity(3);
        assert_eq!(m.spmv(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn spmv_zero_matrix() {
        let m = SparseMatrix::zeros(3, 3);
        assert_eq!(m.spmv(&[4.0, 5.0, 6.0]).unwrap(), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn spmv_uniform_rows() {
        // row sums by hand: [[0,.5,.5],[.5,0,.5],[.5,.5,0]] * (1,1,1) = (1,1,1)
        let m = SparseMatrix::from_triplets(
            3,
            3,
            &[
                (0, 1, 0.5),
                (0, 2, 0.5),
                (1, 0, 0.5),
                (1, 2, 0.5),
                (2, 0, 0.5),
                (2, 1, 0.5),
            ],
        )
        .unwrap();
        assert_eq!(m.spmv(&[1.0, 1.0, 1.0]).unwrap(), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn spmv_dimension_mismatch() {
        let m = SparseMatrix::zeros(2, 3);
        assert!(m.spmv(&[1.0, 2.0]).is_err());
    }

    #[test]
    fn duplicate_coordinates_rejected() {
        let r = SparseMatrix::from_triplets(2, 2, &[(0, 1, 1.0), (0, 1, 2.0)]);
        assert!(r.is_err());
    }

    #[test]
    fn non_finite_rejected() {
        assert!(SparseMatrix::from_triplets(1, 1, &[(0, 0, f64::NAN)]).is_err());
        assert!(SparseMatrix::from_triplets(1, 1, &[(0, 0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn row_iteration_strictly_increasing() {
        let m = SparseMatrix::from_triplets(2, 4, &[(0, 3, 1.0), (0, 1, 2.0), (1, 0, 3.0)]).unwrap();
        let cols: Vec<usize> = m.row(0).map(|(c, _)| c).collect();
        assert_eq!(cols, vec![1, 3]);
    }

    #[test]
    fn canonicalize_drops_zeros() {
        let m = SparseMatrix::from_triplets(2, 2, &[(0, 0, 0.0), (1, 1, 2.0)]).unwrap();
        let m = m.canonicalize();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 1), 2.0);
    }

    fn random_triplets(rows: usize, cols: usize) -> impl Strategy<Value = Vec<(usize, usize, f64)>> {
        proptest::collection::btree_set((0..rows, 0..cols), 0..rows * cols / 2).prop_flat_map(
            move |coords| {
                let n = coords.len();
                let coords: Vec<(usize, usize)> = coords.into_iter().collect();
                proptest::collection::vec(-10.0f64..10.0, n).prop_map(move |vals| {
                    coords
                        .iter()
                        .zip(vals)
                        .map(|(&(r, c), v)| (r, c, v))
                        .collect()
                })
            },
        )
    }

    proptest! {
        // spmv distributes over vector addition within 1e-12 relative tolerance
        #[test]
        fn spmv_distributes_over_addition(
            triplets in random_triplets(50, 50),
            x in proptest::collection::vec(-5.0f64..5.0, 50),
            y in proptest::collection::vec(-5.0f64..5.0, 50),
        ) {
            let m = SparseMatrix::from_triplets(50, 50, &triplets).unwrap();
            let xy: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            let lhs = m.spmv(&xy).unwrap();
            let mx = m.spmv(&x).unwrap();
            let my = m.spmv(&y).unwrap();
            for i in 0..50 {
                let rhs = mx[i] + my[i];
                let scale = lhs[i].abs().max(rhs.abs()).max(1.0);
                prop_assert!((lhs[i] - rhs).abs() <= 1e-12 * scale);
            }
        }

        #[test]
        fn transpose_is_involutive(triplets in random_triplets(12, 9)) {
            let m = SparseMatrix::from_triplets(12, 9, &triplets).unwrap();
            prop_assert_eq!(m.transpose().transpose(), m);
        }
    }
}
