//! Symmetric sparse matrices in compressed-row form.
//!
//! The flow operators (cotangent Laplacian `L`, lumped mass `M`, and the
//! semi-implicit system matrices built from them) are all symmetric with a
//! few entries per row, so one small CSR type covers everything. Symmetry is
//! maintained structurally: assembly mirrors each upper-triangle entry, and
//! products of symmetric matrices are re-mirrored from the upper triangle so
//! `get(i, j) == get(j, i)` holds exactly, not just up to rounding.

use crate::Vec3;

/// Symmetric sparse matrix over mesh vertices.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
    /// Whether the quadratic form is expected to be positive semi-definite.
    pub psd: bool,
}

impl SparseOperator {
    /// Assemble from (row, col, value) triplets with `row <= col`.
    ///
    /// Duplicate triplets are summed; each strictly-upper entry is mirrored
    /// below the diagonal so symmetry is exact by construction.
    pub fn from_upper_triplets(
        dim: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
        psd: bool,
    ) -> Self {
        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for (i, j, v) in triplets {
            assert!(i <= j, "upper-triangle triplets require row <= col");
            assert!(j < dim, "triplet column out of range");
            entries.push((i, j, v));
        }
        entries.sort_by_key(|&(i, j, _)| (i, j));

        // Sum duplicates in (i, j) order, then mirror.
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(entries.len());
        for (i, j, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += v,
                _ => merged.push((i, j, v)),
            }
        }
        let mut full: Vec<(usize, usize, f64)> = Vec::with_capacity(merged.len() * 2);
        for &(i, j, v) in &merged {
            full.push((i, j, v));
            if i != j {
                full.push((j, i, v));
            }
        }
        Self::from_sorted_full(dim, full, psd)
    }

    /// Diagonal matrix.
    pub fn diagonal(diag: &[f64], psd: bool) -> Self {
        let full: Vec<(usize, usize, f64)> = diag
            .iter()
            .enumerate()
            .map(|(i, &v)| (i, i, v))
            .collect();
        Self::from_sorted_full(diag.len(), full, psd)
    }

    fn from_sorted_full(dim: usize, mut full: Vec<(usize, usize, f64)>, psd: bool) -> Self {
        full.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; dim + 1];
        let mut col_idx = Vec::with_capacity(full.len());
        let mut values = Vec::with_capacity(full.len());
        for &(i, j, v) in &full {
            row_ptr[i + 1] += 1;
            col_idx.push(j);
            values.push(v);
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        SparseOperator {
            dim,
            row_ptr,
            col_idx,
            values,
            psd,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Columns and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    /// Entry (i, j), zero if absent.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal_entries(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.row(i).1.iter().sum())
            .collect()
    }

    /// y = A x.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![0.0; self.dim];
        for i in 0..self.dim {
            let (cols, vals) = self.row(i);
            let mut acc = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                acc += v * x[j];
            }
            y[i] = acc;
        }
        y
    }

    /// Apply to a field of 3-vectors component-wise.
    pub fn mul_vec3(&self, x: &[Vec3]) -> Vec<Vec3> {
        assert_eq!(x.len(), self.dim);
        let mut y = vec![Vec3::zeros(); self.dim];
        for i in 0..self.dim {
            let (cols, vals) = self.row(i);
            let mut acc = Vec3::zeros();
            for (&j, &v) in cols.iter().zip(vals) {
                acc += v * x[j];
            }
            y[i] = acc;
        }
        y
    }

    /// xᵀ A x.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let ax = self.mul_vec(x);
        x.iter().zip(&ax).map(|(a, b)| a * b).sum()
    }

    /// A + scale · B, entries merged.
    pub fn add_scaled(&self, other: &SparseOperator, scale: f64, psd: bool) -> SparseOperator {
        assert_eq!(self.dim, other.dim);
        let mut full = Vec::with_capacity(self.nnz() + other.nnz());
        for i in 0..self.dim {
            let (ca, va) = self.row(i);
            let (cb, vb) = other.row(i);
            let (mut p, mut q) = (0usize, 0usize);
            while p < ca.len() || q < cb.len() {
                if q >= cb.len() || (p < ca.len() && ca[p] < cb[q]) {
                    full.push((i, ca[p], va[p]));
                    p += 1;
                } else if p >= ca.len() || cb[q] < ca[p] {
                    full.push((i, cb[q], scale * vb[q]));
                    q += 1;
                } else {
                    full.push((i, ca[p], va[p] + scale * vb[q]));
                    p += 1;
                    q += 1;
                }
            }
        }
        SparseOperator::from_sorted_full(self.dim, full, psd)
    }

    /// Scale every row i by `diag[i]` (result is generally not symmetric;
    /// only used as an intermediate inside [`SparseOperator::multiply`]).
    fn scale_rows(&self, diag: &[f64]) -> SparseOperator {
        assert_eq!(diag.len(), self.dim);
        let mut out = self.clone();
        for i in 0..self.dim {
            let lo = out.row_ptr[i];
            let hi = out.row_ptr[i + 1];
            for v in &mut out.values[lo..hi] {
                *v *= diag[i];
            }
        }
        out.psd = false;
        out
    }

    /// Sparse product A · B using a dense accumulator per row.
    pub fn multiply(&self, other: &SparseOperator, psd: bool) -> SparseOperator {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut full: Vec<(usize, usize, f64)> = Vec::new();
        let mut acc = vec![0.0f64; n];
        let mut touched: Vec<usize> = Vec::new();
        for i in 0..n {
            let (cols, vals) = self.row(i);
            for (&k, &a_ik) in cols.iter().zip(vals) {
                let (bcols, bvals) = other.row(k);
                for (&j, &b_kj) in bcols.iter().zip(bvals) {
                    if acc[j] == 0.0 && !touched.contains(&j) {
                        touched.push(j);
                    }
                    acc[j] += a_ik * b_kj;
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                full.push((i, j, acc[j]));
                acc[j] = 0.0;
            }
            touched.clear();
        }
        SparseOperator::from_sorted_full(n, full, psd)
    }

    /// L · diag(d) · L for symmetric `self`; the result is mirrored from its
    /// upper triangle so symmetry is exact.
    pub fn sandwich_diagonal(&self, diag: &[f64], psd: bool) -> SparseOperator {
        let ld = self.scale_rows(diag); // rows of L scaled = diag(d)·L
        let product = self.multiply(&ld, psd); // L·diag(d)·L
        product.symmetrized_from_upper()
    }

    /// Rebuild with the strict lower triangle copied from the upper one.
    pub fn symmetrized_from_upper(&self) -> SparseOperator {
        let mut full = Vec::with_capacity(self.nnz());
        for i in 0..self.dim {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if j >= i {
                    full.push((i, j, v));
                    if j > i {
                        full.push((j, i, v));
                    }
                }
            }
        }
        SparseOperator::from_sorted_full(self.dim, full, self.psd)
    }

    /// Submatrix over `keep` (sorted, deduplicated vertex indices).
    pub fn submatrix(&self, keep: &[usize]) -> SparseOperator {
        let mut position = vec![usize::MAX; self.dim];
        for (new, &old) in keep.iter().enumerate() {
            position[old] = new;
        }
        let mut full = Vec::new();
        for (new_i, &old_i) in keep.iter().enumerate() {
            let (cols, vals) = self.row(old_i);
            for (&j, &v) in cols.iter().zip(vals) {
                if position[j] != usize::MAX {
                    full.push((new_i, position[j], v));
                }
            }
        }
        SparseOperator::from_sorted_full(keep.len(), full, self.psd)
    }

    /// Dense copy, for tests and the direct solver.
    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let mut m = nalgebra::DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Exact structural symmetry check.
    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.dim {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if self.get(j, i) != v {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> SparseOperator {
        // [ 2 -1  0]
        // [-1  2 -1]
        // [ 0 -1  2]
        SparseOperator::from_upper_triplets(
            3,
            vec![(0, 0, 2.0), (0, 1, -1.0), (1, 1, 2.0), (1, 2, -1.0), (2, 2, 2.0)],
            true,
        )
    }

    #[test]
    fn assembly_mirrors_and_sums_duplicates() {
        let a = SparseOperator::from_upper_triplets(
            2,
            vec![(0, 1, 1.0), (0, 1, 2.0), (0, 0, 1.0), (1, 1, 1.0)],
            false,
        );
        assert_eq!(a.get(0, 1), 3.0);
        assert_eq!(a.get(1, 0), 3.0);
        assert!(a.is_symmetric());
    }

    #[test]
    fn mul_and_quadratic_form() {
        let a = example();
        let y = a.mul_vec(&[1.0, 2.0, 3.0]);
        assert_eq!(y, vec![0.0, 0.0, 4.0]);
        assert_eq!(a.quadratic_form(&[1.0, 1.0, 1.0]), 2.0);
    }

    #[test]
    fn add_scaled_merges_patterns() {
        let a = example();
        let d = SparseOperator::diagonal(&[1.0, 1.0, 1.0], true);
        let s = d.add_scaled(&a, 0.5, true);
        assert_eq!(s.get(0, 0), 2.0);
        assert_eq!(s.get(0, 1), -0.5);
        assert!(s.is_symmetric());
    }

    #[test]
    fn sandwich_matches_dense() {
        let a = example();
        let d = [2.0, 3.0, 4.0];
        let s = a.sandwich_diagonal(&d, true);
        let dense = a.to_dense() * nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&d)) * a.to_dense();
        for i in 0..3 {
            for j in 0..3 {
                assert!((s.get(i, j) - dense[(i, j)]).abs() < 1e-12);
            }
        }
        assert!(s.is_symmetric());
    }

    #[test]
    fn submatrix_extracts_block() {
        let a = example();
        let s = a.submatrix(&[0, 2]);
        assert_eq!(s.dim(), 2);
        assert_eq!(s.get(0, 0), 2.0);
        assert_eq!(s.get(0, 1), 0.0);
        assert_eq!(s.get(1, 1), 2.0);
    }
}
