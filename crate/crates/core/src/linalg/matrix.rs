use std::fmt;

use super::{LinalgError, Ring};

/// Fraction of nonzero entries at or above which a matrix is stored densely.
pub const DENSE_THRESHOLD: f64 = 0.25;

#[derive(Clone)]
enum Storage {
    /// Row-major.
    Dense(Vec<i64>),
    /// One list per column of `(row, value)`, sorted by row, zeros omitted.
    Sparse(Vec<Vec<(usize, i64)>>),
}

/// An integer matrix with exact shape. Storage is chosen by density;
/// every operation behaves the same on both representations.
#[derive(Clone)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    storage: Storage,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, storage: Storage::Sparse(vec![Vec::new(); cols]) }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, 1)))
    }

    pub fn scalar_identity(n: usize, k: i64) -> Self {
        Self::from_triplets(n, n, (0..n).map(|i| (i, i, k)))
    }

    /// Builds from row lists. Panics if rows have unequal lengths.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        Self::from_triplets(
            rows.len(),
            cols,
            rows.iter()
                .enumerate()
                .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, v))),
        )
    }

    /// Like [`Matrix::from_rows`] but with an explicit shape, so that
    /// `0 x n` matrices can be expressed.
    pub fn from_rows_with_shape(rows: usize, cols: usize, data: &[Vec<i64>]) -> Result<Self, LinalgError> {
        if data.len() != rows || data.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Shape(format!(
                "expected a {rows}x{cols} matrix, got {} rows",
                data.len()
            )));
        }
        Ok(Self::from_triplets(
            rows,
            cols,
            data.iter()
                .enumerate()
                .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, v))),
        ))
    }

    /// Duplicate positions are summed. Panics on out-of-range indices or
    /// if a summed entry overflows.
    pub fn from_triplets(rows: usize, cols: usize, entries: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut columns: Vec<Vec<(usize, i64)>> = vec![Vec::new(); cols];
        for (i, j, v) in entries {
            assert!(i < rows && j < cols, "entry ({i},{j}) outside {rows}x{cols}");
            if v != 0 {
                columns[j].push((i, v));
            }
        }
        for col in &mut columns {
            col.sort_unstable_by_key(|e| e.0);
            let mut merged: Vec<(usize, i64)> = Vec::with_capacity(col.len());
            for &(i, v) in col.iter() {
                match merged.last_mut() {
                    Some(last) if last.0 == i => {
                        last.1 = last.1.checked_add(v).expect("entry overflow while assembling matrix")
                    }
                    _ => merged.push((i, v)),
                }
            }
            merged.retain(|e| e.1 != 0);
            *col = merged;
        }
        Matrix { rows, cols, storage: Storage::Sparse(columns) }.normalized()
    }

    fn normalized(self) -> Self {
        let size = self.rows * self.cols;
        if size == 0 {
            return Matrix { rows: self.rows, cols: self.cols, storage: Storage::Sparse(vec![Vec::new(); self.cols]) };
        }
        let dense_wanted = (self.nnz() as f64) / (size as f64) >= DENSE_THRESHOLD;
        match (&self.storage, dense_wanted) {
            (Storage::Sparse(columns), true) => {
                let mut data = vec![0i64; size];
                for (j, col) in columns.iter().enumerate() {
                    for &(i, v) in col {
                        data[i * self.cols + j] = v;
                    }
                }
                Matrix { rows: self.rows, cols: self.cols, storage: Storage::Dense(data) }
            }
            (Storage::Dense(data), false) => {
                let mut columns = vec![Vec::new(); self.cols];
                for i in 0..self.rows {
                    for (j, col) in columns.iter_mut().enumerate() {
                        let v = data[i * self.cols + j];
                        if v != 0 {
                            col.push((i, v));
                        }
                    }
                }
                Matrix { rows: self.rows, cols: self.cols, storage: Storage::Sparse(columns) }
            }
            _ => self,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(d) => d.iter().filter(|v| **v != 0).count(),
            Storage::Sparse(c) => c.iter().map(Vec::len).sum(),
        }
    }

    pub fn density(&self) -> f64 {
        let size = self.rows * self.cols;
        if size == 0 {
            0.0
        } else {
            self.nnz() as f64 / size as f64
        }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        assert!(i < self.rows && j < self.cols);
        match &self.storage {
            Storage::Dense(d) => d[i * self.cols + j],
            Storage::Sparse(c) => c[j]
                .binary_search_by_key(&i, |e| e.0)
                .map_or(0, |k| c[j][k].1),
        }
    }

    /// Nonzero entries of column `j`, by increasing row.
    pub fn column(&self, j: usize) -> Vec<(usize, i64)> {
        match &self.storage {
            Storage::Dense(d) => (0..self.rows)
                .filter_map(|i| {
                    let v = d[i * self.cols + j];
                    (v != 0).then_some((i, v))
                })
                .collect(),
            Storage::Sparse(c) => c[j].clone(),
        }
    }

    /// All nonzero entries as `(row, col, value)`, column by column.
    pub fn triplets(&self) -> Vec<(usize, usize, i64)> {
        (0..self.cols)
            .flat_map(|j| self.column(j).into_iter().map(move |(i, v)| (i, j, v)))
            .collect()
    }

    /// Nonzero entries grouped by row, each row sorted by column.
    pub fn row_lists(&self) -> Vec<Vec<(usize, i64)>> {
        let mut rows = vec![Vec::new(); self.rows];
        for (i, j, v) in self.triplets() {
            rows[i].push((j, v));
        }
        rows
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0i64; self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            out[i][j] = v;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    /// True when every entry vanishes in `ring`.
    pub fn is_zero_in(&self, ring: Ring) -> bool {
        self.triplets().iter().all(|&(_, _, v)| ring.reduce(v) == 0)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_triplets(self.cols, self.rows, self.triplets().into_iter().map(|(i, j, v)| (j, i, v)))
    }

    pub fn scaled(&self, k: i64) -> Result<Matrix, LinalgError> {
        let mut out = Vec::new();
        for (i, j, v) in self.triplets() {
            out.push((i, j, v.checked_mul(k).ok_or(LinalgError::ArithmeticOverflow)?));
        }
        Ok(Matrix::from_triplets(self.rows, self.cols, out))
    }

    pub fn neg(&self) -> Matrix {
        self.scaled(-1).expect("negation overflow")
    }

    /// Entries reduced to canonical representatives in `ring`.
    pub fn reduced(&self, ring: Ring) -> Matrix {
        match ring {
            Ring::Integers => self.clone(),
            _ => Matrix::from_triplets(
                self.rows,
                self.cols,
                self.triplets().into_iter().map(|(i, j, v)| (i, j, ring.reduce(v))),
            ),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.shape() != other.shape() {
            return Err(LinalgError::Shape(format!(
                "cannot add {:?} and {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let mut entries: Vec<(usize, usize, i128)> = self
            .triplets()
            .into_iter()
            .chain(other.triplets())
            .map(|(i, j, v)| (i, j, v as i128))
            .collect();
        entries.sort_unstable_by_key(|e| (e.1, e.0));
        let mut out: Vec<(usize, usize, i64)> = Vec::new();
        let mut k = 0;
        while k < entries.len() {
            let (i, j, mut acc) = entries[k];
            k += 1;
            while k < entries.len() && entries[k].0 == i && entries[k].1 == j {
                acc += entries[k].2;
                k += 1;
            }
            out.push((i, j, i64::try_from(acc).map_err(|_| LinalgError::ArithmeticOverflow)?));
        }
        Ok(Matrix::from_triplets(self.rows, self.cols, out))
    }

    /// Exact product `self * other`.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {:?} by {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let left_cols: Vec<Vec<(usize, i64)>> = (0..self.cols).map(|k| self.column(k)).collect();
        let mut entries = Vec::new();
        let mut acc: Vec<i128> = vec![0; self.rows];
        let mut touched: Vec<usize> = Vec::new();
        for j in 0..other.cols {
            for (k, b) in other.column(j) {
                for &(i, a) in &left_cols[k] {
                    if acc[i] == 0 {
                        touched.push(i);
                    }
                    acc[i] = acc[i]
                        .checked_add(a as i128 * b as i128)
                        .ok_or(LinalgError::ArithmeticOverflow)?;
                }
            }
            touched.sort_unstable();
            touched.dedup();
            for &i in &touched {
                if acc[i] != 0 {
                    entries.push((i, j, i64::try_from(acc[i]).map_err(|_| LinalgError::ArithmeticOverflow)?));
                }
                acc[i] = 0;
            }
            touched.clear();
        }
        Ok(Matrix::from_triplets(self.rows, other.cols, entries))
    }

    /// Stacks `blocks[r][c]` into one matrix. Block rows must agree in
    /// height and block columns in width; `None` blocks are zero.
    pub fn block(row_heights: &[usize], col_widths: &[usize], blocks: &[Vec<Option<&Matrix>>]) -> Result<Matrix, LinalgError> {
        let rows: usize = row_heights.iter().sum();
        let cols: usize = col_widths.iter().sum();
        let mut entries = Vec::new();
        let mut r0 = 0;
        for (bi, h) in row_heights.iter().enumerate() {
            let mut c0 = 0;
            for (bj, w) in col_widths.iter().enumerate() {
                if let Some(m) = blocks[bi][bj] {
                    if m.shape() != (*h, *w) {
                        return Err(LinalgError::Shape(format!(
                            "block ({bi},{bj}) is {:?}, expected {:?}",
                            m.shape(),
                            (h, w)
                        )));
                    }
                    entries.extend(m.triplets().into_iter().map(|(i, j, v)| (r0 + i, c0 + j, v)));
                }
                c0 += w;
            }
            r0 += h;
        }
        Ok(Matrix::from_triplets(rows, cols, entries))
    }

    /// Semantic equality after reduction into `ring`.
    pub fn eq_in(&self, other: &Matrix, ring: Ring) -> bool {
        self.shape() == other.shape() && self.reduced(ring).triplets() == other.reduced(ring).triplets()
    }
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.shape() == other.shape() && self.triplets() == other.triplets()
    }
}

impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} {:?}", self.rows, self.cols, self.to_dense_rows())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn storage_follows_density() {
        let sparse = Matrix::from_triplets(10, 10, [(0, 0, 1), (3, 4, 2)]);
        assert!(!sparse.is_dense());
        let dense = Matrix::from_rows(&[vec![1, 2], vec![0, 3]]);
        assert!(dense.is_dense());
        assert_eq!(dense.get(1, 1), 3);
        assert_eq!(sparse.get(3, 4), 2);
        assert_eq!(sparse.get(4, 3), 0);
    }

    #[test]
    fn dense_and_sparse_multiply_alike() {
        let a = Matrix::from_rows(&[vec![1, 2, 0], vec![0, 1, -1]]);
        let b = Matrix::from_triplets(3, 2, [(0, 0, 1), (2, 1, 5)]);
        let c = a.mul(&b).unwrap();
        assert_eq!(c.to_dense_rows(), vec![vec![1, 0], vec![0, -5]]);
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn product_overflow_is_reported() {
        let a = Matrix::from_rows(&[vec![i64::MAX]]);
        assert!(matches!(a.mul(&a), Err(LinalgError::ArithmeticOverflow)));
    }

    #[test]
    fn block_assembly() {
        let i2 = Matrix::identity(2);
        let z = Matrix::from_rows(&[vec![7]]);
        let m = Matrix::block(&[2, 1], &[2, 1], &[vec![Some(&i2), None], vec![None, Some(&z)]]).unwrap();
        assert_eq!(m.to_dense_rows(), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 7]]);
    }

    #[test]
    fn empty_shapes() {
        let m = Matrix::zeros(0, 3);
        assert_eq!(m.shape(), (0, 3));
        let p = m.transpose().mul(&Matrix::zeros(0, 2)).unwrap();
        assert_eq!(p.shape(), (3, 2));
        assert!(p.is_zero());
    }
}
