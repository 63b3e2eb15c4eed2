//! Dense and sparse exact linear algebra over a [`Field`].

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Field;

/// A dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix with the given vectors as columns; `rows` fixes the height when empty.
    pub fn from_cols(rows: usize, cols: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = F::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s = s.add(&a.mul(b));
                    }
                }
                s
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(c)).collect() }
    }

    /// Kronecker product; index `(i, j)` of `self` is the outer index.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a.mul(&other[(k, l)]);
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m[(r, c)].inv();
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].mul(&inv);
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        m[(i, j)] = m[(i, j)].sub(&f.mul(&m[(r, j)]));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut e = SparseEchelon::new(self.cols);
        for i in 0..self.rows {
            e.insert_dense(self.row(i));
        }
        e.rank()
    }

    /// A basis of `{x : self · x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let mut e = SparseEchelon::new(self.cols);
        for i in 0..self.rows {
            e.insert_dense(self.row(i));
        }
        e.nullspace()
    }

    /// Some solution of `self · x = b`, if one exists.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (i, x) in b.iter().enumerate() {
            aug[(i, self.cols)] = x.clone();
        }
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (i, &c) in piv.iter().enumerate() {
            x[c] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[..n].iter().enumerate().any(|(i, &c)| i != c) {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn trace(&self) -> F {
        let mut s = F::zero();
        for i in 0..self.rows.min(self.cols) {
            s = s.add(&self[(i, i)]);
        }
        s
    }
}

/// Incremental row echelon form over sparse rows.
///
/// Each stored row is normalized so that its leading entry is one; rows are
/// kept in a map keyed by pivot column.
#[derive(Clone, Debug)]
pub struct SparseEchelon<F> {
    cols: usize,
    pivots: BTreeMap<usize, Vec<(usize, F)>>,
}

impl<F: Field> SparseEchelon<F> {
    pub fn new(cols: usize) -> Self {
        SparseEchelon { cols, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn insert_dense(&mut self, row: &[F]) -> bool {
        let sparse: Vec<(usize, F)> =
            row.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect();
        self.insert(sparse)
    }

    /// Reduce `row` against the stored rows. Entries must be sorted by column.
    pub fn reduce(&self, mut row: Vec<(usize, F)>) -> Vec<(usize, F)> {
        let mut start = 0;
        loop {
            let Some(pos) = (start..row.len()).find(|&k| self.pivots.contains_key(&row[k].0)) else {
                return row;
            };
            let (col, coef) = row[pos].clone();
            let prow = &self.pivots[&col];
            row = axpy_sparse(&row, &coef.neg(), prow);
            start = row.partition_point(|(c, _)| *c <= col);
        }
    }

    /// Insert a row; returns whether it increased the rank.
    pub fn insert(&mut self, row: Vec<(usize, F)>) -> bool {
        let mut row = self.reduce(row);
        if row.is_empty() {
            return false;
        }
        let (col, lead) = row[0].clone();
        if !lead.is_one() {
            let inv = lead.inv();
            for e in row.iter_mut() {
                e.1 = e.1.mul(&inv);
            }
        }
        self.pivots.insert(col, row);
        true
    }

    /// Whether the row lies in the span of the stored rows.
    pub fn contains(&self, row: Vec<(usize, F)>) -> bool {
        self.reduce(row).is_empty()
    }

    /// Basis of the right kernel of the stored rows.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.pivots.contains_key(c)).collect();
        let mut out = Vec::with_capacity(free.len());
        for &f in &free {
            let mut x = vec![F::zero(); self.cols];
            x[f] = F::one();
            // back substitution from the last pivot
            for (&pc, prow) in self.pivots.iter().rev() {
                let mut s = F::zero();
                for (c, a) in prow.iter().skip(1) {
                    if !x[*c].is_zero() {
                        s = s.add(&a.mul(&x[*c]));
                    }
                }
                x[pc] = s.neg();
            }
            out.push(x);
        }
        out
    }

    /// Fully reduce the stored rows (reduced row echelon form).
    pub fn reduced_rows(&self) -> Vec<(usize, Vec<(usize, F)>)> {
        let mut done: BTreeMap<usize, Vec<(usize, F)>> = BTreeMap::new();
        for (&pc, prow) in self.pivots.iter().rev() {
            let mut row = prow.clone();
            let mut k = 1;
            while k < row.len() {
                let (c, coef) = row[k].clone();
                if let Some(r2) = done.get(&c) {
                    row = axpy_sparse(&row, &coef.neg(), r2);
                    k = row.partition_point(|(cc, _)| *cc <= c);
                } else {
                    k += 1;
                }
            }
            done.insert(pc, row);
        }
        done.into_iter().collect()
    }
}

/// `a + c·b` for sorted sparse vectors.
pub fn axpy_sparse<F: Field>(a: &[(usize, F)], c: &F, b: &[(usize, F)]) -> Vec<(usize, F)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, c.mul(&b[j].1)));
            j += 1;
        } else {
            let s = a[i].1.add(&c.mul(&b[j].1));
            if !s.is_zero() {
                out.push((a[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Dimension of the span of a set of dense vectors.
pub fn span_rank<F: Field>(vectors: &[Vec<F>], dim: usize) -> usize {
    let mut e = SparseEchelon::new(dim);
    for v in vectors {
        e.insert_dense(v);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Q;

    fn q(n: i64) -> Q {
        Q::int(n)
    }

    #[test]
    fn rank_and_nullspace() {
        let m = Matrix::from_rows(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_rows(vec![vec![q(2), q(1)], vec![q(7), q(4)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        let sing = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Matrix::from_rows(vec![vec![q(1), q(1)], vec![q(1), q(-1)]]);
        let x = m.solve(&[q(3), q(1)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        let s = Matrix::from_rows(vec![vec![q(1), q(1)], vec![q(2), q(2)]]);
        assert!(s.solve(&[q(1), q(3)]).is_none());
    }

    #[test]
    fn reduced_rows_are_reduced() {
        let mut e = SparseEchelon::new(3);
        e.insert_dense(&[q(1), q(1), q(1)]);
        e.insert_dense(&[q(0), q(1), q(2)]);
        let rr = e.reduced_rows();
        assert_eq!(rr[0].1, vec![(0, q(1)), (2, q(-1))]);
        assert_eq!(rr[1].1, vec![(1, q(1)), (2, q(2))]);
    }
}
