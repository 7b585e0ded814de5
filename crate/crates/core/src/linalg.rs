//! Exact dense linear algebra over a [`Scalar`] field.

use std::fmt;

use crate::field::Scalar;

/// A dense row-major matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize, zero: &F) -> Self {
        Matrix { rows, cols, data: vec![zero.zero_like(); rows * cols] }
    }

    pub fn identity(n: usize, one: &F) -> Self {
        let mut m = Matrix::zeros(n, n, one);
        for i in 0..n {
            m[(i, i)] = one.one_like();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_cols(cols: Vec<Vec<F>>) -> Self {
        Matrix::from_rows(cols).transpose()
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

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self[(i, j)].clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, o: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut data = Vec::with_capacity(self.rows * o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = self.data[0].zero_like();
                for k in 0..self.cols {
                    acc = acc + self[(i, k)].clone() * &o[(k, j)];
                }
                data.push(acc);
            }
        }
        Matrix { rows: self.rows, cols: o.cols, data }
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matrix/vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = v[0].zero_like();
                for (a, b) in self.row(i).iter().zip(v) {
                    acc = acc + a.clone() * b;
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, c: &F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
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
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].clone() * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let t = m[(r, j)].clone() * &f;
                        m[(i, j)] = m[(i, j)].clone() - t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        if self.data.is_empty() {
            return 0;
        }
        self.rref().1.len()
    }

    /// A basis of the right null space `{v : M v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        if self.cols == 0 {
            return Vec::new();
        }
        if self.rows == 0 {
            // every vector is in the kernel; we need a field element template
            panic!("kernel of a matrix without rows needs a field template; use kernel_with");
        }
        self.kernel_with(&self.data[0])
    }

    /// Like [`Matrix::kernel`], usable for matrices with no rows.
    pub fn kernel_with(&self, template: &F) -> Vec<Vec<F>> {
        let one = template.one_like();
        let zero = template.zero_like();
        if self.rows == 0 {
            return (0..self.cols)
                .map(|k| (0..self.cols).map(|j| if j == k { one.clone() } else { zero.clone() }).collect())
                .collect();
        }
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![zero.clone(); self.cols];
            v[free] = one.clone();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(i, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Determinant of a square matrix by Gaussian elimination.
    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            panic!("determinant of an empty matrix needs a field template");
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = m.data[0].one_like();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return det.zero_like();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for i in (c + 1)..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() * &inv;
                for j in c..n {
                    let t = m[(c, j)].clone() * &f;
                    m[(i, j)] = m[(i, j)].clone() - t;
                }
            }
        }
        det
    }

    /// Inverse of a square matrix, if it is invertible.
    pub fn inverse(&self) -> Option<Matrix<F>> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let one = self.data.first()?.one_like();
        let mut aug = Matrix::zeros(n, 2 * n, &one);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = one.clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n, &one);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// One solution of `M x = b`, if the system is consistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(self.rows, b.len(), "right-hand side length mismatch");
        let zero = b.first().or(self.data.first())?.zero_like();
        let mut aug = Matrix::zeros(self.rows, self.cols + 1, &zero);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![zero; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
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

impl<F: Scalar> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|c| c.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Symmetric bilinear form `aᵀ B b`.
pub fn bilinear<F: Scalar>(m: &Matrix<F>, a: &[F], b: &[F]) -> F {
    dot(a, &m.mul_vec(b))
}

pub fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    let mut acc = a[0].zero_like();
    for (x, y) in a.iter().zip(b) {
        acc = acc + x.clone() * y;
    }
    acc
}

/// `c·a + e·b` for vectors of equal length.
pub fn lin_comb<F: Scalar>(c: &F, a: &[F], e: &F, b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| c.clone() * x + e.clone() * y).collect()
}
