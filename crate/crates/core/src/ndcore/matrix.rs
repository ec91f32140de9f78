use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{NumError, Result};

use super::strassen;

/// Dense row-major matrix of finite `f64` entries.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Element-wise binary operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElemOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Right-hand side of an element-wise operation: another matrix of the same
/// shape, or a scalar broadcast to every entry.
#[derive(Debug, Clone, Copy)]
pub enum Operand<'a> {
    Matrix(&'a Matrix),
    Scalar(f64),
}

impl<'a> From<&'a Matrix> for Operand<'a> {
    fn from(m: &'a Matrix) -> Self {
        Operand::Matrix(m)
    }
}

impl From<f64> for Operand<'_> {
    fn from(s: f64) -> Self {
        Operand::Scalar(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatMulAlgo {
    #[default]
    Naive,
    Strassen,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(NumError::EmptyInput);
        }
        if data.len() != rows * cols {
            return Err(NumError::shape(format!("{} values for a {rows}x{cols} matrix", data.len())));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(NumError::NonFinite);
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(NumError::EmptyInput);
        }
        let c = rows[0].as_ref().len();
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            if row.len() != c {
                return Err(NumError::shape("ragged rows"));
            }
            data.extend_from_slice(row);
        }
        Matrix::new(r, c, data)
    }

    /// Column vector (n x 1).
    pub fn column(values: &[f64]) -> Result<Self> {
        Matrix::new(values.len(), 1, values.to_vec())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diag(values: &[f64]) -> Self {
        let mut m = Matrix::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Wraps data that is already known to be well-formed. Used by
    /// algorithms whose outputs are finite by construction.
    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        self.diag().iter().sum()
    }

    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if (self[(i, j)] - self[(j, i)]).abs() > rel_tol * scale {
                    return false;
                }
            }
        }
        true
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    /// Reinterprets the row-major data with a new shape.
    pub fn reshape(&self, rows: usize, cols: usize) -> Result<Matrix> {
        if rows * cols != self.data.len() || rows == 0 || cols == 0 {
            return Err(NumError::SizeMismatch { from: self.data.len(), to: rows * cols });
        }
        Ok(Matrix { rows, cols, data: self.data.clone() })
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        self.matmul_with(other, MatMulAlgo::Naive)
    }

    pub fn matmul_with(&self, other: &Matrix, algo: MatMulAlgo) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(NumError::shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(match algo {
            MatMulAlgo::Naive => {
                let data = naive_product(&self.data, &other.data, self.rows, self.cols, other.cols);
                Matrix::from_raw(self.rows, other.cols, data)
            }
            MatMulAlgo::Strassen => strassen::multiply(self, other),
        })
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(NumError::shape(format!("vector of length {} against {} columns", x.len(), self.cols)));
        }
        Ok((0..self.rows).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix::from_raw(self.rows, self.cols, self.data.iter().map(|v| v * s).collect())
    }

    /// Element-wise `self op rhs` with scalar broadcasting.
    pub fn elementwise<'a>(&self, rhs: impl Into<Operand<'a>>, op: ElemOp) -> Result<Matrix> {
        ew_binary(self, rhs.into(), op)
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        ew_binary(self, Operand::Matrix(rhs), ElemOp::Add)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        ew_binary(self, Operand::Matrix(rhs), ElemOp::Sub)
    }

    /// Rectangular sub-block `[r0, r0+rows) x [c0, c0+cols)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }
}

pub(crate) fn naive_product(a: &[f64], b: &[f64], n: usize, k: usize, m: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * m];
    for i in 0..n {
        let crow = &mut c[i * m..(i + 1) * m];
        for p in 0..k {
            let aip = a[i * k + p];
            if aip == 0.0 {
                continue;
            }
            let brow = &b[p * m..(p + 1) * m];
            for (cij, bpj) in crow.iter_mut().zip(brow) {
                *cij += aip * bpj;
            }
        }
    }
    c
}

/// Element-wise binary operation. A scalar right-hand side is broadcast; a
/// matrix right-hand side must have the same shape. Division by a zero entry
/// is an error rather than producing infinities.
pub fn ew_binary(a: &Matrix, b: Operand<'_>, op: ElemOp) -> Result<Matrix> {
    let apply = |x: f64, y: f64| -> Result<f64> {
        let v = match op {
            ElemOp::Add => x + y,
            ElemOp::Sub => x - y,
            ElemOp::Mul => x * y,
            ElemOp::Div => {
                if y == 0.0 {
                    return Err(NumError::DivisionByZero);
                }
                x / y
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(NumError::NonFinite)
        }
    };
    let data = match b {
        Operand::Scalar(s) => {
            if !s.is_finite() {
                return Err(NumError::NonFinite);
            }
            a.data.iter().map(|&x| apply(x, s)).collect::<Result<Vec<_>>>()?
        }
        Operand::Matrix(m) => {
            if m.shape() != a.shape() {
                return Err(NumError::shape(format!("{}x{} vs {}x{}", a.rows, a.cols, m.rows, m.cols)));
            }
            a.data.iter().zip(&m.data).map(|(&x, &y)| apply(x, y)).collect::<Result<Vec<_>>>()?
        }
    };
    Ok(Matrix::from_raw(a.rows, a.cols, data))
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}
