//! Minimal dense linear algebra over `f64`.
//!
//! A single row-major matrix type plus the handful of kernels the MLP
//! forward/backward passes need. Everything is plain loops over contiguous
//! rows; no BLAS. Operations are deterministic: identical inputs produce
//! bit-identical outputs.

use serde::{Deserialize, Serialize};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    /// Builds a matrix from row-major data. Panics if the length is wrong.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data length mismatch");
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.data.iter()
    }

    /// `self * other^T`: `(r x k) * (c x k)^T -> (r x c)`.
    ///
    /// Both inner loops run over contiguous rows, which is the layout the
    /// MLP forward pass wants (`X * W^T` with `W` stored out-by-in).
    pub fn mul_bt(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "inner dimension mismatch");
        let (r, c, k) = (self.rows, other.rows, self.cols);
        let mut out = Mat::zeros(r, c);
        for i in 0..r {
            let a = self.row(i);
            let dst = out.row_mut(i);
            for (j, d) in dst.iter_mut().enumerate() {
                let b = other.row(j);
                let mut acc = 0.0;
                for t in 0..k {
                    acc += a[t] * b[t];
                }
                *d = acc;
            }
        }
        out
    }

    /// `self * other`: `(r x k) * (k x c) -> (r x c)`, accumulated row-wise.
    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let (r, c, k) = (self.rows, other.cols, self.cols);
        let mut out = Mat::zeros(r, c);
        for i in 0..r {
            let a = self.row(i);
            let dst = &mut out.data[i * c..(i + 1) * c];
            for t in 0..k {
                let av = a[t];
                if av == 0.0 {
                    continue;
                }
                let b = other.row(t);
                for j in 0..c {
                    dst[j] += av * b[j];
                }
            }
        }
        out
    }

    /// Accumulates `self^T * other` into `acc`: `(r x k)^T * (r x c) -> (k x c)`.
    pub fn t_mul_acc(&self, other: &Mat, acc: &mut Mat) {
        assert_eq!(self.rows, other.rows, "outer dimension mismatch");
        assert_eq!(acc.rows, self.cols);
        assert_eq!(acc.cols, other.cols);
        let (r, k, c) = (self.rows, self.cols, other.cols);
        for i in 0..r {
            let a = self.row(i);
            let b = other.row(i);
            for t in 0..k {
                let av = a[t];
                if av == 0.0 {
                    continue;
                }
                let dst = &mut acc.data[t * c..(t + 1) * c];
                for j in 0..c {
                    dst[j] += av * b[j];
                }
            }
        }
    }

    /// Adds `v` to every row.
    pub fn add_row_broadcast(&mut self, v: &[f64]) {
        assert_eq!(v.len(), self.cols);
        for i in 0..self.rows {
            for (d, s) in self.data[i * self.cols..(i + 1) * self.cols].iter_mut().zip(v) {
                *d += s;
            }
        }
    }

    /// Column sums accumulated in ascending row order.
    pub fn col_sums(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (d, s) in out.iter_mut().zip(self.row(i)) {
                *d += s;
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            let dst = out.row_mut(i);
            dst[..self.cols].copy_from_slice(self.row(i));
            dst[self.cols..].copy_from_slice(other.row(i));
        }
        out
    }

    /// Splits columns at `at` into two matrices.
    pub fn hsplit(&self, at: usize) -> (Mat, Mat) {
        assert!(at <= self.cols);
        let mut left = Mat::zeros(self.rows, at);
        let mut right = Mat::zeros(self.rows, self.cols - at);
        for i in 0..self.rows {
            let src = self.row(i);
            left.row_mut(i).copy_from_slice(&src[..at]);
            right.row_mut(i).copy_from_slice(&src[at..]);
        }
        (left, right)
    }

    pub fn add_assign(&mut self, other: &Mat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (d, s) in self.data.iter_mut().zip(&other.data) {
            *d += s;
        }
    }

    pub fn scale(&mut self, s: f64) {
        for d in &mut self.data {
            *d *= s;
        }
    }
}

/// `x += y` elementwise.
pub fn vec_add_assign(x: &mut [f64], y: &[f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (d, s) in x.iter_mut().zip(y) {
        *d += s;
    }
}

pub fn vec_scale(x: &mut [f64], s: f64) {
    for d in x.iter_mut() {
        *d *= s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_bt_matches_naive() {
        let a = Mat::from_vec(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let b = Mat::from_vec(2, 3, vec![1.0, 0.0, -1.0, 0.5, 0.5, 0.5]);
        let c = a.mul_bt(&b);
        // c[i][j] = sum_t a[i][t] * b[j][t]
        assert_eq!(c.row(0), &[-2.0, 3.0]);
        assert_eq!(c.row(1), &[-2.0, 7.5]);
    }

    #[test]
    fn mul_and_t_mul_are_consistent_with_mul_bt() {
        // A * B == A * (B^T)^T, checked by materializing the transpose.
        let a = Mat::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]);
        let b = Mat::from_vec(2, 3, vec![5.0, 6.0, 7.0, 8.0, 9.0, 10.0]);
        let bt = Mat::from_vec(3, 2, vec![5.0, 8.0, 6.0, 9.0, 7.0, 10.0]);
        assert_eq!(a.mul(&b), a.mul_bt(&bt));

        let mut acc = Mat::zeros(2, 3);
        a.t_mul_acc(&b, &mut acc);
        // acc[t][j] = sum_i a[i][t] * b[i][j]
        let at = Mat::from_vec(2, 2, vec![1.0, 3.0, 2.0, 4.0]);
        assert_eq!(acc, at.mul(&b));
    }

    #[test]
    fn hcat_hsplit_roundtrip() {
        let a = Mat::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]);
        let b = Mat::from_vec(2, 1, vec![9.0, 8.0]);
        let c = a.hcat(&b);
        let (l, r) = c.hsplit(2);
        assert_eq!(l, a);
        assert_eq!(r, b);
    }

    #[test]
    fn col_sums_ascending_order() {
        let m = Mat::from_vec(3, 2, vec![1.0, 10.0, 2.0, 20.0, 3.0, 30.0]);
        assert_eq!(m.col_sums(), vec![6.0, 60.0]);
    }
}
