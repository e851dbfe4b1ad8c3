//! Dense matrices over a [`BaseField`].
//!
//! Entries are scalar blocks of width `n` stored row-major in one flat
//! buffer. Multiplication is classical with a Strassen split above a
//! configurable threshold; inversion, solving and rank use Gaussian
//! elimination.

use crate::error::{Error, Result};
use crate::field::BaseField;

/// Dimension above which multiplication switches to Strassen recursion.
pub const STRASSEN_THRESHOLD: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    width: usize,
    data: Vec<u64>,
}

impl Mat {
    pub fn zero(fq: &BaseField, rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, width: fq.n(), data: vec![0; rows * cols * fq.n()] }
    }

    pub fn identity(fq: &BaseField, dim: usize) -> Mat {
        let mut m = Mat::zero(fq, dim, dim);
        let one = fq.one();
        for i in 0..dim {
            m.set(i, i, &one);
        }
        m
    }

    pub fn from_fn(fq: &BaseField, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Vec<u64>) -> Mat {
        let mut m = Mat::zero(fq, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                m.set(i, j, &v);
            }
        }
        m
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &[u64] {
        let w = self.width;
        &self.data[(i * self.cols + j) * w..(i * self.cols + j + 1) * w]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: &[u64]) {
        let w = self.width;
        self.data[(i * self.cols + j) * w..(i * self.cols + j + 1) * w].copy_from_slice(v);
    }

    pub fn is_identity(&self, fq: &BaseField) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.at(i, j);
                if i == j {
                    if !fq.is_one(e) {
                        return false;
                    }
                } else if !fq.is_zero(e) {
                    return false;
                }
            }
        }
        true
    }

    pub fn add(&self, fq: &BaseField, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        fq.add_assign(&mut out.data, &other.data);
        out
    }

    pub fn sub(&self, fq: &BaseField, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        fq.sub_assign(&mut out.data, &other.data);
        out
    }

    /// Matrix product; classical below [`STRASSEN_THRESHOLD`], Strassen above.
    pub fn mul(&self, fq: &BaseField, other: &Mat) -> Mat {
        self.mul_with_threshold(fq, other, STRASSEN_THRESHOLD)
    }

    pub fn mul_with_threshold(&self, fq: &BaseField, other: &Mat, threshold: usize) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        assert_eq!(self.width, other.width);
        if self.rows.max(self.cols).max(other.cols) >= threshold.max(2)
            && self.rows > 1
            && self.cols > 1
            && other.cols > 1
        {
            return self.mul_strassen(fq, other, threshold);
        }
        self.mul_classical(fq, other)
    }

    fn mul_classical(&self, fq: &BaseField, other: &Mat) -> Mat {
        let w = self.width;
        let mut out = Mat::zero_w(self.rows, other.cols, w);
        let mut acc = vec![0u128; 2 * w - 1];
        let mut entry = vec![0u64; w];
        for i in 0..self.rows {
            for j in 0..other.cols {
                for v in acc.iter_mut() {
                    *v = 0;
                }
                for k in 0..self.cols {
                    fq.mul_acc(&mut acc, self.at(i, k), other.at(k, j));
                }
                fq.finish_acc(&mut acc, &mut entry);
                out.set(i, j, &entry);
            }
        }
        out
    }

    fn zero_w(rows: usize, cols: usize, width: usize) -> Mat {
        Mat { rows, cols, width, data: vec![0; rows * cols * width] }
    }

    fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut out = Mat::zero_w(rows, cols, self.width);
        for i in 0..rows.min(self.rows.saturating_sub(r0)) {
            for j in 0..cols.min(self.cols.saturating_sub(c0)) {
                out.set(i, j, self.at(r0 + i, c0 + j));
            }
        }
        out
    }

    fn paste(&mut self, r0: usize, c0: usize, src: &Mat) {
        for i in 0..src.rows {
            if r0 + i >= self.rows {
                break;
            }
            for j in 0..src.cols {
                if c0 + j >= self.cols {
                    break;
                }
                self.set(r0 + i, c0 + j, src.at(i, j));
            }
        }
    }

    fn mul_strassen(&self, fq: &BaseField, other: &Mat, threshold: usize) -> Mat {
        let m = self.rows.max(self.cols).max(other.cols).div_ceil(2);
        let a11 = self.block(0, 0, m, m);
        let a12 = self.block(0, m, m, m);
        let a21 = self.block(m, 0, m, m);
        let a22 = self.block(m, m, m, m);
        let b11 = other.block(0, 0, m, m);
        let b12 = other.block(0, m, m, m);
        let b21 = other.block(m, 0, m, m);
        let b22 = other.block(m, m, m, m);
        let p1 = a11.add(fq, &a22).mul_with_threshold(fq, &b11.add(fq, &b22), threshold);
        let p2 = a21.add(fq, &a22).mul_with_threshold(fq, &b11, threshold);
        let p3 = a11.mul_with_threshold(fq, &b12.sub(fq, &b22), threshold);
        let p4 = a22.mul_with_threshold(fq, &b21.sub(fq, &b11), threshold);
        let p5 = a11.add(fq, &a12).mul_with_threshold(fq, &b22, threshold);
        let p6 = a21.sub(fq, &a11).mul_with_threshold(fq, &b11.add(fq, &b12), threshold);
        let p7 = a12.sub(fq, &a22).mul_with_threshold(fq, &b21.add(fq, &b22), threshold);
        let c11 = p1.add(fq, &p4).sub(fq, &p5).add(fq, &p7);
        let c12 = p3.add(fq, &p5);
        let c21 = p2.add(fq, &p4);
        let c22 = p1.sub(fq, &p2).add(fq, &p3).add(fq, &p6);
        let mut out = Mat::zero_w(self.rows, other.cols, self.width);
        out.paste(0, 0, &c11);
        out.paste(0, m, &c12);
        out.paste(m, 0, &c21);
        out.paste(m, m, &c22);
        out
    }

    /// Applies the matrix to a flat vector of `cols` scalars.
    pub fn apply(&self, fq: &BaseField, v: &[u64]) -> Vec<u64> {
        let w = self.width;
        assert_eq!(v.len(), self.cols * w);
        let mut out = vec![0u64; self.rows * w];
        let mut acc = vec![0u128; 2 * w - 1];
        for i in 0..self.rows {
            for a in acc.iter_mut() {
                *a = 0;
            }
            for k in 0..self.cols {
                fq.mul_acc(&mut acc, self.at(i, k), &v[k * w..(k + 1) * w]);
            }
            fq.finish_acc(&mut acc, &mut out[i * w..(i + 1) * w]);
        }
        out
    }

    /// Gauss-Jordan inverse. `Err(SingularMatrix)` when not invertible.
    pub fn inv(&self, fq: &BaseField) -> Result<Mat> {
        assert_eq!(self.rows, self.cols);
        let dim = self.rows;
        let mut a = self.clone();
        let mut b = Mat::identity(fq, dim);
        for col in 0..dim {
            let pivot = (col..dim).find(|&i| !fq.is_zero(a.at(i, col)));
            let pivot = pivot.ok_or(Error::SingularMatrix)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                b.swap_rows(pivot, col);
            }
            let inv = fq.inv(a.at(col, col))?;
            a.scale_row(fq, col, &inv);
            b.scale_row(fq, col, &inv);
            for i in 0..dim {
                if i != col && !fq.is_zero(a.at(i, col)) {
                    let factor = a.at(i, col).to_vec();
                    a.sub_scaled_row(fq, i, col, &factor);
                    b.sub_scaled_row(fq, i, col, &factor);
                }
            }
        }
        Ok(b)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        let w = self.cols * self.width;
        for k in 0..w {
            self.data.swap(i * w + k, j * w + k);
        }
    }

    fn scale_row(&mut self, fq: &BaseField, i: usize, c: &[u64]) {
        let w = self.width;
        for j in 0..self.cols {
            let v = fq.mul(self.at(i, j), c);
            self.set(i, j, &v);
        }
        let _ = w;
    }

    /// row_i -= c * row_j
    fn sub_scaled_row(&mut self, fq: &BaseField, i: usize, j: usize, c: &[u64]) {
        for k in 0..self.cols {
            let t = fq.mul(self.at(j, k), c);
            let v = fq.sub(self.at(i, k), &t);
            self.set(i, k, &v);
        }
    }

    /// Row echelon rank.
    pub fn rank(&self, fq: &BaseField) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let pivot = (rank..a.rows).find(|&i| !fq.is_zero(a.at(i, col)));
            let Some(pivot) = pivot else { continue };
            a.swap_rows(pivot, rank);
            let inv = fq.inv(a.at(rank, col)).unwrap();
            a.scale_row(fq, rank, &inv);
            for i in rank + 1..a.rows {
                if !fq.is_zero(a.at(i, col)) {
                    let factor = a.at(i, col).to_vec();
                    a.sub_scaled_row(fq, i, rank, &factor);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Solves `self * x = rhs` for one flat right-hand side of `rows`
    /// scalars. Returns the particular solution with free variables set to
    /// zero; `Err(InconsistentSystem)` when no solution exists.
    pub fn solve(&self, fq: &BaseField, rhs: &[u64]) -> Result<Vec<u64>> {
        let w = self.width;
        assert_eq!(rhs.len(), self.rows * w);
        let mut a = self.clone();
        let mut b = rhs.to_vec();
        let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
        let mut row = 0;
        for col in 0..a.cols {
            if row == a.rows {
                break;
            }
            let pivot = (row..a.rows).find(|&i| !fq.is_zero(a.at(i, col)));
            let Some(p) = pivot else { continue };
            a.swap_rows(p, row);
            b_swap(&mut b, w, p, row);
            let inv = fq.inv(a.at(row, col))?;
            a.scale_row(fq, row, &inv);
            let scaled = fq.mul(&b[row * w..(row + 1) * w], &inv);
            b[row * w..(row + 1) * w].copy_from_slice(&scaled);
            for i in 0..a.rows {
                if i != row && !fq.is_zero(a.at(i, col)) {
                    let factor = a.at(i, col).to_vec();
                    a.sub_scaled_row(fq, i, row, &factor);
                    let t = fq.mul(&b[row * w..(row + 1) * w], &factor);
                    let cur = fq.sub(&b[i * w..(i + 1) * w], &t);
                    b[i * w..(i + 1) * w].copy_from_slice(&cur);
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        // rows below the pivot rows must have zero rhs
        for i in row..a.rows {
            if !fq.is_zero(&b[i * w..(i + 1) * w]) {
                return Err(Error::InconsistentSystem);
            }
        }
        let mut x = vec![0u64; a.cols * w];
        for &(r, c) in &pivots {
            x[c * w..(c + 1) * w].copy_from_slice(&b[r * w..(r + 1) * w]);
        }
        Ok(x)
    }
}

fn b_swap(b: &mut [u64], w: usize, i: usize, j: usize) {
    if i == j {
        return;
    }
    for k in 0..w {
        b.swap(i * w + k, j * w + k);
    }
}
