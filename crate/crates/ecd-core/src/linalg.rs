//! Small dense matrices over exact scalars, plus Gaussian elimination.
//!
//! Everything here is sized for 4x4 representation matrices and the
//! moderate linear systems that pin down spinor metrics; no attempt is
//! made at sparse or large-scale work.

use crate::scalar::Coeff;
use std::fmt;
use std::ops::Div;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat<C: Coeff> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Coeff> Mat<C> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, C::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.at(i, j).clone() + o.at(i, j).clone())
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat::from_fn(self.rows, self.cols, |i, j| self.at(i, j).clone() - o.at(i, j).clone())
    }

    pub fn neg(&self) -> Self {
        Mat::from_fn(self.rows, self.cols, |i, j| -self.at(i, j).clone())
    }

    pub fn scale(&self, c: &C) -> Self {
        Mat::from_fn(self.rows, self.cols, |i, j| self.at(i, j).clone() * c.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        Mat::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = C::zero();
            for k in 0..self.cols {
                acc = acc + self.at(i, k).clone() * o.at(k, j).clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[C]) -> Vec<C> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = C::zero();
                for k in 0..self.cols {
                    acc = acc + self.at(i, k).clone() * v[k].clone();
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    /// conjugate transpose (reduces to transpose over the rationals)
    pub fn dagger(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).conj())
    }

    pub fn trace(&self) -> C {
        assert_eq!(self.rows, self.cols);
        let mut acc = C::zero();
        for i in 0..self.rows {
            acc = acc + self.at(i, i).clone();
        }
        acc
    }

    /// AB - BA
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// AB + BA
    pub fn anticommutator(&self, o: &Self) -> Self {
        self.mul(o).add(&o.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn map<D: Coeff>(&self, mut f: impl FnMut(&C) -> D) -> Mat<D> {
        let data = self.data.iter().map(|c| f(c)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }
}

impl<C: Coeff> fmt::Display for Mat<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// In-place reduced row echelon form; returns the pivot columns.
pub fn rref<C>(m: &mut Mat<C>) -> Vec<usize>
where
    C: Coeff + Div<Output = C>,
{
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m.at(i, c).is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                let a = m.at(r, j).clone();
                let b = m.at(pr, j).clone();
                m.set(r, j, b);
                m.set(pr, j, a);
            }
        }
        let inv = C::one() / m.at(r, c).clone();
        for j in 0..cols {
            let v = m.at(r, j).clone() * inv.clone();
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || m.at(i, c).is_zero() {
                continue;
            }
            let f = m.at(i, c).clone();
            for j in 0..cols {
                let v = m.at(i, j).clone() - f.clone() * m.at(r, j).clone();
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Determinant by fraction-exact Gaussian elimination with row swaps.
pub fn det<C>(m: &Mat<C>) -> C
where
    C: Coeff + Div<Output = C>,
{
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut w = m.clone();
    let mut acc = C::one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !w.at(i, c).is_zero()) else {
            return C::zero();
        };
        if pr != c {
            for j in 0..n {
                let a = w.at(c, j).clone();
                let b = w.at(pr, j).clone();
                w.set(c, j, b);
                w.set(pr, j, a);
            }
            acc = -acc;
        }
        let piv = w.at(c, c).clone();
        acc = acc * piv.clone();
        for i in c + 1..n {
            if w.at(i, c).is_zero() {
                continue;
            }
            let f = w.at(i, c).clone() / piv.clone();
            for j in c..n {
                let v = w.at(i, j).clone() - f.clone() * w.at(c, j).clone();
                w.set(i, j, v);
            }
        }
    }
    acc
}

/// Exact inverse via elimination on [M | I]; None for singular M.
pub fn inverse<C>(m: &Mat<C>) -> Option<Mat<C>>
where
    C: Coeff + Div<Output = C>,
{
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut aug = Mat::zero(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.at(i, j).clone());
        }
        aug.set(i, n + i, C::one());
    }
    let pivots = rref(&mut aug);
    if pivots != (0..n).collect::<Vec<_>>() {
        return None;
    }
    Some(Mat::from_fn(n, n, |i, j| aug.at(i, n + j).clone()))
}

/// Basis of the right nullspace { v : Mv = 0 }.
pub fn nullspace<C>(m: &Mat<C>) -> Vec<Vec<C>>
where
    C: Coeff + Div<Output = C>,
{
    let mut red = m.clone();
    let pivots = rref(&mut red);
    let free: Vec<usize> = (0..m.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![C::zero(); m.cols];
            v[fc] = C::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -red.at(row, fc).clone();
            }
            v
        })
        .collect()
}
