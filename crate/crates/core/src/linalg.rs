//! Dense matrices and Gaussian elimination over any [`Field`].

use std::ops::Index;

use crate::error::{Error, Result};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<C> {
    rows: usize,
    cols: usize,
    data: Vec<C>,
}

impl<C: Field> Matrix<C> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch { expected: cols, found: bad.len() });
        }
        let n = rows.len();
        Ok(Self { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C) -> Self {
        let data = (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).map(|(i, j)| f(i, j)).collect();
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &Matrix<C>) -> Result<Matrix<C>> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch { expected: self.cols, found: other.rows });
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(C::zero(), |acc, k| acc + self.get(i, k).clone() * other.get(k, j).clone())
        }))
    }

    /// Coordinates `(i, j)` breaking upper triangularity or a unit diagonal.
    pub fn unitriangular_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if (i > j && !v.is_zero()) || (i == j && !v.is_one()) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut basis = RowBasis::new(self.cols);
        (0..self.rows).filter(|&i| basis.insert(self.row(i).to_vec())).count()
    }

    pub fn is_nonsingular(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Solves `self · x = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &[C]) -> Option<Vec<C>> {
        let n = self.rows;
        if self.cols != n || rhs.len() != n {
            return None;
        }
        let mut aug: Vec<Vec<C>> =
            (0..n).map(|i| self.row(i).iter().cloned().chain(std::iter::once(rhs[i].clone())).collect()).collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(col, pivot);
            let p = aug[col][col].clone();
            for v in aug[col].iter_mut() {
                *v = v.clone() / p.clone();
            }
            for r in 0..n {
                if r != col && !aug[r][col].is_zero() {
                    let factor = aug[r][col].clone();
                    for k in col..=n {
                        let sub = factor.clone() * aug[col][k].clone();
                        aug[r][k] = aug[r][k].clone() - sub;
                    }
                }
            }
        }
        Some(aug.into_iter().map(|mut row| row.pop().unwrap()).collect())
    }
}

impl<C> Index<(usize, usize)> for Matrix<C> {
    type Output = C;

    fn index(&self, (i, j): (usize, usize)) -> &C {
        &self.data[i * self.cols + j]
    }
}

/// Incrementally maintained row-echelon basis.
#[derive(Clone, Debug)]
pub struct RowBasis<C> {
    width: usize,
    /// `(pivot column, row normalised to 1 at the pivot)`.
    rows: Vec<(usize, Vec<C>)>,
}

impl<C: Field> RowBasis<C> {
    pub fn new(width: usize) -> Self {
        Self { width, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Adds `row` if it is independent of the rows so far.
    pub fn insert(&mut self, mut row: Vec<C>) -> bool {
        assert_eq!(row.len(), self.width);
        for (pivot, basis_row) in &self.rows {
            if !row[*pivot].is_zero() {
                let factor = row[*pivot].clone();
                for (v, b) in row.iter_mut().zip(basis_row) {
                    *v = v.clone() - factor.clone() * b.clone();
                }
            }
        }
        let Some(pivot) = row.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        let p = row[pivot].clone();
        for v in row.iter_mut() {
            *v = v.clone() / p.clone();
        }
        self.rows.push((pivot, row));
        true
    }
}
