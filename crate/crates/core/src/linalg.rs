//! Exact linear algebra: fraction-free (Bareiss) elimination over the
//! integers with rational back-substitution.

use std::ops::{Div, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// A dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone + Zero> ExactMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let n_rows = rows.len();
        Ok(ExactMatrix { rows: n_rows, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_columns(columns: &[Vec<T>], rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::Shape(format!("column {j} has length {}, expected {rows}", col.len())));
            }
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn to_nested(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl ExactMatrix<Rational> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect())
                .collect(),
        )
    }

    pub fn mul_matrix(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vector(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn rank(&self) -> usize {
        echelon(self).pivots.len()
    }

    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let (mut ints, scales) = integer_rows(self);
        let (pivots, swaps) = bareiss_in_place(&mut ints);
        if pivots.len() < self.rows {
            return Ok(Rational::zero());
        }
        let last = if self.rows == 0 { BigInt::one() } else { ints[self.rows - 1][self.cols - 1].clone() };
        let denom = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
        let det = Rational::new(last, denom);
        Ok(if swaps % 2 == 1 { -det } else { det })
    }

    /// Basis of `{v : M v = 0}`, one primitive integral vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let e = echelon(self);
        let mut is_pivot = vec![false; self.cols];
        for &p in &e.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (t, &pc) in e.pivots.iter().enumerate().rev() {
                let row = &e.rows[t];
                let mut acc = Rational::zero();
                for j in pc + 1..self.cols {
                    if !row[j].is_zero() && !v[j].is_zero() {
                        acc += Rational::from_integer(row[j].clone()) * &v[j];
                    }
                }
                v[pc] = -acc / Rational::from_integer(row[pc].clone());
            }
            basis.push(primitive(v));
        }
        basis
    }

    /// Some solution of `M v = b`, if one exists.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        if b.len() != self.rows {
            return None;
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for (i, bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, bi.clone());
        }
        let e = echelon(&aug);
        if e.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut v = vec![Rational::zero(); self.cols + 1];
        v[self.cols] = -Rational::one();
        for (t, &pc) in e.pivots.iter().enumerate().rev() {
            let row = &e.rows[t];
            let mut acc = Rational::zero();
            for j in pc + 1..=self.cols {
                if !row[j].is_zero() && !v[j].is_zero() {
                    acc += Rational::from_integer(row[j].clone()) * &v[j];
                }
            }
            v[pc] = -acc / Rational::from_integer(row[pc].clone());
        }
        v.truncate(self.cols);
        Some(v)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![Rational::zero(); n];
            e[j] = Rational::one();
            cols.push(self.solve(&e).ok_or(Error::SingularMatrix)?);
        }
        if self.rank() < n {
            return Err(Error::SingularMatrix);
        }
        Self::from_columns(&cols, n)
    }
}

/// Fraction-free row echelon form of an integral matrix.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

/// Clears denominators row by row. Returns the integral rows and the factor each row was scaled by.
fn integer_rows(m: &ExactMatrix<Rational>) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut rows = Vec::with_capacity(m.rows());
    let mut scales = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let row = m.row(i);
        let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        rows.push(row.iter().map(|v| v.numer() * (&l / v.denom())).collect());
        scales.push(l);
    }
    (rows, scales)
}

pub fn echelon(m: &ExactMatrix<Rational>) -> Echelon {
    let (mut rows, _) = integer_rows(m);
    // Rows that are entirely zero never contribute a pivot.
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    let (pivots, _) = bareiss_in_place(&mut rows);
    rows.truncate(pivots.len());
    Echelon { rows, pivots }
}

/// Bareiss elimination generic over an integral domain with exact division.
///
/// Leaves `rows` in fraction-free echelon form and returns the pivot
/// columns together with the number of row swaps.
pub fn bareiss_in_place<T>(rows: &mut [Vec<T>]) -> (Vec<usize>, usize)
where
    T: Clone + Zero + One + PartialEq,
    for<'a> &'a T: Mul<&'a T, Output = T> + Sub<&'a T, Output = T> + Div<&'a T, Output = T>,
{
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut prev = T::one();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..n_cols {
        if r == n_rows {
            break;
        }
        let Some(p) = (r..n_rows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            rows.swap(p, r);
            swaps += 1;
        }
        let (upper, lower) = rows.split_at_mut(r + 1);
        let pivot_row = &upper[r];
        let pivot = &pivot_row[c];
        for row in lower.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..n_cols {
                let a = &row[j];
                let b = &pivot_row[j];
                if a.is_zero() && (factor.is_zero() || b.is_zero()) {
                    continue;
                }
                let num = &(pivot * a) - &(&factor * b);
                row[j] = &num / &prev;
            }
            row[c] = T::zero();
        }
        prev = pivot.clone();
        pivots.push(c);
        r += 1;
    }
    (pivots, swaps)
}

/// Scales a rational vector to a primitive integral one whose first nonzero entry is positive.
pub fn primitive(v: Vec<Rational>) -> Vec<Rational> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        g = -g;
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

/// Expresses vectors in the span of a fixed linearly independent family.
#[derive(Debug, Clone)]
pub struct SpanSolver {
    basis: Vec<Vec<Rational>>,
    selected_rows: Vec<usize>,
    inverse: ExactMatrix<Rational>,
}

impl SpanSolver {
    pub fn new(basis: Vec<Vec<Rational>>, dim: usize) -> Result<Self> {
        let m = basis.len();
        if basis.iter().any(|b| b.len() != dim) {
            return Err(Error::Shape("basis vector of wrong length".into()));
        }
        if m == 0 {
            return Ok(SpanSolver { basis, selected_rows: Vec::new(), inverse: ExactMatrix::zeros(0, 0) });
        }
        let as_rows = ExactMatrix::from_rows(basis.clone())?;
        let e = echelon(&as_rows);
        if e.pivots.len() < m {
            return Err(Error::Shape("basis is linearly dependent".into()));
        }
        let selected_rows = e.pivots;
        let mut square = ExactMatrix::zeros(m, m);
        for (a, &r) in selected_rows.iter().enumerate() {
            for (b, vec) in basis.iter().enumerate() {
                square.set(a, b, vec[r].clone());
            }
        }
        let inverse = square.inverse()?;
        Ok(SpanSolver { basis, selected_rows, inverse })
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coefficients `c` with `Σ c_i basis_i = v`, or `None` if `v` leaves the span.
    pub fn express(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let restricted: Vec<Rational> = self.selected_rows.iter().map(|&r| v[r].clone()).collect();
        let coeffs = self.inverse.mul_vector(&restricted);
        let mut check = vec![Rational::zero(); v.len()];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (slot, x) in check.iter_mut().zip(b) {
                if !x.is_zero() {
                    *slot += c * x;
                }
            }
        }
        (check.as_slice() == v).then_some(coeffs)
    }
}

impl<T: Clone + Zero> From<ExactMatrix<T>> for Vec<Vec<T>> {
    fn from(m: ExactMatrix<T>) -> Self {
        m.to_nested()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn q(p: i64) -> Rational {
        Rational::from_i64(p)
    }

    /// Kernel by brute force over small integer vectors, for comparison.
    fn kernel_contains(m: &ExactMatrix<Rational>, v: &[Rational]) -> bool {
        m.mul_vector(v).iter().all(Zero::is_zero)
    }

    #[test]
    fn rank_and_nullspace() {
        let m = ExactMatrix::from_integers(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]).unwrap();
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert_eq!(ns[0], vec![q(1), q(1), q(-1)]);
        assert!(kernel_contains(&m, &ns[0]));
    }

    #[test]
    fn determinant_with_fractions() {
        let m = ExactMatrix::from_rows(vec![
            vec![Rational::from_ratio(1, 2), q(1)],
            vec![q(3), q(4)],
        ])
        .unwrap();
        assert_eq!(m.determinant().unwrap(), q(-1));
        let swap = ExactMatrix::from_integers(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(swap.determinant().unwrap(), q(-1));
        let sing = ExactMatrix::from_integers(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(sing.determinant().unwrap(), q(0));
    }

    #[test]
    fn cofactor_determinant_agrees() {
        fn cofactor(m: &[Vec<i64>]) -> i64 {
            if m.len() == 1 {
                return m[0][0];
            }
            (0..m.len())
                .map(|j| {
                    let minor: Vec<Vec<i64>> =
                        m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect()).collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * m[0][j] * cofactor(&minor)
                })
                .sum()
        }
        let rows = vec![vec![2, -1, 0, 3], vec![1, 1, 4, 0], vec![0, 5, -2, 1], vec![3, 0, 1, 1]];
        let m = ExactMatrix::from_integers(&rows).unwrap();
        assert_eq!(m.determinant().unwrap(), q(cofactor(&rows)));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = ExactMatrix::from_integers(&[vec![2, 1], vec![7, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul_matrix(&inv).unwrap(), ExactMatrix::identity(2));
        let sing = ExactMatrix::from_integers(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(sing.inverse(), Err(Error::SingularMatrix));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = ExactMatrix::from_integers(&[vec![1, 1], vec![1, -1], vec![2, 0]]).unwrap();
        let x = m.solve(&[q(3), q(1), q(4)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        assert!(m.solve(&[q(3), q(1), q(5)]).is_none());
    }

    #[test]
    fn bareiss_over_machine_integers() {
        let mut rows = vec![vec![2i64, 4, 6], vec![1, 3, 5], vec![3, 5, 8]];
        let (pivots, _) = bareiss_in_place(&mut rows);
        assert_eq!(pivots, vec![0, 1, 2]);
        // last pivot of a full-rank square Bareiss run is the determinant
        assert_eq!(rows[2][2], 2 * (3 * 8 - 5 * 5) - 4 * (8 - 15) + 6 * (5 - 9));
    }

    #[test]
    fn span_solver() {
        let basis = vec![vec![q(1), q(0), q(1)], vec![q(0), q(1), q(1)]];
        let s = SpanSolver::new(basis, 3).unwrap();
        assert_eq!(s.express(&[q(2), q(3), q(5)]).unwrap(), vec![q(2), q(3)]);
        assert!(s.express(&[q(1), q(1), q(1)]).is_none());
        let dependent = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(SpanSolver::new(dependent, 2).is_err());
    }
}
