use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::vector::LatticeVector;

/// Dense integer matrix, row major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<LatticeVector>", from = "Vec<LatticeVector>")]
pub struct IntMatrix {
    rows: Vec<LatticeVector>,
    ncols: usize,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<LatticeVector>) -> Self {
        let ncols = rows.first().map_or(0, LatticeVector::rank);
        assert!(rows.iter().all(|r| r.rank() == ncols), "ragged matrix");
        Self { rows, ncols }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| LatticeVector::from_i64s(r)).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[LatticeVector]) -> Self {
        let n = cols.first().map_or(0, LatticeVector::rank);
        let rows = (0..n)
            .map(|i| LatticeVector::new(cols.iter().map(|c| c.coords()[i].clone()).collect()))
            .collect();
        Self { rows, ncols: cols.len() }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_rows((0..n).map(|i| LatticeVector::unit(n, i)).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[LatticeVector] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i].coords()[j]
    }

    pub fn column(&self, j: usize) -> LatticeVector {
        LatticeVector::new(self.rows.iter().map(|r| r.coords()[j].clone()).collect())
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.ncols).map(|j| self.column(j)).collect();
        Self { rows, ncols: self.nrows() }
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.ncols, rhs.nrows());
        let cols: Vec<LatticeVector> = (0..rhs.ncols).map(|j| rhs.column(j)).collect();
        let rows = self
            .rows
            .iter()
            .map(|r| LatticeVector::new(cols.iter().map(|c| r.dot(c)).collect()))
            .collect();
        IntMatrix { rows, ncols: rhs.ncols }
    }

    pub fn mul_vec(&self, v: &LatticeVector) -> LatticeVector {
        LatticeVector::new(self.rows.iter().map(|r| r.dot(v)).collect())
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { rows: self.rows.iter().map(|r| -r).collect(), ncols: self.ncols }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(LatticeVector::is_zero)
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.nrows(), self.ncols, "determinant of a non-square matrix");
        let n = self.ncols;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.rows.iter().map(|r| r.coords().to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.nrows() == self.ncols && self.det().abs().is_one()
    }

    pub fn to_rational(&self) -> Vec<Vec<BigRational>> {
        self.rows.iter().map(LatticeVector::to_rational).collect()
    }

    /// Inverse over the rationals.
    pub fn inverse_rational(&self) -> Option<Vec<Vec<BigRational>>> {
        invert(&self.to_rational())
    }

    /// Inverse over the integers; `None` unless the matrix is unimodular.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        if !self.is_unimodular() {
            return None;
        }
        let inv = self.inverse_rational()?;
        let rows = inv
            .into_iter()
            .map(|r| LatticeVector::new(r.into_iter().map(|q| q.to_integer()).collect()))
            .collect();
        Some(IntMatrix { rows, ncols: self.ncols })
    }
}

impl From<IntMatrix> for Vec<LatticeVector> {
    fn from(m: IntMatrix) -> Self {
        m.rows
    }
}

impl From<Vec<LatticeVector>> for IntMatrix {
    fn from(rows: Vec<LatticeVector>) -> Self {
        IntMatrix::from_rows(rows)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter()).finish()
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(a: &mut [Vec<BigRational>]) -> Vec<usize> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x = &*x - &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_rational(a: &[Vec<BigRational>]) -> usize {
    let mut m = a.to_vec();
    rref(&mut m).len()
}

/// Solves `A x = b`; `None` when inconsistent. Free variables are set to zero.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<BigRational>> =
        a.iter().zip(b).map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect()).collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][ncols].clone();
    }
    Some(x)
}

pub fn invert(a: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return None;
    }
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(a: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).fold(BigRational::zero(), |s, t| s + t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_small() {
        assert_eq!(IntMatrix::from_i64_rows(&[vec![0, 1], vec![-1, 1]]).det(), BigInt::from(1));
        assert_eq!(IntMatrix::from_i64_rows(&[vec![1, 1], vec![0, 2]]).det(), BigInt::from(2));
        let m = IntMatrix::from_i64_rows(&[vec![0, 2, 1], vec![1, 0, 0], vec![3, 1, 1]]);
        assert_eq!(m.det(), BigInt::from(-1));
    }

    #[test]
    fn unimodular_inverse() {
        let m = IntMatrix::from_i64_rows(&[vec![2, 1], vec![1, 1]]);
        let inv = m.inverse_unimodular().unwrap();
        assert_eq!(m.mul(&inv), IntMatrix::identity(2));
        assert!(IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 1]]).inverse_unimodular().is_none());
    }

    #[test]
    fn solve_inconsistent() {
        let q = |x: i64| BigRational::from_integer(x.into());
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(solve(&a, &[q(1), q(3)]).is_none());
        assert_eq!(solve(&a, &[q(1), q(2)]).unwrap(), vec![q(1), q(0)]);
    }
}
