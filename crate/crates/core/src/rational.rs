//! Exact rational matrices.
//!
//! Used for ambient root-system coordinates (half-integers occur in the
//! B/D/E/F weight data) and for the PGL2 section check. Lattice and
//! cohomology computations downstream stay purely integral.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::matrix::IntMatrix;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rint(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        RatMatrix { rows, cols, data }
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i, j| {
            BigRational::from_integer(m.at(i, j).clone())
        })
    }

    pub fn from_columns(dim: usize, cols: &[Vec<Rat>]) -> Self {
        for c in cols {
            assert_eq!(c.len(), dim);
        }
        Self::from_fn(dim, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> RatMatrix {
        Self::from_fn(self.rows, idx.len(), |i, j| self.at(i, idx[j]).clone())
    }

    pub fn transpose(&self) -> RatMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(i, j) + a * b;
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Rat::zero();
                for k in 0..self.cols {
                    if !self.at(i, k).is_zero() && !v[k].is_zero() {
                        s += self.at(i, k) * &v[k];
                    }
                }
                s
            })
            .collect()
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn to_int_matrix(&self) -> Result<IntMatrix, Error> {
        if !self.is_integral() {
            return Err(Error::NotIntegral);
        }
        Ok(IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.at(i, j).to_integer()
        }))
    }

    /// Solve `self * X = B` exactly; the system must be consistent and
    /// determined on the column span (columns of self need not be square,
    /// but must be linearly independent for a unique solution).
    pub fn solve(&self, b: &RatMatrix) -> Result<RatMatrix, Error> {
        assert_eq!(self.rows, b.rows);
        // Gaussian elimination on the augmented matrix.
        let mut a = self.clone();
        let mut rhs = b.clone();
        let mut pivot_col_of_row: Vec<usize> = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            // find pivot
            let mut p = None;
            for i in r..a.rows {
                if !a.at(i, c).is_zero() {
                    p = Some(i);
                    break;
                }
            }
            let Some(p) = p else { continue };
            // swap rows r, p
            if p != r {
                for j in 0..a.cols {
                    let (x, y) = (a.at(r, j).clone(), a.at(p, j).clone());
                    a.set(r, j, y);
                    a.set(p, j, x);
                }
                for j in 0..rhs.cols {
                    let (x, y) = (rhs.at(r, j).clone(), rhs.at(p, j).clone());
                    rhs.set(r, j, y);
                    rhs.set(p, j, x);
                }
            }
            let piv = a.at(r, c).clone();
            for i in 0..a.rows {
                if i == r || a.at(i, c).is_zero() {
                    continue;
                }
                let f = a.at(i, c) / &piv;
                for j in 0..a.cols {
                    let v = a.at(i, j) - &f * a.at(r, j);
                    a.set(i, j, v);
                }
                for j in 0..rhs.cols {
                    let v = rhs.at(i, j) - &f * rhs.at(r, j);
                    rhs.set(i, j, v);
                }
            }
            pivot_col_of_row.push(c);
            r += 1;
            if r == a.rows {
                break;
            }
        }
        // Inconsistency: zero row of a with nonzero rhs.
        for i in r..a.rows {
            for j in 0..rhs.cols {
                if !rhs.at(i, j).is_zero() {
                    return Err(Error::RationalSolve);
                }
            }
        }
        if pivot_col_of_row.len() < self.cols {
            // Underdetermined; callers in this crate always pass bases.
            return Err(Error::RationalSolve);
        }
        let mut x = RatMatrix::zeros(self.cols, b.cols);
        for (row, &col) in pivot_col_of_row.iter().enumerate() {
            let piv = a.at(row, col).clone();
            for j in 0..b.cols {
                x.set(col, j, rhs.at(row, j) / &piv);
            }
        }
        Ok(x)
    }

    /// Inverse of a square invertible matrix.
    pub fn inverse(&self) -> Result<RatMatrix, Error> {
        assert_eq!(self.rows, self.cols);
        self.solve(&RatMatrix::identity(self.rows))
    }

    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for c in 0..a.cols {
            let mut p = None;
            for i in rank..a.rows {
                if !a.at(i, c).is_zero() {
                    p = Some(i);
                    break;
                }
            }
            let Some(p) = p else { continue };
            if p != rank {
                for j in 0..a.cols {
                    let (x, y) = (a.at(rank, j).clone(), a.at(p, j).clone());
                    a.set(rank, j, y);
                    a.set(p, j, x);
                }
            }
            let piv = a.at(rank, c).clone();
            for i in (rank + 1)..a.rows {
                if a.at(i, c).is_zero() {
                    continue;
                }
                let f = a.at(i, c) / &piv;
                for j in 0..a.cols {
                    let v = a.at(i, j) - &f * a.at(rank, j);
                    a.set(i, j, v);
                }
            }
            rank += 1;
            if rank == a.rows {
                break;
            }
        }
        rank
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    let mut s = Rat::zero();
    for i in 0..a.len() {
        if !a[i].is_zero() && !b[i].is_zero() {
            s += &a[i] * &b[i];
        }
    }
    s
}

pub fn scale(v: &[Rat], c: &Rat) -> Vec<Rat> {
    v.iter().map(|x| x * c).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_key(v: &[Rat]) -> String {
    v.iter()
        .map(|x| {
            if x.is_integer() {
                format!("{}", x.to_integer())
            } else {
                format!("{}/{}", x.numer(), x.denom())
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_square() {
        let a = RatMatrix::from_fn(2, 2, |i, j| rint([[1, 2], [3, 5]][i][j]));
        let b = RatMatrix::from_fn(2, 1, |i, _| rint([5, 12][i]));
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul(&x), b);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RatMatrix::identity(2));
    }

    #[test]
    fn solve_overdetermined_consistent() {
        // columns span a plane in Q^3
        let a = RatMatrix::from_fn(3, 2, |i, j| rint([[1, 0], [0, 1], [1, 1]][i][j]));
        let b = RatMatrix::from_fn(3, 1, |i, _| rint([2, 3, 5][i]));
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul(&x), b);
        let bad = RatMatrix::from_fn(3, 1, |i, _| rint([2, 3, 6][i]));
        assert!(a.solve(&bad).is_err());
    }

    #[test]
    fn integrality() {
        let a = RatMatrix::from_fn(1, 2, |_, j| rat(j as i64 + 1, 2));
        assert!(!a.is_integral());
        let b = RatMatrix::from_fn(1, 1, |_, _| rat(4, 2));
        assert!(b.is_integral());
        assert_eq!(b.to_int_matrix().unwrap().at(0, 0), &BigInt::from(2));
    }
}
