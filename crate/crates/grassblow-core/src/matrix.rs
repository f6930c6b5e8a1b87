use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{q, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Param("ragged matrix rows".into()));
        }
        Ok(ExactMatrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Zero-based access.
    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Q) {
        self.data[r * self.cols + c] += v;
    }

    /// One-based access, matching the column labels 1..n used everywhere else.
    pub fn at(&self, r: usize, c: usize) -> &Q {
        self.get(r - 1, c - 1)
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Submatrix with the given zero-based columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> ExactMatrix {
        let mut out = ExactMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                out.set(r, k, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn vstack(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.cols {
            return Err(Error::Param("column count mismatch in vstack".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(ExactMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn determinant(&self) -> Result<Q> {
        if self.rows != self.cols {
            return Err(Error::Param(format!(
                "determinant of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Q::one());
        }
        // clear denominators row by row, then fraction-free (Bareiss) elimination
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for r in 0..n {
            let row = self.row(r);
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            a.push(row.iter().map(|v| v.numer() * (&l / v.denom())).collect());
            scale *= l;
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Ok(Q::zero());
            };
            if piv != c {
                a.swap(piv, c);
                sign = -sign;
            }
            for r in c + 1..n {
                for k in c + 1..n {
                    let v = (&a[c][c] * &a[r][k] - &a[r][c] * &a[c][k]) / &prev;
                    a[r][k] = v;
                }
                a[r][c] = BigInt::zero();
            }
            prev = a[c][c].clone();
        }
        Ok(Q::new(sign * &a[n - 1][n - 1], scale))
    }

    pub fn rank(&self) -> usize {
        let mut a = self.to_rows();
        let (nr, nc) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..nc {
            if rank == nr {
                break;
            }
            let Some(piv) = (rank..nr).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(piv, rank);
            for r in rank + 1..nr {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &a[rank][c];
                for k in c..nc {
                    let delta = &f * &a[rank][k];
                    a[r][k] -= delta;
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
