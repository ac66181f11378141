//! Dense matrices over arbitrary-precision integers, with exact
//! determinant (fraction-free elimination) and exact rank.

use crate::error::Error;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// All-ones matrix.
    pub fn ones(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::one(); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut m = IntMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, BigInt::from(f(i, j)));
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix, Error> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix, Error> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        let data = self.data.iter().map(|a| a * k).collect();
        IntMatrix { rows: self.rows, cols: self.cols, data }
    }

    /// Matrix product self * other.
    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, Error> {
        if self.cols != other.rows {
            return Err(Error::DimMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", other.rows, other.cols),
            });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn column_sum(&self, j: usize) -> BigInt {
        (0..self.rows).map(|i| self.get(i, j)).sum()
    }

    pub fn row_sum(&self, i: usize) -> BigInt {
        (0..self.cols).map(|j| self.get(i, j)).sum()
    }

    /// Apply to an integer vector: self * v.
    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>, Error> {
        if v.len() != self.cols {
            return Err(Error::DimMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("vector of {}", v.len()),
            });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect())
    }

    fn check_same_shape(&self, other: &IntMatrix) -> Result<(), Error> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimMismatch {
                left: format!("{}x{}", self.rows, self.cols),
                right: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    /// Exact determinant by single-step fraction-free (Bareiss) elimination
    /// with row pivoting. All intermediate divisions are exact.
    pub fn determinant(&self) -> Result<BigInt, Error> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.data.clone();
        let at = |m: &Vec<BigInt>, i: usize, j: usize| m[i * n + j].clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                match (k + 1..n).find(|&r| !m[r * n + k].is_zero()) {
                    Some(r) => {
                        for j in 0..n {
                            m.swap(k * n + j, r * n + j);
                        }
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            let pivot = at(&m, k, k);
            for i in k + 1..n {
                let mik = at(&m, i, k);
                for j in k + 1..n {
                    let v = (&pivot * &m[i * n + j] - &mik * &m[k * n + j]) / &prev;
                    m[i * n + j] = v;
                }
                m[i * n + k] = BigInt::zero();
            }
            prev = pivot;
        }
        let det = at(&m, n - 1, n - 1);
        Ok(if sign < 0 { -det } else { det })
    }

    /// Exact rank over the rationals, by integer row elimination
    /// (cross-multiplication, gcd-normalized rows; row scaling preserves rank).
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .filter(|r| r.iter().any(|v| !v.is_zero()))
            .collect();
        let mut rank = 0usize;
        for col in 0..self.cols {
            let Some(pos) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, pos);
            let pivot_row = rows[rank].clone();
            let pivot = pivot_row[col].clone();
            for row in rows.iter_mut().skip(rank + 1) {
                if row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                let mut g = BigInt::zero();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v = &*v * &pivot - pv * &f;
                    g = g.gcd(v);
                }
                if !g.is_zero() && !g.is_one() {
                    for v in row.iter_mut() {
                        *v = &*v / &g;
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    /// Factors |n| by trial division over primes up to `limit`, returning
    /// (prime, exponent) pairs and the remaining cofactor (1 when complete).
    pub fn factor_abs(n: &BigInt, limit: u64) -> (Vec<(u64, u32)>, BigInt) {
        let mut n = n.abs();
        let mut out = Vec::new();
        if n.is_zero() {
            return (out, n);
        }
        let mut d = 2u64;
        while d <= limit {
            let big_d = BigInt::from(d);
            let mut e = 0u32;
            while (&n % &big_d).is_zero() {
                n /= &big_d;
                e += 1;
            }
            if e > 0 {
                out.push((d, e));
            }
            d += if d == 2 { 1 } else { 2 };
        }
        (out, n)
    }
}
