//! Dense matrices over `Q(v)`: just enough exact linear algebra for module
//! actions (multiply, invert, rank, determinant, characteristic polynomial).

use crate::field::RatFunc;
use num::BigRational;
use std::fmt;
use std::ops::{Index, IndexMut};

#[derive(Clone, PartialEq, Eq)]
pub struct KMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<RatFunc>,
}

impl KMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![RatFunc::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = RatFunc::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<RatFunc>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn row(&self, i: usize) -> &[RatFunc] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &KMat) -> KMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = KMat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let t = a * b;
                    out[(i, j)] += &t;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &KMat) -> KMat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, rhs: &KMat) -> KMat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, c: &RatFunc) -> KMat {
        let mut out = self.clone();
        for a in &mut out.data {
            *a = &*a * c;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Row-vector action: `v * M`.
    pub fn act_row(&self, v: &[RatFunc]) -> Vec<RatFunc> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![RatFunc::zero(); self.cols];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                let t = c * &self[(i, j)];
                out[j] += &t;
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> KMat {
        assert_eq!(self.rows, self.cols);
        let mut acc = KMat::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Gauss-Jordan inverse; `None` for singular matrices.
    pub fn inverse(&self) -> Option<KMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = KMat::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot * n + j);
                    inv.data.swap(col * n + j, pivot * n + j);
                }
            }
            let p = a[(col, col)].clone();
            let pinv = p.inv().unwrap();
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] * &pinv;
                inv[(col, j)] = &inv[(col, j)] * &pinv;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    let t1 = &f * &a[(col, j)];
                    a[(r, j)] -= &t1;
                    let t2 = &f * &inv[(col, j)];
                    inv[(r, j)] -= &t2;
                }
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> RatFunc {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = RatFunc::one();
        for col in 0..n {
            let pivot = match (col..n).find(|&r| !a[(r, col)].is_zero()) {
                Some(p) => p,
                None => return RatFunc::zero(),
            };
            if pivot != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[(col, col)].clone();
            det = &det * &p;
            let pinv = p.inv().unwrap();
            for r in col + 1..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = &a[(r, col)] * &pinv;
                for j in col..n {
                    let t = &f * &a[(col, j)];
                    a[(r, j)] -= &t;
                }
            }
        }
        det
    }

    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..self.cols {
            let pivot = match (row..self.rows).find(|&r| !a[(r, col)].is_zero()) {
                Some(p) => p,
                None => continue,
            };
            if pivot != row {
                for j in 0..self.cols {
                    a.data.swap(row * self.cols + j, pivot * self.cols + j);
                }
            }
            let pinv = a[(row, col)].inv().unwrap();
            for r in row + 1..self.rows {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let f = &a[(r, col)] * &pinv;
                for j in col..self.cols {
                    let t = &f * &a[(row, j)];
                    a[(r, j)] -= &t;
                }
            }
            rank += 1;
            row += 1;
            if row == self.rows {
                break;
            }
        }
        rank
    }

    /// Coefficients of `det(X*I - M)`, degree 0 upward, by evaluation at
    /// `X = 0..=n` and Lagrange interpolation.
    pub fn char_poly(&self) -> Vec<RatFunc> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let points: Vec<i64> = (0..=n as i64).collect();
        let values: Vec<RatFunc> = points
            .iter()
            .map(|&x| {
                let m = KMat::identity(n).scale(&RatFunc::from_int(x)).sub(self);
                m.det()
            })
            .collect();
        // Lagrange interpolation over constant nodes.
        let mut coeffs = vec![RatFunc::zero(); n + 1];
        for (i, &xi) in points.iter().enumerate() {
            // numerator polynomial prod_{j != i} (X - x_j), denominator prod (x_i - x_j)
            let mut numer = vec![RatFunc::one()];
            let mut denom = BigRational::from_integer(1.into());
            for (j, &xj) in points.iter().enumerate() {
                if j == i {
                    continue;
                }
                let mut next = vec![RatFunc::zero(); numer.len() + 1];
                for (k, c) in numer.iter().enumerate() {
                    next[k + 1] += c;
                    let t = c * &RatFunc::from_int(xj);
                    next[k] -= &t;
                }
                numer = next;
                denom *= BigRational::from_integer((xi - xj).into());
            }
            let scale = &values[i]
                * &RatFunc::from_laurent(crate::coeff::LaurentV::monomial(0, denom.recip()));
            for (k, c) in numer.iter().enumerate() {
                let t = c * &scale;
                coeffs[k] += &t;
            }
        }
        coeffs
    }

    /// Evaluate all entries at a rational point; `None` if any entry has a pole.
    pub fn eval_at(&self, x: &BigRational) -> Option<Vec<Vec<BigRational>>> {
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                row.push(self[(i, j)].eval_at(x)?);
            }
            out.push(row);
        }
        Some(out)
    }
}

/// Rank of a rational matrix, used to certify generic rank cheaply.
pub fn rational_rank(m: &[Vec<BigRational>]) -> usize {
    use num::Zero;
    if m.is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let pivot = match (row..rows).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        a.swap(row, pivot);
        let pinv = a[row][col].clone().recip();
        for r in row + 1..rows {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &pinv;
            for j in col..cols {
                let t = &f * &a[row][j];
                a[r][j] -= t;
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

impl Index<(usize, usize)> for KMat {
    type Output = RatFunc;
    fn index(&self, (i, j): (usize, usize)) -> &RatFunc {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for KMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RatFunc {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for KMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(s: &str) -> RatFunc {
        s.parse().unwrap()
    }

    fn m2(a: &str, b: &str, c: &str, d: &str) -> KMat {
        KMat::from_rows(vec![vec![k(a), k(b)], vec![k(c), k(d)]])
    }

    #[test]
    fn inverse_of_quadratic_action() {
        // the T_s action matrix of the two-dimensional principal series
        let t = m2("0", "1", "v^2", "v^2 - 1");
        let inv = t.inverse().unwrap();
        assert_eq!(t.mul(&inv), KMat::identity(2));
        assert_eq!(t.det(), k("-v^2"));
        // (T - q)(T + 1) = 0
        let q = KMat::identity(2).scale(&k("v^2"));
        let zero = t.sub(&q).mul(&t.add(&KMat::identity(2)));
        assert!(zero.is_zero());
    }

    #[test]
    fn char_poly_of_triangular_matrix() {
        let c = k("(v^2)/(v^2 - 1)");
        let m = KMat::from_rows(vec![
            vec![c.clone(), RatFunc::zero()],
            vec![k("v - 1"), c.inv().unwrap()],
        ]);
        // (X - c)(X - 1/c) = X^2 - (c + 1/c) X + 1
        let p = m.char_poly();
        assert_eq!(p[2], RatFunc::one());
        assert_eq!(p[1], -(&c + &c.inv().unwrap()));
        assert_eq!(p[0], RatFunc::one());
    }

    #[test]
    fn rank_detects_dependence() {
        let m = KMat::from_rows(vec![
            vec![k("1"), k("v")],
            vec![k("v"), k("v^2")],
            vec![k("0"), k("1")],
        ]);
        assert_eq!(m.rank(), 2);
        assert_eq!(KMat::zero(3, 2).rank(), 0);
    }
}
