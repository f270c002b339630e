//! Small square integer matrices: Weyl group elements acting on a lattice.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use crate::linalg::Matrix;
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMat {
    n: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[i64]> = (0..self.n).map(|i| self.row(i)).collect();
        write!(f, "{rows:?}")
    }
}

impl IntMat {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IntMat { n, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "IntMat must be square");
        IntMat { n, data: rows.iter().flatten().copied().collect() }
    }

    /// `I - v c^T` for a vector `v` and covector `c`: the reflection formula
    /// when `c(v) = 2`.
    pub fn reflection(v: &[i64], c: &[i64]) -> Self {
        let n = v.len();
        let mut m = Self::identity(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] -= v[i] * c[j];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        assert_eq!(n, o.n);
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * o.data[k * n + j];
                }
            }
        }
        IntMat { n, data }
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Row covector times matrix: `c^T M`.
    pub fn covec_mul(&self, c: &[i64]) -> Vec<i64> {
        (0..self.n).map(|j| (0..self.n).map(|i| c[i] * self.get(i, j)).sum()).collect()
    }

    pub fn mul_vec_s<S: Scalar>(&self, v: &[S]) -> Vec<S> {
        (0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (&a, b)| if a == 0 { acc } else { acc + S::from_i64(a) * b.clone() })
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        IntMat { n, data }
    }

    pub fn to_matrix<S: Scalar>(&self) -> Matrix<S> {
        Matrix::from_i64_rows(&self.rows())
    }

    /// Inverse of a unimodular matrix; panics if the inverse is not integral.
    pub fn inverse(&self) -> Self {
        let inv = self.to_matrix::<Rational64>().inverse().expect("singular lattice automorphism");
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let v = inv[(i, j)];
                assert!(v.is_integer(), "inverse is not integral");
                data.push(v.to_integer());
            }
        }
        IntMat { n, data }
    }

    pub fn determinant(&self) -> i64 {
        let d = self.to_matrix::<Rational64>().determinant();
        d.to_integer()
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Multiplicative order, or `None` if it exceeds `ceiling`.
    pub fn order(&self, ceiling: usize) -> Option<usize> {
        let id = Self::identity(self.n);
        let mut p = self.clone();
        for k in 1..=ceiling {
            if p == id {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(self.n);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Block-diagonal sum.
    pub fn direct_sum(blocks: &[IntMat]) -> Self {
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut m = Self::identity(n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    m.data[(off + i) * n + off + j] = b.get(i, j);
                }
            }
            off += b.n;
        }
        m
    }
}

/// A basis (as rows) of the lattice spanned by the given integer rows, in
/// Hermite normal form. Zero rows are dropped.
pub fn hermite_basis(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let Some(cols) = m.first().map(|r| r.len()) else { return Vec::new() };
    let mut r = 0;
    for c in 0..cols {
        // euclid on column c among rows r..
        loop {
            let mut piv: Option<usize> = None;
            for i in r..m.len() {
                if m[i][c] != 0 && piv.is_none_or(|p| m[i][c].abs() < m[p][c].abs()) {
                    piv = Some(i);
                }
            }
            let Some(p) = piv else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c] != 0 {
                    let q = m[i][c].div_euclid(m[r][c]);
                    let pivot_row = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                        *x -= q * y;
                    }
                    if m[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && m[r][c] != 0 {
            if m[r][c] < 0 {
                m[r].iter_mut().for_each(|x| *x = -*x);
            }
            for i in 0..r {
                let q = m[i][c].div_euclid(m[r][c]);
                if !q.is_zero() {
                    let pivot_row = m[r].clone();
                    for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                        *x -= q * y;
                    }
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|x| !x.is_zero()));
    m
}
