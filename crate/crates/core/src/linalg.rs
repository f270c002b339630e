//! Dense linear algebra over a [`Scalar`] field: just enough for apartments,
//! relevant affine subspaces and quadratic forms.

use std::fmt;

use crate::scalar::Scalar;

pub type Vector<S> = Vec<S>;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[S]> = self.data.chunks(self.cols.max(1)).take(self.rows).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors, all of length `dim`.
    pub fn from_columns(dim: usize, cols: &[Vector<S>]) -> Self {
        let mut m = Self::zeros(dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), dim);
            for i in 0..dim {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vector<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + p;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vector<S> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &S) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.clone() * s.clone()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| a.is_zero())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // pick the largest entry; for exact scalars any nonzero entry works
            let mut best: Option<usize> = None;
            for i in r..m.rows {
                if m[(i, c)].is_negligible() {
                    continue;
                }
                match best {
                    None => best = Some(i),
                    Some(b) if !S::EXACT && m[(i, c)].abs_val() > m[(b, c)].abs_val() => best = Some(i),
                    _ => {}
                }
            }
            let Some(p) = best else { continue };
            m.swap_rows(r, p);
            let inv = S::one() / m[(r, c)].clone();
            for j in 0..m.cols {
                m[(r, j)] = m[(r, j)].clone() * inv.clone();
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in 0..m.cols {
                        let v = m[(r, j)].clone() * f.clone();
                        m[(i, j)] = m[(i, j)].clone() - v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vector<S>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Some solution of `self * x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[S]) -> Option<Vector<S>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = S::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> S {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = self.rows;
        let mut det = S::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_negligible()) else {
                return S::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            for i in c + 1..n {
                let f = m[(i, c)].clone() / piv.clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m[(c, j)].clone() * f.clone();
                    m[(i, j)] = m[(i, j)].clone() - v;
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

pub fn add<S: Scalar>(a: &[S], b: &[S]) -> Vector<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub<S: Scalar>(a: &[S], b: &[S]) -> Vector<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale<S: Scalar>(s: &S, a: &[S]) -> Vector<S> {
    a.iter().map(|x| s.clone() * x.clone()).collect()
}

/// `a + s * b`
pub fn axpy<S: Scalar>(a: &[S], s: &S, b: &[S]) -> Vector<S> {
    a.iter().zip(b).map(|(x, y)| x.clone() + s.clone() * y.clone()).collect()
}

pub fn is_zero_vec<S: Scalar>(a: &[S]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Bilinear form `a^T F b`.
pub fn form<S: Scalar>(f: &Matrix<S>, a: &[S], b: &[S]) -> S {
    dot(a, &f.mul_vec(b))
}

/// A nonempty affine subspace `point + span(basis)`, kept in a canonical form:
/// the basis is in reduced row echelon form and the point vanishes on the
/// pivot coordinates. Two subspaces are equal iff their canonical forms are.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineSubspace<S> {
    point: Vector<S>,
    basis: Vec<Vector<S>>,
}

impl<S: Scalar> AffineSubspace<S> {
    pub fn new(point: Vector<S>, directions: &[Vector<S>]) -> Self {
        let n = point.len();
        let (basis, pivots) = if directions.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            let (r, pivots) = Matrix::from_rows(directions.to_vec()).rref();
            let rows: Vec<Vector<S>> = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
            (rows, pivots)
        };
        let mut point = point;
        for (row, &pc) in basis.iter().zip(&pivots) {
            let c = point[pc].clone();
            if !c.is_zero() {
                point = axpy(&point, &-c, row);
            }
        }
        debug_assert_eq!(point.len(), n);
        AffineSubspace { point, basis }
    }

    pub fn whole(dim: usize) -> Self {
        let basis: Vec<Vector<S>> = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { S::one() } else { S::zero() }).collect())
            .collect();
        Self::new(vec![S::zero(); dim], &basis)
    }

    pub fn point_set(p: Vector<S>) -> Self {
        Self::new(p, &[])
    }

    /// Solution set of `A x = b`; `None` when empty.
    pub fn from_equations(a: &Matrix<S>, b: &[S]) -> Option<Self> {
        let p = a.solve(b)?;
        Some(Self::new(p, &a.nullspace()))
    }

    pub fn ambient_dim(&self) -> usize {
        self.point.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn point(&self) -> &[S] {
        &self.point
    }

    pub fn basis(&self) -> &[Vector<S>] {
        &self.basis
    }

    /// Equations `A x = b` cutting out the subspace.
    pub fn equations(&self) -> (Matrix<S>, Vector<S>) {
        let n = self.ambient_dim();
        let normals = if self.basis.is_empty() {
            Matrix::<S>::identity(n).row_vecs()
        } else {
            Matrix::from_rows(self.basis.clone()).nullspace()
        };
        let a = if normals.is_empty() { Matrix::zeros(0, n) } else { Matrix::from_rows(normals) };
        let b = a.mul_vec(&self.point);
        (a, b)
    }

    pub fn contains_point(&self, x: &[S]) -> bool {
        let (a, b) = self.equations();
        a.mul_vec(x) == b
    }

    pub fn contains(&self, other: &Self) -> bool {
        if !self.contains_point(&other.point) {
            return false;
        }
        let (a, _) = self.equations();
        other.basis.iter().all(|v| is_zero_vec(&a.mul_vec(v)))
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let (a1, b1) = self.equations();
        let (a2, b2) = other.equations();
        let mut rows = a1.row_vecs();
        rows.extend(a2.row_vecs());
        let mut b = b1;
        b.extend(b2);
        if rows.is_empty() {
            return Some(self.clone());
        }
        Self::from_equations(&Matrix::from_rows(rows), &b)
    }

    /// Image under `x -> linear * x + shift`.
    pub fn map_affine(&self, linear: &Matrix<S>, shift: &[S]) -> Self {
        let p = add(&linear.mul_vec(&self.point), shift);
        let dirs: Vec<Vector<S>> = self.basis.iter().map(|v| linear.mul_vec(v)).collect();
        Self::new(p, &dirs)
    }

    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AffineSubspace<T> {
        AffineSubspace {
            point: self.point.iter().map(&f).collect(),
            basis: self.basis.iter().map(|v| v.iter().map(&f).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};
    use num_rational::BigRational;

    type Q = BigRational;

    fn m(rows: &[Vec<i64>]) -> Matrix<Q> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn inverse_and_determinant() {
        let a = m(&[vec![2, -1], vec![-1, 2]]);
        assert_eq!(a.determinant(), rat(3));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert_eq!(inv[(0, 0)], ratio(2, 3));
        assert!(m(&[vec![1, 2], vec![2, 4]]).inverse().is_none());
    }

    #[test]
    fn nullspace_and_solve() {
        let a = m(&[vec![1, 1, 0]]);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(is_zero_vec(&a.mul_vec(v)));
        }
        assert!(m(&[vec![1, 0], vec![1, 0]]).solve(&[rat(1), rat(2)]).is_none());
    }

    #[test]
    fn affine_subspace_canonical_form() {
        let l1 = AffineSubspace::new(vec![rat(1), rat(1)], &[vec![rat(2), rat(2)]]);
        let l2 = AffineSubspace::new(vec![rat(0), rat(0)], &[vec![rat(-1), rat(-1)]]);
        assert_eq!(l1, l2);
        let h = AffineSubspace::new(vec![rat(0), rat(1)], &[vec![rat(1), rat(0)]]);
        let p = l1.intersect(&h).unwrap();
        assert_eq!(p, AffineSubspace::point_set(vec![rat(1), rat(1)]));
        assert!(l1.contains(&p) && h.contains(&p) && !p.contains(&h));
        let parallel = AffineSubspace::new(vec![rat(0), rat(2)], &[vec![rat(1), rat(0)]]);
        assert!(h.intersect(&parallel).is_none());
        assert!(AffineSubspace::<Q>::whole(2).contains(&h));
    }
}
