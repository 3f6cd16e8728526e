//! Dense exact linear algebra over [`Scalar`].
//!
//! Matrices act on column vectors: column `j` of an endomorphism is the
//! image of the basis vector `e_j`.  Subspaces are stored as the nonzero rows
//! of their reduced row echelon form, which makes equality structural.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Vector(pub Vec<Scalar>);

impl Vector {
    pub fn zeros(n: usize) -> Self {
        Vector(vec![Scalar::zero(); n])
    }

    /// The `i`-th standard basis vector (0-based).
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = Scalar::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Vector(xs.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Vector(self.0.iter().map(|x| x * s).collect())
    }

    pub fn dot(&self, o: &Vector) -> Scalar {
        self.0.iter().zip(&o.0).map(|(a, b)| a * b).sum()
    }

    pub fn axpy(&mut self, s: &Scalar, o: &Vector) {
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            if !b.is_zero() {
                *a += &(s * b);
            }
        }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scalar> {
        self.0.iter()
    }

    /// First nonzero coordinate as (0-based index, value).
    pub fn first_nonzero(&self) -> Option<(usize, &Scalar)> {
        self.0.iter().enumerate().find(|(_, x)| !x.is_zero())
    }
}

impl Index<usize> for Vector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut Scalar {
        &mut self.0[i]
    }
}

impl<'a> Add<&'a Vector> for &'a Vector {
    type Output = Vector;
    fn add(self, o: &Vector) -> Vector {
        Vector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a Vector> for &'a Vector {
    type Output = Vector;
    fn sub(self, o: &Vector) -> Vector {
        Vector(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Square matrix acting on an algebra's underlying space.
pub type Endomorphism = Matrix;

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
        )
        .expect("ragged integer matrix")
    }

    /// Matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(n: usize, cols: &[Vector]) -> Self {
        Self::from_fn(n, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> Vector {
        Vector(self.data[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn column(&self, c: usize) -> Vector {
        Vector((0..self.rows).map(|r| self[(r, c)].clone()).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).0).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.dim(), "matrix/vector dimension mismatch");
        Vector(
            (0..self.rows)
                .map(|r| {
                    let row = &self.data[r * self.cols..(r + 1) * self.cols];
                    let mut acc = Scalar::zero();
                    for (a, b) in row.iter().zip(&v.0) {
                        if !a.is_zero() && !b.is_zero() {
                            acc += &(a * b);
                        }
                    }
                    acc
                })
                .collect(),
        )
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .sum()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self·o − o·self`.
    pub fn commutator(&self, o: &Matrix) -> Self {
        &(self * o) - &(o * self)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.rows as u32).is_zero()
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for k in c..m.cols {
                let v = &m[(r, k)] * &inv;
                m[(r, k)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for k in c..m.cols {
                        if !m[(r, k)].is_zero() {
                            let v = &m[(i, k)] - &(&f * &m[(r, k)]);
                            m[(i, k)] = v;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : self·x = 0}`.
    pub fn kernel(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = Vector::zeros(self.cols);
                v[f] = Scalar::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(row, f)];
                }
                v
            })
            .collect()
    }

    /// One solution of `self·x = b`, if any.
    pub fn solve(&self, b: &Vector) -> Option<Vector> {
        let aug = Matrix::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                b[r].clone()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = Vector::zeros(self.cols);
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = red[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_fn(n, n, |r, c| red[(r, c + n)].clone()))
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            let inv = piv.recip();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for k in c..n {
                    let v = &m[(i, k)] - &(&f * &m[(c, k)]);
                    m[(i, k)] = v;
                }
            }
        }
        det
    }

    /// Leading principal minors `Δ₁, …, Δₙ`, computed by elimination
    /// without pivoting; stops early (with a zero entry) at the first
    /// vanishing pivot.
    pub fn leading_principal_minors(&self) -> Vec<Scalar> {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut out = Vec::with_capacity(n);
        let mut prod = Scalar::one();
        for c in 0..n {
            let piv = m[(c, c)].clone();
            if piv.is_zero() {
                out.push(Scalar::zero());
                return out;
            }
            prod *= &piv;
            out.push(prod.clone());
            let inv = piv.recip();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for k in c..n {
                    let v = &m[(i, k)] - &(&f * &m[(c, k)]);
                    m[(i, k)] = v;
                }
            }
        }
        out
    }

    /// Exact positive-definiteness (Sylvester's criterion).
    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric() && {
            let minors = self.leading_principal_minors();
            minors.len() == self.rows && minors.iter().all(Scalar::is_positive)
        }
    }

    /// Characteristic polynomial coefficients `[c₀, …, cₙ]` of
    /// `det(λ·I − self) = Σ c_k λ^k` (Faddeev–LeVerrier).
    pub fn char_poly(&self) -> Vec<Scalar> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = Scalar::one();
        let mut m = Matrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A·M_{k-1} + c_{n-k+1} I
            let mut next = self * &m;
            for i in 0..n {
                let v = &next[(i, i)] + &coeffs[n - k + 1];
                next[(i, i)] = v;
            }
            m = next;
            let am = self * &m;
            coeffs[n - k] = -(am.trace() / Scalar::from_int(k as i64));
        }
        coeffs
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &Matrix) -> Matrix {
        let (r, c) = (self.rows + o.rows, self.cols + o.cols);
        Matrix::from_fn(r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self[(i, j)].clone()
            } else if i >= self.rows && j >= self.cols {
                o[(i - self.rows, j - self.cols)].clone()
            } else {
                Scalar::zero()
            }
        })
    }

    /// First nonzero entry as (row, col, value).
    pub fn first_nonzero(&self) -> Option<(usize, usize, &Scalar)> {
        self.data
            .iter()
            .enumerate()
            .find(|(_, x)| !x.is_zero())
            .map(|(k, x)| (k / self.cols, k % self.cols, x))
    }

    /// Largest radicand among the entries (1 when all are rational).
    pub fn radicand(&self) -> u64 {
        self.data.iter().map(Scalar::radicand).max().unwrap_or(1)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "matrix product dimension mismatch");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    if !b.is_zero() {
                        let v = &out[(i, j)] + &(a * b);
                        out[(i, j)] = v;
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&Scalar::from_int(-1))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

/// A linear subspace of `ℚ(√d)^n`, stored in reduced row echelon form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(ambient: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let m = Matrix::from_fn(vectors.len(), ambient, |r, c| vectors[r][c].clone());
        let (red, pivots) = m.rref();
        let basis = (0..pivots.len()).map(|r| red.row(r)).collect();
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::coordinate(ambient, &(0..ambient).collect::<Vec<_>>())
    }

    /// Span of the standard basis vectors with the given 0-based indices.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let vs: Vec<Vector> = indices.iter().map(|&i| Vector::basis(ambient, i)).collect();
        Self::span(ambient, &vs)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.dim()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v ∉ self`.
    pub fn coordinates(&self, v: &Vector) -> Option<Vector> {
        let coords = Vector(self.pivots.iter().map(|&p| v[p].clone()).collect());
        let mut rebuilt = Vector::zeros(self.ambient);
        for (c, b) in coords.0.iter().zip(&self.basis) {
            rebuilt.axpy(c, b);
        }
        (rebuilt == *v).then_some(coords)
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, o: &Subspace) -> bool {
        o.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(o.basis.iter().cloned());
        Subspace::span(self.ambient, &vs)
    }

    pub fn intersection(&self, o: &Subspace) -> Subspace {
        // solve Σ a_i b_i − Σ c_j d_j = 0
        let mut cols: Vec<Vector> = self.basis.clone();
        cols.extend(o.basis.iter().map(|v| -v));
        let m = Matrix::from_columns(self.ambient, &cols);
        let vs: Vec<Vector> = m
            .kernel()
            .iter()
            .map(|x| {
                let mut v = Vector::zeros(self.ambient);
                for (i, b) in self.basis.iter().enumerate() {
                    v.axpy(&x[i], b);
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, &vs)
    }

    /// Image of the subspace under a linear map.
    pub fn image(&self, m: &Matrix) -> Subspace {
        let vs: Vec<Vector> = self.basis.iter().map(|b| m.apply(b)).collect();
        Subspace::span(m.rows(), &vs)
    }

    /// Standard basis vectors completing the echelon basis to the whole space.
    pub fn coordinate_complement(&self) -> Vec<Vector> {
        (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .map(|c| Vector::basis(self.ambient, c))
            .collect()
    }

    /// Orthogonal complement with respect to the symmetric form `g`.
    pub fn orthogonal_complement(&self, g: &Matrix) -> Subspace {
        if self.basis.is_empty() {
            return Subspace::full(self.ambient);
        }
        let rows: Vec<Vec<Scalar>> = self.basis.iter().map(|b| g.apply(b).0).collect();
        let m = Matrix::from_rows(rows).expect("rectangular");
        Subspace::span(self.ambient, &m.kernel())
    }

    /// Matrix of `m` restricted to this (m-invariant) subspace, in echelon
    /// coordinates.  `None` if the subspace is not invariant.
    pub fn restrict(&self, m: &Matrix) -> Option<Matrix> {
        let cols: Option<Vec<Vector>> = self
            .basis
            .iter()
            .map(|b| self.coordinates(&m.apply(b)))
            .collect();
        Some(Matrix::from_columns(self.dim(), &cols?))
    }

    /// Ambient vector with the given echelon coordinates.
    pub fn embed(&self, coords: &Vector) -> Vector {
        let mut v = Vector::zeros(self.ambient);
        for (c, b) in coords.0.iter().zip(&self.basis) {
            v.axpy(c, b);
        }
        v
    }
}
