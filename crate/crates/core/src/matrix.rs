//! Dense matrices over an exact [`Field`], with deterministic row reduction.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Dense row-major matrix. Every entry lives in the same field domain.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<T: Field> {
    rows: usize,
    cols: usize,
    domain: T::Domain,
    data: Vec<T>,
}

/// Output of [`Mat::rank_nullspace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankNullspace<T: Field> {
    pub rank: usize,
    /// Kernel basis as `cols × 1` column vectors, one per free column.
    pub nullspace: Vec<Mat<T>>,
}

impl<T: Field> Mat<T> {
    pub fn zeros(domain: &T::Domain, rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            domain: domain.clone(),
            data: vec![T::zero(domain); rows * cols],
        }
    }

    pub fn identity(domain: &T::Domain, n: usize) -> Self {
        let mut m = Self::zeros(domain, n, n);
        for i in 0..n {
            m[(i, i)] = T::one(domain);
        }
        m
    }

    /// Matrix unit `E_{ij}` (zero-based indices).
    pub fn unit(domain: &T::Domain, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(domain, n, n);
        m[(i, j)] = T::one(domain);
        m
    }

    pub fn diagonal(domain: &T::Domain, diag: &[T]) -> Self {
        let mut m = Self::zeros(domain, diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    /// Build from row-major entries; rejects shape mismatch and mixed domains.
    pub fn from_vec(domain: &T::Domain, rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Domain(format!(
                "{} entries given for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|x| x.domain() != *domain) {
            return Err(Error::Domain(format!(
                "entry {bad:?} does not lie in domain {domain:?}"
            )));
        }
        Ok(Mat {
            rows,
            cols,
            domain: domain.clone(),
            data,
        })
    }

    pub fn from_rows(domain: &T::Domain, rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Domain("ragged rows".into()));
        }
        Self::from_vec(domain, r, c, rows.into_iter().flatten().collect())
    }

    /// Convenience constructor from integer entries, reduced into the field.
    pub fn from_ints(domain: &T::Domain, rows: usize, cols: usize, ints: &[i64]) -> Self {
        assert_eq!(ints.len(), rows * cols);
        Mat {
            rows,
            cols,
            domain: domain.clone(),
            data: ints.iter().map(|&x| T::from_i64(domain, x)).collect(),
        }
    }

    /// Column vector from a slice.
    pub fn column(domain: &T::Domain, v: &[T]) -> Self {
        Mat {
            rows: v.len(),
            cols: 1,
            domain: domain.clone(),
            data: v.to_vec(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(domain: &T::Domain, n: usize, columns: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(domain, n, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), n);
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
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
    pub fn domain(&self) -> &T::Domain {
        &self.domain
    }
    pub fn entries(&self) -> &[T] {
        &self.data
    }
    pub fn characteristic(&self) -> u32 {
        T::characteristic(&self.domain)
    }

    pub fn zero_scalar(&self) -> T {
        T::zero(&self.domain)
    }
    pub fn one_scalar(&self) -> T {
        T::one(&self.domain)
    }
    pub fn scalar(&self, x: i64) -> T {
        T::from_i64(&self.domain, x)
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.domain, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &T) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            domain: self.domain.clone(),
            data: self.data.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            domain: self.domain.clone(),
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .fold(self.zero_scalar(), |a, b| a + b)
    }

    pub fn pow(&self, e: u32) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(&self.domain, self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `[self, other] = self·other − other·self`.
    pub fn bracket(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self * other == other * self
    }

    /// `g · self · g⁻¹`, given `g` and its inverse.
    pub fn conjugate_by(&self, g: &Self, g_inv: &Self) -> Self {
        &(g * self) * g_inv
    }

    /// Row-major flattening into a vector of length `rows·cols`.
    pub fn to_vector(&self) -> Vec<T> {
        self.data.clone()
    }

    pub fn from_vector(domain: &T::Domain, rows: usize, cols: usize, v: &[T]) -> Self {
        assert_eq!(v.len(), rows * cols);
        Mat {
            rows,
            cols,
            domain: domain.clone(),
            data: v.to_vec(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(&self.domain, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(domain: &T::Domain, blocks: &[Mat<T>]) -> Self {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(domain, r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Reduced row echelon form and its pivot columns.
    ///
    /// Pivoting is deterministic: columns are scanned left to right and the
    /// first row at or below the current pivot row with a nonzero entry in
    /// that column is chosen.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, pr);
            let inv = m[(row, col)].inverse().expect("nonzero pivot");
            for j in col..m.cols {
                m[(row, j)] = m[(row, j)].clone() * inv.clone();
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let f = m[(r, col)].clone();
                    for j in col..m.cols {
                        let v = m[(row, j)].clone() * f.clone();
                        m[(r, j)] = m[(r, j)].clone() - v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Kernel basis as plain vectors, one per free column in increasing order.
    pub fn kernel_vectors(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let zero = self.zero_scalar();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![zero.clone(); self.cols];
                v[f] = self.one_scalar();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn rank_nullspace(&self) -> RankNullspace<T> {
        let nullspace = self
            .kernel_vectors()
            .into_iter()
            .map(|v| Mat::column(&self.domain, &v))
            .collect::<Vec<_>>();
        RankNullspace {
            rank: self.cols - nullspace.len(),
            nullspace,
        }
    }

    /// One solution of `self · x = b`, if the system is consistent.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(&self.domain, self.rows, self.cols + 1);
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
        let mut x = vec![self.zero_scalar(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(&self.domain, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = self.one_scalar();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(r.submatrix(&rows, &cols))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn det(&self) -> T {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.one_scalar();
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return self.zero_scalar();
            };
            if pr != col {
                m.swap_rows(pr, col);
                det = -det;
            }
            let piv = m[(col, col)].clone();
            det = det * piv.clone();
            let inv = piv.inverse().expect("nonzero pivot");
            for r in col + 1..n {
                if !m[(r, col)].is_zero() {
                    let f = m[(r, col)].clone() * inv.clone();
                    for j in col..n {
                        let v = m[(col, j)].clone() * f.clone();
                        m[(r, j)] = m[(r, j)].clone() - v;
                    }
                }
            }
        }
        det
    }

    /// Smallest `k ≤ rows` with `self^k = 0`, if any.
    pub fn nilpotency_index(&self) -> Option<u32> {
        assert!(self.is_square());
        let mut acc = Self::identity(&self.domain, self.rows);
        for k in 0..=self.rows as u32 {
            if acc.is_zero() {
                return Some(k);
            }
            acc = &acc * self;
        }
        None
    }

    pub fn is_nilpotent(&self) -> bool {
        self.is_square() && self.nilpotency_index().is_some()
    }

    pub fn is_unipotent(&self) -> bool {
        self.is_square()
            && (self - &Self::identity(&self.domain, self.rows))
                .nilpotency_index()
                .is_some()
    }

    pub(crate) fn assert_same_shape(&self, other: &Self, what: &str) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "{what}: shape {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }
}

/// Matrix of a linear map `F^{in_dim} → F^{out_dim}` given by its action on
/// the standard basis vectors.
pub fn matrix_of_linear_map<T: Field>(
    domain: &T::Domain,
    in_dim: usize,
    out_dim: usize,
    f: impl Fn(&[T]) -> Vec<T>,
) -> Mat<T> {
    let mut m = Mat::zeros(domain, out_dim, in_dim);
    for j in 0..in_dim {
        let mut e = vec![T::zero(domain); in_dim];
        e[j] = T::one(domain);
        let image = f(&e);
        assert_eq!(image.len(), out_dim);
        for (i, x) in image.into_iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    m
}

/// The linear endomorphism `M ↦ X·M − M·X` of `gl_n`, on row-major coordinates.
pub fn ad_matrix<T: Field>(x: &Mat<T>) -> Mat<T> {
    let n = x.rows();
    let d = x.domain().clone();
    matrix_of_linear_map(&d, n * n, n * n, |v| {
        let m = Mat::from_vector(&d, n, n, v);
        x.bracket(&m).to_vector()
    })
}

/// The linear endomorphism `M ↦ g·M − M·g` of `gl_n`; its kernel is the
/// centralizer of `g` in `gl_n`, which equals the kernel of `Ad(g) − id`
/// for invertible `g`.
pub fn commutant_matrix<T: Field>(g: &Mat<T>) -> Mat<T> {
    ad_matrix(g)
}

/// Dimension of a span of vectors.
pub fn span_dim<T: Field>(domain: &T::Domain, dim: usize, vectors: &[Vec<T>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Mat::from_columns(domain, dim, vectors).rank()
}

/// Whether two lists of vectors span the same subspace.
pub fn same_span<T: Field>(domain: &T::Domain, dim: usize, a: &[Vec<T>], b: &[Vec<T>]) -> bool {
    let da = span_dim(domain, dim, a);
    let db = span_dim(domain, dim, b);
    if da != db {
        return false;
    }
    let both: Vec<Vec<T>> = a.iter().chain(b.iter()).cloned().collect();
    span_dim(domain, dim, &both) == da
}

/// Incrementally maintained echelon basis, for independence tests.
#[derive(Clone, Debug)]
pub struct Span<T: Field> {
    domain: T::Domain,
    dim: usize,
    /// Reduced rows with their pivot positions.
    rows: Vec<(usize, Vec<T>)>,
}

impl<T: Field> Span<T> {
    pub fn new(domain: &T::Domain, dim: usize) -> Self {
        Span {
            domain: domain.clone(),
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x = x.clone() - r.clone() * f.clone();
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.reduce(v).iter().all(Field::is_zero)
    }

    /// Adds `v`; returns `false` if it was already in the span.
    pub fn insert(&mut self, v: &[T]) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inverse().expect("nonzero");
        for x in r.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    *x = x.clone() - y.clone() * f.clone();
                }
            }
        }
        self.rows.push((p, r));
        true
    }

    pub fn domain(&self) -> &T::Domain {
        &self.domain
    }
}

impl<T: Field> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: Field> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Field> Add for &Mat<T> {
    type Output = Mat<T>;
    fn add(self, rhs: &Mat<T>) -> Mat<T> {
        self.assert_same_shape(rhs, "add");
        Mat {
            rows: self.rows,
            cols: self.cols,
            domain: self.domain.clone(),
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<T: Field> Sub for &Mat<T> {
    type Output = Mat<T>;
    fn sub(self, rhs: &Mat<T>) -> Mat<T> {
        self.assert_same_shape(rhs, "sub");
        Mat {
            rows: self.rows,
            cols: self.cols,
            domain: self.domain.clone(),
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<T: Field> Neg for &Mat<T> {
    type Output = Mat<T>;
    fn neg(self) -> Mat<T> {
        self.map(|x| -x.clone())
    }
}

impl<T: Field> Mul for &Mat<T> {
    type Output = Mat<T>;
    fn mul(self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, rhs.rows, "mul: inner dimensions differ");
        let mut out: Mat<T> = Mat::zeros(&self.domain, self.rows, rhs.cols);
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
                    let v = out[(i, j)].clone() + a.clone() * b.clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }
}

impl<T: Field> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

impl<T: Field> fmt::Display for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}
