//! Dense complex matrices and single-particle state vectors.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{re, Real, C};

/// Dense complex matrix in row-major order.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<C<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    /// Zero matrix of the given shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, entries: vec![C::zero(); rows * cols] }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::one();
        }
        m
    }

    /// Build from row-major entries; the entry count must match the shape
    /// and every entry must be finite.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<C<T>>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::invalid(format!(
                "matrix shape {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let m = ComplexMatrix { rows, cols, entries };
        m.check_finite()?;
        Ok(m)
    }

    /// Build from a nested row representation (convenient in tests).
    pub fn from_rows(rows: &[Vec<C<T>>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::invalid("ragged rows in matrix literal"));
        }
        Self::from_entries(r, c, rows.concat())
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

    pub fn entries(&self) -> &[C<T>] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[C<T>] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [C<T>] {
        &mut self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Column `j` collected into a vector.
    pub fn col(&self, j: usize) -> Vec<C<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::invalid("matrix contains non-finite entries"))
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Transpose without conjugation.
    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn scale(&self, s: C<T>) -> Self {
        let entries = self.entries.iter().map(|&z| z * s).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries =
            self.entries.iter().zip(&other.entries).map(|(&a, &b)| a + b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries =
            self.entries.iter().zip(&other.entries).map(|(&a, &b)| a - b).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, entries }
    }

    /// Matrix product, row-accumulation order for cache-friendly access.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let a_row = self.row(i);
            let out_row = out.row_mut(i);
            for (k, &a) in a_row.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let b_row = other.row(k);
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o = *o + a * b;
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn matvec(&self, x: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(self.cols, x.len(), "matvec shape mismatch");
        let mut y = vec![C::zero(); self.rows];
        self.matvec_into(x, &mut y);
        y
    }

    /// Matrix-vector product into a preallocated buffer.
    pub fn matvec_into(&self, x: &[C<T>], y: &mut [C<T>]) {
        assert_eq!(self.cols, x.len(), "matvec shape mismatch");
        assert_eq!(self.rows, y.len(), "matvec output shape mismatch");
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = C::zero();
            for (&a, &b) in self.row(i).iter().zip(x) {
                acc = acc + a * b;
            }
            *yi = acc;
        }
    }

    /// Maximum column sum of absolute values (operator 1-norm).
    pub fn norm_one(&self) -> T {
        let mut sums = vec![T::zero(); self.cols];
        for i in 0..self.rows {
            for (s, &z) in sums.iter_mut().zip(self.row(i)) {
                *s = *s + z.norm();
            }
        }
        sums.into_iter().fold(T::zero(), T::max)
    }

    /// Maximum row sum of absolute values (operator inf-norm).
    pub fn norm_inf(&self) -> T {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum())
            .fold(T::zero(), T::max)
    }

    /// Largest entry magnitude.
    pub fn norm_max(&self) -> T {
        self.entries.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    /// Frobenius norm.
    pub fn norm_fro(&self) -> T {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn trace(&self) -> C<T> {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).fold(C::zero(), |a, b| a + b)
    }

    /// Hermiticity defect `max |M - M^H|`.
    pub fn hermiticity_defect(&self) -> T {
        assert!(self.is_square());
        let mut worst = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = C<T>;

    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl<T: Real> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            write!(f, "  ")?;
            for j in 0..self.cols.min(8) {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f, "{}", if self.cols > 8 { "..." } else { "" })?;
        }
        if self.rows > 8 {
            writeln!(f, "  ...")?;
        }
        write!(f, "]")
    }
}

/// Complex amplitudes of a single-particle state over a cluster network.
///
/// Entries are stored flat; for a network of `n_clusters` clusters of
/// `cluster_dim` sites each, the amplitude of site `l` in cluster `alpha`
/// (both zero-based) lives at index `alpha * cluster_dim + l`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector<T> {
    cluster_dim: usize,
    amplitudes: Vec<C<T>>,
}

impl<T: Real> StateVector<T> {
    /// Build from flat amplitudes; the length must be a multiple of the
    /// cluster dimension and every amplitude must be finite.
    pub fn new(cluster_dim: usize, amplitudes: Vec<C<T>>) -> Result<Self> {
        if cluster_dim == 0 || amplitudes.len() % cluster_dim != 0 {
            return Err(Error::invalid(format!(
                "state length {} is not a multiple of cluster dimension {cluster_dim}",
                amplitudes.len()
            )));
        }
        let v = StateVector { cluster_dim, amplitudes };
        if !v.amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::invalid("state contains non-finite amplitudes"));
        }
        Ok(v)
    }

    /// Zero state for a network of `n_clusters` clusters.
    pub fn zeros(n_clusters: usize, cluster_dim: usize) -> Self {
        StateVector { cluster_dim, amplitudes: vec![C::zero(); n_clusters * cluster_dim] }
    }

    /// Site-basis state with a single unit amplitude at `(alpha, l)`.
    pub fn site_basis(n_clusters: usize, cluster_dim: usize, alpha: usize, l: usize) -> Self {
        let mut v = Self::zeros(n_clusters, cluster_dim);
        let idx = v.flat_index(alpha, l);
        v.amplitudes[idx] = C::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn cluster_dim(&self) -> usize {
        self.cluster_dim
    }

    pub fn n_clusters(&self) -> usize {
        self.amplitudes.len() / self.cluster_dim
    }

    pub fn flat_index(&self, alpha: usize, l: usize) -> usize {
        debug_assert!(alpha < self.n_clusters() && l < self.cluster_dim);
        alpha * self.cluster_dim + l
    }

    /// Amplitude at cluster `alpha`, site `l` (zero-based).
    pub fn amp(&self, alpha: usize, l: usize) -> C<T> {
        self.amplitudes[self.flat_index(alpha, l)]
    }

    pub fn amp_mut(&mut self, alpha: usize, l: usize) -> &mut C<T> {
        let idx = self.flat_index(alpha, l);
        &mut self.amplitudes[idx]
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C<T>] {
        &mut self.amplitudes
    }

    /// Sum of squared amplitude magnitudes (the measurable norm).
    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Euclidean inner product `<self|other>`.
    pub fn dot(&self, other: &Self) -> C<T> {
        assert_eq!(self.dim(), other.dim());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(C::zero(), |acc, (a, b)| acc + a.conj() * b)
    }

    /// Rescale so the Euclidean norm is 1.
    pub fn normalized(&self) -> Self {
        let n = self.norm_sqr().sqrt();
        let inv = re(T::one() / n);
        StateVector {
            cluster_dim: self.cluster_dim,
            amplitudes: self.amplitudes.iter().map(|&z| z * inv).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.amplitudes.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entrywise difference to another state.
    pub fn max_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(T::zero(), T::max)
    }
}

impl<T: Real> fmt::Debug for StateVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "StateVector(dim={}, clusters={}x{})",
            self.dim(),
            self.n_clusters(),
            self.cluster_dim
        )
    }
}
