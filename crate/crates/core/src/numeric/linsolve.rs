//! LU factorization with partial pivoting for complex systems.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numeric::matrix::ComplexMatrix;
use crate::scalar::{Real, C};

/// LU factorization `P A = L U` of a square complex matrix.
pub struct LuFactors<T> {
    lu: ComplexMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Real> LuFactors<T> {
    /// Factorize with partial pivoting; fails on (numerically) singular input.
    pub fn new(a: &ComplexMatrix<T>) -> Result<Self> {
        assert!(a.is_square(), "LU requires a square matrix");
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let tiny = T::min_positive_value() * T::of(16.0);
        for k in 0..n {
            let (pivot_row, pivot_mag) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            if pivot_mag <= tiny {
                return Err(Error::invalid("singular matrix in LU factorization"));
            }
            if pivot_row != k {
                perm.swap(k, pivot_row);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(pivot_row, j)];
                    lu[(pivot_row, j)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                if factor.is_zero() {
                    continue;
                }
                for j in (k + 1)..n {
                    let sub = factor * lu[(k, j)];
                    lu[(i, j)] = lu[(i, j)] - sub;
                }
            }
        }
        Ok(LuFactors { lu, perm })
    }

    /// Solve `A x = b` for a single right-hand side.
    pub fn solve_vec(&self, b: &[C<T>]) -> Vec<C<T>> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n);
        let mut x: Vec<C<T>> = self.perm.iter().map(|&p| b[p]).collect();
        // forward substitution (unit lower triangle)
        for i in 1..n {
            let mut acc = x[i];
            for j in 0..i {
                acc = acc - self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        // back substitution
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in (i + 1)..n {
                acc = acc - self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }

    /// Solve `A X = B` column by column.
    pub fn solve_mat(&self, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
        let n = self.lu.rows();
        assert_eq!(b.rows(), n);
        let mut out = ComplexMatrix::zeros(n, b.cols());
        for j in 0..b.cols() {
            let col = self.solve_vec(&b.col(j));
            for (i, v) in col.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        out
    }
}

/// Inverse of a square complex matrix.
pub fn inverse<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    Ok(LuFactors::new(a)?.solve_mat(&ComplexMatrix::identity(a.rows())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::re;

    fn c(r: f64, i: f64) -> C<f64> {
        C::new(r, i)
    }

    #[test]
    fn solve_recovers_known_solution() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(2.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)],
            vec![c(0.0, 1.0), c(3.0, 0.0), c(0.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0), c(-2.0, 2.0)],
        ])
        .unwrap();
        let x_true = vec![c(1.0, -1.0), c(0.5, 2.0), c(-1.0, 0.25)];
        let b = a.matvec(&x_true);
        let x = LuFactors::new(&a).unwrap().solve_vec(&b);
        for (xa, xb) in x.iter().zip(&x_true) {
            assert!((xa - xb).norm() < 1e-13);
        }
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.5), c(2.0, 0.0)],
            vec![c(0.0, -1.0), c(1.0, 1.0)],
        ])
        .unwrap();
        let inv = inverse(&a).unwrap();
        let prod = inv.matmul(&a);
        let defect = prod.sub(&ComplexMatrix::identity(2)).norm_max();
        assert!(defect < 1e-14, "defect {defect}");
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = ComplexMatrix::from_rows(&[
            vec![re(1.0), re(2.0)],
            vec![re(2.0), re(4.0)],
        ])
        .unwrap();
        assert!(LuFactors::new(&a).is_err());
    }
}
