//! Eigensolver for complex Hermitian matrices.
//!
//! Householder reduction to a real symmetric tridiagonal form (with a
//! diagonal phase transform absorbing the complex subdiagonal), followed by
//! the implicit-shift QL iteration with eigenvectors accumulated in the
//! complex transform matrix.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::matrix::ComplexMatrix;
use crate::scalar::{Real, C};

const MAX_QL_ITERATIONS: usize = 50;

/// Eigendecomposition of a Hermitian matrix: real eigenvalues sorted
/// ascending and a unitary matrix of eigenvectors (column `j` belongs to
/// eigenvalue `j`).
pub fn eig_hermitian<T: Real>(m: &ComplexMatrix<T>) -> Result<(Vec<T>, ComplexMatrix<T>)> {
    if !m.is_square() {
        return Err(Error::invalid("eig_hermitian requires a square matrix"));
    }
    m.check_finite()?;
    let n = m.rows();
    if n == 0 {
        return Err(Error::invalid("empty matrix"));
    }
    let scale = m.norm_one().max(T::min_positive_value());
    let defect = m.hermiticity_defect();
    let tol = T::tol(1e-12) * scale;
    if defect > tol {
        return Err(Error::NotHermitian {
            defect: defect.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }

    // Work on the exactly Hermitian average to suppress roundoff asymmetry.
    let mut a = m.clone();
    for i in 0..n {
        for j in 0..i {
            let avg = (a[(i, j)] + a[(j, i)].conj()) / C::new(T::of(2.0), T::zero());
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
        a[(i, i)] = C::new(a[(i, i)].re, T::zero());
    }

    let (mut d, mut e, mut q) = tridiagonalize(&a);
    ql_implicit(&mut d, &mut e, &mut q)?;

    // Ascending sort, permuting eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let values: Vec<T> = order.iter().map(|&i| d[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, new_j)] = q[(i, old_j)];
        }
    }
    Ok((values, vectors))
}

/// Reduce Hermitian `a` to real symmetric tridiagonal form
/// `Q^H a Q = tridiag(d, e)`; returns `(d, e, q)` with `e[i]` coupling
/// `d[i]` and `d[i+1]` (length `n`, last entry zero).
fn tridiagonalize<T: Real>(a: &ComplexMatrix<T>) -> (Vec<T>, Vec<T>, ComplexMatrix<T>) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    let tiny = T::min_positive_value() * T::of(16.0);

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let mut v: Vec<C<T>> = (0..m).map(|i| h[(k + 1 + i, k)]).collect();
        let norm_x = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm_x <= tiny {
            continue;
        }
        let phase = if v[0].is_zero() { C::one() } else { v[0] / C::new(v[0].norm(), T::zero()) };
        let alpha = -phase * C::new(norm_x, T::zero());
        v[0] = v[0] - alpha;
        let vnorm_sqr: T = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sqr <= tiny {
            continue;
        }
        let tau = T::of(2.0) / vnorm_sqr;

        // Two-sided application P h P on the trailing block plus column k.
        for j in k..n {
            let mut s: C<T> = C::zero();
            for (i, vi) in v.iter().enumerate() {
                s = s + vi.conj() * h[(k + 1 + i, j)];
            }
            s = s * C::new(tau, T::zero());
            for (i, vi) in v.iter().enumerate() {
                let upd = s * *vi;
                h[(k + 1 + i, j)] = h[(k + 1 + i, j)] - upd;
            }
        }
        for i in 0..n {
            let mut s: C<T> = C::zero();
            for (j, vj) in v.iter().enumerate() {
                s = s + h[(i, k + 1 + j)] * *vj;
            }
            s = s * C::new(tau, T::zero());
            for (j, vj) in v.iter().enumerate() {
                let upd = s * vj.conj();
                h[(i, k + 1 + j)] = h[(i, k + 1 + j)] - upd;
            }
        }
        for i in 0..n {
            let mut s: C<T> = C::zero();
            for (j, vj) in v.iter().enumerate() {
                s = s + q[(i, k + 1 + j)] * *vj;
            }
            s = s * C::new(tau, T::zero());
            for (j, vj) in v.iter().enumerate() {
                let upd = s * vj.conj();
                q[(i, k + 1 + j)] = q[(i, k + 1 + j)] - upd;
            }
        }
        h[(k + 1, k)] = alpha;
        h[(k, k + 1)] = alpha.conj();
        for i in k + 2..n {
            h[(i, k)] = C::zero();
            h[(k, i)] = C::zero();
        }
    }

    // Absorb subdiagonal phases into a diagonal unitary so the tridiagonal
    // matrix becomes real symmetric.
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    let mut u = vec![C::<T>::one(); n];
    for j in 0..n {
        d[j] = h[(j, j)].re;
    }
    for j in 0..n.saturating_sub(1) {
        let ej = h[(j + 1, j)];
        let mag = ej.norm();
        e[j] = mag;
        u[j + 1] = if mag <= tiny { u[j] } else { ej * u[j] / C::new(mag, T::zero()) };
    }
    for j in 0..n {
        if (u[j] - C::one()).norm() > T::zero() {
            for i in 0..n {
                q[(i, j)] = q[(i, j)] * u[j];
            }
        }
    }
    (d, e, q)
}

/// Implicit-shift QL iteration on a real symmetric tridiagonal matrix,
/// rotating the complex columns of `z` along.
fn ql_implicit<T: Real>(d: &mut [T], e: &mut [T], z: &mut ComplexMatrix<T>) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let hypot = |a: T, b: T| (a * a + b * b).sqrt();
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::NonConvergence { iterations: iter });
            }
            let mut g = (d[l + 1] - d[l]) / (T::of(2.0) * e[l]);
            let mut r = hypot(g, T::one());
            let denom = g + if g >= T::zero() { r.abs() } else { -r.abs() };
            g = d[m] - d[l] + e[l] / denom;
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r.is_zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + T::of(2.0) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..z.rows() {
                    let zf = z[(k, i + 1)];
                    let zi = z[(k, i)];
                    z[(k, i + 1)] = zi * C::new(s, T::zero()) + zf * C::new(c, T::zero());
                    z[(k, i)] = zi * C::new(c, T::zero()) - zf * C::new(s, T::zero());
                }
            }
            if underflow {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::re;
    use std::f64::consts::PI;

    fn c(r: f64, i: f64) -> C<f64> {
        C::new(r, i)
    }

    fn check_decomposition(m: &ComplexMatrix<f64>, tol: f64) {
        let (vals, vecs) = eig_hermitian(m).unwrap();
        let n = m.rows();
        // V^H V = I
        let defect = vecs.adjoint().matmul(&vecs).sub(&ComplexMatrix::identity(n)).norm_max();
        assert!(defect < 1e-12, "orthonormality defect {defect}");
        // M V = V diag
        for j in 0..n {
            let col = vecs.col(j);
            let mv = m.matvec(&col);
            for i in 0..n {
                assert!((mv[i] - col[i] * re(vals[j])).norm() < tol);
            }
        }
        // ascending
        for w in vals.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn symmetric_dimer_eigenvalues() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
            vec![c(-1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let (vals, _) = eig_hermitian(&m).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
        check_decomposition(&m, 1e-13);
    }

    #[test]
    fn diagonal_matrix_sorted() {
        let m = ComplexMatrix::from_rows(&[
            vec![re(3.0), C::zero(), C::zero()],
            vec![C::zero(), re(1.0), C::zero()],
            vec![C::zero(), C::zero(), re(2.0)],
        ])
        .unwrap();
        let (vals, _) = eig_hermitian(&m).unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn periodic_ring_matches_circulant_spectrum() {
        // N=8 ring with hopping -kappa: eigenvalues -2 cos(2 pi n / 8).
        let n = 8;
        let kappa = 1.0;
        let mut m = ComplexMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            m[(i, (i + 1) % n)] = re(-kappa);
            m[((i + 1) % n, i)] = re(-kappa);
        }
        let (vals, _) = eig_hermitian(&m).unwrap();
        let mut expected: Vec<f64> =
            (1..=n).map(|k| -2.0 * kappa * (2.0 * PI * k as f64 / n as f64).cos()).collect();
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (v, ex) in vals.iter().zip(&expected) {
            assert!((v - ex).abs() < 1e-13, "{v} vs {ex}");
        }
        check_decomposition(&m, 1e-12);
    }

    #[test]
    fn complex_hermitian_with_phases() {
        let m = ComplexMatrix::from_rows(&[
            vec![re(1.0), c(0.3, 0.7), c(0.0, -0.2)],
            vec![c(0.3, -0.7), re(-0.5), c(1.1, 0.4)],
            vec![c(0.0, 0.2), c(1.1, -0.4), re(0.25)],
        ])
        .unwrap();
        check_decomposition(&m, 1e-12);
    }

    #[test]
    fn non_hermitian_matrix_rejected() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.05), c(-0.1, 0.0)],
            vec![c(-0.1, 0.0), c(0.0, -0.05)],
        ])
        .unwrap();
        match eig_hermitian(&m) {
            Err(Error::NotHermitian { .. }) => {}
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn trace_equals_eigenvalue_sum() {
        let m = ComplexMatrix::from_rows(&[
            vec![re(0.4), c(0.1, 0.9), c(-0.3, 0.0), c(0.0, 0.5)],
            vec![c(0.1, -0.9), re(-1.2), c(0.6, 0.1), c(0.2, 0.0)],
            vec![c(-0.3, 0.0), c(0.6, -0.1), re(2.0), c(0.0, -0.8)],
            vec![c(0.0, -0.5), c(0.2, 0.0), c(0.0, 0.8), re(0.1)],
        ])
        .unwrap();
        let (vals, _) = eig_hermitian(&m).unwrap();
        let sum: f64 = vals.iter().sum();
        assert!((sum - m.trace().re).abs() < 1e-12);
    }
}
