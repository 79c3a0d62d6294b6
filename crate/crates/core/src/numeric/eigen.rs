//! Dense eigensolver for small general complex matrices.
//!
//! Reduction to upper Hessenberg form by unitary Householder reflections,
//! followed by a single-shift (Wilkinson) QR iteration in complex arithmetic
//! down to triangular Schur form. Right and left eigenvectors are recovered
//! from the triangular factor by substitution, so the same decomposition
//! serves both sides of a biorthogonal pair.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::matrix::ComplexMatrix;
use crate::scalar::{Real, C};

/// Largest matrix dimension accepted by [`eig_general_small`].
pub const MAX_GENERAL_DIM: usize = 32;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 40;

/// One eigenvalue with unit-norm right and left eigenvectors.
///
/// `M v = value * v` and `M^H w = conj(value) * w`; both vectors have unit
/// Euclidean norm, so `|w^H v|` directly measures how far the pair is from
/// an exceptional point (1 for a normal matrix, 0 for a defective one).
#[derive(Debug, Clone)]
pub struct EigenPair<T> {
    pub value: C<T>,
    pub right: Vec<C<T>>,
    pub left: Vec<C<T>>,
}

impl<T: Real> EigenPair<T> {
    /// Overlap `w^H v` between the left and right vectors.
    pub fn overlap(&self) -> C<T> {
        self.left
            .iter()
            .zip(&self.right)
            .fold(C::zero(), |acc, (w, v)| acc + w.conj() * v)
    }
}

/// Unitary similarity to upper Hessenberg form: `A = Q H Q^H`.
fn hessenberg<T: Real>(a: &ComplexMatrix<T>) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    for k in 0..n - 2 {
        // Householder vector eliminating column k below the subdiagonal.
        let m = n - k - 1;
        let mut v: Vec<C<T>> = (0..m).map(|i| h[(k + 1 + i, k)]).collect();
        let norm_x = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm_x <= T::min_positive_value() * T::of(16.0) {
            continue;
        }
        let phase = if v[0].is_zero() { C::one() } else { v[0] / C::new(v[0].norm(), T::zero()) };
        let alpha = -phase * C::new(norm_x, T::zero());
        v[0] = v[0] - alpha;
        let vnorm_sqr: T = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sqr <= T::min_positive_value() * T::of(16.0) {
            continue;
        }
        let tau = T::of(2.0) / vnorm_sqr;

        // Left application P H on rows k+1.. (columns k..n).
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
        // Right application H P on columns k+1.. (all rows).
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
        // Accumulate Q P.
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
        // Clean the eliminated entries exactly.
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = C::zero();
        }
    }
    (h, q)
}

/// Complex Givens rotation `[c s; -conj(s) c]` (c real) with
/// `R [a; b] = [r; 0]`.
fn givens<T: Real>(a: C<T>, b: C<T>) -> (T, C<T>) {
    let scale = a.norm() + b.norm();
    if scale.is_zero() {
        return (T::one(), C::zero());
    }
    let mag = ((a / C::new(scale, T::zero())).norm_sqr()
        + (b / C::new(scale, T::zero())).norm_sqr())
    .sqrt()
        * scale;
    if a.is_zero() {
        (T::zero(), b.conj() / C::new(b.norm(), T::zero()))
    } else {
        let c = a.norm() / mag;
        let s = (a / C::new(a.norm(), T::zero())) * b.conj() / C::new(mag, T::zero());
        (c, s)
    }
}

/// Eigenvalue of the trailing 2x2 block closest to its lower-right entry.
fn wilkinson_shift<T: Real>(a: C<T>, b: C<T>, c: C<T>, d: C<T>) -> C<T> {
    let two = C::new(T::of(2.0), T::zero());
    let mean = (a + d) / two;
    let diff = (a - d) / two;
    let disc = (diff * diff + b * c).sqrt();
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Schur decomposition `A = Q T Q^H` with `T` upper triangular.
///
/// Returns `(t, q)`; fails with [`Error::NonConvergence`] if the QR
/// iteration exhausts its sweep budget.
pub fn schur<T: Real>(a: &ComplexMatrix<T>) -> Result<(ComplexMatrix<T>, ComplexMatrix<T>)> {
    let n = a.rows();
    let (mut h, mut q) = hessenberg(a);
    if n <= 1 {
        return Ok((h, q));
    }
    let budget = MAX_SWEEPS_PER_EIGENVALUE * n;
    let mut total_sweeps = 0usize;
    let mut stalled = 0usize;
    let norm_scale = h.norm_one().max(T::min_positive_value());

    let negligible = |h: &ComplexMatrix<T>, i: usize| -> bool {
        let s = h[(i - 1, i - 1)].norm() + h[(i, i)].norm();
        let s = if s.is_zero() { norm_scale } else { s };
        h[(i, i - 1)].norm() <= T::epsilon() * s
    };

    let mut hi = n - 1;
    while hi > 0 {
        // Deflate converged trailing eigenvalues and find the active block.
        if negligible(&h, hi) {
            h[(hi, hi - 1)] = C::zero();
            hi -= 1;
            stalled = 0;
            continue;
        }
        let mut lo = hi;
        while lo > 0 && !negligible(&h, lo) {
            lo -= 1;
        }
        if lo > 0 {
            h[(lo, lo - 1)] = C::zero();
        }

        if total_sweeps >= budget {
            return Err(Error::NonConvergence { iterations: total_sweeps });
        }
        total_sweeps += 1;
        stalled += 1;

        let shift = if stalled % 10 == 0 {
            // Exceptional shift to break symmetric stalls.
            h[(hi, hi)] + C::new(T::of(0.75) * h[(hi, hi - 1)].norm(), T::zero())
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        // Explicit-shift QR step on the active block.
        for i in lo..=hi {
            h[(i, i)] = h[(i, i)] - shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let (c, s) = givens(h[(i, i)], h[(i + 1, i)]);
            rotations.push((c, s));
            // Rotate rows i, i+1 over columns i..n.
            for j in i..n {
                let x = h[(i, j)];
                let y = h[(i + 1, j)];
                h[(i, j)] = x * C::new(c, T::zero()) + s * y;
                h[(i + 1, j)] = y * C::new(c, T::zero()) - s.conj() * x;
            }
            h[(i + 1, i)] = C::zero();
        }
        for (idx, &(c, s)) in rotations.iter().enumerate() {
            let i = lo + idx;
            // Rotate columns i, i+1 over rows 0..=i+1 (RQ step).
            for r in 0..=i + 1 {
                let x = h[(r, i)];
                let y = h[(r, i + 1)];
                h[(r, i)] = x * C::new(c, T::zero()) + y * s.conj();
                h[(r, i + 1)] = y * C::new(c, T::zero()) - x * s;
            }
            for r in 0..n {
                let x = q[(r, i)];
                let y = q[(r, i + 1)];
                q[(r, i)] = x * C::new(c, T::zero()) + y * s.conj();
                q[(r, i + 1)] = y * C::new(c, T::zero()) - x * s;
            }
        }
        for i in lo..=hi {
            h[(i, i)] = h[(i, i)] + shift;
        }
    }
    Ok((h, q))
}

/// Right eigenvector of triangular `t` for the eigenvalue at position `j`,
/// by back substitution with a small-divisor guard.
fn triangular_right<T: Real>(t: &ComplexMatrix<T>, j: usize, floor: T) -> Vec<C<T>> {
    let n = t.rows();
    let lambda = t[(j, j)];
    let mut x = vec![C::zero(); n];
    x[j] = C::one();
    for i in (0..j).rev() {
        let mut s: C<T> = C::zero();
        for m in i + 1..=j {
            s = s + t[(i, m)] * x[m];
        }
        let mut d = t[(i, i)] - lambda;
        if d.norm() < floor {
            d = C::new(floor, T::zero());
        }
        x[i] = -s / d;
    }
    x
}

/// Left eigenvector of triangular `t` (i.e. eigenvector of `t^H`) for the
/// eigenvalue at position `j`, by forward substitution.
fn triangular_left<T: Real>(t: &ComplexMatrix<T>, j: usize, floor: T) -> Vec<C<T>> {
    let n = t.rows();
    let lambda_conj = t[(j, j)].conj();
    let mut y = vec![C::zero(); n];
    y[j] = C::one();
    for i in j + 1..n {
        let mut s: C<T> = C::zero();
        for m in j..i {
            s = s + t[(m, i)].conj() * y[m];
        }
        let mut d = t[(i, i)].conj() - lambda_conj;
        if d.norm() < floor {
            d = C::new(floor, T::zero());
        }
        y[i] = -s / d;
    }
    y
}

fn unit_normalize<T: Real>(v: &mut [C<T>]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let inv = C::new(T::one() / norm, T::zero());
    for z in v.iter_mut() {
        *z = *z * inv;
    }
}

/// Full eigendecomposition of a small general complex matrix.
///
/// Returns the complete set of eigenpairs sorted ascending by real part
/// (ties broken by imaginary part). Right and left vectors are unit norm.
///
/// `tol` bounds the smallest acceptable left-right overlap `|w^H v|` of any
/// pair; overlaps below it indicate a defective matrix (exceptional point)
/// and produce [`Error::Defective`].
pub fn eig_general_small<T: Real>(
    m: &ComplexMatrix<T>,
    tol: T,
) -> Result<Vec<EigenPair<T>>> {
    if !m.is_square() {
        return Err(Error::invalid("eigendecomposition requires a square matrix"));
    }
    let n = m.rows();
    if n == 0 {
        return Err(Error::invalid("empty matrix"));
    }
    if n > MAX_GENERAL_DIM {
        return Err(Error::invalid(format!(
            "dimension {n} exceeds the small-matrix limit {MAX_GENERAL_DIM}"
        )));
    }
    m.check_finite()?;

    let (t, q) = schur(m)?;
    let scale = t.norm_one().max(T::min_positive_value());
    let floor = T::epsilon() * scale;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (za, zb) = (t[(a, a)], t[(b, b)]);
        za.re.partial_cmp(&zb.re).unwrap().then(za.im.partial_cmp(&zb.im).unwrap())
    });

    let mut pairs = Vec::with_capacity(n);
    for &j in &order {
        let x = triangular_right(&t, j, floor);
        let y = triangular_left(&t, j, floor);
        let mut right = q.matvec(&x);
        let mut left = q.matvec(&y);
        unit_normalize(&mut right);
        unit_normalize(&mut left);
        let pair = EigenPair { value: t[(j, j)], right, left };
        let overlap = pair.overlap().norm();
        if overlap < tol {
            return Err(Error::Defective {
                overlap: overlap.to_f64().unwrap_or(f64::NAN),
                tol: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        pairs.push(pair);
    }

    // Contract: residuals must sit at the tight end of the tolerance budget.
    let resid_tol = T::tol(1e-12) * scale;
    for p in &pairs {
        let (r_res, l_res) = residuals(m, p);
        if r_res > resid_tol || l_res > resid_tol {
            return Err(Error::NonConvergence { iterations: MAX_SWEEPS_PER_EIGENVALUE * n });
        }
    }
    Ok(pairs)
}

/// Residual norms `(|Mv - lambda v|, |M^H w - conj(lambda) w|)`.
pub fn residuals<T: Real>(m: &ComplexMatrix<T>, pair: &EigenPair<T>) -> (T, T) {
    let mv = m.matvec(&pair.right);
    let r_res = mv
        .iter()
        .zip(&pair.right)
        .map(|(a, v)| (*a - pair.value * *v).norm_sqr())
        .sum::<T>()
        .sqrt();
    let mhw = m.adjoint().matvec(&pair.left);
    let l_res = mhw
        .iter()
        .zip(&pair.left)
        .map(|(a, w)| (*a - pair.value.conj() * *w).norm_sqr())
        .sum::<T>()
        .sqrt();
    (r_res, l_res)
}
