//! Biorthogonal cluster eigenmodes and the per-mode Hermitian block
//! decomposition of a network.
//!
//! A cluster with a real spectrum carries paired right modes `f_sigma` and
//! left modes `g_sigma` with `g^H f = delta`. Because every cluster is a
//! copy of the same one and the couplings act uniformly on sites, the whole
//! network Hamiltonian splits over the mode index into Hermitian
//! cluster-indexed blocks `h_sigma` — even though the site-basis matrix is
//! not Hermitian. Everything measurable about the non-Hermiticity is then
//! captured by the mode Gram matrices (overlaps of the non-orthogonal
//! modes) and the metric factors on their diagonal.
//!
//! Normalization convention: right modes keep the scale handed over by the
//! eigensolver (unit Euclidean norm on the numeric path; the closed dimer
//! form on the analytic path), left modes are rescaled so `g^H f = 1`, and
//! the joint phase is fixed by making the largest-magnitude component of
//! each `f_sigma` real positive. Gram and metric values quoted anywhere
//! assume the convention of the modes they came from; only projectors
//! `f g^H` are convention-free.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{validate_network, ClusterSpec, NetworkSpec};
use crate::numeric::{eig_general_small, ComplexMatrix, LuFactors, StateVector};
use crate::scalar::{im, re, Real, C};

/// Paired right/left eigenmodes of one cluster with real eigenvalues.
///
/// Column `sigma` of `f` (`g`) holds the right (left) mode; eigenvalues are
/// ascending. `theta` is set only by the analytic dimer path.
#[derive(Debug, Clone)]
pub struct BiorthoModes<T: Real> {
    epsilon: Vec<T>,
    f: ComplexMatrix<T>,
    g: ComplexMatrix<T>,
    theta: Option<T>,
}

impl<T: Real> BiorthoModes<T> {
    /// Assemble a mode set, enforcing biorthonormality `G^H F = I` and
    /// completeness `F G^H = I`.
    pub fn new(
        epsilon: Vec<T>,
        f: ComplexMatrix<T>,
        g: ComplexMatrix<T>,
        theta: Option<T>,
    ) -> Result<Self> {
        let nd = epsilon.len();
        if f.rows() != nd || f.cols() != nd || g.rows() != nd || g.cols() != nd {
            return Err(Error::invalid("mode matrices must be square of the cluster dimension"));
        }
        if !epsilon.iter().all(|e| e.is_finite()) {
            return Err(Error::invalid("mode eigenvalues must be finite"));
        }
        let tol = T::tol(1e-10);
        let id = ComplexMatrix::identity(nd);
        let bi_defect = g.adjoint().matmul(&f).sub(&id).norm_max();
        if bi_defect > tol {
            return Err(Error::invalid(format!(
                "modes are not biorthonormal: |G^H F - I| = {:e}",
                bi_defect.to_f64().unwrap_or(f64::NAN)
            )));
        }
        let complete_defect = f.matmul(&g.adjoint()).sub(&id).norm_max();
        if complete_defect > tol {
            return Err(Error::invalid(format!(
                "modes are not complete: |F G^H - I| = {:e}",
                complete_defect.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(BiorthoModes { epsilon, f, g, theta })
    }

    pub fn dim(&self) -> usize {
        self.epsilon.len()
    }

    /// Real cluster eigenvalues, ascending.
    pub fn epsilon(&self) -> &[T] {
        &self.epsilon
    }

    /// Right-mode coefficient matrix (column per mode).
    pub fn right(&self) -> &ComplexMatrix<T> {
        &self.f
    }

    /// Left-mode coefficient matrix (column per mode).
    pub fn left(&self) -> &ComplexMatrix<T> {
        &self.g
    }

    /// Dimer mode angle, where this mode set came from the analytic path.
    pub fn theta(&self) -> Option<T> {
        self.theta
    }

    pub fn right_mode(&self, sigma: usize) -> Vec<C<T>> {
        self.f.col(sigma)
    }

    pub fn left_mode(&self, sigma: usize) -> Vec<C<T>> {
        self.g.col(sigma)
    }

    /// Convention-invariant projector `f_sigma g_sigma^H` onto one mode.
    pub fn projector(&self, sigma: usize) -> ComplexMatrix<T> {
        let nd = self.dim();
        let f = self.right_mode(sigma);
        let g = self.left_mode(sigma);
        let mut p = ComplexMatrix::zeros(nd, nd);
        for i in 0..nd {
            for j in 0..nd {
                p[(i, j)] = f[i] * g[j].conj();
            }
        }
        p
    }
}

/// Gram matrices of the mode overlaps in the measurable inner product.
///
/// `d_f[(s', s)] = sum_l f_{l s} conj(f_{l s'})` and
/// `d_g[(s, s')] = sum_l conj(g_{l s}) g_{l s'}`; both Hermitian positive
/// definite, and both the identity exactly when the cluster is normal.
#[derive(Debug, Clone)]
pub struct GramMatrices<T: Real> {
    pub d_f: ComplexMatrix<T>,
    pub d_g: ComplexMatrix<T>,
}

/// Per-mode Hermitian cluster-index blocks of the network Hamiltonian:
/// `blocks[sigma]` has diagonal `scale[alpha] * epsilon[sigma]` and the
/// coupling constants off-diagonal.
#[derive(Debug, Clone)]
pub struct ModeBlocks<T: Real> {
    pub blocks: Vec<ComplexMatrix<T>>,
}

/// Numeric biorthogonal modes of a cluster in the real-spectrum regime.
///
/// `tol` is the relative realness certificate: the decomposition is
/// rejected with [`Error::ComplexSpectrum`] if any eigenvalue has
/// `|Im| > tol * |J|_1`. Exceptional points surface as
/// [`Error::Defective`] from the underlying eigensolver.
pub fn cluster_modes_numeric<T: Real>(
    cluster: &ClusterSpec<T>,
    tol: T,
) -> Result<BiorthoModes<T>> {
    let nd = cluster.dim();
    let scale = cluster.hopping.norm_one().max(T::min_positive_value());
    let pairs = eig_general_small(&cluster.hopping, T::tol(1e-8))?;

    let max_imag = pairs.iter().map(|p| p.value.im.abs()).fold(T::zero(), T::max);
    if max_imag > tol * scale {
        return Err(Error::ComplexSpectrum {
            max_imag: max_imag.to_f64().unwrap_or(f64::NAN),
            tol: (tol * scale).to_f64().unwrap_or(f64::NAN),
        });
    }

    let mut f = ComplexMatrix::zeros(nd, nd);
    let mut g = ComplexMatrix::zeros(nd, nd);
    let mut epsilon = Vec::with_capacity(nd);
    for (sigma, pair) in pairs.iter().enumerate() {
        epsilon.push(pair.value.re);
        // Phase convention: largest-magnitude component of f real positive.
        let (m, _) = pair
            .right
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
            .unwrap();
        let fm = pair.right[m];
        let phase = if fm.is_zero() { C::one() } else { fm.conj() / C::new(fm.norm(), T::zero()) };
        let right: Vec<C<T>> = pair.right.iter().map(|&z| z * phase).collect();
        // Left mode rescaled so g^H f = 1.
        let overlap =
            pair.left.iter().zip(&right).fold(C::<T>::zero(), |acc, (w, v)| acc + w.conj() * v);
        let left: Vec<C<T>> = pair.left.iter().map(|&z| z / overlap.conj()).collect();
        for l in 0..nd {
            f[(l, sigma)] = right[l];
            g[(l, sigma)] = left[l];
        }
    }

    // Polish cross-mode biorthogonality (exact-degeneracy subspaces pair up
    // arbitrarily in the raw eigendecomposition): G <- G (G^H F)^{-H}.
    let m = g.adjoint().matmul(&f);
    let y = LuFactors::new(&m)?.solve_mat(&g.adjoint());
    let g = y.adjoint();

    BiorthoModes::new(epsilon, f, g, None)
}

/// Closed-form modes of the gain/loss dimer `[[i gamma, -j], [-j, -i gamma]]`.
///
/// With `theta = arcsin(gamma/j)` and `delta = sqrt(j^2 - gamma^2)`, the
/// right modes are `f_{1,s} = e^{i s theta/2} / sqrt(2 cos theta)` and
/// `f_{2,s} = -s e^{-i s theta/2} / sqrt(2 cos theta)` for `s = +-1`, the
/// eigenvalues are `s delta`, and the left modes are the entrywise
/// conjugates (which already satisfy `g^H f = 1` in this normalization).
pub fn dimer_modes_analytic<T: Real>(j: T, gamma: T) -> Result<BiorthoModes<T>> {
    if !(j.is_finite() && gamma.is_finite()) || gamma < T::zero() {
        return Err(Error::invalid("dimer parameters must be finite with gamma >= 0"));
    }
    if gamma >= j {
        return Err(Error::ExceptionalPoint {
            gamma: gamma.to_f64().unwrap_or(f64::NAN),
            j: j.to_f64().unwrap_or(f64::NAN),
        });
    }
    let theta = (gamma / j).asin();
    let delta = (j * j - gamma * gamma).sqrt();
    let norm = (T::of(2.0) * theta.cos()).sqrt();
    let half = theta / T::of(2.0);
    let phase = |s: T| (im::<T>() * C::new(s * half, T::zero())).exp();

    let mut f = ComplexMatrix::zeros(2, 2);
    for (col, s) in [(0usize, -T::one()), (1usize, T::one())] {
        f[(0, col)] = phase(s) / C::new(norm, T::zero());
        f[(1, col)] = -C::new(s, T::zero()) * phase(-s) / C::new(norm, T::zero());
    }
    let mut g = ComplexMatrix::zeros(2, 2);
    for i in 0..2 {
        for col in 0..2 {
            g[(i, col)] = f[(i, col)].conj();
        }
    }
    BiorthoModes::new(vec![-delta, delta], f, g, Some(theta))
}

/// Mode Gram matrices in the measurable inner product.
pub fn dirac_gram<T: Real>(modes: &BiorthoModes<T>) -> GramMatrices<T> {
    GramMatrices {
        d_f: modes.right().adjoint().matmul(modes.right()),
        d_g: modes.left().adjoint().matmul(modes.left()),
    }
}

/// Metric factor of mode `sigma`: the measurable norm `sum_l |f_{l sigma}|^2`
/// of one lifted mode, equal to the corresponding Gram diagonal.
pub fn metric_factor<T: Real>(modes: &BiorthoModes<T>, sigma: usize) -> T {
    assert!(sigma < modes.dim(), "mode index out of range");
    modes.right_mode(sigma).iter().map(|z| z.norm_sqr()).sum()
}

/// Hermitian cluster-index block for every mode.
pub fn mode_block_hamiltonians<T: Real>(
    spec: &NetworkSpec<T>,
    modes: &BiorthoModes<T>,
) -> Result<ModeBlocks<T>> {
    validate_network(spec)?;
    if modes.dim() != spec.cluster_dim() {
        return Err(Error::invalid("mode set does not match the cluster dimension"));
    }
    let n = spec.n_clusters;
    let mut blocks = Vec::with_capacity(modes.dim());
    for &eps in modes.epsilon() {
        let mut h = ComplexMatrix::zeros(n, n);
        for (alpha, &lam) in spec.scale.iter().enumerate() {
            h[(alpha, alpha)] = re(lam * eps);
        }
        for cpl in &spec.couplings {
            h[(cpl.a - 1, cpl.b - 1)] = cpl.strength;
            h[(cpl.b - 1, cpl.a - 1)] = cpl.strength.conj();
        }
        blocks.push(h);
    }
    Ok(ModeBlocks { blocks })
}

/// State built from a single mode: amplitudes
/// `psi_{(alpha, l)} = c_alpha f_{l sigma}`. The cluster coefficients must
/// carry unit weight; the resulting measurable norm is then exactly the
/// metric factor.
pub fn lift_mode_state<T: Real>(
    spec: &NetworkSpec<T>,
    modes: &BiorthoModes<T>,
    sigma: usize,
    c: &[C<T>],
) -> Result<StateVector<T>> {
    if c.len() != spec.n_clusters {
        return Err(Error::invalid(format!(
            "{} cluster coefficients for {} clusters",
            c.len(),
            spec.n_clusters
        )));
    }
    if sigma >= modes.dim() || modes.dim() != spec.cluster_dim() {
        return Err(Error::invalid("mode index out of range for this network"));
    }
    let total: T = c.iter().map(|z| z.norm_sqr()).sum();
    let tol = T::tol(1e-10);
    if (total - T::one()).abs() > tol {
        return Err(Error::NotNormalized {
            total: total.to_f64().unwrap_or(f64::NAN),
            tol: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    let nd = spec.cluster_dim();
    let fcol = modes.right_mode(sigma);
    let mut psi = StateVector::zeros(spec.n_clusters, nd);
    for (alpha, &ca) in c.iter().enumerate() {
        for l in 0..nd {
            *psi.amp_mut(alpha, l) = ca * fcol[l];
        }
    }
    Ok(psi)
}

/// Biorthogonal coefficients of an arbitrary state:
/// `coeffs[(alpha, sigma)] = sum_l conj(g_{l sigma}) psi_{(alpha, l)}`.
///
/// Together with [`synthesize_state`] this is an exact round trip.
pub fn project_biortho<T: Real>(
    spec: &NetworkSpec<T>,
    modes: &BiorthoModes<T>,
    psi: &StateVector<T>,
) -> Result<ComplexMatrix<T>> {
    if psi.dim() != spec.total_dim() || psi.cluster_dim() != spec.cluster_dim() {
        return Err(Error::invalid("state dimension does not match the network"));
    }
    if modes.dim() != spec.cluster_dim() {
        return Err(Error::invalid("mode set does not match the cluster dimension"));
    }
    let nd = spec.cluster_dim();
    let mut coeffs = ComplexMatrix::zeros(spec.n_clusters, nd);
    for alpha in 0..spec.n_clusters {
        for sigma in 0..nd {
            let mut acc = C::<T>::zero();
            for l in 0..nd {
                acc = acc + modes.left()[(l, sigma)].conj() * psi.amp(alpha, l);
            }
            coeffs[(alpha, sigma)] = acc;
        }
    }
    Ok(coeffs)
}

/// Rebuild a state from its biorthogonal coefficients:
/// `psi_{(alpha, l)} = sum_sigma coeffs[(alpha, sigma)] f_{l sigma}`.
pub fn synthesize_state<T: Real>(
    spec: &NetworkSpec<T>,
    modes: &BiorthoModes<T>,
    coeffs: &ComplexMatrix<T>,
) -> Result<StateVector<T>> {
    if coeffs.rows() != spec.n_clusters || coeffs.cols() != spec.cluster_dim() {
        return Err(Error::invalid("coefficient shape does not match the network"));
    }
    let nd = spec.cluster_dim();
    let mut psi = StateVector::zeros(spec.n_clusters, nd);
    for alpha in 0..spec.n_clusters {
        for l in 0..nd {
            let mut acc = C::<T>::zero();
            for sigma in 0..nd {
                acc = acc + coeffs[(alpha, sigma)] * modes.right()[(l, sigma)];
            }
            *psi.amp_mut(alpha, l) = acc;
        }
    }
    Ok(psi)
}
