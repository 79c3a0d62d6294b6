//! Time evolution of network states and Dirac-norm observables.
//!
//! Three routes to `psi(t) = e^{-iHt} psi(0)`:
//! - `Rk4`: fixed-step integration against the matrix-free block action;
//! - `Expm`: dense matrix exponential of the assembled Hamiltonian,
//!   stepping sample to sample (repeated intervals reuse one exponential);
//! - `Spectral`: project onto cluster modes, evolve each Hermitian mode
//!   block by its eigendecomposition, and resynthesize.
//!
//! The first two know nothing about the mode structure, so agreement with
//! the spectral route is an end-to-end check of the whole decomposition.

use std::collections::HashMap;



use crate::biortho::{
    cluster_modes_numeric, mode_block_hamiltonians, project_biortho, synthesize_state,
    BiorthoModes,
};
use crate::error::{Error, Result};
use crate::lattice::{assemble_hamiltonian, validate_network, NetworkSpec};
use crate::numeric::{
    eig_hermitian, expm, rk4_interval, ComplexMatrix, LinearOp, StateVector, DEFAULT_NORM_DT,
    MAX_NORM_DT,
};
use crate::scalar::{im, Real, C};

/// Relative tolerance used to certify a real cluster spectrum on the
/// spectral path.
const SPECTRUM_REALNESS_TOL: f64 = 1e-10;

/// Evolution method selector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvolveMethod<T> {
    /// Runge-Kutta with an optional step bound; defaults to
    /// `|H| dt = 0.01`.
    Rk4 { dt: Option<T> },
    /// Dense matrix exponential per sample interval.
    Expm,
    /// Mode-block eigendecomposition.
    Spectral,
}

/// Sampled trajectory: times, states, measurable norms, and per-leg site
/// probability profiles `profiles[sample][l][alpha]`.
#[derive(Debug, Clone)]
pub struct EvolutionResult<T: Real> {
    pub times: Vec<T>,
    pub states: Vec<StateVector<T>>,
    pub dirac_norm: Vec<T>,
    pub profiles: Vec<Vec<Vec<T>>>,
}

/// Leg-resolved probability profile of a ladder state.
#[derive(Debug, Clone)]
pub struct LegProfiles<T> {
    pub leg1: Vec<T>,
    pub leg2: Vec<T>,
}

/// Leg-summed norm series of a ladder evolution.
#[derive(Debug, Clone)]
pub struct NormSeries<T> {
    pub leg1: Vec<T>,
    pub leg2: Vec<T>,
    pub total: Vec<T>,
}

/// Single-mode propagator `U(t) = e^{-i h_sigma t}` over cluster indices.
#[derive(Debug, Clone)]
pub struct PropagatorMatrix<T: Real> {
    pub matrix: ComplexMatrix<T>,
}

impl<T: Real> PropagatorMatrix<T> {
    /// `|U^H U - I|_inf`; zero for an exactly unitary propagator.
    pub fn unitarity_defect(&self) -> T {
        let n = self.matrix.rows();
        self.matrix
            .adjoint()
            .matmul(&self.matrix)
            .sub(&ComplexMatrix::identity(n))
            .norm_inf()
    }
}

/// Uniform sample grid `0..=t_max` with `samples` points.
pub fn uniform_grid<T: Real>(t_max: T, samples: usize) -> Vec<T> {
    assert!(samples >= 1);
    if samples == 1 {
        return vec![T::zero()];
    }
    (0..samples).map(|i| t_max * T::of(i as f64) / T::of((samples - 1) as f64)).collect()
}

/// Measurable (Dirac) norm: the plain sum of squared amplitude magnitudes.
pub fn dirac_norm<T: Real>(psi: &StateVector<T>) -> T {
    psi.norm_sqr()
}

/// Per-leg probability profile of a two-site-cluster (ladder) state.
pub fn site_profile<T: Real>(
    psi: &StateVector<T>,
    spec: &NetworkSpec<T>,
) -> Result<LegProfiles<T>> {
    if spec.cluster_dim() != 2 {
        return Err(Error::WrongShape { cluster_dim: spec.cluster_dim() });
    }
    if psi.dim() != spec.total_dim() {
        return Err(Error::invalid("state dimension does not match the network"));
    }
    let n = spec.n_clusters;
    Ok(LegProfiles {
        leg1: (0..n).map(|a| psi.amp(a, 0).norm_sqr()).collect(),
        leg2: (0..n).map(|a| psi.amp(a, 1).norm_sqr()).collect(),
    })
}

/// Leg sums and total norm per sample of a ladder evolution.
pub fn norm_series<T: Real>(result: &EvolutionResult<T>) -> Result<NormSeries<T>> {
    let mut leg1 = Vec::with_capacity(result.times.len());
    let mut leg2 = Vec::with_capacity(result.times.len());
    let mut total = Vec::with_capacity(result.times.len());
    for profile in &result.profiles {
        if profile.len() != 2 {
            return Err(Error::WrongShape { cluster_dim: profile.len() });
        }
        let p1: T = profile[0].iter().copied().sum();
        let p2: T = profile[1].iter().copied().sum();
        leg1.push(p1);
        leg2.push(p2);
        total.push(p1 + p2);
    }
    Ok(NormSeries { leg1, leg2, total })
}

fn check_grid<T: Real>(t_grid: &[T]) -> Result<()> {
    if t_grid.is_empty() {
        return Err(Error::invalid("time grid must not be empty"));
    }
    if !t_grid[0].is_zero() {
        return Err(Error::invalid("time grid must start at 0"));
    }
    if !t_grid.iter().all(|t| t.is_finite()) {
        return Err(Error::invalid("time grid must be finite"));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("time grid must be strictly ascending"));
    }
    Ok(())
}

/// Evolve a state over a sample grid.
///
/// The grid must start at 0 and ascend strictly; `states[i]` approximates
/// `e^{-i H t_i} psi0` (and `states[0]` is `psi0` exactly).
pub fn evolve<T: Real>(
    spec: &NetworkSpec<T>,
    psi0: &StateVector<T>,
    t_grid: &[T],
    method: EvolveMethod<T>,
) -> Result<EvolutionResult<T>> {
    validate_network(spec)?;
    check_grid(t_grid)?;
    if psi0.dim() != spec.total_dim() || psi0.cluster_dim() != spec.cluster_dim() {
        return Err(Error::invalid("initial state does not match the network shape"));
    }

    let states = match method {
        EvolveMethod::Rk4 { dt } => evolve_rk4(spec, psi0, t_grid, dt)?,
        EvolveMethod::Expm => evolve_expm(spec, psi0, t_grid)?,
        EvolveMethod::Spectral => evolve_spectral(spec, psi0, t_grid)?,
    };

    let nd = spec.cluster_dim();
    let n = spec.n_clusters;
    let mut dirac = Vec::with_capacity(states.len());
    let mut profiles = Vec::with_capacity(states.len());
    for s in &states {
        if !s.is_finite() {
            return Err(Error::Overflow);
        }
        dirac.push(s.norm_sqr());
        let per_leg: Vec<Vec<T>> =
            (0..nd).map(|l| (0..n).map(|a| s.amp(a, l).norm_sqr()).collect()).collect();
        profiles.push(per_leg);
    }
    Ok(EvolutionResult { times: t_grid.to_vec(), states, dirac_norm: dirac, profiles })
}

fn evolve_rk4<T: Real>(
    spec: &NetworkSpec<T>,
    psi0: &StateVector<T>,
    t_grid: &[T],
    dt: Option<T>,
) -> Result<Vec<StateVector<T>>> {
    let op = spec.hamiltonian_op();
    let norm = LinearOp::norm_one(&op).max(T::min_positive_value());
    let dt = dt.unwrap_or(T::of(DEFAULT_NORM_DT) / norm);
    if dt <= T::zero() || !dt.is_finite() {
        return Err(Error::invalid("rk4 requires dt > 0"));
    }
    if norm * dt > T::of(MAX_NORM_DT) {
        return Err(Error::StepTooLarge { norm_dt: (norm * dt).to_f64().unwrap_or(f64::NAN) });
    }
    let mut amps = psi0.amplitudes().to_vec();
    let mut out = Vec::with_capacity(t_grid.len());
    out.push(psi0.clone());
    for w in t_grid.windows(2) {
        rk4_interval(&op, &mut amps, w[1] - w[0], dt)?;
        out.push(StateVector::new(spec.cluster_dim(), amps.clone())?);
    }
    Ok(out)
}

fn evolve_expm<T: Real>(
    spec: &NetworkSpec<T>,
    psi0: &StateVector<T>,
    t_grid: &[T],
) -> Result<Vec<StateVector<T>>> {
    let h = assemble_hamiltonian(spec)?;
    let mut step_cache: HashMap<u64, ComplexMatrix<T>> = HashMap::new();
    let mut amps = psi0.amplitudes().to_vec();
    let mut out = Vec::with_capacity(t_grid.len());
    out.push(psi0.clone());
    for w in t_grid.windows(2) {
        let step = w[1] - w[0];
        let key = step.to_f64().unwrap_or(f64::NAN).to_bits();
        let u = match step_cache.get(&key) {
            Some(u) => u,
            None => {
                let generator = h.scale(-im::<T>() * C::new(step, T::zero()));
                step_cache.insert(key, expm(&generator)?);
                &step_cache[&key]
            }
        };
        amps = u.matvec(&amps);
        out.push(StateVector::new(spec.cluster_dim(), amps.clone())?);
    }
    Ok(out)
}

fn evolve_spectral<T: Real>(
    spec: &NetworkSpec<T>,
    psi0: &StateVector<T>,
    t_grid: &[T],
) -> Result<Vec<StateVector<T>>> {
    let (modes, bands) = spectral_data(spec)?;
    let coeffs0 = project_biortho(spec, &modes, psi0)?;
    let n = spec.n_clusters;
    let nd = spec.cluster_dim();

    // Rotate each mode's coefficients into its block eigenbasis once.
    let mut rotated: Vec<Vec<C<T>>> = Vec::with_capacity(nd);
    for (sigma, band) in bands.iter().enumerate() {
        let c_sigma = coeffs0.col(sigma);
        rotated.push(band.vectors.adjoint().matvec(&c_sigma));
    }

    let mut out = Vec::with_capacity(t_grid.len());
    out.push(psi0.clone());
    for &t in &t_grid[1..] {
        let mut coeffs_t = ComplexMatrix::zeros(n, nd);
        for (sigma, band) in bands.iter().enumerate() {
            let phased: Vec<C<T>> = rotated[sigma]
                .iter()
                .zip(&band.values)
                .map(|(&d, &w)| d * (-im::<T>() * C::new(w * t, T::zero())).exp())
                .collect();
            let c_t = band.vectors.matvec(&phased);
            for alpha in 0..n {
                coeffs_t[(alpha, sigma)] = c_t[alpha];
            }
        }
        out.push(synthesize_state(spec, &modes, &coeffs_t)?);
    }
    Ok(out)
}

struct BandEigen<T: Real> {
    values: Vec<T>,
    vectors: ComplexMatrix<T>,
}

fn spectral_data<T: Real>(spec: &NetworkSpec<T>) -> Result<(BiorthoModes<T>, Vec<BandEigen<T>>)> {
    let modes = cluster_modes_numeric(&spec.cluster, T::tol(SPECTRUM_REALNESS_TOL))
        .map_err(spectral_unavailable)?;
    let blocks = mode_block_hamiltonians(spec, &modes)?;
    let mut bands = Vec::with_capacity(blocks.blocks.len());
    for block in &blocks.blocks {
        let (values, vectors) = eig_hermitian(block).map_err(spectral_unavailable)?;
        bands.push(BandEigen { values, vectors });
    }
    Ok((modes, bands))
}

fn spectral_unavailable(e: Error) -> Error {
    match e {
        Error::Defective { .. } | Error::ComplexSpectrum { .. } => {
            Error::SpectralUnavailable { reason: e.to_string() }
        }
        other => other,
    }
}

/// Propagator of one mode over cluster indices, `U(t) = e^{-i h_sigma t}`,
/// built from the mode-block eigendecomposition.
pub fn biortho_propagator<T: Real>(
    spec: &NetworkSpec<T>,
    modes: &BiorthoModes<T>,
    sigma: usize,
    t: T,
) -> Result<PropagatorMatrix<T>> {
    let blocks = mode_block_hamiltonians(spec, modes)?;
    if sigma >= blocks.blocks.len() {
        return Err(Error::invalid("mode index out of range"));
    }
    let (values, vectors) = eig_hermitian(&blocks.blocks[sigma]).map_err(spectral_unavailable)?;
    let n = spec.n_clusters;
    let mut phased = vectors.clone();
    for (j, &w) in values.iter().enumerate() {
        let phase = (-im::<T>() * C::new(w * t, T::zero())).exp();
        for i in 0..n {
            phased[(i, j)] = phased[(i, j)] * phase;
        }
    }
    Ok(PropagatorMatrix { matrix: phased.matmul(&vectors.adjoint()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biortho::{dimer_modes_analytic, lift_mode_state, metric_factor};
    use num_traits::{One, Zero};
    use crate::lattice::{build_ladder, ClusterSpec, LadderSpec};
    use std::f64::consts::{FRAC_PI_6, PI};

    fn c(r: f64, i: f64) -> C<f64> {
        C::new(r, i)
    }

    fn ladder(n: usize) -> (LadderSpec<f64>, NetworkSpec<f64>) {
        let spec = LadderSpec { n, j: 0.10, gamma: 0.05, kappa: 1.0 };
        let net = build_ladder(&spec).unwrap();
        (spec, net)
    }

    fn random_coeffs(n: usize, seed: u64) -> Vec<C<f64>> {
        // Deterministic quasi-random coefficients, normalized.
        let mut v: Vec<C<f64>> = (0..n)
            .map(|i| {
                let x = ((seed + 1) as f64 * 0.37 + i as f64 * 0.71).sin();
                let y = ((seed + 2) as f64 * 0.53 + i as f64 * 0.29).cos();
                c(x, y)
            })
            .collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z = *z / c(norm, 0.0);
        }
        v
    }

    #[test]
    fn trivial_grid_returns_initial_state() {
        let (_, net) = ladder(4);
        let psi = StateVector::site_basis(4, 2, 1, 0);
        let res = evolve(&net, &psi, &[0.0], EvolveMethod::Spectral).unwrap();
        assert_eq!(res.states.len(), 1);
        assert_eq!(res.states[0], psi);
        assert_eq!(res.dirac_norm[0], 1.0);
    }

    #[test]
    fn grid_must_start_at_zero_and_ascend() {
        let (_, net) = ladder(3);
        let psi = StateVector::site_basis(3, 2, 0, 0);
        assert!(evolve(&net, &psi, &[0.5, 1.0], EvolveMethod::Spectral).is_err());
        assert!(evolve(&net, &psi, &[0.0, 1.0, 1.0], EvolveMethod::Spectral).is_err());
        assert!(evolve(&net, &psi, &[], EvolveMethod::Spectral).is_err());
    }

    #[test]
    fn single_mode_state_keeps_its_metric_norm() {
        let (lspec, net) = ladder(12);
        let modes = dimer_modes_analytic(lspec.j, lspec.gamma).unwrap();
        let psi0 = lift_mode_state(&net, &modes, 1, &random_coeffs(12, 7)).unwrap();
        let t_d = lspec.period().unwrap();
        let grid = uniform_grid(t_d, 9);
        let sec = metric_factor(&modes, 1);
        for method in [
            EvolveMethod::Rk4 { dt: None },
            EvolveMethod::Expm,
            EvolveMethod::Spectral,
        ] {
            let res = evolve(&net, &psi0, &grid, method).unwrap();
            for (t, nrm) in res.times.iter().zip(&res.dirac_norm) {
                assert!(
                    (nrm - sec).abs() < 1e-8,
                    "norm {nrm} at t={t} deviates from {sec} ({method:?})"
                );
            }
        }
    }

    #[test]
    fn methods_agree_entrywise_on_a_two_mode_state() {
        let (lspec, net) = ladder(10);
        let modes = dimer_modes_analytic(lspec.j, lspec.gamma).unwrap();
        // Two-mode superposition: lift both modes with different coefficient
        // sets and combine.
        let a = lift_mode_state(&net, &modes, 0, &random_coeffs(10, 1)).unwrap();
        let b = lift_mode_state(&net, &modes, 1, &random_coeffs(10, 2)).unwrap();
        let mixed: Vec<C<f64>> = a
            .amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x + y) * c(0.5f64.sqrt(), 0.0))
            .collect();
        let psi0 = StateVector::new(2, mixed).unwrap();

        let t_d = lspec.period().unwrap();
        let grid = uniform_grid(t_d, 5);
        let rk4 = evolve(&net, &psi0, &grid, EvolveMethod::Rk4 { dt: None }).unwrap();
        let spectral = evolve(&net, &psi0, &grid, EvolveMethod::Spectral).unwrap();
        let exp = evolve(&net, &psi0, &grid, EvolveMethod::Expm).unwrap();
        for i in 0..grid.len() {
            assert!(rk4.states[i].max_diff(&spectral.states[i]) < 1e-8);
            assert!(exp.states[i].max_diff(&spectral.states[i]) < 1e-10);
        }
    }

    #[test]
    fn hermitian_limit_conserves_any_norm() {
        let net = build_ladder(&LadderSpec { n: 8, j: 0.3, gamma: 0.0, kappa: 1.0 }).unwrap();
        let psi0 = StateVector::new(
            2,
            (0..16).map(|i| c((0.9 * i as f64).sin(), (0.4 * i as f64).cos())).collect(),
        )
        .unwrap()
        .normalized();
        let grid = uniform_grid(8.0, 7);
        for method in [EvolveMethod::Rk4 { dt: None }, EvolveMethod::Spectral, EvolveMethod::Expm]
        {
            let res = evolve(&net, &psi0, &grid, method).unwrap();
            for nrm in &res.dirac_norm {
                assert!((nrm - 1.0).abs() < 1e-10, "{nrm} drifts under {method:?}");
            }
        }
    }

    #[test]
    fn dirac_norm_basics() {
        let zero = StateVector::<f64>::zeros(3, 2);
        assert_eq!(dirac_norm(&zero), 0.0);
        let (lspec, net) = ladder(9);
        let modes = dimer_modes_analytic(lspec.j, lspec.gamma).unwrap();
        let psi = lift_mode_state(&net, &modes, 0, &random_coeffs(9, 3)).unwrap();
        assert!((dirac_norm(&psi) - 1.0 / FRAC_PI_6.cos()).abs() < 1e-12);
    }

    #[test]
    fn site_profile_of_a_localized_mode_state() {
        let (lspec, net) = ladder(11);
        let modes = dimer_modes_analytic(lspec.j, lspec.gamma).unwrap();
        let mut coeffs = vec![C::<f64>::zero(); 11];
        coeffs[4] = C::new(1.0, 0.0);
        let psi = lift_mode_state(&net, &modes, 1, &coeffs).unwrap();
        let prof = site_profile(&psi, &net).unwrap();
        let expected = 1.0 / (2.0 * FRAC_PI_6.cos()); // |f_{l,+}|^2 = 0.577350...
        assert!((prof.leg1[4] - expected).abs() < 1e-12);
        assert!((prof.leg2[4] - expected).abs() < 1e-12);
        assert!((expected - 0.577350).abs() < 1e-6);
        for a in (0..11).filter(|&a| a != 4) {
            assert_eq!(prof.leg1[a], 0.0);
            assert_eq!(prof.leg2[a], 0.0);
        }
    }

    #[test]
    fn uniform_state_has_flat_profiles() {
        let (_, net) = ladder(10);
        let amp = 1.0 / (20.0f64).sqrt();
        let psi = StateVector::new(2, vec![c(amp, 0.0); 20]).unwrap();
        let prof = site_profile(&psi, &net).unwrap();
        for a in 0..10 {
            assert!((prof.leg1[a] - 1.0 / 20.0).abs() < 1e-15);
            assert!((prof.leg2[a] - 1.0 / 20.0).abs() < 1e-15);
        }
    }

    #[test]
    fn site_profile_requires_ladder_shape() {
        let cluster = ClusterSpec::new(ComplexMatrix::<f64>::identity(3)).unwrap();
        let spec = NetworkSpec { cluster, n_clusters: 2, scale: vec![1.0; 2], couplings: vec![] };
        let psi = StateVector::zeros(2, 3);
        match site_profile(&psi, &spec) {
            Err(Error::WrongShape { cluster_dim: 3 }) => {}
            other => panic!("expected WrongShape, got {other:?}"),
        }
    }

    #[test]
    fn norm_series_sums_to_the_dirac_norm() {
        let (lspec, net) = ladder(10);
        let modes = dimer_modes_analytic(lspec.j, lspec.gamma).unwrap();
        let a = lift_mode_state(&net, &modes, 0, &random_coeffs(10, 11)).unwrap();
        let b = lift_mode_state(&net, &modes, 1, &random_coeffs(10, 12)).unwrap();
        let psi0 = StateVector::new(
            2,
            a.amplitudes()
                .iter()
                .zip(b.amplitudes())
                .map(|(x, y)| (x + y) * c(0.5f64.sqrt(), 0.0))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let grid = uniform_grid(lspec.period().unwrap(), 6);
        let res = evolve(&net, &psi0, &grid, EvolveMethod::Spectral).unwrap();
        let series = norm_series(&res).unwrap();
        for i in 0..grid.len() {
            assert!((series.total[i] - res.dirac_norm[i]).abs() < 1e-12);
            assert!((series.leg1[i] + series.leg2[i] - series.total[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn propagator_at_zero_time_is_identity() {
        let (lspec, net) = ladder(7);
        let modes = dimer_modes_analytic(lspec.j, lspec.gamma).unwrap();
        let u = biortho_propagator(&net, &modes, 0, 0.0).unwrap();
        assert!(u.matrix.sub(&ComplexMatrix::identity(7)).norm_max() < 1e-13);
        assert!(u.unitarity_defect() < 1e-13);
    }

    #[test]
    fn three_ring_propagator_matches_closed_form() {
        let (lspec, net) = ladder(3);
        let modes = dimer_modes_analytic(lspec.j, lspec.gamma).unwrap();
        let delta = lspec.delta().unwrap();
        let t = 1.7;
        for (sigma, sign) in [(0usize, -1.0), (1usize, 1.0)] {
            let u = biortho_propagator(&net, &modes, sigma, t).unwrap();
            for beta in 0..3usize {
                for alpha in 0..3usize {
                    // Circulant exponential: (1/N) sum_k e^{ik(beta-alpha)} e^{-i eps_k t}.
                    let mut expect = C::<f64>::zero();
                    for m in 1..=3 {
                        let k = 2.0 * PI * m as f64 / 3.0;
                        let eps = -2.0 * lspec.kappa * k.cos() + sign * delta;
                        let phase = c(0.0, k * (beta as f64 - alpha as f64) - eps * t).exp();
                        expect = expect + phase / c(3.0, 0.0);
                    }
                    assert!(
                        (u.matrix[(beta, alpha)] - expect).norm() < 1e-12,
                        "mismatch at ({beta},{alpha}) for sigma {sigma}"
                    );
                }
            }
            assert!(u.unitarity_defect() < 1e-12);
        }
    }

    #[test]
    fn propagator_columns_match_direct_evolution() {
        let (lspec, net) = ladder(6);
        let modes = dimer_modes_analytic(lspec.j, lspec.gamma).unwrap();
        let t = 2.3;
        let sigma = 1;
        let u = biortho_propagator(&net, &modes, sigma, t).unwrap();
        for alpha in 0..6 {
            let mut coeffs = vec![C::<f64>::zero(); 6];
            coeffs[alpha] = C::new(1.0, 0.0);
            let psi0 = lift_mode_state(&net, &modes, sigma, &coeffs).unwrap();
            let res = evolve(&net, &psi0, &[0.0, t], EvolveMethod::Expm).unwrap();
            let projected = project_biortho(&net, &modes, &res.states[1]).unwrap();
            for beta in 0..6 {
                assert!(
                    (projected[(beta, sigma)] - u.matrix[(beta, alpha)]).norm() < 1e-10,
                    "column {alpha}, row {beta}"
                );
                // No leakage into the other mode.
                assert!(projected[(beta, 1 - sigma)].norm() < 1e-10);
            }
        }
    }

    #[test]
    fn spectral_method_unavailable_beyond_the_exceptional_point() {
        // gamma > J: complex cluster spectrum. Direct integration still
        // works; the spectral path reports itself unusable.
        let cluster = ClusterSpec::new(
            ComplexMatrix::from_rows(&[
                vec![c(0.0, 0.10), c(-0.05, 0.0)],
                vec![c(-0.05, 0.0), c(0.0, -0.10)],
            ])
            .unwrap(),
        )
        .unwrap();
        let spec = NetworkSpec {
            cluster,
            n_clusters: 3,
            scale: vec![1.0; 3],
            couplings: vec![crate::lattice::Coupling { a: 1, b: 2, strength: c(-1.0, 0.0) }],
        };
        let psi = StateVector::site_basis(3, 2, 0, 0);
        match evolve(&spec, &psi, &[0.0, 0.5], EvolveMethod::Spectral) {
            Err(Error::SpectralUnavailable { .. }) => {}
            other => panic!("expected SpectralUnavailable, got {other:?}"),
        }
        assert!(evolve(&spec, &psi, &[0.0, 0.5], EvolveMethod::Rk4 { dt: None }).is_ok());
    }

    #[test]
    fn rk4_rejects_oversized_user_step() {
        let (_, net) = ladder(4);
        let psi = StateVector::site_basis(4, 2, 0, 0);
        match evolve(&net, &psi, &[0.0, 1.0], EvolveMethod::Rk4 { dt: Some(10.0) }) {
            Err(Error::StepTooLarge { .. }) => {}
            other => panic!("expected StepTooLarge, got {other:?}"),
        }
    }
}
