//! Time propagation of state vectors under `i d/dt psi = H psi`.
//!
//! Two independent routes: classical fourth-order Runge-Kutta on a
//! matrix-vector product (which may be matrix-free), and the dense matrix
//! exponential. Every dynamics result in this crate can be cross-checked
//! between them.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::numeric::expm::expm;
use crate::numeric::matrix::{ComplexMatrix, StateVector};
use crate::scalar::{im, Real, C};

/// Hard stability bound: RK4 steps with `|H| dt` above this are rejected.
pub const MAX_NORM_DT: f64 = 0.5;

/// Default step target `|H| dt` for RK4 when no step is supplied; small
/// enough that accumulated error stays below 1e-8 over the time horizons
/// used throughout the crate.
pub const DEFAULT_NORM_DT: f64 = 0.01;

/// Linear operator acting on complex amplitude vectors; implemented both by
/// dense matrices and by structured (matrix-free) Hamiltonians.
pub trait LinearOp<T: Real> {
    fn dim(&self) -> usize;
    /// `y = M x`.
    fn apply(&self, x: &[C<T>], y: &mut [C<T>]);
    /// Operator 1-norm (or a tight upper bound), used for step control.
    fn norm_one(&self) -> T;
}

impl<T: Real> LinearOp<T> for ComplexMatrix<T> {
    fn dim(&self) -> usize {
        self.rows()
    }

    fn apply(&self, x: &[C<T>], y: &mut [C<T>]) {
        self.matvec_into(x, y);
    }

    fn norm_one(&self) -> T {
        ComplexMatrix::norm_one(self)
    }
}

/// Propagation method for [`propagate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagateMethod {
    /// Fixed-step fourth-order Runge-Kutta.
    Rk4,
    /// Dense scaling-and-squaring matrix exponential of `-i H t`.
    Expm,
}

/// Evolve `psi0` to time `t` under the Hamiltonian `h`.
///
/// For [`PropagateMethod::Rk4`] the supplied `dt` is an upper bound on the
/// step; the interval is divided evenly so the last step is never ragged.
/// Steps with `|H| dt > 0.5` are rejected as unstable.
pub fn propagate<T: Real>(
    h: &ComplexMatrix<T>,
    psi0: &StateVector<T>,
    t: T,
    method: PropagateMethod,
    dt: T,
) -> Result<StateVector<T>> {
    if !h.is_square() || h.rows() != psi0.dim() {
        return Err(Error::invalid(format!(
            "Hamiltonian shape {}x{} does not match state dimension {}",
            h.rows(),
            h.cols(),
            psi0.dim()
        )));
    }
    if t < T::zero() || !t.is_finite() {
        return Err(Error::invalid("propagation time must be finite and >= 0"));
    }
    match method {
        PropagateMethod::Rk4 => {
            if dt <= T::zero() || !dt.is_finite() {
                return Err(Error::invalid("rk4 requires dt > 0"));
            }
            let norm_dt = ComplexMatrix::norm_one(h) * dt;
            if norm_dt > T::of(MAX_NORM_DT) {
                return Err(Error::StepTooLarge {
                    norm_dt: norm_dt.to_f64().unwrap_or(f64::NAN),
                });
            }
            let mut amps = psi0.amplitudes().to_vec();
            rk4_interval(h, &mut amps, t, dt)?;
            StateVector::new(psi0.cluster_dim(), amps)
        }
        PropagateMethod::Expm => {
            let generator = h.scale(-im::<T>() * C::new(t, T::zero()));
            let u = expm(&generator)?;
            let out = u.matvec(psi0.amplitudes());
            if !out.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::Overflow);
            }
            StateVector::new(psi0.cluster_dim(), out)
        }
    }
}

/// Advance `amps` by `t` with RK4 steps of at most `dt_max`, in place.
pub fn rk4_interval<T: Real>(
    op: &impl LinearOp<T>,
    amps: &mut [C<T>],
    t: T,
    dt_max: T,
) -> Result<()> {
    if t.is_zero() {
        return Ok(());
    }
    let steps = (t / dt_max).ceil().to_usize().unwrap_or(1).max(1);
    let h = t / T::of(steps as f64);
    let mut scratch = Rk4Scratch::new(op.dim());
    for _ in 0..steps {
        scratch.step(op, amps, h);
    }
    if amps.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::Overflow)
    }
}

/// Preallocated RK4 work buffers for the generator `-i H`.
pub struct Rk4Scratch<T> {
    k1: Vec<C<T>>,
    k2: Vec<C<T>>,
    k3: Vec<C<T>>,
    k4: Vec<C<T>>,
    tmp: Vec<C<T>>,
}

impl<T: Real> Rk4Scratch<T> {
    pub fn new(dim: usize) -> Self {
        let z = vec![C::zero(); dim];
        Rk4Scratch { k1: z.clone(), k2: z.clone(), k3: z.clone(), k4: z.clone(), tmp: z }
    }

    /// One RK4 step of size `h` for `d psi/dt = -i H psi`, in place.
    pub fn step(&mut self, op: &impl LinearOp<T>, y: &mut [C<T>], h: T) {
        let half = h * T::of(0.5);
        let sixth = h / T::of(6.0);

        apply_generator(op, y, &mut self.k1);
        axpy(&mut self.tmp, y, &self.k1, half);
        apply_generator(op, &self.tmp, &mut self.k2);
        axpy(&mut self.tmp, y, &self.k2, half);
        apply_generator(op, &self.tmp, &mut self.k3);
        axpy(&mut self.tmp, y, &self.k3, h);
        apply_generator(op, &self.tmp, &mut self.k4);

        for i in 0..y.len() {
            let two = T::of(2.0);
            let incr = self.k1[i]
                + self.k2[i] * C::new(two, T::zero())
                + self.k3[i] * C::new(two, T::zero())
                + self.k4[i];
            y[i] = y[i] + incr * C::new(sixth, T::zero());
        }
    }
}

/// `out = -i (op x)`.
fn apply_generator<T: Real>(op: &impl LinearOp<T>, x: &[C<T>], out: &mut [C<T>]) {
    op.apply(x, out);
    for z in out.iter_mut() {
        *z = C::new(z.im, -z.re);
    }
}

/// `out = y + a * k`.
fn axpy<T: Real>(out: &mut [C<T>], y: &[C<T>], k: &[C<T>], a: T) {
    let a = C::new(a, T::zero());
    for ((o, &yi), &ki) in out.iter_mut().zip(y).zip(k) {
        *o = yi + ki * a;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::re;
    use num_traits::One;
    use std::f64::consts::FRAC_PI_2;

    fn c(r: f64, i: f64) -> C<f64> {
        C::new(r, i)
    }

    fn xx_coupling() -> ComplexMatrix<f64> {
        ComplexMatrix::from_rows(&[
            vec![C::zero(), re(-1.0)],
            vec![re(-1.0), C::zero()],
        ])
        .unwrap()
    }

    #[test]
    fn zero_hamiltonian_leaves_state_unchanged() {
        let h = ComplexMatrix::<f64>::zeros(3, 3);
        let psi = StateVector::new(3, vec![c(0.3, 0.1), c(0.0, -0.7), c(0.5, 0.5)]).unwrap();
        for method in [PropagateMethod::Rk4, PropagateMethod::Expm] {
            let out = propagate(&h, &psi, 2.5, method, 0.1).unwrap();
            assert!(out.max_diff(&psi) < 1e-13);
        }
    }

    #[test]
    fn two_level_quarter_period_rotation() {
        // e^{-iHt}(1,0) = (cos t, i sin t) for H = -sigma_x; at t = pi/2: (0, i).
        let h = xx_coupling();
        let psi = StateVector::new(1, vec![C::one(), C::zero()]).unwrap();
        for method in [PropagateMethod::Rk4, PropagateMethod::Expm] {
            let out = propagate(&h, &psi, FRAC_PI_2, method, 1e-3).unwrap();
            assert!((out.amplitudes()[0] - C::zero()).norm() < 1e-9);
            assert!((out.amplitudes()[1] - c(0.0, 1.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn rk4_rejects_unstable_step() {
        let h = xx_coupling();
        let psi = StateVector::new(1, vec![C::one(), C::zero()]).unwrap();
        match propagate(&h, &psi, 1.0, PropagateMethod::Rk4, 1.0) {
            Err(Error::StepTooLarge { .. }) => {}
            other => panic!("expected StepTooLarge, got {other:?}"),
        }
    }

    #[test]
    fn rk4_halving_dt_gains_a_factor_of_at_least_eight() {
        // Richardson check against the expm reference.
        let h = ComplexMatrix::from_rows(&[
            vec![c(0.2, 0.3), c(-0.4, 0.1)],
            vec![c(-0.4, -0.1), c(-0.6, -0.3)],
        ])
        .unwrap();
        let psi = StateVector::new(1, vec![c(0.8, 0.0), c(0.0, 0.6)]).unwrap();
        let t = 1.0;
        let reference = propagate(&h, &psi, t, PropagateMethod::Expm, 0.0).unwrap();
        let coarse = propagate(&h, &psi, t, PropagateMethod::Rk4, 0.25).unwrap();
        let fine = propagate(&h, &psi, t, PropagateMethod::Rk4, 0.125).unwrap();
        let err_coarse = coarse.max_diff(&reference);
        let err_fine = fine.max_diff(&reference);
        assert!(
            err_coarse / err_fine >= 8.0,
            "order check failed: coarse {err_coarse:.3e}, fine {err_fine:.3e}"
        );
    }

    #[test]
    fn hermitian_rk4_preserves_norm() {
        let h = ComplexMatrix::from_rows(&[
            vec![re(0.5), c(0.3, 0.4)],
            vec![c(0.3, -0.4), re(-0.2)],
        ])
        .unwrap();
        let psi = StateVector::new(1, vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let dt = DEFAULT_NORM_DT / ComplexMatrix::norm_one(&h);
        let out = propagate(&h, &psi, 1.0, PropagateMethod::Rk4, dt).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn semigroup_within_tolerance() {
        let h = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.05), c(-0.1, 0.0)],
            vec![c(-0.1, 0.0), c(0.0, -0.05)],
        ])
        .unwrap();
        let psi = StateVector::new(2, vec![c(1.0, 0.0), C::zero()]).unwrap().normalized();
        let dt = 1e-3;
        let (t1, t2) = (0.7, 1.9);
        let direct = propagate(&h, &psi, t1 + t2, PropagateMethod::Rk4, dt).unwrap();
        let mid = propagate(&h, &psi, t1, PropagateMethod::Rk4, dt).unwrap();
        let chained = propagate(&h, &mid, t2, PropagateMethod::Rk4, dt).unwrap();
        assert!(direct.max_diff(&chained) < 1e-9);
    }
}
