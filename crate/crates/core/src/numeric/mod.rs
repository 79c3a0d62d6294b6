//! Complex dense linear algebra, eigensolvers, and propagation kernels.

mod eigen;
mod expm;
mod hermitian;
mod linsolve;
mod matrix;
mod propagate;

pub use eigen::{eig_general_small, residuals, schur, EigenPair, MAX_GENERAL_DIM};
pub use expm::expm;
pub use hermitian::eig_hermitian;
pub use linsolve::{inverse, LuFactors};
pub use matrix::{ComplexMatrix, StateVector};
pub use propagate::{
    propagate, rk4_interval, LinearOp, PropagateMethod, Rk4Scratch, DEFAULT_NORM_DT, MAX_NORM_DT,
};
