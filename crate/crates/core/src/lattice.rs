//! Declarative network descriptions and Hamiltonian assembly.
//!
//! A network is `N` copies of one cluster (so all clusters share a single
//! hopping matrix and differ only by a real scale factor), joined by
//! couplings that act identically on every site index of a cluster pair.
//! That site-uniformity is what lets the cluster mode structure commute
//! with the inter-cluster hopping, and it is baked into the types: a
//! coupling is a single scalar per cluster pair, so non-uniform couplings
//! are unrepresentable.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{ComplexMatrix, LinearOp};
use crate::scalar::{im, re, Real, C};

/// Internal hopping structure of one cluster. No Hermiticity is required;
/// the interesting regime is a non-Hermitian matrix with a real spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec<T: Real> {
    pub hopping: ComplexMatrix<T>,
}

impl<T: Real> ClusterSpec<T> {
    pub fn new(hopping: ComplexMatrix<T>) -> Result<Self> {
        if !hopping.is_square() || hopping.rows() == 0 {
            return Err(Error::invalid("cluster hopping matrix must be square and non-empty"));
        }
        hopping.check_finite()?;
        Ok(ClusterSpec { hopping })
    }

    /// Number of sites in the cluster.
    pub fn dim(&self) -> usize {
        self.hopping.rows()
    }

    pub fn is_hermitian(&self) -> bool {
        let scale = self.hopping.norm_one().max(T::min_positive_value());
        self.hopping.hermiticity_defect() <= T::tol(1e-12) * scale
    }
}

/// Hermitian coupling between clusters `a` and `b` (1-based, `a < b`):
/// every site `l` of cluster `a` hops to site `l` of cluster `b` with the
/// same amplitude `strength` (and conjugate back).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coupling<T> {
    pub a: usize,
    pub b: usize,
    pub strength: C<T>,
}

/// A full network: `n_clusters` isomorphic clusters with per-cluster real
/// scale factors and a set of pairwise couplings. Pairs absent from
/// `couplings` are uncoupled, which is also how boundary conditions are
/// expressed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec<T: Real> {
    pub cluster: ClusterSpec<T>,
    pub n_clusters: usize,
    pub scale: Vec<T>,
    pub couplings: Vec<Coupling<T>>,
}

/// Validation summary for a [`NetworkSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkReport {
    pub n_clusters: usize,
    pub cluster_dim: usize,
    pub total_dim: usize,
    pub n_couplings: usize,
    /// Informational: a Hermitian cluster makes the whole network Hermitian.
    pub cluster_hermitian: bool,
}

/// PT-symmetric two-leg ladder: `n` rungs, each a gain/loss dimer with rung
/// hopping `j` and imaginary potential `+-i gamma`, legs coupled by `kappa`
/// with periodic boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderSpec<T> {
    pub n: usize,
    pub j: T,
    pub gamma: T,
    pub kappa: T,
}

impl<T: Real> LadderSpec<T> {
    /// Mode angle `theta = arcsin(gamma / j)`, defined only below the
    /// exceptional point `gamma = j`.
    pub fn theta(&self) -> Result<T> {
        self.check_regime()?;
        Ok((self.gamma / self.j).asin())
    }

    /// Half band splitting `delta = sqrt(j^2 - gamma^2)`.
    pub fn delta(&self) -> Result<T> {
        self.check_regime()?;
        Ok((self.j * self.j - self.gamma * self.gamma).sqrt())
    }

    /// Breathing period `pi / delta`.
    pub fn period(&self) -> Result<T> {
        Ok(T::PI() / self.delta()?)
    }

    fn check_regime(&self) -> Result<()> {
        if !(self.j.is_finite() && self.gamma.is_finite() && self.kappa.is_finite()) {
            return Err(Error::invalid("ladder parameters must be finite"));
        }
        if self.gamma < T::zero() {
            return Err(Error::invalid("gamma must be >= 0"));
        }
        if self.gamma >= self.j {
            return Err(Error::ExceptionalPoint {
                gamma: self.gamma.to_f64().unwrap_or(f64::NAN),
                j: self.j.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }
}

/// Expand a ladder description into the general network form: dimer
/// clusters `[[i gamma, -j], [-j, -i gamma]]`, unit scale factors, and a
/// periodic ring of `-kappa` couplings. For `n = 2` the chain link and the
/// ring closure hit the same pair and merge into a single `-2 kappa` entry.
pub fn build_ladder<T: Real>(spec: &LadderSpec<T>) -> Result<NetworkSpec<T>> {
    if spec.n < 2 {
        return Err(Error::invalid("ladder needs at least 2 rungs"));
    }
    spec.check_regime()?;
    let g = im::<T>() * C::new(spec.gamma, T::zero());
    let hop = re(-spec.j);
    let cluster = ClusterSpec::new(ComplexMatrix::from_rows(&[
        vec![g, hop],
        vec![hop, -g],
    ])?)?;

    let k = re(-spec.kappa);
    let couplings = if spec.n == 2 {
        vec![Coupling { a: 1, b: 2, strength: k + k }]
    } else {
        let mut list: Vec<Coupling<T>> =
            (1..spec.n).map(|a| Coupling { a, b: a + 1, strength: k }).collect();
        list.push(Coupling { a: 1, b: spec.n, strength: k });
        list
    };

    Ok(NetworkSpec {
        cluster,
        n_clusters: spec.n,
        scale: vec![T::one(); spec.n],
        couplings,
    })
}

/// Structural validation of a network description.
pub fn validate_network<T: Real>(spec: &NetworkSpec<T>) -> Result<NetworkReport> {
    if spec.n_clusters == 0 {
        return Err(Error::invalid("network needs at least one cluster"));
    }
    spec.cluster.hopping.check_finite()?;
    if !spec.cluster.hopping.is_square() || spec.cluster.dim() == 0 {
        return Err(Error::invalid("cluster hopping matrix must be square and non-empty"));
    }
    if spec.scale.len() != spec.n_clusters {
        return Err(Error::invalid(format!(
            "{} scale factors for {} clusters",
            spec.scale.len(),
            spec.n_clusters
        )));
    }
    if !spec.scale.iter().all(|s| s.is_finite()) {
        return Err(Error::invalid("scale factors must be real and finite"));
    }
    let mut seen = std::collections::BTreeSet::new();
    for c in &spec.couplings {
        if c.a == 0 || c.b == 0 || c.a > spec.n_clusters || c.b > spec.n_clusters {
            return Err(Error::MalformedCoupling {
                a: c.a,
                b: c.b,
                reason: "cluster index out of range (indices are 1-based)",
            });
        }
        if c.a >= c.b {
            return Err(Error::MalformedCoupling {
                a: c.a,
                b: c.b,
                reason: "pairs must satisfy a < b (no self-couplings)",
            });
        }
        if !seen.insert((c.a, c.b)) {
            return Err(Error::MalformedCoupling { a: c.a, b: c.b, reason: "duplicate pair" });
        }
        if !(c.strength.re.is_finite() && c.strength.im.is_finite()) {
            return Err(Error::MalformedCoupling {
                a: c.a,
                b: c.b,
                reason: "coupling strength must be finite",
            });
        }
    }
    Ok(NetworkReport {
        n_clusters: spec.n_clusters,
        cluster_dim: spec.cluster.dim(),
        total_dim: spec.n_clusters * spec.cluster.dim(),
        n_couplings: spec.couplings.len(),
        cluster_hermitian: spec.cluster.is_hermitian(),
    })
}

/// Assemble the dense single-particle Hamiltonian: diagonal blocks are the
/// scaled cluster matrix, coupled blocks are `strength * I` (conjugate on
/// the transposed block), everything else zero.
pub fn assemble_hamiltonian<T: Real>(spec: &NetworkSpec<T>) -> Result<ComplexMatrix<T>> {
    validate_network(spec)?;
    let nd = spec.cluster.dim();
    let dim = spec.n_clusters * nd;
    let mut h = ComplexMatrix::zeros(dim, dim);
    for alpha in 0..spec.n_clusters {
        let lam = re(spec.scale[alpha]);
        for i in 0..nd {
            for j in 0..nd {
                h[(alpha * nd + i, alpha * nd + j)] = lam * spec.cluster.hopping[(i, j)];
            }
        }
    }
    for c in &spec.couplings {
        let (a, b) = (c.a - 1, c.b - 1);
        for l in 0..nd {
            h[(a * nd + l, b * nd + l)] = c.strength;
            h[(b * nd + l, a * nd + l)] = c.strength.conj();
        }
    }
    Ok(h)
}

impl<T: Real> NetworkSpec<T> {
    pub fn cluster_dim(&self) -> usize {
        self.cluster.dim()
    }

    pub fn total_dim(&self) -> usize {
        self.n_clusters * self.cluster.dim()
    }

    /// Matrix-free view of this network's Hamiltonian.
    pub fn hamiltonian_op(&self) -> NetworkHamiltonian<'_, T> {
        NetworkHamiltonian { spec: self }
    }
}

/// Matrix-free Hamiltonian action exploiting the block structure; one
/// application costs `O(N Nd^2 + couplings * Nd)` instead of `O((N Nd)^2)`.
pub struct NetworkHamiltonian<'a, T: Real> {
    spec: &'a NetworkSpec<T>,
}

impl<T: Real> LinearOp<T> for NetworkHamiltonian<'_, T> {
    fn dim(&self) -> usize {
        self.spec.total_dim()
    }

    fn apply(&self, x: &[C<T>], y: &mut [C<T>]) {
        let nd = self.spec.cluster.dim();
        let hop = &self.spec.cluster.hopping;
        for (alpha, lam) in self.spec.scale.iter().enumerate() {
            let xa = &x[alpha * nd..(alpha + 1) * nd];
            let ya = &mut y[alpha * nd..(alpha + 1) * nd];
            let lam = re(*lam);
            for (l, yl) in ya.iter_mut().enumerate() {
                let mut acc = C::zero();
                for (m, &xm) in xa.iter().enumerate() {
                    acc = acc + hop[(l, m)] * xm;
                }
                *yl = lam * acc;
            }
        }
        for c in &self.spec.couplings {
            let (a, b) = (c.a - 1, c.b - 1);
            for l in 0..nd {
                let xb = x[b * nd + l];
                let xa = x[a * nd + l];
                y[a * nd + l] = y[a * nd + l] + c.strength * xb;
                y[b * nd + l] = y[b * nd + l] + c.strength.conj() * xa;
            }
        }
    }

    fn norm_one(&self) -> T {
        // Column sums decompose exactly over the block structure.
        let nd = self.spec.cluster.dim();
        let mut col_extra = vec![T::zero(); self.spec.n_clusters];
        for c in &self.spec.couplings {
            let k = c.strength.norm();
            col_extra[c.a - 1] = col_extra[c.a - 1] + k;
            col_extra[c.b - 1] = col_extra[c.b - 1] + k;
        }
        let mut hop_col = vec![T::zero(); nd];
        for i in 0..nd {
            for (j, s) in hop_col.iter_mut().enumerate() {
                *s = *s + self.spec.cluster.hopping[(i, j)].norm();
            }
        }
        let max_hop_col = hop_col.into_iter().fold(T::zero(), T::max);
        (0..self.spec.n_clusters)
            .map(|a| self.spec.scale[a].abs() * max_hop_col + col_extra[a])
            .fold(T::zero(), T::max)
    }
}
