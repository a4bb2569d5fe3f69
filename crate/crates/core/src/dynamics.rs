//! Time evolution of covariance matrices under a coupling model.
//!
//! The generator is time-independent and quadratic, so the propagator is
//! computed exactly from the spectral decomposition of the (symmetric)
//! potential matrix rather than by ODE stepping. Under the rotating wave
//! approximation (`T = V = O D O^T`) the phase-space propagator is
//!
//! ```text
//! S(t) = [[ O cos(Dt) O^T,  O sin(Dt) O^T ],
//!         [-O sin(Dt) O^T,  O cos(Dt) O^T ]]
//! ```
//!
//! which is symplectic for every `t`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::gaussian::CovarianceMatrix;
use crate::topology::CouplingModel;

/// Symplectic phase-space propagator to a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    t: f64,
    s: DMatrix<f64>,
}

impl Propagator {
    pub fn time(&self) -> f64 {
        self.t
    }

    /// The `2n x 2n` propagator matrix.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn n_modes(&self) -> usize {
        self.s.nrows() / 2
    }

    /// Max-norm of `S sigma S^T - sigma`; ~1e-14 for healthy propagators.
    pub fn symplectic_defect(&self) -> f64 {
        let n = self.n_modes();
        let sigma = crate::gaussian::SymplecticForm::new(n)
            .expect("propagator has at least one mode")
            .matrix();
        (&self.s * &sigma * self.s.transpose() - sigma).amax()
    }
}

/// Eigenmodes of a model's potential matrix, reusable across time points.
#[derive(Debug, Clone)]
pub struct ModeDecomposition {
    basis: DMatrix<f64>,
    frequencies: DVector<f64>,
}

impl ModeDecomposition {
    /// Symmetric eigendecomposition `V = O D O^T`.
    pub fn new(model: &CouplingModel) -> Result<Self> {
        let eig = model.potential().clone().symmetric_eigen();
        let residual =
            (&eig.eigenvectors * DMatrix::from_diagonal(&eig.eigenvalues) * eig.eigenvectors.transpose()
                - model.potential())
            .amax();
        let scale = model.potential().amax().max(1.0);
        if !residual.is_finite() || residual > 1e-9 * scale {
            return Err(Error::numerical(format!(
                "eigendecomposition residual {residual:.3e} too large"
            )));
        }
        Ok(Self {
            basis: eig.eigenvectors,
            frequencies: eig.eigenvalues,
        })
    }

    pub fn frequencies(&self) -> &DVector<f64> {
        &self.frequencies
    }

    /// Assemble the propagator at time `t`.
    pub fn propagator_at(&self, t: f64) -> Result<Propagator> {
        if !(t >= 0.0) {
            return Err(Error::invalid(format!("time must be >= 0, got {t}")));
        }
        let n = self.frequencies.len();
        let cos_d = DMatrix::from_diagonal(&self.frequencies.map(|d| (d * t).cos()));
        let sin_d = DMatrix::from_diagonal(&self.frequencies.map(|d| (d * t).sin()));
        let cos_block = &self.basis * cos_d * self.basis.transpose();
        let sin_block = &self.basis * sin_d * self.basis.transpose();
        let mut s = DMatrix::zeros(2 * n, 2 * n);
        s.view_mut((0, 0), (n, n)).copy_from(&cos_block);
        s.view_mut((0, n), (n, n)).copy_from(&sin_block);
        s.view_mut((n, 0), (n, n)).copy_from(&(-&sin_block));
        s.view_mut((n, n), (n, n)).copy_from(&cos_block);
        Ok(Propagator { t, s })
    }
}

/// Propagator of a model at time `t >= 0`.
pub fn propagator_at(model: &CouplingModel, t: f64) -> Result<Propagator> {
    ModeDecomposition::new(model)?.propagator_at(t)
}

/// Advance a covariance matrix: `Gamma(t) = S Gamma(0) S^T`, symmetrized to
/// absorb 1e-15-scale floating-point asymmetry.
pub fn evolve(gamma0: &CovarianceMatrix, model: &CouplingModel, t: f64) -> Result<CovarianceMatrix> {
    if gamma0.n_modes() != model.n_modes() {
        return Err(Error::invalid(format!(
            "dimension mismatch: state has {} modes, model has {}",
            gamma0.n_modes(),
            model.n_modes()
        )));
    }
    let s = propagator_at(model, t)?;
    apply_propagator(gamma0, &s)
}

/// Apply a prebuilt propagator to a state.
pub fn apply_propagator(gamma0: &CovarianceMatrix, s: &Propagator) -> Result<CovarianceMatrix> {
    if gamma0.n_modes() != s.n_modes() {
        return Err(Error::invalid(format!(
            "dimension mismatch: state has {} modes, propagator has {}",
            gamma0.n_modes(),
            s.n_modes()
        )));
    }
    let m = s.matrix() * gamma0.matrix() * s.matrix().transpose();
    let sym = (&m + m.transpose()) * 0.5;
    CovarianceMatrix::new(sym)
}

/// States at each grid time. Every element is computed from a fresh
/// propagator at its absolute time, so no step-chaining error accumulates
/// and grid points are independent of one another.
pub fn time_series(
    gamma0: &CovarianceMatrix,
    model: &CouplingModel,
    t_grid: &[f64],
) -> Result<Vec<CovarianceMatrix>> {
    if t_grid.is_empty() {
        return Err(Error::invalid("time grid must be non-empty"));
    }
    if t_grid[0] < 0.0 {
        return Err(Error::invalid("time grid must be non-negative"));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("time grid must be strictly increasing"));
    }
    if gamma0.n_modes() != model.n_modes() {
        return Err(Error::invalid(format!(
            "dimension mismatch: state has {} modes, model has {}",
            gamma0.n_modes(),
            model.n_modes()
        )));
    }
    let modes = ModeDecomposition::new(model)?;
    t_grid
        .iter()
        .map(|&t| apply_propagator(gamma0, &modes.propagator_at(t)?))
        .collect()
}

/// Mean energy above the vacuum, `(1/4) tr(V (G_qq - I) + T (G_pp - I))`.
/// Conserved by the dynamics.
pub fn mean_energy(model: &CouplingModel, gamma: &CovarianceMatrix) -> Result<f64> {
    if gamma.n_modes() != model.n_modes() {
        return Err(Error::invalid("dimension mismatch in mean_energy"));
    }
    let n = model.n_modes();
    let v = model.potential();
    let t = model.kinetic();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += v[(i, j)] * (gamma.qq(j, i) - if i == j { 1.0 } else { 0.0 });
            total += t[(i, j)] * (gamma.pp(j, i) - if i == j { 1.0 } else { 0.0 });
        }
    }
    Ok(total / 4.0)
}
