//! Shared helpers for the integration suites: a generic matrix-exponential
//! oracle (independent of the library's spectral propagator), seeded random
//! models, and random Gaussian states.

// Each test target compiles its own copy and uses a different subset.
#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use oscnet::dynamics::{evolve, propagator_at};
use oscnet::gaussian::{vacuum_cov, CovarianceMatrix};
use oscnet::topology::{build_network, CouplingModel, DiagonalMode, NetworkSpec};

/// Matrix exponential by repeated squaring of a Taylor series: scale the
/// input below norm 1/2, sum the series to convergence, square back up.
/// Accuracy ~1e-13 for the moderate norms used in the tests.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    let mut norm1 = 0.0f64;
    for j in 0..n {
        let col_sum: f64 = (0..n).map(|i| a[(i, j)].abs()).sum();
        norm1 = norm1.max(col_sum);
    }
    let squarings = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a / 2.0f64.powi(squarings);
    let mut result = DMatrix::identity(n, n);
    let mut term = DMatrix::identity(n, n);
    for k in 1..=60 {
        term = &term * &scaled / k as f64;
        result += &term;
        if term.amax() < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Random positive-length chain model with randomized bonds, coupling scale
/// and diagonal convention. `n_modes >= 2`.
pub fn random_chain_model(rng: &mut ChaCha8Rng, n_modes: usize) -> CouplingModel {
    let m_in = 1 + rng.random_range(0..n_modes - 1);
    let c = rng.random_range(0.05..0.5);
    let mut spec = NetworkSpec::chain(m_in, n_modes - m_in, c);
    if rng.random_range(0..2) == 1 {
        spec = spec.with_diagonal(DiagonalMode::Cloning);
    }
    let mut model = build_network(&spec).unwrap();
    for &(i, j) in model.edges().to_vec().iter() {
        let bond = rng.random_range(0.05..0.6);
        model = model.with_bond(i, j, bond).unwrap();
    }
    model
}

/// Random symplectic matrix: a propagator sandwiched between two layers of
/// per-mode squeezers. Propagators alone are passive (orthogonal), so the
/// squeeze layers are what make the result generic.
pub fn random_symplectic(rng: &mut ChaCha8Rng, n_modes: usize) -> DMatrix<f64> {
    let model = random_chain_model(rng, n_modes);
    let t = rng.random_range(0.0..12.0);
    let s = propagator_at(&model, t).unwrap();
    let squeeze = |rng: &mut ChaCha8Rng| {
        let mut z = DMatrix::zeros(2 * n_modes, 2 * n_modes);
        for i in 0..n_modes {
            let s_i = rng.random_range(0.4..2.5);
            z[(i, i)] = s_i;
            z[(n_modes + i, n_modes + i)] = 1.0 / s_i;
        }
        z
    };
    squeeze(rng) * s.matrix() * squeeze(rng)
}

/// Random pure Gaussian state: a product of random single-mode squeezed
/// states scrambled by a random propagator.
pub fn random_pure_state(rng: &mut ChaCha8Rng, n_modes: usize) -> CovarianceMatrix {
    let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
    for i in 0..n_modes {
        let z = rng.random_range(1.0..8.0);
        m[(i, i)] = z;
        m[(n_modes + i, n_modes + i)] = 1.0 / z;
    }
    let product = CovarianceMatrix::new(m).unwrap();
    let model = random_chain_model(rng, n_modes);
    let t = rng.random_range(0.0..12.0);
    evolve(&product, &model, t).unwrap()
}

/// Random mixed Gaussian state: thermal occupations scrambled the same way.
pub fn random_mixed_state(rng: &mut ChaCha8Rng, n_modes: usize) -> CovarianceMatrix {
    let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
    for i in 0..n_modes {
        let z = rng.random_range(1.5..6.0);
        m[(i, i)] = z;
        m[(n_modes + i, n_modes + i)] = z;
    }
    let thermal = CovarianceMatrix::new(m).unwrap();
    let model = random_chain_model(rng, n_modes);
    let t = rng.random_range(0.0..12.0);
    evolve(&thermal, &model, t).unwrap()
}

/// Random physical single-mode covariance: a rotated squeezed-thermal state
/// `mu R(theta) diag(s, 1/s) R(theta)^T`.
pub fn random_single_mode(rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let mu = rng.random_range(1.0..4.0);
    let s = rng.random_range(1.0..5.0);
    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let r = nalgebra::matrix![theta.cos(), -theta.sin(); theta.sin(), theta.cos()];
    let d = nalgebra::matrix![mu * s, 0.0; 0.0, mu / s];
    DMatrix::from_fn(2, 2, |i, j| (r * d * r.transpose())[(i, j)])
}

/// Direct sum of random single-mode states, assembled in qqpp ordering.
pub fn random_product_state(rng: &mut ChaCha8Rng, n_modes: usize) -> CovarianceMatrix {
    let mut m = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for i in 0..n_modes {
        let g = random_single_mode(rng);
        m[(i, i)] = g[(0, 0)];
        m[(i, n_modes + i)] = g[(0, 1)];
        m[(n_modes + i, i)] = g[(1, 0)];
        m[(n_modes + i, n_modes + i)] = g[(1, 1)];
    }
    CovarianceMatrix::new(m).unwrap()
}

/// Conjugate a state by a mode permutation: output mode `k` is input mode
/// `perm[k]`.
pub fn permute_modes(gamma: &CovarianceMatrix, perm: &[usize]) -> CovarianceMatrix {
    let n = gamma.n_modes();
    assert_eq!(perm.len(), n);
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for a in 0..n {
        for b in 0..n {
            m[(a, b)] = gamma.qq(perm[a], perm[b]);
            m[(a, n + b)] = gamma.qp(perm[a], perm[b]);
            m[(n + a, b)] = gamma.qp(perm[b], perm[a]);
            m[(n + a, n + b)] = gamma.pp(perm[a], perm[b]);
        }
    }
    CovarianceMatrix::new(m).unwrap()
}

/// Generator `[[0, T], [-V, 0]]` of the phase-space equations of motion.
pub fn equations_of_motion_generator(model: &CouplingModel) -> DMatrix<f64> {
    let n = model.n_modes();
    let mut g = DMatrix::zeros(2 * n, 2 * n);
    g.view_mut((0, n), (n, n)).copy_from(model.kinetic());
    g.view_mut((n, 0), (n, n)).copy_from(&(-model.potential()));
    g
}

/// Inclusive uniform grid of `points` samples over `[0, t_max]`.
pub fn linspace(t_max: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2);
    (0..points)
        .map(|k| t_max * k as f64 / (points - 1) as f64)
        .collect()
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[allow(dead_code)]
pub fn vacuum(n: usize) -> CovarianceMatrix {
    vacuum_cov(n).unwrap()
}
