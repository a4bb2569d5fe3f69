//! Covariance-matrix representation of Gaussian states.
//!
//! States are zero-mean Gaussians fully described by a real symmetric
//! `2n x 2n` second-moment matrix in `(q_1..q_n, p_1..p_n)` ordering, with
//! the vacuum normalized to the identity (variance 1 per quadrature).
//! Displacements are never represented.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Relative tolerance for the symmetry check on construction.
const SYMMETRY_TOL: f64 = 1e-12;
/// Symplectic eigenvalues may undershoot 1 by at most this much and still
/// count as physical.
const PHYSICALITY_TOL: f64 = 1e-9;

/// Real symmetric `2n x 2n` covariance matrix in qqpp ordering.
///
/// The sole state representation in this crate. Vacuum is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n_modes: usize,
    data: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Wrap a `2n x 2n` matrix, checking squareness, even dimension and
    /// symmetry (relative max-norm `1e-12`). The stored matrix is the
    /// symmetrized `(M + M^T)/2`.
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = data.shape();
        if rows != cols {
            return Err(Error::invalid(format!(
                "covariance matrix must be square, got {rows}x{cols}"
            )));
        }
        if rows == 0 || rows % 2 != 0 {
            return Err(Error::invalid(format!(
                "covariance matrix dimension must be a positive even number, got {rows}"
            )));
        }
        let scale = data.amax().max(1.0);
        let mut max_asym = 0.0_f64;
        for i in 0..rows {
            for j in (i + 1)..rows {
                max_asym = max_asym.max((data[(i, j)] - data[(j, i)]).abs());
            }
        }
        if max_asym > SYMMETRY_TOL * scale {
            return Err(Error::invalid(format!(
                "covariance matrix is not symmetric: max asymmetry {max_asym:.3e}"
            )));
        }
        let sym = (&data + data.transpose()) * 0.5;
        Ok(Self {
            n_modes: rows / 2,
            data: sym,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Full matrix dimension `2n`.
    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }

    /// Position-sector entry `<q_i q_j>`-style element (covariance scale).
    pub fn qq(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    /// Momentum-sector entry.
    pub fn pp(&self, i: usize, j: usize) -> f64 {
        self.data[(self.n_modes + i, self.n_modes + j)]
    }

    /// Cross-sector entry `<q_i p_j>`-style element.
    pub fn qp(&self, i: usize, j: usize) -> f64 {
        self.data[(i, self.n_modes + j)]
    }

    /// Largest absolute elementwise difference against another matrix of the
    /// same dimension.
    pub fn max_norm_diff(&self, other: &CovarianceMatrix) -> f64 {
        (&self.data - &other.data).amax()
    }
}

/// The symplectic form `sigma = [[0, 1], [-1, 0]]` in qqpp block ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    n_modes: usize,
}

impl SymplecticForm {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::invalid("symplectic form needs at least one mode"));
        }
        Ok(Self { n_modes })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Dense `2n x 2n` block matrix `[[0, I], [-I, 0]]`.
    pub fn matrix(&self) -> DMatrix<f64> {
        let n = self.n_modes;
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            m[(i, n + i)] = 1.0;
            m[(n + i, i)] = -1.0;
        }
        m
    }
}

/// Bipartition of a state's modes into parties A and B.
///
/// Sides are disjoint, non-empty sets of mode indices; their union may be a
/// strict subset of the state's modes (the remainder is traced out by the
/// measures that consume the partition).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModePartition {
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl ModePartition {
    pub fn new(side_a: impl Into<Vec<usize>>, side_b: impl Into<Vec<usize>>) -> Result<Self> {
        let mut a: Vec<usize> = side_a.into();
        let mut b: Vec<usize> = side_b.into();
        a.sort_unstable();
        a.dedup();
        b.sort_unstable();
        b.dedup();
        if a.is_empty() || b.is_empty() {
            return Err(Error::invalid("both partition sides must be non-empty"));
        }
        if a.iter().any(|i| b.binary_search(i).is_ok()) {
            return Err(Error::invalid("partition sides must be disjoint"));
        }
        Ok(Self { side_a: a, side_b: b })
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    /// All partitioned modes, ascending.
    pub fn union(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.side_a.iter().chain(&self.side_b).copied().collect();
        all.sort_unstable();
        all
    }

    pub fn max_index(&self) -> usize {
        *self
            .side_a
            .iter()
            .chain(&self.side_b)
            .max()
            .expect("sides are non-empty")
    }
}

/// A local perturbation planted on an otherwise-vacuum network at `t = 0`.
///
/// `z >= 1` throughout: it is the stretched quadrature variance for squeezed
/// states, the per-quadrature variance for thermal states, and `cosh r` for
/// the two-mode squeezed state.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialExcitation {
    Squeezed { z: f64, site: usize },
    Thermal { z: f64, site: usize },
    TwoModeSqueezed { z: f64, sites: (usize, usize) },
}

impl InitialExcitation {
    pub fn z(&self) -> f64 {
        match self {
            InitialExcitation::Squeezed { z, .. }
            | InitialExcitation::Thermal { z, .. }
            | InitialExcitation::TwoModeSqueezed { z, .. } => *z,
        }
    }

    pub fn target_sites(&self) -> Vec<usize> {
        match self {
            InitialExcitation::Squeezed { site, .. } | InitialExcitation::Thermal { site, .. } => {
                vec![*site]
            }
            InitialExcitation::TwoModeSqueezed { sites, .. } => vec![sites.0, sites.1],
        }
    }

    fn validate(&self) -> Result<()> {
        if self.z() < 1.0 {
            return Err(Error::invalid(format!(
                "excitation parameter z must be >= 1, got {}",
                self.z()
            )));
        }
        if let InitialExcitation::TwoModeSqueezed { sites, .. } = self {
            if sites.0 == sites.1 {
                return Err(Error::invalid(
                    "two-mode squeezed excitation needs two distinct sites",
                ));
            }
        }
        Ok(())
    }

    /// The excitation's own covariance matrix (1 or 2 modes).
    fn covariance(&self) -> Result<CovarianceMatrix> {
        self.validate()?;
        match self {
            InitialExcitation::Squeezed { z, .. } => single_mode_squeezed_cov(*z),
            InitialExcitation::Thermal { z, .. } => single_mode_thermal_cov(*z),
            InitialExcitation::TwoModeSqueezed { z, .. } => two_mode_squeezed_cov(*z),
        }
    }
}

/// Covariance matrix of the `n`-mode vacuum: the identity.
pub fn vacuum_cov(n_modes: usize) -> Result<CovarianceMatrix> {
    if n_modes == 0 {
        return Err(Error::invalid("vacuum needs at least one mode"));
    }
    CovarianceMatrix::new(DMatrix::identity(2 * n_modes, 2 * n_modes))
}

/// Pure squeezed single mode `diag(z, 1/z)`: q-variance stretched by `z`.
pub fn single_mode_squeezed_cov(z: f64) -> Result<CovarianceMatrix> {
    if z < 1.0 {
        return Err(Error::invalid(format!(
            "squeezing parameter z must be >= 1, got {z}"
        )));
    }
    CovarianceMatrix::new(DMatrix::from_diagonal(&nalgebra::dvector![z, 1.0 / z]))
}

/// Thermal single mode `diag(z, z)`; `z` is the symplectic eigenvalue itself.
pub fn single_mode_thermal_cov(z: f64) -> Result<CovarianceMatrix> {
    if z < 1.0 {
        return Err(Error::invalid(format!(
            "thermal parameter z must be >= 1, got {z}"
        )));
    }
    CovarianceMatrix::new(DMatrix::from_diagonal(&nalgebra::dvector![z, z]))
}

/// Two-mode squeezed state with `cosh r = z`: diagonals `cosh r`, q-q cross
/// element `+sinh r`, p-p cross element `-sinh r`.
pub fn two_mode_squeezed_cov(z: f64) -> Result<CovarianceMatrix> {
    if z < 1.0 {
        return Err(Error::invalid(format!(
            "two-mode squeezing parameter z must be >= 1, got {z}"
        )));
    }
    let cosh_r = z;
    let sinh_r = (z * z - 1.0).sqrt();
    let mut m = DMatrix::zeros(4, 4);
    // qqpp ordering for 2 modes: (q1, q2, p1, p2)
    m[(0, 0)] = cosh_r;
    m[(1, 1)] = cosh_r;
    m[(2, 2)] = cosh_r;
    m[(3, 3)] = cosh_r;
    m[(0, 1)] = sinh_r;
    m[(1, 0)] = sinh_r;
    m[(2, 3)] = -sinh_r;
    m[(3, 2)] = -sinh_r;
    CovarianceMatrix::new(m)
}

/// Plant an excitation on the target sites of a background state.
///
/// The q- and p-sector rows and columns of the target sites are replaced by
/// the excitation's covariance entries (cross terms to the rest zeroed); all
/// other entries are unchanged. Intended for a vacuum background.
pub fn embed_excitation(
    background: &CovarianceMatrix,
    excitation: &InitialExcitation,
) -> Result<CovarianceMatrix> {
    let n = background.n_modes();
    let sites = excitation.target_sites();
    for &s in &sites {
        if s >= n {
            return Err(Error::invalid(format!(
                "target site {s} out of range for {n} modes"
            )));
        }
    }
    let exc = excitation.covariance()?;
    let k = sites.len();
    let mut m = background.matrix().clone();
    // Clear the target rows/columns in both sectors, keeping the rest intact.
    for &s in &sites {
        for idx in [s, n + s] {
            for j in 0..2 * n {
                m[(idx, j)] = 0.0;
                m[(j, idx)] = 0.0;
            }
        }
    }
    // Write the excitation block; its mode a maps to sites[a].
    let phase_index = |a: usize, sector: usize| match sector {
        0 => sites[a],
        _ => n + sites[a],
    };
    for a in 0..k {
        for b in 0..k {
            for sa in 0..2 {
                for sb in 0..2 {
                    let src = (sa * k + a, sb * k + b);
                    let dst = (phase_index(a, sa), phase_index(b, sb));
                    m[dst] = exc.matrix()[src];
                }
            }
        }
    }
    CovarianceMatrix::new(m)
}

/// Reduced state on the kept modes: the principal submatrix on their q and p
/// rows/columns, reassembled in qqpp ordering. `keep` is deduplicated and
/// sorted ascending; the output's mode `k` is the `k`-th smallest kept index.
pub fn reduce_modes(gamma: &CovarianceMatrix, keep: &[usize]) -> Result<CovarianceMatrix> {
    let n = gamma.n_modes();
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.is_empty() {
        return Err(Error::invalid("keep-set must be non-empty"));
    }
    if *kept.last().unwrap() >= n {
        return Err(Error::invalid(format!(
            "keep-set index {} out of range for {n} modes",
            kept.last().unwrap()
        )));
    }
    let k = kept.len();
    let mut m = DMatrix::zeros(2 * k, 2 * k);
    for (a, &i) in kept.iter().enumerate() {
        for (b, &j) in kept.iter().enumerate() {
            m[(a, b)] = gamma.qq(i, j);
            m[(a, k + b)] = gamma.qp(i, j);
            m[(k + a, b)] = gamma.qp(j, i);
            m[(k + a, k + b)] = gamma.pp(i, j);
        }
    }
    CovarianceMatrix::new(m)
}

/// Eigenvalues of `-(sigma gamma)^2`, before clamping and square roots.
///
/// Computed through the similarity transform `K = g^(1/2) sigma g^(1/2)`
/// (antisymmetric), for which `-K^2 = K^T K` is symmetric positive
/// semidefinite with the same spectrum as `-(sigma gamma)^2`. This keeps
/// everything in real symmetric eigensolves; a general eigensolver stalls on
/// the degenerate spectra pure states produce (`-(sigma gamma)^2 ~ I`).
fn squared_symplectic_eigenvalues(gamma: &CovarianceMatrix) -> Result<Vec<f64>> {
    let scale = gamma.matrix().amax().max(1.0);
    let eig = gamma.matrix().clone().symmetric_eigen();
    let mut sqrt_eigs = eig.eigenvalues.clone();
    for v in sqrt_eigs.iter_mut() {
        if *v < -1e-9 * scale {
            return Err(Error::numerical(format!(
                "covariance matrix is indefinite: eigenvalue {v:.3e}"
            )));
        }
        *v = v.max(0.0).sqrt();
    }
    let sqrt_gamma =
        &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_eigs) * eig.eigenvectors.transpose();
    let sigma = SymplecticForm::new(gamma.n_modes())?.matrix();
    let k = &sqrt_gamma * sigma * &sqrt_gamma;
    let m = k.transpose() * &k;
    let msym = (&m + m.transpose()) * 0.5;
    Ok(msym.symmetric_eigen().eigenvalues.iter().copied().collect())
}

/// The `n` positive symplectic eigenvalues of a symmetric matrix, sorted
/// descending. Computed as positive square roots of the eigenvalues of
/// `-(sigma gamma)^2`; eigenvalues in `[-1e-9, 0)` are clamped to zero,
/// anything more negative is a numerical failure.
pub fn symplectic_spectrum(gamma: &CovarianceMatrix) -> Result<Vec<f64>> {
    let mut sq = squared_symplectic_eigenvalues(gamma)?;
    for v in sq.iter_mut() {
        if *v < -1e-9 {
            return Err(Error::numerical(format!(
                "eigenvalue {v:.3e} of -(sigma*gamma)^2 is negative beyond tolerance"
            )));
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    sq.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // Each symplectic eigenvalue appears twice; keep one of each pair.
    Ok(sq.iter().step_by(2).map(|v| v.sqrt()).collect())
}

/// Sign-flip the momentum rows and columns of side B: conjugation by
/// `diag(1 on all q, 1 on p of A, -1 on p of B)`. Modes outside the
/// partition are untouched.
pub fn partial_transpose(
    gamma: &CovarianceMatrix,
    part: &ModePartition,
) -> Result<CovarianceMatrix> {
    let n = gamma.n_modes();
    if part.max_index() >= n {
        return Err(Error::invalid(format!(
            "partition index {} out of range for {n} modes",
            part.max_index()
        )));
    }
    let mut m = gamma.matrix().clone();
    for &b in part.side_b() {
        let row = n + b;
        for j in 0..2 * n {
            m[(row, j)] = -m[(row, j)];
            m[(j, row)] = -m[(j, row)];
        }
    }
    CovarianceMatrix::new(m)
}

/// Max-norm of `-(gamma sigma)^2 - I`; zero exactly for pure states.
pub fn purity_defect(gamma: &CovarianceMatrix) -> Result<f64> {
    let sigma = SymplecticForm::new(gamma.n_modes())?.matrix();
    let gs = gamma.matrix() * &sigma;
    let mut witness = -(&gs * &gs);
    let dim = gamma.dim();
    for i in 0..dim {
        witness[(i, i)] -= 1.0;
    }
    Ok(witness.amax())
}

/// True iff the minimum symplectic eigenvalue is `>= 1 - 1e-9` (the
/// uncertainty relation). Unphysical-enough inputs that break the spectrum
/// routine also report false.
pub fn physicality_check(gamma: &CovarianceMatrix) -> bool {
    match symplectic_spectrum(gamma) {
        Ok(spectrum) => spectrum
            .last()
            .map(|mu| *mu >= 1.0 - PHYSICALITY_TOL)
            .unwrap_or(false),
        Err(_) => false,
    }
}
