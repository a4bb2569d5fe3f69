//! Network layouts and their potential/kinetic matrices.
//!
//! Four layouts are supported: a linear chain, the Y-shape (one input arm
//! feeding two output arms), the star (one input arm feeding `n_arms` output
//! arms) and the X-shape (two input arms and two output arms meeting at a
//! central oscillator). Bond strengths follow either the engineered
//! square-root law that yields dispersionless transmission at `t = pi/c`, or
//! a uniform profile.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Network layout kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetworkKind {
    Chain,
    Y,
    Star,
    X,
}

/// Bond-strength profile along the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingProfile {
    /// Square-root law `V_{n,n+1} = (c/2) sqrt(n (M - n))` along the
    /// effective transmission chain, with junction corrections.
    Engineered,
    /// Every nearest-neighbor bond equals `c/2`; every on-site term is the
    /// interior-site value `1 + c`. A site-independent diagonal only rotates
    /// every mode in step, so entanglement quantities are unaffected by it.
    Uniform,
}

/// On-site (diagonal) convention for engineered profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagonalMode {
    /// `V_nn = 1` everywhere.
    Unit,
    /// `V_nn = (1/4) [3 - (-1)^(m_in + m_out)] c`, which removes the local
    /// phase-space rotation at the transmission time so arm-end states can
    /// be compared directly against the input (cloning fidelity).
    Cloning,
}

/// Declarative description of a network to build.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    pub kind: NetworkKind,
    /// Input-arm length in oscillators (per input arm for the X-shape).
    pub m_in: usize,
    /// Output-arm length in oscillators.
    pub m_out: usize,
    /// Number of output arms: 1 for chain, 2 for y and x, >= 2 for star.
    pub n_arms: usize,
    /// Coupling scale, dimensionless, > 0.
    pub c: f64,
    pub profile: CouplingProfile,
    pub diagonal: DiagonalMode,
}

impl NetworkSpec {
    pub fn chain(m_in: usize, m_out: usize, c: f64) -> Self {
        Self {
            kind: NetworkKind::Chain,
            m_in,
            m_out,
            n_arms: 1,
            c,
            profile: CouplingProfile::Engineered,
            diagonal: DiagonalMode::Unit,
        }
    }

    pub fn y(m_in: usize, m_out: usize, c: f64) -> Self {
        Self {
            kind: NetworkKind::Y,
            m_in,
            m_out,
            n_arms: 2,
            c,
            profile: CouplingProfile::Engineered,
            diagonal: DiagonalMode::Unit,
        }
    }

    pub fn star(m_in: usize, m_out: usize, n_arms: usize, c: f64) -> Self {
        Self {
            kind: NetworkKind::Star,
            m_in,
            m_out,
            n_arms,
            c,
            profile: CouplingProfile::Engineered,
            diagonal: DiagonalMode::Unit,
        }
    }

    pub fn x(m_in: usize, m_out: usize, c: f64) -> Self {
        Self {
            kind: NetworkKind::X,
            m_in,
            m_out,
            n_arms: 2,
            c,
            profile: CouplingProfile::Engineered,
            diagonal: DiagonalMode::Unit,
        }
    }

    pub fn with_profile(mut self, profile: CouplingProfile) -> Self {
        self.profile = profile;
        self
    }

    pub fn with_diagonal(mut self, diagonal: DiagonalMode) -> Self {
        self.diagonal = diagonal;
        self
    }

    /// Effective transmission-chain length `M = m_in + m_out`.
    pub fn transmission_length(&self) -> usize {
        self.m_in + self.m_out
    }

    /// Total number of oscillators in the layout.
    pub fn n_modes(&self) -> usize {
        match self.kind {
            NetworkKind::Chain => self.m_in + self.m_out,
            NetworkKind::Y | NetworkKind::Star => self.m_in + self.n_arms * self.m_out,
            NetworkKind::X => 2 * self.m_in + 2 * self.m_out + 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_in == 0 || self.m_out == 0 {
            return Err(Error::invalid("arm lengths m_in and m_out must be >= 1"));
        }
        if !(self.c > 0.0) {
            return Err(Error::invalid(format!(
                "coupling scale c must be positive, got {}",
                self.c
            )));
        }
        match self.kind {
            NetworkKind::Chain if self.n_arms != 1 => {
                Err(Error::invalid("chain networks have exactly one arm"))
            }
            NetworkKind::Y if self.n_arms != 2 => {
                Err(Error::invalid("y networks have exactly two output arms"))
            }
            NetworkKind::Star if self.n_arms < 2 => {
                Err(Error::invalid("star networks need at least two output arms"))
            }
            NetworkKind::X if self.n_arms != 2 => {
                Err(Error::invalid("x networks have exactly two output arms"))
            }
            _ => Ok(()),
        }
    }
}

/// Semantic site bookkeeping for a built network.
///
/// This table is the only sanctioned way to locate heads, junctions and arm
/// ends; all indices are 0-based mode indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteRoles {
    /// Head(s) of the input arm(s): one entry for chain/y/star, two for x.
    pub input_heads: Vec<usize>,
    /// Input-arm sites ordered head -> junction side, one list per input arm.
    pub input_arms: Vec<Vec<usize>>,
    /// The junction (y/star: last input-arm site; x: the central oscillator).
    pub junction: Option<usize>,
    /// Output-arm sites ordered junction side -> end, one list per arm.
    pub output_arms: Vec<Vec<usize>>,
}

impl SiteRoles {
    pub fn input_head(&self) -> usize {
        self.input_heads[0]
    }

    pub fn arm_end(&self, arm: usize) -> usize {
        *self.output_arms[arm].last().expect("arms are non-empty")
    }

    pub fn arm_ends(&self) -> Vec<usize> {
        (0..self.output_arms.len()).map(|k| self.arm_end(k)).collect()
    }

    /// Site at 0-based position `pos` (from the junction) of output arm `arm`.
    pub fn arm_site(&self, arm: usize, pos: usize) -> usize {
        self.output_arms[arm][pos]
    }
}

/// A realized network: potential matrix `V`, kinetic matrix `T = V` (rotating
/// wave approximation), and site-role bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingModel {
    spec: NetworkSpec,
    n_modes: usize,
    v: DMatrix<f64>,
    edges: Vec<(usize, usize)>,
    roles: SiteRoles,
}

impl CouplingModel {
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn spec(&self) -> &NetworkSpec {
        &self.spec
    }

    /// Potential matrix `V`.
    pub fn potential(&self) -> &DMatrix<f64> {
        &self.v
    }

    /// Kinetic matrix `T`; equal to `V` under the rotating wave approximation.
    pub fn kinetic(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn site_roles(&self) -> &SiteRoles {
        &self.roles
    }

    /// Nearest-neighbor bonds as `(i, j)` index pairs with `i < j`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn bond(&self, i: usize, j: usize) -> f64 {
        self.v[(i, j)]
    }

    /// Copy of this model with one bond replaced (symmetrically).
    pub fn with_bond(&self, i: usize, j: usize, value: f64) -> Result<CouplingModel> {
        if i >= self.n_modes || j >= self.n_modes || i == j {
            return Err(Error::invalid(format!("invalid bond indices ({i}, {j})")));
        }
        let mut out = self.clone();
        out.v[(i, j)] = value;
        out.v[(j, i)] = value;
        Ok(out)
    }
}

/// Orthogonal site-space transform that decouples all but one output arm,
/// turning the network into an effective transmission chain plus isolated
/// blocks. Acts identically on the q and p sectors.
#[derive(Debug, Clone, PartialEq)]
pub struct DecouplingTransform {
    n_modes: usize,
    w: DMatrix<f64>,
    coupled_chain: Vec<usize>,
    decoupled_blocks: Vec<Vec<usize>>,
}

impl DecouplingTransform {
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// The `n x n` site-space orthogonal matrix `W` (new = W * old).
    pub fn site_matrix(&self) -> &DMatrix<f64> {
        &self.w
    }

    /// The `2n x 2n` phase-space block matrix `W (+) W`.
    pub fn phase_space_matrix(&self) -> DMatrix<f64> {
        let n = self.n_modes;
        let mut o = DMatrix::zeros(2 * n, 2 * n);
        o.view_mut((0, 0), (n, n)).copy_from(&self.w);
        o.view_mut((n, n), (n, n)).copy_from(&self.w);
        o
    }

    /// Transformed site indices forming the transmission chain, in chain
    /// order (input head first).
    pub fn coupled_chain(&self) -> &[usize] {
        &self.coupled_chain
    }

    /// Transformed site indices of each decoupled block.
    pub fn decoupled_blocks(&self) -> &[Vec<usize>] {
        &self.decoupled_blocks
    }
}

/// Engineered bond value at 1-based position `n` of a transmission chain of
/// length `m`.
fn sqrt_law_bond(c: f64, n: usize, m: usize) -> f64 {
    c / 2.0 * ((n * (m - n)) as f64).sqrt()
}

fn site_enumeration(spec: &NetworkSpec) -> SiteRoles {
    match spec.kind {
        NetworkKind::Chain => {
            let m = spec.m_in + spec.m_out;
            SiteRoles {
                input_heads: vec![0],
                input_arms: vec![(0..spec.m_in).collect()],
                junction: None,
                output_arms: vec![(spec.m_in..m).collect()],
            }
        }
        NetworkKind::Y | NetworkKind::Star => {
            let arms = (0..spec.n_arms)
                .map(|k| {
                    let base = spec.m_in + k * spec.m_out;
                    (base..base + spec.m_out).collect()
                })
                .collect();
            SiteRoles {
                input_heads: vec![0],
                input_arms: vec![(0..spec.m_in).collect()],
                junction: Some(spec.m_in - 1),
                output_arms: arms,
            }
        }
        NetworkKind::X => {
            let center = 2 * spec.m_in;
            let out0 = (center + 1..center + 1 + spec.m_out).collect();
            let out1 = (center + 1 + spec.m_out..center + 1 + 2 * spec.m_out).collect();
            SiteRoles {
                input_heads: vec![0, spec.m_in],
                input_arms: vec![
                    (0..spec.m_in).collect(),
                    (spec.m_in..2 * spec.m_in).collect(),
                ],
                junction: Some(center),
                output_arms: vec![out0, out1],
            }
        }
    }
}

/// Undirected nearest-neighbor edges of the layout graph, `(i, j)` with
/// `i < j`, in a fixed deterministic order.
fn layout_edges(spec: &NetworkSpec, roles: &SiteRoles) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut push = |a: usize, b: usize| {
        edges.push(if a < b { (a, b) } else { (b, a) });
    };
    for arm in &roles.input_arms {
        for w in arm.windows(2) {
            push(w[0], w[1]);
        }
    }
    match spec.kind {
        NetworkKind::Chain => {
            // Input segment connects straight into the output segment.
            push(roles.input_arms[0][spec.m_in - 1], roles.output_arms[0][0]);
        }
        NetworkKind::Y | NetworkKind::Star => {
            let junction = roles.junction.unwrap();
            for arm in &roles.output_arms {
                push(junction, arm[0]);
            }
        }
        NetworkKind::X => {
            let center = roles.junction.unwrap();
            for arm in &roles.input_arms {
                push(*arm.last().unwrap(), center);
            }
            for arm in &roles.output_arms {
                push(center, arm[0]);
            }
        }
    }
    for arm in &roles.output_arms {
        for w in arm.windows(2) {
            push(w[0], w[1]);
        }
    }
    edges
}

/// Build the potential/kinetic matrices for a network description.
///
/// Engineered profile: bonds along the effective transmission chain of length
/// `M = m_in + m_out` follow `(c/2) sqrt(n (M - n))`; the junction bond into
/// each of `N_A` output arms is `(c/2) sqrt(m_in m_out / N_A)`; the four
/// central bonds of the X-shape are all `(c/2) sqrt(m_in m_out)`. The
/// diagonal is 1 (unit) or `(1/4)[3 - (-1)^(m_in + m_out)] c` (cloning).
/// Uniform profile: every bond is `c/2` and `V_nn = 1 + (c/2) deg(n)`.
pub fn build_network(spec: &NetworkSpec) -> Result<CouplingModel> {
    spec.validate()?;
    let roles = site_enumeration(spec);
    let edges = layout_edges(spec, &roles);
    let n = spec.n_modes();
    let m = spec.transmission_length();
    let c = spec.c;
    let mut v = DMatrix::zeros(n, n);

    match spec.profile {
        CouplingProfile::Uniform => {
            for &(i, j) in &edges {
                v[(i, j)] = c / 2.0;
                v[(j, i)] = c / 2.0;
            }
            for site in 0..n {
                v[(site, site)] = 1.0 + c;
            }
        }
        CouplingProfile::Engineered => {
            // Input-arm bonds sit at chain positions 1..m_in-1 (per input arm).
            for arm in &roles.input_arms {
                for (idx, w) in arm.windows(2).enumerate() {
                    let bond = sqrt_law_bond(c, idx + 1, m);
                    v[(w[0], w[1])] = bond;
                    v[(w[1], w[0])] = bond;
                }
            }
            // Output-arm internal bonds sit at chain positions m_in+1..M-1.
            for arm in &roles.output_arms {
                for (idx, w) in arm.windows(2).enumerate() {
                    let bond = sqrt_law_bond(c, spec.m_in + idx + 1, m);
                    v[(w[0], w[1])] = bond;
                    v[(w[1], w[0])] = bond;
                }
            }
            // Junction / central corrections.
            match spec.kind {
                NetworkKind::Chain => {
                    let a = roles.input_arms[0][spec.m_in - 1];
                    let b = roles.output_arms[0][0];
                    let bond = sqrt_law_bond(c, spec.m_in, m);
                    v[(a, b)] = bond;
                    v[(b, a)] = bond;
                }
                NetworkKind::Y | NetworkKind::Star => {
                    let junction = roles.junction.unwrap();
                    let bond = c / 2.0
                        * ((spec.m_in * spec.m_out) as f64 / spec.n_arms as f64).sqrt();
                    for arm in &roles.output_arms {
                        v[(junction, arm[0])] = bond;
                        v[(arm[0], junction)] = bond;
                    }
                }
                NetworkKind::X => {
                    let center = roles.junction.unwrap();
                    let bond = sqrt_law_bond(c, spec.m_in, m);
                    for arm in &roles.input_arms {
                        let tail = *arm.last().unwrap();
                        v[(tail, center)] = bond;
                        v[(center, tail)] = bond;
                    }
                    for arm in &roles.output_arms {
                        v[(center, arm[0])] = bond;
                        v[(arm[0], center)] = bond;
                    }
                }
            }
            let diag = match spec.diagonal {
                DiagonalMode::Unit => 1.0,
                DiagonalMode::Cloning => {
                    0.25 * (3.0 - (-1.0f64).powi((spec.m_in + spec.m_out) as i32)) * c
                }
            };
            for site in 0..n {
                v[(site, site)] = diag;
            }
        }
    }

    Ok(CouplingModel {
        spec: spec.clone(),
        n_modes: n,
        v,
        edges,
        roles,
    })
}

/// Real orthogonal `N x N` matrix whose first row is `(1, .., 1)/sqrt(N)`;
/// the remaining rows span the orthogonal complement (Helmert construction).
/// For `N = 2` this is the 50/50 beamsplitter `(1/sqrt 2) [[1, 1], [1, -1]]`.
fn uniform_first_row_orthogonal(n: usize) -> DMatrix<f64> {
    let mut u = DMatrix::zeros(n, n);
    let inv = 1.0 / (n as f64).sqrt();
    for j in 0..n {
        u[(0, j)] = inv;
    }
    for k in 1..n {
        let norm = 1.0 / ((k * (k + 1)) as f64).sqrt();
        for j in 0..k {
            u[(k, j)] = norm;
        }
        u[(k, k)] = -(k as f64) * norm;
    }
    u
}

/// Orthogonal transform grouping same-position sites across arms so that one
/// combination carries transmission and the rest decouple.
///
/// For two arms the per-pair block is `(1/sqrt 2) [[1, 1], [1, -1]]`; for
/// more arms a real orthogonal matrix with uniform first row replaces the
/// complex Fourier transform. Input-arm sites map to themselves for y/star;
/// the x-shape pairs its input arms the same way it pairs output arms.
pub fn decoupling_transform(spec: &NetworkSpec) -> Result<DecouplingTransform> {
    spec.validate()?;
    if spec.kind == NetworkKind::Chain {
        return Err(Error::invalid(
            "chains have nothing to decouple; transform applies to y, star and x",
        ));
    }
    let roles = site_enumeration(spec);
    let n = spec.n_modes();
    let mut w = DMatrix::identity(n, n);

    // Writes the full group x group block, overwriting the identity seeds.
    let mut apply_group = |arms: &[Vec<usize>], pos: usize, u: &DMatrix<f64>| {
        let group: Vec<usize> = arms.iter().map(|arm| arm[pos]).collect();
        for (r, &gr) in group.iter().enumerate() {
            for (col, &gc) in group.iter().enumerate() {
                w[(gr, gc)] = u[(r, col)];
            }
        }
    };

    match spec.kind {
        NetworkKind::Y | NetworkKind::Star => {
            let u = uniform_first_row_orthogonal(spec.n_arms);
            for pos in 0..spec.m_out {
                apply_group(&roles.output_arms, pos, &u);
            }
            let mut coupled: Vec<usize> = roles.input_arms[0].clone();
            coupled.extend(&roles.output_arms[0]);
            let decoupled = roles.output_arms[1..].to_vec();
            Ok(DecouplingTransform {
                n_modes: n,
                w,
                coupled_chain: coupled,
                decoupled_blocks: decoupled,
            })
        }
        NetworkKind::X => {
            let u = uniform_first_row_orthogonal(2);
            for pos in 0..spec.m_in {
                apply_group(&roles.input_arms, pos, &u);
            }
            for pos in 0..spec.m_out {
                apply_group(&roles.output_arms, pos, &u);
            }
            let mut coupled: Vec<usize> = roles.input_arms[0].clone();
            coupled.push(roles.junction.unwrap());
            coupled.extend(&roles.output_arms[0]);
            let decoupled = vec![roles.input_arms[1].clone(), roles.output_arms[1].clone()];
            Ok(DecouplingTransform {
                n_modes: n,
                w,
                coupled_chain: coupled,
                decoupled_blocks: decoupled,
            })
        }
        NetworkKind::Chain => unreachable!(),
    }
}

/// Conjugate the potential by a decoupling transform: `V' = W V W^T`, with
/// `T' = V'`. Site roles carry over unchanged (the transform reuses arm-0
/// indices for the transmitted combinations).
pub fn conjugate_potential(
    model: &CouplingModel,
    transform: &DecouplingTransform,
) -> Result<CouplingModel> {
    if model.n_modes() != transform.n_modes() {
        return Err(Error::invalid(format!(
            "dimension mismatch: model has {} modes, transform has {}",
            model.n_modes(),
            transform.n_modes()
        )));
    }
    let w = transform.site_matrix();
    let v = w * model.potential() * w.transpose();
    Ok(CouplingModel {
        spec: model.spec.clone(),
        n_modes: model.n_modes,
        v,
        edges: model.edges.clone(),
        roles: model.roles.clone(),
    })
}
