//! Stochastic hill climbing over individual bond strengths.
//!
//! Starting from a uniform coupling profile, each iteration perturbs one
//! randomly chosen bond multiplicatively and keeps the change whenever the
//! entanglement generated at the target time does not decrease. With enough
//! iterations the search rediscovers the square-root coupling law.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynamics::evolve;
use crate::error::{Error, Result};
use crate::gaussian::{embed_excitation, vacuum_cov, InitialExcitation, ModePartition};
use crate::measures::log_negativity;
use crate::topology::{build_network, CouplingModel, CouplingProfile, NetworkSpec};

/// Search setup. The base network is always built with a uniform profile as
/// the starting point; `step_scale` is the width of the multiplicative
/// perturbation `exp(u * step_scale)`, `u` uniform in `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub base: NetworkSpec,
    pub target_time: f64,
    pub objective_partition: ModePartition,
    pub input: InitialExcitation,
    pub max_iters: usize,
    pub step_scale: f64,
    pub seed: u64,
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if !(self.target_time > 0.0) {
            return Err(Error::invalid("target_time must be positive"));
        }
        if self.max_iters == 0 {
            return Err(Error::invalid("max_iters must be >= 1"));
        }
        if !(self.step_scale > 0.0 && self.step_scale <= 1.0) {
            return Err(Error::invalid("step_scale must lie in (0, 1]"));
        }
        if self.objective_partition.max_index() >= self.base.n_modes() {
            return Err(Error::invalid(
                "objective partition exceeds the network's mode count",
            ));
        }
        let n = self.base.n_modes();
        if self.input.target_sites().iter().any(|&s| s >= n) {
            return Err(Error::invalid("input target site out of range"));
        }
        Ok(())
    }
}

/// Search history: the best objective after each iteration (non-decreasing),
/// the best model found, and how many perturbations were accepted.
#[derive(Debug, Clone)]
pub struct SearchTrace {
    pub best_objective_per_iter: Vec<f64>,
    pub best_model: CouplingModel,
    pub accepted_count: usize,
}

/// Entanglement (log-negativity, bits) across the objective partition after
/// evolving the embedded input to the target time under `model`.
pub fn objective(model: &CouplingModel, cfg: &SearchConfig) -> Result<f64> {
    let vac = vacuum_cov(model.n_modes())?;
    let gamma0 = embed_excitation(&vac, &cfg.input)?;
    let gamma_t = evolve(&gamma0, model, cfg.target_time)?;
    log_negativity(&gamma_t, &cfg.objective_partition)
}

/// Hill-climbing loop, fully deterministic for a given seed.
///
/// Each iteration picks one bond uniformly at random, multiplies it by
/// `exp(u * step_scale)` with `u` uniform in `[-1, 1]`, and keeps the change
/// iff the objective does not decrease.
pub fn optimize(cfg: &SearchConfig) -> Result<SearchTrace> {
    cfg.validate()?;
    let start_spec = cfg.base.clone().with_profile(CouplingProfile::Uniform);
    let mut current = build_network(&start_spec)?;
    let mut best = objective(&current, cfg)?;
    let edges: Vec<(usize, usize)> = current.edges().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut trace = Vec::with_capacity(cfg.max_iters);
    let mut accepted = 0usize;

    for _ in 0..cfg.max_iters {
        let (i, j) = edges[rng.random_range(0..edges.len())];
        let u: f64 = rng.random_range(-1.0..=1.0);
        let factor = (u * cfg.step_scale).exp();
        let candidate = current.with_bond(i, j, current.bond(i, j) * factor)?;
        let cand_obj = objective(&candidate, cfg)?;
        if cand_obj >= best {
            current = candidate;
            best = cand_obj;
            accepted += 1;
        }
        trace.push(best);
    }

    Ok(SearchTrace {
        best_objective_per_iter: trace,
        best_model: current,
        accepted_count: accepted,
    })
}
