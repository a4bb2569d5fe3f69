//! Scenario, sweep and search execution with CSV/JSON output.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use oscnet::dynamics::{evolve, time_series};
use oscnet::gaussian::{
    embed_excitation, purity_defect, reduce_modes, single_mode_squeezed_cov, vacuum_cov,
    CovarianceMatrix, ModePartition,
};
use oscnet::measures::{entropy_of_entanglement, gaussian_fidelity_pure, log_negativity};
use oscnet::oracles::{star_fidelity, star_output_cov};
use oscnet::search::{optimize, SearchConfig};
use oscnet::topology::{build_network, CouplingModel, NetworkKind};

use crate::config::{DiagonalName, InputKind, MeasureName, PairMode, ScenarioConfig};
use crate::CliError;

/// One measured pair of site groups, labelled by its along-arm position.
/// Label 0 is the arm-end pair; positive labels count output positions from
/// the junction; negative labels are X-shape input-arm pairs counted from
/// the arm heads.
struct Pair {
    label: i64,
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Pair {
    fn partition(&self) -> ModePartition {
        ModePartition::new(self.side_a.clone(), self.side_b.clone())
            .expect("pairs are built disjoint and non-empty")
    }

    fn all_sites(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.side_a.iter().chain(&self.side_b).copied().collect();
        v.sort_unstable();
        v
    }
}

fn build_pairs(model: &CouplingModel, mode: PairMode) -> Result<Vec<Pair>, CliError> {
    let roles = model.site_roles();
    let spec = model.spec();
    match mode {
        PairMode::Ends => {
            let pair = match spec.kind {
                NetworkKind::Chain => Pair {
                    label: 0,
                    side_a: vec![roles.input_head()],
                    side_b: vec![roles.arm_end(0)],
                },
                _ => Pair {
                    label: 0,
                    side_a: vec![roles.arm_end(0)],
                    side_b: (1..spec.n_arms).map(|k| roles.arm_end(k)).collect(),
                },
            };
            Ok(vec![pair])
        }
        PairMode::AllPositions => {
            if spec.kind == NetworkKind::Chain {
                return Err(CliError::Config(
                    "pairs = all_positions needs output arms (y, star or x)".into(),
                ));
            }
            let mut pairs = Vec::new();
            for pos in 0..spec.m_out {
                let label = if pos + 1 == spec.m_out {
                    0
                } else {
                    (pos + 1) as i64
                };
                pairs.push(Pair {
                    label,
                    side_a: vec![roles.arm_site(0, pos)],
                    side_b: (1..spec.n_arms).map(|k| roles.arm_site(k, pos)).collect(),
                });
            }
            if spec.kind == NetworkKind::X {
                for pos in 0..spec.m_in {
                    pairs.push(Pair {
                        label: -((pos + 1) as i64),
                        side_a: vec![roles.input_arms[0][pos]],
                        side_b: vec![roles.input_arms[1][pos]],
                    });
                }
            }
            Ok(pairs)
        }
    }
}

/// One output row; requested measures are `Some`, the rest stay empty.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesRecord {
    pub t: f64,
    pub position_index: i64,
    pub log_negativity: Option<f64>,
    pub entropy: Option<f64>,
    pub fidelity: Option<f64>,
    pub purity_defect: Option<f64>,
    pub energy: Option<f64>,
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn records_to_csv(records: &[TimeSeriesRecord], comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(
        out,
        "t,position_index,log_negativity,entropy,fidelity,purity_defect,energy"
    );
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.t,
            r.position_index,
            opt(r.log_negativity),
            opt(r.entropy),
            opt(r.fidelity),
            opt(r.purity_defect),
            opt(r.energy)
        );
    }
    out
}

/// Whole-file atomic write: temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::Io(format!("cannot create temp file in {}: {e}", dir.display())))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| CliError::Io(format!("cannot write temp file: {e}")))?;
    tmp.persist(path)
        .map_err(|e| CliError::Io(format!("cannot rename into {}: {e}", path.display())))?;
    Ok(())
}

fn pair_energy(gamma: &CovarianceMatrix, sites: &[usize]) -> f64 {
    sites
        .iter()
        .map(|&s| 0.5 * (gamma.qq(s, s) + gamma.pp(s, s)) - 1.0)
        .sum()
}

fn uniform_grid(t_max: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![0.0];
    }
    (0..steps)
        .map(|k| t_max * k as f64 / (steps - 1) as f64)
        .collect()
}

fn rotation_comment(config: &ScenarioConfig) -> Vec<String> {
    if config.wants(MeasureName::Fidelity)
        && config.input.kind == InputKind::Squeezed
        && config.network.diagonal != DiagonalName::Cloning
    {
        vec![
            "fidelity column is rotation-sensitive: network.diagonal is not \"cloning\"".into(),
        ]
    } else {
        Vec::new()
    }
}

/// Run one scenario and return its records; `run_scenario` writes them out.
pub fn scenario_records(config: &ScenarioConfig) -> Result<Vec<TimeSeriesRecord>, CliError> {
    let spec = config.network.to_spec()?;
    let model = build_network(&spec)?;
    let excitation = config.input.to_excitation(&model)?;
    let vac = vacuum_cov(model.n_modes())?;
    let gamma0 = embed_excitation(&vac, &excitation)?;
    let grid = uniform_grid(config.time.t_max, config.time.steps);
    let series = if grid.len() == 1 {
        vec![gamma0.clone()]
    } else {
        time_series(&gamma0, &model, &grid)?
    };
    let pairs = build_pairs(&model, config.pairs)?;
    let squeezed_input = if config.input.kind == InputKind::Squeezed {
        Some(single_mode_squeezed_cov(config.input.z)?)
    } else {
        None
    };

    let mut records = Vec::with_capacity(series.len() * pairs.len());
    for (k, gt) in series.iter().enumerate() {
        for pair in &pairs {
            let sites = pair.all_sites();
            let log_neg = if config.wants(MeasureName::LogNegativity) {
                Some(log_negativity(gt, &pair.partition())?)
            } else {
                None
            };
            let entropy = if config.wants(MeasureName::Entropy) {
                Some(entropy_of_entanglement(&reduce_modes(gt, &pair.side_a)?)?)
            } else {
                None
            };
            let fidelity = match (&squeezed_input, config.wants(MeasureName::Fidelity)) {
                (Some(input), true) => Some(gaussian_fidelity_pure(
                    input,
                    &reduce_modes(gt, &pair.side_a)?,
                )?),
                _ => None,
            };
            let defect = if config.wants(MeasureName::PurityDefect) {
                Some(purity_defect(&reduce_modes(gt, &sites)?)?)
            } else {
                None
            };
            let energy = if config.wants(MeasureName::Energy) {
                Some(pair_energy(gt, &sites))
            } else {
                None
            };
            records.push(TimeSeriesRecord {
                t: grid[k],
                position_index: pair.label,
                log_negativity: log_neg,
                entropy,
                fidelity,
                purity_defect: defect,
                energy,
            });
        }
    }
    Ok(records)
}

pub fn run_scenario(config: &ScenarioConfig, out: &Path) -> Result<(), CliError> {
    let records = scenario_records(config)?;
    write_atomic(out, &records_to_csv(&records, &rotation_comment(config)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepAxis {
    Z,
    #[value(name = "n_arms", alias = "n-arms")]
    NArms,
    C,
}

/// One summary row per axis value: the numeric entanglement and fidelity of
/// an arm end at `t = pi/c`, next to the closed-form references.
pub fn run_sweep(
    config: &ScenarioConfig,
    axis: SweepAxis,
    values: &[f64],
    out: &Path,
) -> Result<(), CliError> {
    if values.is_empty() {
        return Err(CliError::Config("sweep needs at least one value".into()));
    }
    if config.input.kind != InputKind::Squeezed {
        return Err(CliError::Config(
            "sweeps compare against the squeezed-input closed forms; set input.kind = \"squeezed\""
                .into(),
        ));
    }
    let axis_name = match axis {
        SweepAxis::Z => "z",
        SweepAxis::NArms => "n_arms",
        SweepAxis::C => "c",
    };
    let mut rows = String::new();
    let _ = writeln!(
        rows,
        "axis,value,entropy,entropy_oracle,entropy_delta,fidelity,fidelity_oracle,fidelity_delta,entropy_bound_oracle"
    );
    for &value in values {
        let mut network = config.network.to_spec()?;
        let mut z = config.input.z;
        match axis {
            SweepAxis::Z => {
                if value < 1.0 {
                    return Err(CliError::Config(format!("z value {value} must be >= 1")));
                }
                z = value;
            }
            SweepAxis::NArms => {
                if network.kind != NetworkKind::Star {
                    return Err(CliError::Config(
                        "an n_arms sweep needs network.kind = \"star\"".into(),
                    ));
                }
                if value.fract() != 0.0 || value < 2.0 {
                    return Err(CliError::Config(format!(
                        "n_arms value {value} must be an integer >= 2"
                    )));
                }
                network.n_arms = value as usize;
            }
            SweepAxis::C => {
                if !(value > 0.0) {
                    return Err(CliError::Config(format!("c value {value} must be > 0")));
                }
                network.c = value;
            }
        }
        network.validate()?;
        let model = build_network(&network)?;
        let head = model.site_roles().input_head();
        let vac = vacuum_cov(model.n_modes())?;
        let gamma0 = embed_excitation(
            &vac,
            &oscnet::gaussian::InitialExcitation::Squeezed { z, site: head },
        )?;
        let transmission_time = std::f64::consts::PI / network.c;
        let gt = evolve(&gamma0, &model, transmission_time)?;
        let end = model.site_roles().arm_end(0);
        let copy = reduce_modes(&gt, &[end])?;
        let entropy = entropy_of_entanglement(&copy)?;
        let input = single_mode_squeezed_cov(z)?;
        let fidelity = gaussian_fidelity_pure(&input, &copy)?;
        let n_arms = network.n_arms;
        let entropy_oracle = entropy_of_entanglement(&star_output_cov(z, n_arms.max(2))?)?;
        let fidelity_oracle = star_fidelity(z, n_arms.max(2))?;
        let bound = oscnet::measures::max_entropy_bound(z)?;
        let _ = writeln!(
            rows,
            "{},{},{},{},{},{},{},{},{}",
            axis_name,
            value,
            entropy,
            entropy_oracle,
            (entropy - entropy_oracle).abs(),
            fidelity,
            fidelity_oracle,
            (fidelity - fidelity_oracle).abs(),
            bound
        );
    }
    let comments = rotation_comment(config);
    let mut body = String::new();
    for c in &comments {
        let _ = writeln!(body, "# {c}");
    }
    body.push_str(&rows);
    write_atomic(out, &body)
}

#[derive(Serialize)]
struct BondRecord {
    i: usize,
    j: usize,
    value: f64,
}

#[derive(Serialize)]
struct BestModelRecord {
    n_modes: usize,
    seed: u64,
    target_time: f64,
    max_iters: usize,
    step_scale: f64,
    final_objective: f64,
    accepted_count: usize,
    diagonal: Vec<f64>,
    bonds: Vec<BondRecord>,
}

/// Search defaults pinned by the CLI (the config schema carries no
/// iteration fields).
pub const SEARCH_MAX_ITERS: usize = 20_000;
pub const SEARCH_STEP_SCALE: f64 = 0.2;

pub fn run_search(
    config: &ScenarioConfig,
    seed_override: Option<u64>,
    out: &Path,
    model_out: &Path,
) -> Result<(), CliError> {
    let seed = seed_override
        .or(config.seed)
        .ok_or_else(|| CliError::Config("search needs a seed (config.seed or --seed)".into()))?;
    let spec = config.network.to_spec()?;
    if spec.kind == NetworkKind::Chain {
        return Err(CliError::Config(
            "search optimizes entanglement between output-arm ends; use y, star or x".into(),
        ));
    }
    let model = build_network(&spec)?;
    let excitation = config.input.to_excitation(&model)?;
    let ends = model.site_roles().arm_ends();
    let partition = ModePartition::new(vec![ends[0]], ends[1..].to_vec())?;
    let search = SearchConfig {
        base: spec,
        target_time: config.time.t_max,
        objective_partition: partition,
        input: excitation,
        max_iters: SEARCH_MAX_ITERS,
        step_scale: SEARCH_STEP_SCALE,
        seed,
    };
    let trace = optimize(&search)?;

    let mut csv = String::from("iter,best_objective\n");
    for (k, obj) in trace.best_objective_per_iter.iter().enumerate() {
        let _ = writeln!(csv, "{},{}", k + 1, obj);
    }
    write_atomic(out, &csv)?;

    let best = &trace.best_model;
    let record = BestModelRecord {
        n_modes: best.n_modes(),
        seed,
        target_time: search.target_time,
        max_iters: search.max_iters,
        step_scale: search.step_scale,
        final_objective: *trace.best_objective_per_iter.last().unwrap(),
        accepted_count: trace.accepted_count,
        diagonal: (0..best.n_modes()).map(|i| best.potential()[(i, i)]).collect(),
        bonds: best
            .edges()
            .iter()
            .map(|&(i, j)| BondRecord {
                i,
                j,
                value: best.bond(i, j),
            })
            .collect(),
    };
    let json = serde_json::to_string_pretty(&record)
        .map_err(|e| CliError::Io(format!("cannot serialize best model: {e}")))?;
    write_atomic(model_out, &(json + "\n"))
}

/// Default best-model path: the trace path with a `.model.json` suffix in
/// place of its extension.
pub fn default_model_path(out: &Path) -> PathBuf {
    out.with_extension("model.json")
}
