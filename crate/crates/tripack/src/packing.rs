//! The online triangle packing process.
//!
//! Edges of a uniformly random m-subset of K_n are revealed one at a time.
//! A revealed edge whose endpoints have no common unmatched neighbor joins
//! the unmatched graph `U`; otherwise a witness is chosen uniformly among
//! the common unmatched neighbors and the whole triangle (the new edge plus
//! the two wedge edges) moves into the matched graph. `U` stays
//! triangle-free forever, and the matched triangles form an edge-disjoint
//! packing whose size is `(step - |E(U)|) / 3`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{EdgeId, ProcessState};
use crate::ode::{integrate, OdeKind, DEFAULT_STEP};
use crate::seed::{rng_from, sampler_seed, trial_seed};
use crate::stream::{pair_count, EdgeStream};
use crate::tracker::{record_checkpoint, RunMeta, SampleConfig, Trajectory};
use crate::{Error, Result};

/// What one reveal did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    /// No common unmatched neighbor: the edge joined the unmatched graph.
    StayedUnmatched,
    /// The edge closed at least one wedge and was matched on the spot.
    Matched {
        /// The matched triangle, vertices ascending.
        triangle: [u32; 3],
        /// How many witnesses the uniform choice was over.
        witness_count: usize,
    },
}

/// Reveals edge `e`, applying the packing rule. Consumes exactly one RNG
/// value when the edge is matched (the witness index into the ascending
/// witness list) and none otherwise.
///
/// # Errors
/// `InvalidArgument` if `e` is out of range or was already revealed.
pub fn packing_step(
    state: &mut ProcessState,
    e: EdgeId,
    rng: &mut ChaCha8Rng,
) -> Result<StepOutcome> {
    let mut witnesses = Vec::new();
    packing_step_with(state, e, rng, &mut witnesses)
}

/// [`packing_step`] with a caller-owned witness buffer so the run loop does
/// not allocate per step.
pub fn packing_step_with(
    state: &mut ProcessState,
    e: EdgeId,
    rng: &mut ChaCha8Rng,
    witnesses: &mut Vec<u32>,
) -> Result<StepOutcome> {
    if (e.v as usize) >= state.n() {
        return Err(Error::InvalidArgument(format!(
            "edge {e} out of range (n = {})",
            state.n()
        )));
    }
    if state.is_revealed(e.u, e.v) {
        return Err(Error::InvalidArgument(format!("edge {e} already revealed")));
    }
    witnesses.clear();
    crate::sorted::intersect_into(
        state.unmatched_neighbors(e.u),
        state.unmatched_neighbors(e.v),
        witnesses,
    );
    if witnesses.is_empty() {
        state.reveal_unmatched(e.u, e.v);
        return Ok(StepOutcome::StayedUnmatched);
    }
    let w = witnesses[rng.random_range(0..witnesses.len())];
    state.reveal_matched(e.u, e.v, w);
    let mut triangle = [e.u, e.v, w];
    triangle.sort_unstable();
    Ok(StepOutcome::Matched {
        triangle,
        witness_count: witnesses.len(),
    })
}

/// An edge-disjoint set of triangles, the process output.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TrianglePacking {
    pub n: usize,
    /// Each triangle with vertices ascending.
    pub triangles: Vec<[u32; 3]>,
}

impl TrianglePacking {
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Checks the packing is valid against an edge predicate: every
    /// triangle uses existing edges only, and no edge is used twice.
    ///
    /// # Errors
    /// `Domain` describing the first violation found.
    pub fn validate<F: Fn(u32, u32) -> bool>(&self, is_edge: F) -> Result<()> {
        let mut used = std::collections::HashSet::new();
        for tri in &self.triangles {
            let [a, b, c] = *tri;
            if !(a < b && b < c) || (c as usize) >= self.n {
                return Err(Error::Domain(format!("malformed triangle {tri:?}")));
            }
            for (x, y) in [(a, b), (a, c), (b, c)] {
                if !is_edge(x, y) {
                    return Err(Error::Domain(format!(
                        "triangle {tri:?} uses absent edge ({x}, {y})"
                    )));
                }
                if !used.insert((x, y)) {
                    return Err(Error::Domain(format!(
                        "edge ({x}, {y}) used by two triangles"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// True when `packing` is an edge-disjoint triangle set inside the given
/// edge set.
pub fn packing_is_valid<F: Fn(u32, u32) -> bool>(packing: &TrianglePacking, is_edge: F) -> bool {
    packing.validate(is_edge).is_ok()
}

/// Run parameters for a full packing simulation.
#[derive(Clone, Debug)]
pub struct PackingConfig {
    pub n: usize,
    /// Edges to reveal; at most `pair_count(n)`.
    pub m: usize,
    pub seed: u64,
    /// Step indices (1-based) at which to record snapshots; need not be
    /// sorted, duplicates are collapsed.
    pub checkpoints: Vec<usize>,
    pub samples: SampleConfig,
}

impl PackingConfig {
    pub fn new(n: usize, m: usize, seed: u64) -> Self {
        Self {
            n,
            m,
            seed,
            checkpoints: Vec::new(),
            samples: SampleConfig::default(),
        }
    }

    pub fn with_checkpoints(mut self, checkpoints: Vec<usize>) -> Self {
        self.checkpoints = checkpoints;
        self
    }
}

/// `count` checkpoint steps spread evenly over `1..=m`.
pub fn default_checkpoints(m: usize, count: usize) -> Vec<usize> {
    let count = count.min(m);
    let mut steps: Vec<usize> = (1..=count)
        .map(|j| ((j as f64 / count as f64) * m as f64).round() as usize)
        .map(|s| s.clamp(1, m))
        .collect();
    steps.dedup();
    steps
}

/// A completed packing run.
pub struct PackingRun {
    pub state: ProcessState,
    pub packing: TrianglePacking,
    pub trajectory: Trajectory,
}

/// Runs the packing process: reveals `m` uniformly random distinct edges
/// under seed-derived randomness and snapshots at the configured steps.
///
/// Determinism: the edge sequence and witness choices are driven by the
/// run RNG, checkpoint sampling by a separate stream derived from the same
/// seed, so identical `(n, m, seed)` give bit-identical runs regardless of
/// checkpoint configuration.
///
/// # Errors
/// `InvalidArgument` on `m > pair_count(n)`, a checkpoint outside `1..=m`,
/// or a degenerate `n` (below 3).
pub fn run_packing(cfg: &PackingConfig) -> Result<PackingRun> {
    let mut state = ProcessState::new(cfg.n)?;
    if cfg.m as u64 > pair_count(cfg.n) {
        return Err(Error::InvalidArgument(format!(
            "m = {} exceeds the {} edges of K_{}",
            cfg.m,
            pair_count(cfg.n),
            cfg.n
        )));
    }
    let mut checkpoints = cfg.checkpoints.clone();
    checkpoints.sort_unstable();
    checkpoints.dedup();
    if let Some(&bad) = checkpoints.iter().find(|&&s| s == 0 || s > cfg.m) {
        return Err(Error::InvalidArgument(format!(
            "checkpoint step {bad} outside 1..={}",
            cfg.m
        )));
    }

    let t_end = cfg.m as f64 / (cfg.n as f64).powf(1.5);
    let y_sol = integrate(OdeKind::Y, t_end, DEFAULT_STEP)?;

    let mut rng = rng_from(cfg.seed);
    let mut sampler_rng = rng_from(sampler_seed(cfg.seed));
    let mut stream = EdgeStream::new(cfg.n)?;
    let mut witnesses = Vec::new();
    let mut snapshots = Vec::with_capacity(checkpoints.len());
    let mut next_cp = checkpoints.iter().copied().peekable();

    for step in 1..=cfg.m {
        let e = stream
            .next_edge(&mut rng)
            .expect("stream length checked against m");
        packing_step_with(&mut state, e, &mut rng, &mut witnesses)?;
        if next_cp.peek() == Some(&step) {
            next_cp.next();
            snapshots.push(record_checkpoint(
                &state,
                &y_sol,
                &cfg.samples,
                &mut sampler_rng,
            )?);
        }
    }

    let packing = TrianglePacking {
        n: cfg.n,
        triangles: state.matched_triangles().to_vec(),
    };
    let trajectory = Trajectory {
        meta: RunMeta {
            process: "packing",
            n: cfg.n,
            m: cfg.m as u64,
            seed: cfg.seed,
            samples: cfg.samples,
        },
        snapshots,
    };
    Ok(PackingRun {
        state,
        packing,
        trajectory,
    })
}

/// Runs `trials` independent packing runs (seeds split from `master` by
/// trial index), mapping each completed run through `f` before the next
/// starts on that worker, so large states are dropped eagerly. Results come
/// back in trial order. `workers <= 1` runs sequentially; otherwise a rayon
/// pool of that width is used.
pub fn run_packing_trials_map<T, F>(
    base: &PackingConfig,
    trials: usize,
    workers: usize,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, PackingRun) -> T + Sync,
{
    let cfg_for = |trial: usize| {
        let mut cfg = base.clone();
        cfg.seed = trial_seed(base.seed, trial as u64);
        cfg
    };
    if workers <= 1 || trials <= 1 {
        let mut out = Vec::with_capacity(trials);
        for trial in 0..trials {
            out.push(f(trial, run_packing(&cfg_for(trial))?));
        }
        return Ok(out);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.min(trials))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    pool.install(|| {
        use rayon::prelude::*;
        (0..trials)
            .into_par_iter()
            .map(|trial| Ok(f(trial, run_packing(&cfg_for(trial))?)))
            .collect()
    })
}

// ----------------------------------------------------------------------
