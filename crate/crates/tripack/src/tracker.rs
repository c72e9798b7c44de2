//! Checkpoint instrumentation: compares the scaled process state against the
//! deterministic baselines and serializes trajectories.
//!
//! At a checkpoint after step `i` (scaled time `t = i n^{-3/2}`) the tracker
//! samples vertices, pairs, and unmatched edges with a dedicated RNG stream
//! and records, per tracked family, the mean and max absolute deviation of
//! the scaled statistic from its baseline:
//!
//! * `d_revealed`: `|d_G(v) n^{-1/2} - 2t|`
//! * `d_unmatched`: `|d_U(v) n^{-1/2} - y(t)|`
//! * `r`: `||R_c(v)|/n - r_c(y)|` for `c <= r_cap`
//! * `q`: `||Q_{b,c}(u,v)|/n - q_{b,c}(y)|` for `b, c <= q_cap`
//! * `s`: `||S_c(u,v)| n^{-1/2} - s_c(y)|` for `c <= s_cap`, both endpoint
//!   orders
//! * `k`: mean scaled matching weight over sampled unmatched edges vs
//!   `kappa(y)`
//!
//! plus the exact-vs-approximate cross-check for the codegree-raising count
//! (`a_count` against the zero-class sum with its provable slack) and raw
//! state sizes. Everything is deterministic given `(n, m, seed)`.

use std::io::Write as IoWrite;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{CodegScratch, ProcessState};
use crate::ode::{closed_forms_at, OdeSolution};
use crate::{Error, Result};

/// How many vertices, pairs, and unmatched edges a checkpoint samples, and
/// the codegree caps for each tracked family.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct SampleConfig {
    pub vertices: usize,
    pub pairs: usize,
    pub edges: usize,
    pub r_cap: usize,
    pub q_cap: usize,
    pub s_cap: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            vertices: 64,
            pairs: 64,
            edges: 64,
            r_cap: 3,
            q_cap: 2,
            s_cap: 3,
        }
    }
}

/// Codegree cap for the matching-weight sum: the asymptotic analysis bounds
/// every codegree by `3 ln n / ln ln n`, so the weighted sum is truncated
/// there (rounded up, floored at 8 for small n where the formula dips).
pub fn matching_weight_cap(n: usize) -> usize {
    let ln_n = (n as f64).ln();
    let cap = (3.0 * ln_n / ln_n.ln()).ceil() as usize;
    cap.max(8)
}

/// Mean and max of absolute deviations across one sampled family.
#[derive(Clone, Copy, Debug, Default, serde::Serialize)]
pub struct DevStat {
    pub mean: f64,
    pub max: f64,
}

impl DevStat {
    fn from_devs(devs: &[f64]) -> Self {
        if devs.is_empty() {
            return Self::default();
        }
        let sum: f64 = devs.iter().sum();
        let max = devs.iter().cloned().fold(0.0, f64::max);
        Self {
            mean: sum / devs.len() as f64,
            max,
        }
    }
}

/// One checkpoint record.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    /// Baseline unmatched-degree scale y(t).
    pub y: f64,
    pub d_revealed: DevStat,
    pub d_unmatched: DevStat,
    pub r: DevStat,
    pub q: DevStat,
    pub s: DevStat,
    /// Mean scaled matching weight over sampled unmatched edges.
    pub k_mean_scaled: f64,
    /// Baseline kappa(y(t)).
    pub kappa: f64,
    /// |k_mean_scaled - kappa| (0 when no unmatched edge was sampled).
    pub k_dev: f64,
    /// How many unmatched edges the weight mean is over.
    pub k_edges: usize,
    /// Max over sampled pairs of
    /// (S_0(u,v)+S_0(v,u) - A(u,v)) - slack(u,v), where slack is the
    /// provable correction bound; positive means the cross-check failed.
    pub a_slack_excess: f64,
    /// Largest revealed codegree seen from any sampled vertex.
    pub max_codeg_revealed: u32,
    pub unmatched_edges: usize,
    pub matched_triangles: usize,
}

/// Records a checkpoint for `state` against the `Y` baseline.
///
/// Sampling draws from `rng` in a fixed order (vertices, pairs, edges), so
/// a given `(state, rng state)` always produces the same snapshot.
///
/// # Errors
/// `Domain` if the scaled time lies outside `y_sol`'s range; propagates
/// query errors (which indicate internal inconsistency).
pub fn record_checkpoint(
    state: &ProcessState,
    y_sol: &OdeSolution,
    cfg: &SampleConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Snapshot> {
    let n = state.n();
    let nf = n as f64;
    let sqrt_n = nf.sqrt();
    let t = state.step() as f64 / nf.powf(1.5);
    let y = y_sol.eval(t)?;
    let cf = closed_forms_at(y)?;

    let mut scratch_a = CodegScratch::new(n);
    let mut scratch_b = CodegScratch::new(n);

    // ---- vertex-indexed families ----
    let mut dev_d_revealed = Vec::with_capacity(cfg.vertices);
    let mut dev_d_unmatched = Vec::with_capacity(cfg.vertices);
    let mut dev_r = Vec::with_capacity(cfg.vertices * (cfg.r_cap + 1));
    let mut max_codeg = 0u32;
    for _ in 0..cfg.vertices {
        let v = rng.random_range(0..n) as u32;
        dev_d_revealed.push((state.d_revealed(v) as f64 / sqrt_n - 2.0 * t).abs());
        dev_d_unmatched.push((state.d_unmatched(v) as f64 / sqrt_n - y).abs());
        let hist = state.r_histogram_with(v, cfg.r_cap, &mut scratch_a)?;
        for c in 0..=cfg.r_cap {
            dev_r.push((hist.counts[c] as f64 / nf - cf.r(c)?).abs());
        }
        max_codeg = max_codeg.max(state.max_revealed_codegree_from(v, &mut scratch_a)?);
    }

    // ---- pair-indexed families ----
    let mut dev_q = Vec::with_capacity(cfg.pairs * (cfg.q_cap + 1).pow(2));
    let mut dev_s = Vec::with_capacity(cfg.pairs * 2 * (cfg.s_cap + 1));
    let mut a_slack_excess = f64::NEG_INFINITY;
    for _ in 0..cfg.pairs {
        let u = rng.random_range(0..n) as u32;
        let mut v = rng.random_range(0..n - 1) as u32;
        if v >= u {
            v += 1;
        }
        let q_table = state.q_table_with(u, v, cfg.q_cap, &mut scratch_a, &mut scratch_b)?;
        for (b, row) in q_table.iter().enumerate() {
            for (c, &count) in row.iter().enumerate() {
                dev_q.push((count as f64 / nf - cf.q(b, c)?).abs());
            }
        }
        let (s_uv, _) = state.s_table(u, v, cfg.s_cap)?;
        let (s_vu, _) = state.s_table(v, u, cfg.s_cap)?;
        for c in 0..=cfg.s_cap {
            let base = cf.s(c)?;
            dev_s.push((s_uv[c] as f64 / sqrt_n - base).abs());
            dev_s.push((s_vu[c] as f64 / sqrt_n - base).abs());
        }
        a_slack_excess = a_slack_excess.max(a_approx_excess(state, u, v)?);
    }
    if cfg.pairs == 0 {
        a_slack_excess = 0.0;
    }

    // ---- matching weight over sampled unmatched edges ----
    let cap = matching_weight_cap(n);
    let mut k_sum = 0.0;
    let mut k_edges = 0usize;
    if cfg.edges > 0 && state.unmatched_edge_count() > 0 {
        let mut attempts = 0;
        while k_edges < cfg.edges && attempts < 50 * cfg.edges {
            attempts += 1;
            let v = rng.random_range(0..n) as u32;
            let d = state.d_unmatched(v);
            if d == 0 {
                continue;
            }
            let w = state.unmatched_neighbors(v)[rng.random_range(0..d)];
            k_sum += state.k_count(v, w, cap)? / sqrt_n;
            k_edges += 1;
        }
    }
    let k_mean_scaled = if k_edges > 0 { k_sum / k_edges as f64 } else { 0.0 };
    let kappa = cf.kappa();
    let k_dev = if k_edges > 0 {
        (k_mean_scaled - kappa).abs()
    } else {
        0.0
    };

    Ok(Snapshot {
        step: state.step(),
        t,
        y,
        d_revealed: DevStat::from_devs(&dev_d_revealed),
        d_unmatched: DevStat::from_devs(&dev_d_unmatched),
        r: DevStat::from_devs(&dev_r),
        q: DevStat::from_devs(&dev_q),
        s: DevStat::from_devs(&dev_s),
        k_mean_scaled,
        kappa,
        k_dev,
        k_edges,
        a_slack_excess,
        max_codeg_revealed: max_codeg,
        unmatched_edges: state.unmatched_edge_count(),
        matched_triangles: state.matched_triangles().len(),
    })
}

/// Cross-check of the exact codegree-raising count against its zero-class
/// approximation. Returns `(S_0(u,v) + S_0(v,u) - A(u,v)) - slack`, where
///
/// slack = 2 codeg_U(u,v)
///       + #{w in N_U(u): vw matched} + #{w in N_U(v): uw matched}
///       + [uv unmatched] (d_U(u) + d_U(v))
///
/// is the provable bound on the gap: the approximation also counts
/// candidates whose closing edge is already revealed (in `U`, they witness
/// the pair; in `M`, the matched corrections) and, when `uv` itself is
/// unmatched, candidates blocked only by the endpoint witness. A positive
/// return value means the bound was violated.
pub fn a_approx_excess(state: &ProcessState, u: u32, v: u32) -> Result<f64> {
    let a = state.a_count(u, v)? as f64;
    let s0 = (state.s_count(u, v, 0)? + state.s_count(v, u, 0)?) as f64;
    let codeg = state.codeg_unmatched(u, v)?.len() as f64;
    let matched_closures = |x: u32, y: u32| -> u64 {
        state
            .unmatched_neighbors(x)
            .iter()
            .filter(|&&w| w != y && state.is_revealed(y, w) && !state.is_unmatched_edge(y, w))
            .count() as u64
    };
    let mut slack = 2.0 * codeg
        + (matched_closures(u, v) + matched_closures(v, u)) as f64;
    if state.is_unmatched_edge(u, v) {
        slack += (state.d_unmatched(u) + state.d_unmatched(v)) as f64;
    }
    if s0 < a {
        // The approximation must dominate the exact count; a negative gap
        // is itself an excess.
        return Ok(a - s0 + slack.max(0.0) + 1.0);
    }
    Ok((s0 - a) - slack)
}

// ----------------------------------------------------------------------
// Trajectory container and serialization
// ----------------------------------------------------------------------

/// Identifying metadata echoed into every serialized trajectory.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RunMeta {
    pub process: &'static str,
    pub n: usize,
    pub m: u64,
    pub seed: u64,
    pub samples: SampleConfig,
}

/// Checkpoint sequence of a packing run.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Trajectory {
    pub meta: RunMeta,
    pub snapshots: Vec<Snapshot>,
}

/// Formats a value with 12 significant digits (integers print plainly), the
/// fixed numeric format of every CSV this crate writes.
pub fn fmt_value(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.fract() == 0.0 && x.abs() < 1e15 {
        return format!("{}", x as i64);
    }
    format!("{:.11e}", x)
}

impl Trajectory {
    /// Writes the row-per-statistic CSV:
    /// `step,t,family,statistic,value` after `#`-prefixed metadata lines.
    ///
    /// # Errors
    /// Propagates I/O failures as `InvalidArgument` (callers hand in files
    /// they just created; richer I/O context lives in the CLI).
    pub fn write_csv<W: IoWrite>(&self, out: &mut W) -> Result<()> {
        let meta = &self.meta;
        let mut buf = String::new();
        buf.push_str(&format!(
            "# tripack {} {} trajectory\n",
            env!("CARGO_PKG_VERSION"),
            meta.process
        ));
        buf.push_str(&format!(
            "# n={} m={} seed={} samples_vertices={} samples_pairs={} samples_edges={} r_cap={} q_cap={} s_cap={}\n",
            meta.n,
            meta.m,
            meta.seed,
            meta.samples.vertices,
            meta.samples.pairs,
            meta.samples.edges,
            meta.samples.r_cap,
            meta.samples.q_cap,
            meta.samples.s_cap,
        ));
        buf.push_str("step,t,family,statistic,value\n");
        for s in &self.snapshots {
            let mut row = |family: &str, stat: &str, value: f64| {
                buf.push_str(&format!(
                    "{},{},{},{},{}\n",
                    s.step,
                    fmt_value(s.t),
                    family,
                    stat,
                    fmt_value(value)
                ));
            };
            row("baseline", "y", s.y);
            row("baseline", "kappa", s.kappa);
            row("d_revealed", "mean_dev", s.d_revealed.mean);
            row("d_revealed", "max_dev", s.d_revealed.max);
            row("d_unmatched", "mean_dev", s.d_unmatched.mean);
            row("d_unmatched", "max_dev", s.d_unmatched.max);
            row("r", "mean_dev", s.r.mean);
            row("r", "max_dev", s.r.max);
            row("q", "mean_dev", s.q.mean);
            row("q", "max_dev", s.q.max);
            row("s", "mean_dev", s.s.mean);
            row("s", "max_dev", s.s.max);
            row("k", "mean_scaled", s.k_mean_scaled);
            row("k", "dev", s.k_dev);
            row("k", "edges", s.k_edges as f64);
            row("a_slack", "max_excess", s.a_slack_excess);
            row("codeg", "max_revealed", s.max_codeg_revealed as f64);
            row("state", "unmatched_edges", s.unmatched_edges as f64);
            row("state", "matched_triangles", s.matched_triangles as f64);
        }
        out.write_all(buf.as_bytes())
            .map_err(|e| Error::InvalidArgument(format!("trajectory write failed: {e}")))
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory write cannot fail");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

// ----------------------------------------------------------------------
// Concentration report
// ----------------------------------------------------------------------

/// Verdict for one tracked family across a whole trajectory.
#[derive(Clone, Debug, serde::Serialize)]
pub struct FamilyVerdict {
    pub family: &'static str,
    /// Largest per-snapshot mean deviation along the run.
    pub worst_mean: f64,
    /// Step index where the worst mean occurred.
    pub worst_step: usize,
    pub pass: bool,
}

/// Empirical concentration verdict: a family passes when every snapshot's
/// mean scaled deviation stays within `band`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ConcentrationReport {
    pub band: f64,
    pub families: Vec<FamilyVerdict>,
}

/// Default empirical band; chosen for desk-scale runs where the theoretical
/// band is vacuous.
pub const DEFAULT_BAND: f64 = 0.05;

/// # Errors
/// `InvalidArgument` if `band` is not positive or the trajectory is empty.
pub fn concentration_report(traj: &Trajectory, band: f64) -> Result<ConcentrationReport> {
    if !(band > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "band must be positive, got {band}"
        )));
    }
    if traj.snapshots.is_empty() {
        return Err(Error::InvalidArgument("trajectory has no snapshots".into()));
    }
    let pick = |name: &'static str, get: &dyn Fn(&Snapshot) -> f64| -> FamilyVerdict {
        let mut worst_mean = f64::NEG_INFINITY;
        let mut worst_step = 0;
        for s in &traj.snapshots {
            let v = get(s);
            if v > worst_mean {
                worst_mean = v;
                worst_step = s.step;
            }
        }
        FamilyVerdict {
            family: name,
            worst_mean,
            worst_step,
            pass: worst_mean <= band,
        }
    };
    Ok(ConcentrationReport {
        band,
        families: vec![
            pick("d_revealed", &|s| s.d_revealed.mean),
            pick("d_unmatched", &|s| s.d_unmatched.mean),
            pick("r", &|s| s.r.mean),
            pick("q", &|s| s.q.mean),
            pick("s", &|s| s.s.mean),
        ],
    })
}

impl ConcentrationReport {
    pub fn family(&self, name: &str) -> Option<&FamilyVerdict> {
        self.families.iter().find(|f| f.family == name)
    }
}

// ----------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::{integrate, OdeKind, DEFAULT_STEP};
    use rand::SeedableRng;

    fn tiny_state() -> ProcessState {
        let mut st = ProcessState::new(30).unwrap();
        // A few unmatched edges and one matched triangle, built through the
        // process mutators so all counters stay consistent.
        st.reveal_unmatched(0, 1);
        st.reveal_unmatched(1, 2);
        st.reveal_unmatched(3, 4);
        st.reveal_unmatched(0, 4);
        st.reveal_matched(0, 2, 1); // closes the wedge 0-1-2
        st.check_partition().unwrap();
        st
    }

    #[test]
    fn snapshot_is_deterministic_given_rng_state() {
        let st = tiny_state();
        let sol = integrate(OdeKind::Y, 1.0, DEFAULT_STEP).unwrap();
        let cfg = SampleConfig::default();
        let a = record_checkpoint(&st, &sol, &cfg, &mut crate::seed::rng_from(3)).unwrap();
        let b = record_checkpoint(&st, &sol, &cfg, &mut crate::seed::rng_from(3)).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
        assert_eq!(a.step, st.step());
        assert_eq!(a.unmatched_edges, 2);
        assert_eq!(a.matched_triangles, 1);
    }

    #[test]
    fn a_slack_bound_holds_on_small_states() {
        let st = tiny_state();
        for u in 0..30u32 {
            for v in (u + 1)..30u32 {
                let excess = a_approx_excess(&st, u, v).unwrap();
                assert!(excess <= 0.0, "excess {excess} at ({u}, {v})");
            }
        }
    }

    #[test]
    fn csv_shape_and_determinism() {
        let st = tiny_state();
        let sol = integrate(OdeKind::Y, 1.0, DEFAULT_STEP).unwrap();
        let cfg = SampleConfig::default();
        let snap = record_checkpoint(&st, &sol, &cfg, &mut crate::seed::rng_from(1)).unwrap();
        let traj = Trajectory {
            meta: RunMeta {
                process: "packing",
                n: 30,
                m: 5,
                seed: 1,
                samples: cfg,
            },
            snapshots: vec![snap],
        };
        let a = traj.to_csv_string();
        let b = traj.to_csv_string();
        assert_eq!(a, b);
        assert!(a.starts_with("# tripack"));
        assert!(a.contains("step,t,family,statistic,value"));
        assert!(a.contains(",d_unmatched,mean_dev,"));
        // one header + one meta + one column line + 19 rows
        assert_eq!(a.lines().count(), 3 + 19);
    }

    #[test]
    fn fmt_value_is_stable() {
        assert_eq!(fmt_value(0.0), "0");
        assert_eq!(fmt_value(42.0), "42");
        assert_eq!(fmt_value(-3.0), "-3");
        assert_eq!(fmt_value(0.5), "5.00000000000e-1");
        let s = fmt_value(std::f64::consts::PI);
        assert_eq!(s, "3.14159265359e0");
    }

    #[test]
    fn concentration_report_flags_and_passes() {
        let st = tiny_state();
        let sol = integrate(OdeKind::Y, 1.0, DEFAULT_STEP).unwrap();
        let cfg = SampleConfig::default();
        let snap = record_checkpoint(&st, &sol, &cfg, &mut crate::seed::rng_from(1)).unwrap();
        let traj = Trajectory {
            meta: RunMeta {
                process: "packing",
                n: 30,
                m: 5,
                seed: 1,
                samples: cfg,
            },
            snapshots: vec![snap],
        };
        let loose = concentration_report(&traj, 100.0).unwrap();
        assert!(loose.families.iter().all(|f| f.pass));
        assert_eq!(loose.families.len(), 5);
        let tight = concentration_report(&traj, 1e-12).unwrap();
        assert!(tight.families.iter().any(|f| !f.pass));
        assert!(concentration_report(&traj, 0.0).is_err());
        let empty = Trajectory {
            meta: traj.meta.clone(),
            snapshots: vec![],
        };
        assert!(concentration_report(&empty, 0.05).is_err());
    }
}
