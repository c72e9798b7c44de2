//! Shared state of an edge-stream process and the codegree statistics the
//! analysis tracks.
//!
//! [`ProcessState`] partitions the revealed edges into the unmatched graph
//! `U` (kept triangle-free by the packing rule) and the matched graph `M`
//! (a union of edge-disjoint triangles). All query operations are pure graph
//! counts over that partition:
//!
//! * [`codeg_unmatched`](ProcessState::codeg_unmatched) — common unmatched
//!   neighbors of a pair (the triangle witnesses);
//! * [`r_histogram`](ProcessState::r_histogram) — how many vertices sit at
//!   each unmatched codegree from a fixed vertex;
//! * [`s_count`](ProcessState::s_count) — unmatched neighbors of one
//!   endpoint at a prescribed codegree (excluding the endpoint itself) from
//!   the other;
//! * [`q_count`](ProcessState::q_count) — vertices at a prescribed joint
//!   codegree from both endpoints;
//! * [`a_count`](ProcessState::a_count) — unrevealed edges whose reveal
//!   would raise the pair's unmatched codegree and survive unmatched;
//! * [`k_count`](ProcessState::k_count) — the weighted count of next-edge
//!   choices that would move an unmatched edge into the matched graph.
//!
//! Neighbor sets are sorted vectors, so codegree queries are linear merges
//! and the heavy statistics run in O(d^2) per query.

use crate::sorted;
use crate::{Error, Result};

/// Canonical undirected edge: endpoints stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct EdgeId {
    pub u: u32,
    pub v: u32,
}

impl EdgeId {
    /// # Errors
    /// `InvalidArgument` if the endpoints coincide.
    pub fn new(a: u32, b: u32) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidArgument(format!("loop edge at vertex {a}")));
        }
        Ok(Self {
            u: a.min(b),
            v: a.max(b),
        })
    }
}

impl std::fmt::Display for EdgeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}", self.u, self.v)
    }
}

/// Counts of vertices per codegree class, plus everything above the cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodegreeHistogram {
    /// `counts[c]` = number of vertices at codegree exactly `c`, `c <= cap`.
    pub counts: Vec<u64>,
    /// Number of vertices at codegree strictly above the cap.
    pub overflow: u64,
}

impl CodegreeHistogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.overflow
    }
}

/// Reusable buffers for the O(d^2) two-path walks. One instance per thread;
/// `ensure` grows it to the working vertex count.
#[derive(Default)]
pub struct CodegScratch {
    counts: Vec<u32>,
    touched: Vec<u32>,
}

impl CodegScratch {
    pub fn new(n: usize) -> Self {
        Self {
            counts: vec![0; n],
            touched: Vec::new(),
        }
    }

    fn ensure(&mut self, n: usize) {
        if self.counts.len() < n {
            self.counts.resize(n, 0);
        }
    }

    fn reset(&mut self) {
        for &w in &self.touched {
            self.counts[w as usize] = 0;
        }
        self.touched.clear();
    }
}

/// Partitioned state of the packing process after some number of reveals.
#[derive(Clone, Debug)]
pub struct ProcessState {
    n: u32,
    step: usize,
    unmatched: Vec<Vec<u32>>,
    matched: Vec<Vec<u32>>,
    revealed: Vec<Vec<u32>>,
    unmatched_edges: usize,
    triangles: Vec<[u32; 3]>,
}

impl ProcessState {
    /// Empty state on `n` vertices.
    ///
    /// # Errors
    /// `InvalidArgument` if `n < 3` (no triangle fits) or `n` exceeds `u32`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "process needs at least 3 vertices, got {n}"
            )));
        }
        let n_u32 = u32::try_from(n)
            .map_err(|_| Error::InvalidArgument(format!("vertex count {n} exceeds u32")))?;
        Ok(Self {
            n: n_u32,
            step: 0,
            unmatched: vec![Vec::new(); n],
            matched: vec![Vec::new(); n],
            revealed: vec![Vec::new(); n],
            unmatched_edges: 0,
            triangles: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Number of edges revealed so far.
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn unmatched_edge_count(&self) -> usize {
        self.unmatched_edges
    }

    pub fn matched_triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn unmatched_neighbors(&self, v: u32) -> &[u32] {
        &self.unmatched[v as usize]
    }

    pub fn d_unmatched(&self, v: u32) -> usize {
        self.unmatched[v as usize].len()
    }

    pub fn d_matched(&self, v: u32) -> usize {
        self.matched[v as usize].len()
    }

    pub fn d_revealed(&self, v: u32) -> usize {
        self.revealed[v as usize].len()
    }

    pub fn is_unmatched_edge(&self, u: u32, v: u32) -> bool {
        sorted::contains(&self.unmatched[u as usize], v)
    }

    pub fn is_revealed(&self, u: u32, v: u32) -> bool {
        sorted::contains(&self.revealed[u as usize], v)
    }

    fn check_vertex(&self, v: u32) -> Result<()> {
        if v >= self.n {
            return Err(Error::InvalidArgument(format!(
                "vertex {v} out of range (n = {})",
                self.n
            )));
        }
        Ok(())
    }

    fn check_pair(&self, u: u32, v: u32) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::InvalidArgument(format!("pair needs two vertices, got ({u}, {u})")));
        }
        Ok(())
    }

    // ------------------------------------------------------------------
    // Mutation (used by the packing step; preconditions are the step's
    // responsibility, asserted here in debug builds)
    // ------------------------------------------------------------------

    /// Records `uv` as revealed and unmatched. Caller guarantees `uv` is
    /// unrevealed and has zero unmatched codegree.
    pub(crate) fn reveal_unmatched(&mut self, u: u32, v: u32) {
        debug_assert!(sorted::disjoint(
            &self.unmatched[u as usize],
            &self.unmatched[v as usize]
        ));
        let inserted = sorted::insert(&mut self.revealed[u as usize], v)
            && sorted::insert(&mut self.revealed[v as usize], u);
        debug_assert!(inserted);
        sorted::insert(&mut self.unmatched[u as usize], v);
        sorted::insert(&mut self.unmatched[v as usize], u);
        self.unmatched_edges += 1;
        self.step += 1;
    }

    /// Records `uv` as revealed and immediately matched into the triangle
    /// `{u, v, w}`, moving `uw` and `vw` out of the unmatched graph. Caller
    /// guarantees `uv` is unrevealed and `w` is a common unmatched neighbor.
    pub(crate) fn reveal_matched(&mut self, u: u32, v: u32, w: u32) {
        let inserted = sorted::insert(&mut self.revealed[u as usize], v)
            && sorted::insert(&mut self.revealed[v as usize], u);
        debug_assert!(inserted);
        for (a, b) in [(u, w), (v, w)] {
            let removed = sorted::remove(&mut self.unmatched[a as usize], b)
                && sorted::remove(&mut self.unmatched[b as usize], a);
            debug_assert!(removed);
        }
        for (a, b) in [(u, v), (u, w), (v, w)] {
            sorted::insert(&mut self.matched[a as usize], b);
            sorted::insert(&mut self.matched[b as usize], a);
        }
        let mut tri = [u, v, w];
        tri.sort_unstable();
        self.triangles.push(tri);
        self.unmatched_edges -= 2;
        self.step += 1;
    }

    // ------------------------------------------------------------------
    // Codegree statistics
    // ------------------------------------------------------------------

    /// Common unmatched neighbors of `u` and `v`, ascending. The returned
    /// length is the unmatched codegree; the entries are the triangle
    /// witnesses the packing step chooses from.
    ///
    /// # Errors
    /// `InvalidArgument` on a loop pair or out-of-range vertex.
    pub fn codeg_unmatched(&self, u: u32, v: u32) -> Result<Vec<u32>> {
        self.check_pair(u, v)?;
        let mut out = Vec::new();
        sorted::intersect_into(
            &self.unmatched[u as usize],
            &self.unmatched[v as usize],
            &mut out,
        );
        Ok(out)
    }

    /// Histogram over all vertices `u != v` of the unmatched codegree of
    /// `(u, v)`, bucketed at `0..=c_cap` plus overflow. Total is `n - 1`.
    pub fn r_histogram(&self, v: u32, c_cap: usize) -> Result<CodegreeHistogram> {
        let mut scratch = CodegScratch::new(self.n());
        self.r_histogram_with(v, c_cap, &mut scratch)
    }

    /// Same as [`r_histogram`](Self::r_histogram) with a caller-provided
    /// scratch buffer (the tracker calls this once per sampled vertex).
    pub fn r_histogram_with(
        &self,
        v: u32,
        c_cap: usize,
        scratch: &mut CodegScratch,
    ) -> Result<CodegreeHistogram> {
        self.check_vertex(v)?;
        scratch.ensure(self.n());
        self.walk_two_paths(&self.unmatched, v, scratch);
        let mut counts = vec![0u64; c_cap + 1];
        let mut overflow = 0u64;
        for &w in &scratch.touched {
            let c = scratch.counts[w as usize] as usize;
            if c <= c_cap {
                counts[c] += 1;
            } else {
                overflow += 1;
            }
        }
        // Vertices never touched by a two-path have codegree zero.
        counts[0] += (self.n() - 1 - scratch.touched.len()) as u64;
        scratch.reset();
        Ok(CodegreeHistogram { counts, overflow })
    }

    /// Accumulates, for every `w != v`, the number of `U`-two-paths from `v`
    /// to `w` (= unmatched codegree of `(v, w)`) into the scratch counts.
    fn walk_two_paths(&self, adj: &[Vec<u32>], v: u32, scratch: &mut CodegScratch) {
        for &x in &adj[v as usize] {
            for &w in &adj[x as usize] {
                if w == v {
                    continue;
                }
                let slot = &mut scratch.counts[w as usize];
                if *slot == 0 {
                    scratch.touched.push(w);
                }
                *slot += 1;
            }
        }
    }

    /// Number of unmatched neighbors `w` of `v` (excluding `u`) whose
    /// unmatched codegree with `u`, not counting `v` as a witness, is
    /// exactly `c`.
    pub fn s_count(&self, u: u32, v: u32, c: usize) -> Result<u64> {
        let (counts, overflow) = self.s_table(u, v, c)?;
        Ok(if c < counts.len() { counts[c] } else { overflow })
    }

    /// Histogram version of [`s_count`](Self::s_count): counts for
    /// `0..=c_cap` plus overflow. Summing everything gives
    /// `d_U(v) - [uv unmatched]`.
    pub fn s_table(&self, u: u32, v: u32, c_cap: usize) -> Result<(Vec<u64>, u64)> {
        self.check_pair(u, v)?;
        let uv_unmatched = self.is_unmatched_edge(u, v);
        let mut counts = vec![0u64; c_cap + 1];
        let mut overflow = 0u64;
        for &w in &self.unmatched[v as usize] {
            if w == u {
                continue;
            }
            let mut c = sorted::intersect_count(
                &self.unmatched[w as usize],
                &self.unmatched[u as usize],
            );
            // `v` is always a common neighbor when uv is unmatched (w is an
            // unmatched neighbor of v by construction); the statistic
            // excludes it.
            if uv_unmatched {
                c -= 1;
            }
            if c <= c_cap {
                counts[c] += 1;
            } else {
                overflow += 1;
            }
        }
        Ok((counts, overflow))
    }

    /// Number of vertices `w` outside `{u, v}` with unmatched codegree
    /// exactly `b` to `u` and exactly `c` to `v`.
    pub fn q_count(&self, u: u32, v: u32, b: usize, c: usize) -> Result<u64> {
        let table = self.q_table(u, v, b.max(c))?;
        Ok(table[b][c])
    }

    /// Joint codegree table for `0..=cap` in both coordinates; entry
    /// `[b][c]` counts vertices at codegree `(b, c)` from `(u, v)`. Pairs
    /// with either coordinate above the cap are not represented, so the
    /// table entries sum to at most `n - 2`.
    pub fn q_table(&self, u: u32, v: u32, cap: usize) -> Result<Vec<Vec<u64>>> {
        let mut su = CodegScratch::new(self.n());
        let mut sv = CodegScratch::new(self.n());
        self.q_table_with(u, v, cap, &mut su, &mut sv)
    }

    pub fn q_table_with(
        &self,
        u: u32,
        v: u32,
        cap: usize,
        scratch_u: &mut CodegScratch,
        scratch_v: &mut CodegScratch,
    ) -> Result<Vec<Vec<u64>>> {
        self.check_pair(u, v)?;
        scratch_u.ensure(self.n());
        scratch_v.ensure(self.n());
        self.walk_two_paths(&self.unmatched, u, scratch_u);
        self.walk_two_paths(&self.unmatched, v, scratch_v);
        let mut table = vec![vec![0u64; cap + 1]; cap + 1];
        let mut seen_nonzero = 0u64;
        for &w in &scratch_u.touched {
            if w == u || w == v {
                continue;
            }
            seen_nonzero += 1;
            let b = scratch_u.counts[w as usize] as usize;
            let c = scratch_v.counts[w as usize] as usize;
            if b <= cap && c <= cap {
                table[b][c] += 1;
            }
        }
        for &w in &scratch_v.touched {
            if w == u || w == v || scratch_u.counts[w as usize] > 0 {
                continue; // already counted through the u-side walk
            }
            seen_nonzero += 1;
            let c = scratch_v.counts[w as usize] as usize;
            if c <= cap {
                table[0][c] += 1;
            }
        }
        table[0][0] = (self.n() as u64 - 2).saturating_sub(seen_nonzero);
        scratch_u.reset();
        scratch_v.reset();
        Ok(table)
    }

    /// Exact count of unrevealed edges whose reveal would raise the
    /// unmatched codegree of `(u, v)` by one and survive into the unmatched
    /// graph (i.e. close no triangle there).
    ///
    /// Such an edge must join one endpoint to an unmatched neighbor of the
    /// other, and survival means the new edge's own unmatched codegree is
    /// zero at reveal time.
    pub fn a_count(&self, u: u32, v: u32) -> Result<u64> {
        self.check_pair(u, v)?;
        Ok(self.a_count_side(u, v) + self.a_count_side(v, u))
    }

    /// Candidates `vw` with `w` an unmatched neighbor of `u`: counts those
    /// unrevealed with zero unmatched codegree.
    fn a_count_side(&self, u: u32, v: u32) -> u64 {
        let mut count = 0u64;
        for &w in &self.unmatched[u as usize] {
            if w == v || self.is_revealed(v, w) {
                continue;
            }
            if sorted::disjoint(&self.unmatched[v as usize], &self.unmatched[w as usize]) {
                count += 1;
            }
        }
        count
    }

    /// Weighted count of next-edge choices that would move the unmatched
    /// edge `uv` into the matched graph: sum over `c = 0..=c_cap` of
    /// `(s_count(u,v,c) + s_count(v,u,c)) / (c + 1)`.
    ///
    /// A candidate at excluded codegree `c` has `c + 1` triangle witnesses
    /// when it arrives, so it selects the `uv` triangle with probability
    /// `1/(c+1)`; the weight is that selection probability.
    ///
    /// # Errors
    /// `Domain` if `uv` is not an unmatched edge.
    pub fn k_count(&self, u: u32, v: u32, c_cap: usize) -> Result<f64> {
        self.check_pair(u, v)?;
        if !self.is_unmatched_edge(u, v) {
            return Err(Error::Domain(format!(
                "k_count needs an unmatched edge, ({u}, {v}) is not"
            )));
        }
        let (side_uv, _) = self.s_table(u, v, c_cap)?;
        let (side_vu, _) = self.s_table(v, u, c_cap)?;
        let mut total = 0.0;
        for c in 0..=c_cap {
            total += (side_uv[c] + side_vu[c]) as f64 / (c as f64 + 1.0);
        }
        Ok(total)
    }

    // ------------------------------------------------------------------
    // Diagnostics
    // ------------------------------------------------------------------

    /// Largest revealed codegree over all pairs containing `v` (two-path
    /// walk over the revealed graph).
    pub fn max_revealed_codegree_from(&self, v: u32, scratch: &mut CodegScratch) -> Result<u32> {
        self.check_vertex(v)?;
        scratch.ensure(self.n());
        self.walk_two_paths(&self.revealed, v, scratch);
        let mut best = 0;
        for &w in &scratch.touched {
            best = best.max(scratch.counts[w as usize]);
        }
        scratch.reset();
        Ok(best)
    }

    /// Any triangle in the unmatched graph, if one exists. The packing rule
    /// keeps `U` triangle-free, so this returning `Some` means a bug.
    pub fn unmatched_triangle(&self) -> Option<[u32; 3]> {
        for v in 0..self.n {
            let nv = &self.unmatched[v as usize];
            for (i, &x) in nv.iter().enumerate() {
                if x < v {
                    continue; // scan each edge once, from its smaller endpoint
                }
                for &y in &nv[i + 1..] {
                    if sorted::contains(&self.unmatched[x as usize], y) {
                        return Some([v, x, y]);
                    }
                }
            }
        }
        None
    }

    /// Consistency of the internal partition: `revealed` is the disjoint
    /// union of `unmatched` and `matched`, edge counts line up, and every
    /// matched triangle is present in the matched graph. O(sum d^2); meant
    /// for tests and fuzz checkpoints.
    pub fn check_partition(&self) -> Result<()> {
        let mut u_edges = 0usize;
        let mut m_edges = 0usize;
        for v in 0..self.n {
            let vi = v as usize;
            u_edges += self.unmatched[vi].len();
            m_edges += self.matched[vi].len();
            for &w in &self.unmatched[vi] {
                if sorted::contains(&self.matched[vi], w) {
                    return Err(Error::Domain(format!(
                        "edge ({v}, {w}) both matched and unmatched"
                    )));
                }
                if !self.is_revealed(v, w) {
                    return Err(Error::Domain(format!("unmatched edge ({v}, {w}) not revealed")));
                }
            }
            for &w in &self.matched[vi] {
                if !self.is_revealed(v, w) {
                    return Err(Error::Domain(format!("matched edge ({v}, {w}) not revealed")));
                }
            }
            if self.unmatched[vi].len() + self.matched[vi].len() != self.revealed[vi].len() {
                return Err(Error::Domain(format!("degree mismatch at vertex {v}")));
            }
        }
        if u_edges % 2 != 0 || m_edges % 2 != 0 {
            return Err(Error::Domain("odd adjacency sum".into()));
        }
        if u_edges / 2 != self.unmatched_edges {
            return Err(Error::Domain(format!(
                "unmatched edge counter {} disagrees with adjacency {}",
                self.unmatched_edges,
                u_edges / 2
            )));
        }
        if m_edges / 2 != 3 * self.triangles.len() {
            return Err(Error::Domain(format!(
                "matched graph has {} edges, expected 3 * {} triangles",
                m_edges / 2,
                self.triangles.len()
            )));
        }
        if self.unmatched_edges + 3 * self.triangles.len() != self.step {
            return Err(Error::Domain(
                "step count disagrees with |E(U)| + 3 * triangles".into(),
            ));
        }
        for tri in &self.triangles {
            for (a, b) in [(tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])] {
                if !sorted::contains(&self.matched[a as usize], b) {
                    return Err(Error::Domain(format!(
                        "triangle edge ({a}, {b}) missing from matched graph"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Test-support constructor from explicit unmatched and matched edge
    /// lists (matched edges are not grouped into triangles, so the step
    /// counter identity is not maintained; query tests only).
    #[cfg(test)]
    pub(crate) fn from_edges(
        n: usize,
        unmatched: &[(u32, u32)],
        matched: &[(u32, u32)],
    ) -> Self {
        let mut st = Self::new(n).unwrap();
        for &(a, b) in unmatched {
            assert!(a != b && (a as usize) < n && (b as usize) < n);
            assert!(sorted::insert(&mut st.unmatched[a as usize], b));
            sorted::insert(&mut st.unmatched[b as usize], a);
            sorted::insert(&mut st.revealed[a as usize], b);
            sorted::insert(&mut st.revealed[b as usize], a);
            st.unmatched_edges += 1;
            st.step += 1;
        }
        for &(a, b) in matched {
            assert!(a != b && (a as usize) < n && (b as usize) < n);
            assert!(sorted::insert(&mut st.matched[a as usize], b));
            sorted::insert(&mut st.matched[b as usize], a);
            assert!(
                sorted::insert(&mut st.revealed[a as usize], b),
                "matched edge duplicates an unmatched edge"
            );
            sorted::insert(&mut st.revealed[b as usize], a);
            st.step += 1;
        }
        st
    }
}

// ----------------------------------------------------------------------
