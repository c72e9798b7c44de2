//! Exact triangle packing and covering on small graphs.
//!
//! `nu` is the largest number of edge-disjoint triangles, `tau` the
//! smallest number of edges meeting every triangle; both come from
//! branch-and-bound over the triangle list, so they are exact. A dense
//! simplex solver yields the fractional packing value sitting between
//! them, and a deterministic local-search cut produces the classic
//! half-the-edges triangle cover. The exhaustive sweep checks
//! `tau <= 2 nu` on every labeled graph with up to seven vertices,
//! memoizing on the triangle set, which determines both numbers.

use std::collections::HashMap;

use crate::graph::EdgeId;
use crate::stream::edge_index;
use crate::tfp::{cover_is_valid, TriangleCover};
use crate::{Error, Result};

/// Largest vertex count a [`SmallGraph`] accepts.
pub const MAX_N: usize = 4096;

/// Most triangles the exact machinery will enumerate.
pub const TRIANGLE_GUARD: usize = 100_000;

/// Dense graph on at most [`MAX_N`] vertices with bitset adjacency.
#[derive(Clone, Debug)]
pub struct SmallGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    edges: Vec<EdgeId>,
}

impl SmallGraph {
    /// # Errors
    /// `InvalidArgument` on out-of-range vertices, repeated edges, or
    /// `n > MAX_N`.
    pub fn new(n: usize, mut edges: Vec<EdgeId>) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::InvalidArgument(format!(
                "exact oracles handle at most {MAX_N} vertices, got {n}"
            )));
        }
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * words];
        edges.sort_unstable();
        for w in edges.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidArgument(format!("repeated edge {}", w[0])));
            }
        }
        for e in &edges {
            if e.v as usize >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge {e} out of range (n = {n})"
                )));
            }
            rows[e.u as usize * words + e.v as usize / 64] |= 1 << (e.v % 64);
            rows[e.v as usize * words + e.u as usize / 64] |= 1 << (e.u % 64);
        }
        Ok(Self {
            n,
            words,
            rows,
            edges,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        if u == v || u as usize >= self.n || v as usize >= self.n {
            return false;
        }
        self.rows[u as usize * self.words + v as usize / 64] >> (v % 64) & 1 == 1
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    /// All triangles, each listed once with ascending vertices.
    ///
    /// # Errors
    /// `Guard` past [`TRIANGLE_GUARD`] triangles.
    pub fn triangles(&self) -> Result<Vec<[u32; 3]>> {
        let mut tris = Vec::new();
        for e in &self.edges {
            let ru = self.row(e.u as usize);
            let rv = self.row(e.v as usize);
            for w in 0..self.words {
                let mut both = ru[w] & rv[w];
                // keep only common neighbors above v
                if (w as u32) * 64 < e.v + 1 {
                    let cut = e.v as usize + 1 - w * 64;
                    if cut >= 64 {
                        both = 0;
                    } else {
                        both &= !0u64 << cut;
                    }
                }
                while both != 0 {
                    let x = w as u32 * 64 + both.trailing_zeros();
                    tris.push([e.u, e.v, x]);
                    if tris.len() > TRIANGLE_GUARD {
                        return Err(Error::Guard(format!(
                            "more than {TRIANGLE_GUARD} triangles; refusing to enumerate"
                        )));
                    }
                    both &= both - 1;
                }
            }
        }
        Ok(tris)
    }
}

// ----------------------------------------------------------------------
// Packing and covering over an explicit triangle list
// ----------------------------------------------------------------------

/// Triangle list reduced to indices into its own edge universe. Both
/// exact numbers depend only on this structure.
struct TriangleSystem {
    edge_count: usize,
    tris: Vec<[u32; 3]>,
}

impl TriangleSystem {
    fn from_triples(triples: &[[u32; 3]]) -> Self {
        let mut pair_idx: HashMap<(u32, u32), u32> = HashMap::new();
        let mut edge_count = 0u32;
        let mut idx_of = |a: u32, b: u32| -> u32 {
            let key = (a.min(b), a.max(b));
            *pair_idx.entry(key).or_insert_with(|| {
                edge_count += 1;
                edge_count - 1
            })
        };
        let mut tris: Vec<[u32; 3]> = triples
            .iter()
            .map(|&[a, b, c]| [idx_of(a, b), idx_of(a, c), idx_of(b, c)])
            .collect();
        // contested triangles first: sort by how shared their edges are
        let mut freq = vec![0u32; edge_count as usize];
        for t in &tris {
            for &e in t {
                freq[e as usize] += 1;
            }
        }
        tris.sort_by_key(|t| std::cmp::Reverse(t.iter().map(|&e| freq[e as usize]).sum::<u32>()));
        Self {
            edge_count: edge_count as usize,
            tris,
        }
    }

    fn is_free(t: &[u32; 3], used: &[bool]) -> bool {
        t.iter().all(|&e| !used[e as usize])
    }

    /// Greedy packing in list order; a valid lower bound anywhere.
    fn greedy_packing(&self, used: &mut [bool]) -> u32 {
        let mut count = 0;
        for t in &self.tris {
            if Self::is_free(t, used) {
                for &e in t {
                    used[e as usize] = true;
                }
                count += 1;
            }
        }
        count
    }

    fn nu(&self) -> u32 {
        let mut used = vec![false; self.edge_count];
        let mut best = self.greedy_packing(&mut used.clone());
        let free_edges = self.edge_count as u32;
        self.nu_rec(0, 0, free_edges, &mut used, &mut best);
        best
    }

    fn nu_rec(&self, i: usize, count: u32, free_edges: u32, used: &mut [bool], best: &mut u32) {
        *best = (*best).max(count);
        if i == self.tris.len() {
            return;
        }
        let placeable = self.tris[i..]
            .iter()
            .filter(|t| Self::is_free(t, used))
            .count() as u32;
        if count + placeable.min(free_edges / 3) <= *best {
            return;
        }
        if Self::is_free(&self.tris[i], used) {
            for &e in &self.tris[i] {
                used[e as usize] = true;
            }
            self.nu_rec(i + 1, count + 1, free_edges - 3, used, best);
            for &e in &self.tris[i] {
                used[e as usize] = false;
            }
        }
        self.nu_rec(i + 1, count, free_edges, used, best);
    }

    /// Greedy cover: repeatedly remove the edge in the most surviving
    /// triangles. A valid upper bound.
    fn greedy_cover(&self) -> u32 {
        let mut removed = vec![false; self.edge_count];
        let mut size = 0;
        loop {
            let mut freq = vec![0u32; self.edge_count];
            let mut any = false;
            for t in &self.tris {
                if Self::is_free(t, &removed) {
                    any = true;
                    for &e in t {
                        freq[e as usize] += 1;
                    }
                }
            }
            if !any {
                return size;
            }
            let hot = (0..self.edge_count).max_by_key(|&e| freq[e]).unwrap();
            removed[hot] = true;
            size += 1;
        }
    }

    fn tau(&self) -> u32 {
        let mut best = self.greedy_cover();
        let mut removed = vec![false; self.edge_count];
        self.tau_rec(0, &mut removed, &mut best);
        best
    }

    fn tau_rec(&self, removed_count: u32, removed: &mut [bool], best: &mut u32) {
        if removed_count >= *best {
            return;
        }
        // Greedy edge-disjoint packing of the surviving triangles: each
        // needs its own new edge, so it lower-bounds the remaining work.
        let mut blocked = removed.to_vec();
        let mut first_loose: Option<[u32; 3]> = None;
        let mut lb = 0u32;
        for t in &self.tris {
            if Self::is_free(t, removed) && Self::is_free(t, &blocked) {
                if first_loose.is_none() {
                    first_loose = Some(*t);
                }
                for &e in t {
                    blocked[e as usize] = true;
                }
                lb += 1;
            }
        }
        let Some(branch) = first_loose.or_else(|| {
            self.tris
                .iter()
                .find(|t| Self::is_free(t, removed))
                .copied()
        }) else {
            *best = removed_count;
            return;
        };
        if removed_count + lb >= *best {
            return;
        }
        for &e in &branch {
            removed[e as usize] = true;
            self.tau_rec(removed_count + 1, removed, best);
            removed[e as usize] = false;
        }
    }

    /// Fractional packing optimum by primal simplex on the dense tableau.
    fn nu_fractional(&self) -> Result<f64> {
        if self.tris.is_empty() {
            return Ok(0.0);
        }
        const EPS: f64 = 1e-9;
        let t = self.tris.len();
        let e = self.edge_count;
        let total = t + e;
        let mut tab = vec![vec![0.0f64; total + 1]; e];
        for (j, tri) in self.tris.iter().enumerate() {
            for &ei in tri {
                tab[ei as usize][j] = 1.0;
            }
        }
        for (i, row) in tab.iter_mut().enumerate() {
            row[t + i] = 1.0;
            row[total] = 1.0;
        }
        let mut z = vec![0.0f64; total + 1];
        for zj in z.iter_mut().take(t) {
            *zj = -1.0;
        }
        let mut basis: Vec<usize> = (t..total).collect();
        // Bland's rule on entering and leaving variables: no cycling.
        loop {
            let Some(enter) = (0..total).find(|&j| z[j] < -EPS) else {
                return Ok(z[total]);
            };
            let mut leave: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            for i in 0..e {
                let c = tab[i][enter];
                if c > EPS {
                    let r = tab[i][total] / c;
                    if r < best_ratio - 1e-12
                        || (r < best_ratio + 1e-12
                            && leave.is_some_and(|l| basis[i] < basis[l]))
                    {
                        best_ratio = best_ratio.min(r);
                        leave = Some(i);
                    }
                }
            }
            let Some(li) = leave else {
                return Err(Error::Domain(
                    "packing relaxation reported unbounded; tableau is inconsistent".into(),
                ));
            };
            let piv = tab[li][enter];
            for v in &mut tab[li] {
                *v /= piv;
            }
            for i in 0..e {
                if i != li {
                    let f = tab[i][enter];
                    if f != 0.0 {
                        for c in 0..=total {
                            tab[i][c] -= f * tab[li][c];
                        }
                    }
                }
            }
            let f = z[enter];
            if f != 0.0 {
                for c in 0..=total {
                    z[c] -= f * tab[li][c];
                }
            }
            basis[li] = enter;
        }
    }
}

/// Largest edge-disjoint triangle packing, exactly.
///
/// # Errors
/// The triangle guard.
pub fn exact_nu(g: &SmallGraph) -> Result<u32> {
    Ok(TriangleSystem::from_triples(&g.triangles()?).nu())
}

/// Smallest edge set meeting every triangle, exactly.
///
/// # Errors
/// The triangle guard.
pub fn exact_tau(g: &SmallGraph) -> Result<u32> {
    Ok(TriangleSystem::from_triples(&g.triangles()?).tau())
}

/// Optimum of the fractional packing relaxation; sits between the two
/// integral numbers.
///
/// # Errors
/// The triangle guard, or a tableau inconsistency.
pub fn fractional_nu(g: &SmallGraph) -> Result<f64> {
    TriangleSystem::from_triples(&g.triangles()?).nu_fractional()
}

// ----------------------------------------------------------------------
// Balanced-cut cover
// ----------------------------------------------------------------------

/// Triangle cover from local-search max-cut: flip any vertex with more
/// same-side than cross neighbors until none remains, then take the
/// same-side edges. At a local optimum these number at most half the
/// edges, and removing them leaves a bipartite graph. Deterministic.
pub fn max_cut_cover(g: &SmallGraph) -> TriangleCover {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.u as usize].push(e.v as usize);
        adj[e.v as usize].push(e.u as usize);
    }
    let mut side = vec![false; n];
    loop {
        let mut flipped = false;
        for v in 0..n {
            let same = adj[v].iter().filter(|&&w| side[w] == side[v]).count();
            if 2 * same > adj[v].len() {
                side[v] = !side[v];
                flipped = true;
            }
        }
        if !flipped {
            break;
        }
    }
    let edges = g
        .edges()
        .iter()
        .copied()
        .filter(|e| side[e.u as usize] == side[e.v as usize])
        .collect();
    TriangleCover { n, edges }
}

// ----------------------------------------------------------------------
// Whole-graph report
// ----------------------------------------------------------------------

/// Exact numbers and their cross-checks for one graph.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ExactReport {
    pub n: usize,
    pub edge_count: usize,
    pub triangle_count: usize,
    pub nu: u32,
    pub tau: u32,
    pub nu_fractional: f64,
    pub cut_cover: usize,
    /// tau <= 2 nu.
    pub tuza_holds: bool,
    /// nu <= fractional <= tau and nu <= tau <= 3 nu.
    pub sandwich_holds: bool,
    /// The cut cover really is a cover and uses at most half the edges.
    pub cut_cover_valid: bool,
}

/// Computes every exact number and check for `g`.
///
/// # Errors
/// The triangle guard, or a tableau inconsistency.
pub fn analyze(g: &SmallGraph) -> Result<ExactReport> {
    const TOL: f64 = 1e-7;
    let tris = g.triangles()?;
    let sys = TriangleSystem::from_triples(&tris);
    let nu = sys.nu();
    let tau = sys.tau();
    let nu_fractional = sys.nu_fractional()?;
    let cut = max_cut_cover(g);
    let sandwich_holds = f64::from(nu) <= nu_fractional + TOL
        && nu_fractional <= f64::from(tau) + TOL
        && nu <= tau
        && tau <= 3 * nu;
    Ok(ExactReport {
        n: g.n(),
        edge_count: g.edge_count(),
        triangle_count: tris.len(),
        nu,
        tau,
        nu_fractional,
        cut_cover: cut.len(),
        tuza_holds: tau <= 2 * nu,
        sandwich_holds,
        cut_cover_valid: cut.len() <= g.edge_count() / 2
            && cover_is_valid(&cut, g.n(), g.edges()),
    })
}

// ----------------------------------------------------------------------
// Exhaustive sweep over all labeled graphs with up to 7 vertices
// ----------------------------------------------------------------------

/// Aggregate of one vertex count of the sweep.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SweepReport {
    pub n: usize,
    pub graphs: u64,
    /// Distinct triangle systems encountered (the memo key space).
    pub distinct_systems: usize,
    /// Graphs with tau > 2 nu. The conjecture says always zero.
    pub violations: u64,
    /// Graphs attaining tau = 2 nu with nu > 0.
    pub tight: u64,
    pub max_nu: u32,
    pub max_tau: u32,
}

fn triple_table(n: usize) -> Vec<([u32; 3], u32)> {
    // each vertex triple with the edge-bit mask it needs
    let mut out = Vec::new();
    for a in 0..n as u32 {
        for b in (a + 1)..n as u32 {
            for c in (b + 1)..n as u32 {
                let mask = [(a, b), (a, c), (b, c)]
                    .iter()
                    .map(|&(x, y)| 1u32 << edge_index(EdgeId::new(x, y).unwrap(), n))
                    .fold(0, |m, b| m | b);
                out.push(([a, b, c], mask));
            }
        }
    }
    out
}

/// Checks `tau <= 2 nu` on every labeled graph with 1..=`n_max` vertices,
/// memoizing the two numbers on the triangle set.
///
/// # Errors
/// `InvalidArgument` for `n_max` outside 1..=7 (8 means 2^28 graphs).
pub fn exhaustive_sweep(n_max: usize) -> Result<Vec<SweepReport>> {
    if !(1..=7).contains(&n_max) {
        return Err(Error::InvalidArgument(format!(
            "sweep covers 1..=7 vertices, got {n_max}"
        )));
    }
    let mut reports = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let pairs = n * (n - 1) / 2;
        let triples = triple_table(n);
        let mut memo: HashMap<u64, (u32, u32)> = HashMap::new();
        let mut report = SweepReport {
            n,
            graphs: 1u64 << pairs,
            distinct_systems: 0,
            violations: 0,
            tight: 0,
            max_nu: 0,
            max_tau: 0,
        };
        let mut live = Vec::with_capacity(triples.len());
        for gmask in 0u32..(1u32 << pairs) {
            let mut tmask = 0u64;
            for (bit, &(_, emask)) in triples.iter().enumerate() {
                if gmask & emask == emask {
                    tmask |= 1 << bit;
                }
            }
            let (nu, tau) = match memo.get(&tmask) {
                Some(&v) => v,
                None => {
                    live.clear();
                    for (bit, &(tri, _)) in triples.iter().enumerate() {
                        if tmask >> bit & 1 == 1 {
                            live.push(tri);
                        }
                    }
                    let sys = TriangleSystem::from_triples(&live);
                    let v = (sys.nu(), sys.tau());
                    memo.insert(tmask, v);
                    v
                }
            };
            if tau > 2 * nu {
                report.violations += 1;
            }
            if nu > 0 && tau == 2 * nu {
                report.tight += 1;
            }
            report.max_nu = report.max_nu.max(nu);
            report.max_tau = report.max_tau.max(tau);
        }
        report.distinct_systems = memo.len();
        reports.push(report);
    }
    Ok(reports)
}

// ----------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(u: u32, v: u32) -> EdgeId {
        EdgeId::new(u, v).unwrap()
    }

    fn complete(n: u32) -> SmallGraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push(edge(u, v));
            }
        }
        SmallGraph::new(n as usize, edges).unwrap()
    }

    #[test]
    fn triangle_enumeration_matches_brute_force() {
        let g = complete(6);
        assert_eq!(g.triangles().unwrap().len(), 20);
        let path = SmallGraph::new(4, vec![edge(0, 1), edge(1, 2), edge(2, 3)]).unwrap();
        assert!(path.triangles().unwrap().is_empty());
        let tri = SmallGraph::new(70, vec![edge(0, 1), edge(0, 69), edge(1, 69)]).unwrap();
        assert_eq!(tri.triangles().unwrap(), vec![[0, 1, 69]]);
    }

    #[test]
    fn rejects_bad_graphs_and_guards_dense_ones() {
        assert!(SmallGraph::new(3, vec![edge(0, 5)]).is_err());
        assert!(SmallGraph::new(3, vec![edge(0, 1), edge(0, 1)]).is_err());
        assert!(SmallGraph::new(MAX_N + 1, vec![]).is_err());
        // C(90, 3) = 117480 triangles trips the guard.
        let dense = complete(90);
        assert!(matches!(dense.triangles(), Err(Error::Guard(_))));
    }

    #[test]
    fn complete_graph_numbers_are_classical() {
        // Any two triangles of K4 share an edge; removing a perfect
        // matching leaves a 4-cycle.
        let k4 = analyze(&complete(4)).unwrap();
        assert_eq!((k4.nu, k4.tau), (1, 2));
        assert!((k4.nu_fractional - 2.0).abs() < 1e-7);
        assert!(k4.tuza_holds && k4.sandwich_holds && k4.cut_cover_valid);

        // K5: two disjoint triangles fit, and the largest triangle-free
        // subgraph is the 6-edge complete bipartite split.
        let k5 = analyze(&complete(5)).unwrap();
        assert_eq!((k5.nu, k5.tau), (2, 4));
        assert!((k5.nu_fractional - 10.0 / 3.0).abs() < 1e-7);
        assert!(k5.tuza_holds && k5.sandwich_holds && k5.cut_cover_valid);

        // K6 decomposes: 20 triangles, 15 edges, packing 5? No: a
        // triangle decomposition needs 15/3 = 5 disjoint triangles, which
        // exists for K7 but not K6; the true values are nu = 4, tau = 6.
        let k6 = analyze(&complete(6)).unwrap();
        assert_eq!(k6.nu, 4);
        assert_eq!(k6.tau, 6);
        assert!(k6.tuza_holds);

        // K7 is triangle-decomposable: 21 edges into 7 triangles.
        let k7 = analyze(&complete(7)).unwrap();
        assert_eq!(k7.nu, 7);
        assert!(k7.tuza_holds && k7.sandwich_holds);
    }

    #[test]
    fn small_shapes() {
        // Book of 3 triangles on the shared edge 0-1: one removal covers.
        let mut edges = vec![edge(0, 1)];
        for w in 2..5 {
            edges.push(edge(0, w));
            edges.push(edge(1, w));
        }
        let book = SmallGraph::new(5, edges).unwrap();
        assert_eq!(exact_nu(&book).unwrap(), 1);
        assert_eq!(exact_tau(&book).unwrap(), 1);

        // Two triangles sharing one vertex: independent.
        let bowtie = SmallGraph::new(
            5,
            vec![
                edge(0, 1),
                edge(0, 2),
                edge(1, 2),
                edge(0, 3),
                edge(0, 4),
                edge(3, 4),
            ],
        )
        .unwrap();
        assert_eq!(exact_nu(&bowtie).unwrap(), 2);
        assert_eq!(exact_tau(&bowtie).unwrap(), 2);
        assert!((fractional_nu(&bowtie).unwrap() - 2.0).abs() < 1e-7);

        // Triangle-free graphs have nothing to do.
        let c5 = SmallGraph::new(
            5,
            vec![edge(0, 1), edge(1, 2), edge(2, 3), edge(3, 4), edge(0, 4)],
        )
        .unwrap();
        let rep = analyze(&c5).unwrap();
        assert_eq!((rep.nu, rep.tau), (0, 0));
        assert_eq!(rep.nu_fractional, 0.0);
        assert!(rep.cut_cover_valid);
    }

    #[test]
    fn cut_cover_is_valid_and_small() {
        for (n, graph) in [(4, complete(4)), (6, complete(6)), (7, complete(7))] {
            let cover = max_cut_cover(&graph);
            assert!(cover.len() <= graph.edge_count() / 2, "n = {n}");
            assert!(cover_is_valid(&cover, graph.n(), graph.edges()), "n = {n}");
        }
        // Bipartite graphs need no cover at all.
        let p3 = SmallGraph::new(3, vec![edge(0, 1), edge(1, 2)]).unwrap();
        assert!(max_cut_cover(&p3).is_empty());
    }

    #[test]
    fn random_graphs_respect_the_sandwich() {
        use crate::seed::rng_from;
        use crate::stream::EdgeStream;
        let mut rng = rng_from(77);
        for _ in 0..40 {
            let mut stream = EdgeStream::new(9).unwrap();
            let edges: Vec<EdgeId> = (0..20).map(|_| stream.next_edge(&mut rng).unwrap()).collect();
            let g = SmallGraph::new(9, edges).unwrap();
            let rep = analyze(&g).unwrap();
            assert!(rep.sandwich_holds, "{rep:?}");
            assert!(rep.tuza_holds, "{rep:?}");
            assert!(rep.cut_cover_valid, "{rep:?}");
        }
    }

    #[test]
    fn sweep_masks_agree_with_direct_oracles_on_4_vertices() {
        let triples = triple_table(4);
        for gmask in 0u32..64 {
            let mut edges = Vec::new();
            for u in 0..4u32 {
                for v in (u + 1)..4 {
                    let e = edge(u, v);
                    if gmask >> edge_index(e, 4) & 1 == 1 {
                        edges.push(e);
                    }
                }
            }
            let g = SmallGraph::new(4, edges).unwrap();
            let live: Vec<[u32; 3]> = triples
                .iter()
                .filter(|&&(_, emask)| gmask & emask == emask)
                .map(|&(tri, _)| tri)
                .collect();
            let sys = TriangleSystem::from_triples(&live);
            assert_eq!(sys.nu(), exact_nu(&g).unwrap(), "mask {gmask:#b}");
            assert_eq!(sys.tau(), exact_tau(&g).unwrap(), "mask {gmask:#b}");
        }
    }

    #[test]
    fn sweep_through_5_vertices_is_clean() {
        let reports = exhaustive_sweep(5).unwrap();
        assert_eq!(reports.len(), 5);
        let by_n: Vec<u64> = reports.iter().map(|r| r.graphs).collect();
        assert_eq!(by_n, vec![1, 2, 8, 64, 1024]);
        for r in &reports {
            assert_eq!(r.violations, 0, "{r:?}");
        }
        // K4 and K5 are tight, so both sizes see at least one such graph.
        assert!(reports[3].tight >= 1);
        assert!(reports[4].tight >= 1);
        assert_eq!(reports[4].max_nu, 2);
        assert_eq!(reports[4].max_tau, 4);
        assert!(exhaustive_sweep(0).is_err());
        assert!(exhaustive_sweep(8).is_err());
    }
}
