//! Randomized property tests over the public API: pair indexing is a
//! bijection, the edge stream is a uniform permutation of all pairs, the
//! graph6 parser inverts a reference encoder, and the packing process
//! keeps its partition invariant on arbitrary small inputs.

use std::collections::HashSet;

use proptest::prelude::*;
use tripack::graph::EdgeId;
use tripack::graph6::parse_graph6;
use tripack::packing::{run_packing, PackingConfig};
use tripack::stream::{edge_from_index, edge_index, pair_count, EdgeStream};

/// Reference graph6 encoder (header-free short form, n <= 62): upper
/// triangle in column-major order, packed big-endian six bits per byte.
fn encode_graph6(n: usize, edges: &[EdgeId]) -> String {
    assert!(n <= 62);
    let present: HashSet<(u32, u32)> = edges.iter().map(|e| (e.u, e.v)).collect();
    let mut bits = Vec::new();
    for v in 1..n as u32 {
        for u in 0..v {
            bits.push(present.contains(&(u, v)));
        }
    }
    while bits.len() % 6 != 0 {
        bits.push(false);
    }
    let mut out = String::new();
    out.push((63 + n as u8) as char);
    for chunk in bits.chunks(6) {
        let mut value = 0u8;
        for (i, &b) in chunk.iter().enumerate() {
            if b {
                value |= 1 << (5 - i);
            }
        }
        out.push((63 + value) as char);
    }
    out
}

fn arb_graph() -> impl Strategy<Value = (usize, Vec<EdgeId>)> {
    (1usize..=20).prop_flat_map(|n| {
        let all: Vec<EdgeId> = (0..pair_count(n)).map(|i| edge_from_index(i, n)).collect();
        proptest::sample::subsequence(all, 0..=(pair_count(n) as usize))
            .prop_map(move |edges| (n, edges))
    })
}

proptest! {
    #[test]
    fn pair_indexing_roundtrips(n in 2usize..=500, salt in any::<u64>()) {
        let idx = salt % pair_count(n);
        let e = edge_from_index(idx, n);
        prop_assert!(e.u < e.v && (e.v as usize) < n);
        prop_assert_eq!(edge_index(e, n), idx);
    }

    #[test]
    fn stream_emits_each_pair_exactly_once(n in 2usize..=24, seed in any::<u64>()) {
        let mut stream = EdgeStream::new(n).unwrap();
        let mut rng = tripack::seed::rng_from(seed);
        let mut seen = HashSet::new();
        while let Some(e) = stream.next_edge(&mut rng) {
            prop_assert!(seen.insert(e), "duplicate edge {}", e);
        }
        prop_assert_eq!(seen.len() as u64, pair_count(n));
    }

    #[test]
    fn graph6_parser_inverts_encoding((n, mut edges) in arb_graph()) {
        let line = encode_graph6(n, &edges);
        let (parsed_n, mut parsed_edges) = parse_graph6(&line).unwrap();
        edges.sort();
        parsed_edges.sort();
        prop_assert_eq!(parsed_n, n);
        prop_assert_eq!(parsed_edges, edges);
    }

    #[test]
    fn packing_partition_holds_anywhere(n in 3usize..=30, frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let m = ((pair_count(n) as f64) * frac).round() as usize;
        let cfg = PackingConfig::new(n, m.max(1), seed).with_checkpoints(vec![m.max(1)]);
        let run = run_packing(&cfg).unwrap();
        run.state.check_partition().unwrap();
        prop_assert_eq!(run.state.unmatched_triangle(), None);
        prop_assert_eq!(
            run.state.unmatched_edge_count() + 3 * run.packing.len(),
            m.max(1)
        );
    }
}
