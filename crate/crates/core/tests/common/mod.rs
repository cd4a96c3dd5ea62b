#![allow(dead_code)]

use penergy::{Edge, Graph};
use proptest::prelude::*;
use proptest::sample::Index;

/// Random graph on `lo..=hi` vertices with a random edge density.
pub fn graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi, 0.05f64..0.95)
        .prop_flat_map(|(n, density)| {
            let m = n * n.saturating_sub(1) / 2;
            (Just(n), prop::collection::vec(prop::bool::weighted(density), m))
        })
        .prop_map(|(n, bits)| from_bits(n, &bits))
}

/// Random graph with at least one edge, plus one of its edges.
pub fn graph_and_edge(lo: usize, hi: usize) -> impl Strategy<Value = (Graph, Edge)> {
    (graph(lo, hi), any::<Index>())
        .prop_filter("needs an edge", |(g, _)| g.edge_count() > 0)
        .prop_map(|(g, ix)| {
            let edges: Vec<Edge> = g.edges().collect();
            let e = *ix.get(&edges);
            (g, e)
        })
}

/// Random labeled tree on `lo..=hi` vertices (`lo >= 2`) via a Prüfer sequence.
pub fn tree(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(0..n, n - 2)))
        .prop_map(|(n, seq)| prufer_tree(n, &seq))
}

pub fn from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bits[k] {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Decodes a Prüfer sequence of length `n - 2` into a labeled tree.
pub fn prufer_tree(n: usize, seq: &[usize]) -> Graph {
    assert_eq!(seq.len() + 2, n);
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::from_edges(n, edges).unwrap()
}

pub fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}
