//! Canonical labeling of small graphs.
//!
//! Equitable refinement of an ordered partition, then individualization of
//! each vertex of the first non-trivial cell, recursively. Every discrete
//! leaf induces a vertex order; the canonical form is the order whose
//! column-major upper-triangle bit string, read as an integer, is smallest.
//! Branches that differ by a transposition of twin vertices are explored
//! only once.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest order with a canonical code (`n(n-1)/2` bits must fit a `u64`).
pub const MAX_CANON_VERTICES: usize = 11;

/// Adjacency rows as bit masks.
pub(crate) type Rows = [u16; MAX_CANON_VERTICES];

pub(crate) fn rows_of(g: &Graph) -> Result<Rows> {
    let n = g.n();
    if n > MAX_CANON_VERTICES {
        return Err(Error::TooManyVertices {
            n,
            max: MAX_CANON_VERTICES,
        });
    }
    let mut rows = [0u16; MAX_CANON_VERTICES];
    for e in g.edges() {
        rows[e.u()] |= 1 << e.v();
        rows[e.v()] |= 1 << e.u();
    }
    Ok(rows)
}

/// Refines `cells` (ordered, as vertex masks) until every cell is
/// equitable with respect to every other.
fn refine(rows: &Rows, n: usize, cells: &mut Vec<u16>) {
    let mut keyed: Vec<(u64, u8)> = Vec::with_capacity(n);
    loop {
        let snapshot = cells.clone();
        let mut next = Vec::with_capacity(n);
        for &cell in &snapshot {
            if cell.count_ones() == 1 {
                next.push(cell);
                continue;
            }
            keyed.clear();
            let mut rest = cell;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                // 4 bits per cell: counts are at most 10, cells at most 11
                let key = snapshot
                    .iter()
                    .fold(0u64, |k, &c| (k << 4) | (rows[v] & c).count_ones() as u64);
                keyed.push((key, v as u8));
            }
            keyed.sort_unstable();
            let mut current = 0u16;
            for (i, &(key, v)) in keyed.iter().enumerate() {
                if i > 0 && key != keyed[i - 1].0 {
                    next.push(current);
                    current = 0;
                }
                current |= 1 << v;
            }
            next.push(current);
        }
        let done = next.len() == snapshot.len();
        *cells = next;
        if done || cells.len() == n {
            return;
        }
    }
}

fn code_of(rows: &Rows, order: &[u8]) -> u64 {
    let mut code = 0u64;
    for j in 1..order.len() {
        let row = rows[order[j] as usize];
        for &u in &order[..j] {
            code = (code << 1) | ((row >> u) & 1) as u64;
        }
    }
    code
}

fn search(rows: &Rows, n: usize, mut cells: Vec<u16>, best: &mut Option<(u64, Vec<u8>)>) {
    refine(rows, n, &mut cells);
    let Some(target) = cells.iter().position(|c| c.count_ones() > 1) else {
        let order: Vec<u8> = cells.iter().map(|c| c.trailing_zeros() as u8).collect();
        let code = code_of(rows, &order);
        if best.as_ref().is_none_or(|(b, _)| code < *b) {
            *best = Some((code, order));
        }
        return;
    };
    let cell = cells[target];
    let mut tried: Vec<u8> = Vec::new();
    let mut rest = cell;
    while rest != 0 {
        let v = rest.trailing_zeros() as u8;
        rest &= rest - 1;
        if tried.iter().any(|&u| twins(rows, u, v)) {
            continue;
        }
        tried.push(v);
        let mut child = Vec::with_capacity(cells.len() + 1);
        child.extend_from_slice(&cells[..target]);
        child.push(1 << v);
        child.push(cell & !(1 << v));
        child.extend_from_slice(&cells[target + 1..]);
        search(rows, n, child, best);
    }
}

/// `u` and `v` have the same neighbors apart from each other, so swapping
/// them is an automorphism.
fn twins(rows: &Rows, u: u8, v: u8) -> bool {
    let (u, v) = (u as usize, v as usize);
    rows[u] & !(1 << v) == rows[v] & !(1 << u)
}

/// Canonical code and the vertex order realizing it (`order[i]` is the
/// vertex placed at position `i`).
pub(crate) fn canonical_rows(rows: &Rows, n: usize) -> (u64, Vec<u8>) {
    if n == 0 {
        return (0, Vec::new());
    }
    let all = (1u16 << n) - 1;
    let mut best = None;
    search(rows, n, vec![all], &mut best);
    best.expect("search reaches a leaf")
}

/// Isomorphism invariant of `g` that separates non-isomorphic graphs of
/// the same order.
pub fn canonical_code(g: &Graph) -> Result<u64> {
    Ok(canonical_rows(&rows_of(g)?, g.n()).0)
}

/// The relabeling of `g` whose adjacency bit string is [`canonical_code`].
pub fn canonical_form(g: &Graph) -> Result<Graph> {
    let (_, order) = canonical_rows(&rows_of(g)?, g.n());
    let mut perm = vec![0; g.n()];
    for (pos, &v) in order.iter().enumerate() {
        perm[v as usize] = pos;
    }
    g.permute(&perm)
}

/// Rebuilds the graph on `n` vertices whose code is `code`.
pub fn graph_from_code(n: usize, code: u64) -> Result<Graph> {
    if n > MAX_CANON_VERTICES {
        return Err(Error::TooManyVertices {
            n,
            max: MAX_CANON_VERTICES,
        });
    }
    let bits = n * n.saturating_sub(1) / 2;
    let mut edges = Vec::new();
    let mut k = bits;
    for j in 1..n {
        for i in 0..j {
            k -= 1;
            if (code >> k) & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Whether `a` and `b` are isomorphic.
pub fn isomorphic(a: &Graph, b: &Graph) -> Result<bool> {
    Ok(a.n() == b.n()
        && a.edge_count() == b.edge_count()
        && canonical_code(a)? == canonical_code(b)?)
}
