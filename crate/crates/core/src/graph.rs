//! Simple undirected graphs on labeled vertices `0..n` and the named
//! families used throughout the crate.
//!
//! Graphs are immutable values. Mutations such as [`Graph::add_edge`]
//! return a new graph and leave the receiver untouched.
//!
//! Canonical family labelings are documented in `FORMATS.md` at the
//! repository root.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest vertex count accepted anywhere in the crate.
pub const MAX_VERTICES: usize = 4096;

/// An undirected edge stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: usize,
    v: usize,
}

impl Edge {
    /// Builds an edge from two distinct endpoints in either order.
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidParameter(format!("loop at vertex {a}")));
        }
        Ok(Edge {
            u: a.min(b),
            v: a.max(b),
        })
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

impl FromStr for Edge {
    type Err = Error;

    /// Accepts `u,v` or `u-v`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse edge {s:?}"));
        let (a, b) = s.split_once([',', '-']).ok_or_else(bad)?;
        let a = a.trim().parse().map_err(|_| bad())?;
        let b = b.trim().parse().map_err(|_| bad())?;
        Edge::new(a, b)
    }
}

/// Simple undirected graph backed by one adjacency bitset row per vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    m: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                n,
                max: MAX_VERTICES,
            });
        }
        let words = n.div_ceil(64);
        Ok(Graph {
            n,
            words,
            rows: vec![0; n * words],
            m: 0,
        })
    }

    /// Graph on `n` vertices with the given edges. Duplicate edges are an error.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n)?;
        for (a, b) in edges {
            let e = Edge::new(a, b)?;
            g.check_edge(e)?;
            if g.has_edge(e.u, e.v) {
                return Err(Error::EdgePresent { u: e.u, v: e.v });
            }
            g.set(e.u, e.v, true);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && (self.rows[u * self.words + v / 64] >> (v % 64)) & 1 == 1
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.has_edge(e.u, e.v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Neighbors of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }

    /// Edges in lexicographic `(u, v)` order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&v| v > u)
                .map(move |v| Edge { u, v })
        })
    }

    /// Vertex pairs that are not edges, in lexicographic order.
    pub fn non_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.n).flat_map(move |u| {
            (u + 1..self.n)
                .filter(move |&v| !self.has_edge(u, v))
                .map(move |v| Edge { u, v })
        })
    }

    /// Row-major dense adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.n * self.n];
        for e in self.edges() {
            a[e.u * self.n + e.v] = 1.0;
            a[e.v * self.n + e.u] = 1.0;
        }
        a
    }

    pub fn add_edge(&self, e: Edge) -> Result<Graph> {
        self.check_edge(e)?;
        if self.contains(e) {
            return Err(Error::EdgePresent { u: e.u, v: e.v });
        }
        let mut g = self.clone();
        g.set(e.u, e.v, true);
        Ok(g)
    }

    pub fn remove_edge(&self, e: Edge) -> Result<Graph> {
        self.check_edge(e)?;
        if !self.contains(e) {
            return Err(Error::EdgeAbsent { u: e.u, v: e.v });
        }
        let mut g = self.clone();
        g.set(e.u, e.v, false);
        Ok(g)
    }

    /// The graph with vertex `v` deleted; later vertices shift down by one.
    pub fn remove_vertex(&self, v: usize) -> Result<Graph> {
        self.check_vertex(v)?;
        let keep: Vec<usize> = (0..self.n).filter(|&x| x != v).collect();
        self.induced(&keep)
    }

    /// Subgraph induced by `vertices`, relabeled by position in the slice.
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph> {
        for &v in vertices {
            self.check_vertex(v)?;
        }
        let mut g = Graph::empty(vertices.len())?;
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate().skip(i + 1) {
                if a == b {
                    return Err(Error::InvalidParameter(format!("vertex {a} repeated")));
                }
                if self.has_edge(a, b) {
                    g.set(i, j, true);
                }
            }
        }
        Ok(g)
    }

    /// Relabels so that old vertex `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch {
                left: perm.len(),
                right: self.n,
            });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
        }
        let mut g = Graph::empty(self.n)?;
        for e in self.edges() {
            g.set(perm[e.u], perm[e.v], true);
        }
        Ok(g)
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n).expect("same size as an existing graph");
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.set(u, v, true);
                }
            }
        }
        g
    }

    /// Whether a traversal from vertex 0 reaches every vertex.
    pub fn is_connected(&self) -> Result<bool> {
        if self.n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        Ok(reached == self.n)
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    fn set(&mut self, u: usize, v: usize, on: bool) {
        let (wu, bu) = (u * self.words + v / 64, v % 64);
        let (wv, bv) = (v * self.words + u / 64, u % 64);
        let was = (self.rows[wu] >> bu) & 1 == 1;
        if was == on {
            return;
        }
        if on {
            self.rows[wu] |= 1 << bu;
            self.rows[wv] |= 1 << bv;
            self.m += 1;
        } else {
            self.rows[wu] &= !(1 << bu);
            self.rows[wv] &= !(1 << bv);
            self.m -= 1;
        }
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            });
        }
        Ok(())
    }

    fn check_edge(&self, e: Edge) -> Result<()> {
        self.check_vertex(e.v)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges().map(|e| e.to_string()).collect();
        write!(f, "Graph(n={}, [{}])", self.n, edges.join(" "))
    }
}

/// Named graph families with fixed labelings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Path,
    Star,
    Complete,
    Cycle,
    DoubleStar,
    DoubleStarComplement,
    DoubleStarComplementPlus,
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Path => "path",
            FamilyKind::Star => "star",
            FamilyKind::Complete => "complete",
            FamilyKind::Cycle => "cycle",
            FamilyKind::DoubleStar => "double_star",
            FamilyKind::DoubleStarComplement => "double_star_complement",
            FamilyKind::DoubleStarComplementPlus => "double_star_complement_plus",
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "path" => FamilyKind::Path,
            "star" => FamilyKind::Star,
            "complete" => FamilyKind::Complete,
            "cycle" => FamilyKind::Cycle,
            "double_star" => FamilyKind::DoubleStar,
            "double_star_complement" | "snn" => FamilyKind::DoubleStarComplement,
            "double_star_complement_plus" | "snn_plus" => FamilyKind::DoubleStarComplementPlus,
            _ => return Err(Error::InvalidParameter(format!("unknown family {s:?}"))),
        })
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Builds a member of a named family.
///
/// Single-size families take `[n]`. Double-star kinds take `[n1, n2]`
/// (a single `[n]` is read as `[n, n]`) with both sizes at least 2; vertex 0
/// and 1 are the centers `v1`, `v2`, followed by the `n1 - 1` leaves of `v1`
/// and then the `n2 - 1` leaves of `v2`.
pub fn make_family(kind: FamilyKind, params: &[usize]) -> Result<Graph> {
    let bad = |why: &str| Error::InvalidParameter(format!("{kind}{params:?}: {why}"));
    match kind {
        FamilyKind::Path | FamilyKind::Star | FamilyKind::Complete | FamilyKind::Cycle => {
            let &[n] = params else {
                return Err(bad("expected one size parameter"));
            };
            let min = if kind == FamilyKind::Cycle { 3 } else { 1 };
            if n < min {
                return Err(bad(&format!("size must be at least {min}")));
            }
            match kind {
                FamilyKind::Path => Graph::from_edges(n, (1..n).map(|v| (v - 1, v))),
                FamilyKind::Star => Graph::from_edges(n, (1..n).map(|v| (0, v))),
                FamilyKind::Cycle => {
                    Graph::from_edges(n, (1..n).map(|v| (v - 1, v)).chain([(n - 1, 0)]))
                }
                _ => Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))),
            }
        }
        FamilyKind::DoubleStar
        | FamilyKind::DoubleStarComplement
        | FamilyKind::DoubleStarComplementPlus => {
            let (n1, n2) = match *params {
                [n] => (n, n),
                [n1, n2] => (n1, n2),
                _ => return Err(bad("expected one or two size parameters")),
            };
            if n1 < 2 || n2 < 2 {
                return Err(bad("both star sizes must be at least 2"));
            }
            let total = n1 + n2;
            let leaves1 = 2..n1 + 1;
            let leaves2 = n1 + 1..total;
            let edges = std::iter::once((0, 1))
                .chain(leaves1.map(|v| (0, v)))
                .chain(leaves2.map(|v| (1, v)));
            let double_star = Graph::from_edges(total, edges)?;
            match kind {
                FamilyKind::DoubleStar => Ok(double_star),
                FamilyKind::DoubleStarComplement => Ok(double_star.complement()),
                _ => double_star.complement().add_edge(Edge { u: 0, v: 1 }),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(a: usize, b: usize) -> Edge {
        Edge::new(a, b).unwrap()
    }

    #[test]
    fn family_sizes() {
        let ds = make_family(FamilyKind::DoubleStar, &[3, 3]).unwrap();
        assert_eq!((ds.n(), ds.edge_count()), (6, 5));
        let dsc = make_family(FamilyKind::DoubleStarComplement, &[3, 3]).unwrap();
        assert_eq!((dsc.n(), dsc.edge_count()), (6, 10));
        let p4 = make_family(FamilyKind::Path, &[4]).unwrap();
        let edges: Vec<_> = p4.edges().map(|e| (e.u(), e.v())).collect();
        assert_eq!(edges, vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn family_errors() {
        assert!(make_family(FamilyKind::DoubleStar, &[1, 3]).is_err());
        assert!(make_family(FamilyKind::Path, &[0]).is_err());
        assert!(make_family(FamilyKind::Path, &[2, 3]).is_err());
        assert!(make_family(FamilyKind::Cycle, &[2]).is_err());
        assert!("wheel".parse::<FamilyKind>().is_err());
    }

    #[test]
    fn complement_cases() {
        let k4 = make_family(FamilyKind::Complete, &[4]).unwrap();
        assert_eq!(k4.complement(), Graph::empty(4).unwrap());
        let ds = make_family(FamilyKind::DoubleStar, &[3, 3]).unwrap();
        assert_eq!(
            ds.complement(),
            make_family(FamilyKind::DoubleStarComplement, &[3, 3]).unwrap()
        );
        let null = Graph::empty(0).unwrap();
        assert_eq!(null.complement(), null);
        assert_eq!(ds.complement().complement(), ds);
    }

    #[test]
    fn edge_mutation() {
        let p3 = make_family(FamilyKind::Path, &[3]).unwrap();
        let c3 = p3.add_edge(edge(0, 2)).unwrap();
        assert_eq!(c3, make_family(FamilyKind::Complete, &[3]).unwrap());
        assert_eq!(p3.edge_count(), 2);

        let c4 = make_family(FamilyKind::Cycle, &[4]).unwrap();
        let p4 = c4.remove_edge(edge(0, 1)).unwrap();
        // path 1-2-3-0 relabeled to 0-1-2-3
        assert_eq!(
            p4.permute(&[3, 0, 1, 2]).unwrap(),
            make_family(FamilyKind::Path, &[4]).unwrap()
        );

        let dsc = make_family(FamilyKind::DoubleStarComplement, &[3, 3]).unwrap();
        assert_eq!(
            dsc.add_edge(edge(0, 1)).unwrap(),
            make_family(FamilyKind::DoubleStarComplementPlus, &[3, 3]).unwrap()
        );

        assert_eq!(
            p3.add_edge(edge(0, 1)),
            Err(Error::EdgePresent { u: 0, v: 1 })
        );
        assert_eq!(
            p3.remove_edge(edge(0, 2)),
            Err(Error::EdgeAbsent { u: 0, v: 2 })
        );
        assert!(p3.add_edge(edge(0, 3)).is_err());
        assert!(Edge::new(2, 2).is_err());
    }

    #[test]
    fn connectivity() {
        assert!(make_family(FamilyKind::Path, &[5])
            .unwrap()
            .is_connected()
            .unwrap());
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(!two.is_connected().unwrap());
        assert!(Graph::empty(1).unwrap().is_connected().unwrap());
        assert_eq!(Graph::empty(0).unwrap().is_connected(), Err(Error::EmptyGraph));
    }

    #[test]
    fn double_star_complement_degrees() {
        for n in 2..9 {
            let g = make_family(FamilyKind::DoubleStarComplement, &[n, n]).unwrap();
            assert_eq!(g.degree(0), n - 1);
            assert_eq!(g.degree(1), n - 1);
            for v in 2..2 * n {
                assert_eq!(g.degree(v), 2 * n - 2);
            }
        }
        for (n1, n2) in [(2, 5), (5, 4), (7, 3)] {
            let g = make_family(FamilyKind::DoubleStarComplement, &[n1, n2]).unwrap();
            let total = n1 + n2;
            assert_eq!(g.edge_count(), total * (total - 1) / 2 - (total - 1));
        }
    }

    #[test]
    fn wide_graphs_use_several_words() {
        let n = 150;
        let g = make_family(FamilyKind::Cycle, &[n]).unwrap();
        assert_eq!(g.edge_count(), n);
        assert!(g.has_edge(0, n - 1));
        assert_eq!(g.neighbors(70).collect::<Vec<_>>(), vec![69, 71]);
        assert!(g.is_connected().unwrap());
        assert_eq!(g.complement().edge_count(), n * (n - 1) / 2 - n);
        let h = g.remove_vertex(0).unwrap();
        assert_eq!(h.edge_count(), n - 2);
        assert!(Graph::empty(MAX_VERTICES + 1).is_err());
    }

    #[test]
    fn edge_parsing() {
        assert_eq!("3,1".parse::<Edge>().unwrap(), edge(1, 3));
        assert_eq!("0-2".parse::<Edge>().unwrap(), edge(0, 2));
        assert!("0;2".parse::<Edge>().is_err());
    }
}
