//! Isomorph-free enumeration at desk scale and exhaustive conjecture scans.

use std::collections::HashSet;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::canon::{canonical_rows, graph_from_code, rows_of, Rows};
use crate::error::{Error, Result};
use crate::families::path_positive_energy;
use crate::graph::{make_family, Edge, FamilyKind, Graph};
use crate::graph6::{encode_graph6, Graph6Reader, ReadMode};
use crate::numeric::{decimal, sig12};
use crate::spectra::{check_exponent, eigenvalues, p_energy, Spectrum};

/// Largest order generated internally for connected graphs.
pub const MAX_CONNECTED_N: usize = 9;
/// Largest order generated internally for trees.
pub const MAX_TREE_N: usize = 10;
/// Relative tolerance separating violations from tight instances.
pub const VIOLATION_TOLERANCE: f64 = 1e-7;
/// Graphs read from a stream per parallel batch.
const CHUNK: usize = 4096;

fn range_error(what: &str, n: usize, lo: usize, hi: usize) -> Error {
    Error::InvalidParameter(format!("{what} needs {lo} <= n <= {hi}, got {n}"))
}

fn extend_level<F>(parents: &[u64], n: usize, children: F) -> Vec<u64>
where
    F: Fn(&Rows, &mut dyn FnMut(Rows)) + Sync,
{
    let codes: HashSet<u64> = parents
        .par_iter()
        .fold(HashSet::new, |mut set, &code| {
            let parent = graph_from_code(n - 1, code).expect("code within range");
            let rows = rows_of(&parent).expect("small graph");
            children(&rows, &mut |child| {
                set.insert(canonical_rows(&child, n).0);
            });
            set
        })
        .reduce(HashSet::new, |mut a, b| {
            if a.len() < b.len() {
                return b.into_iter().chain(a).collect();
            }
            a.extend(b);
            a
        });
    let mut codes: Vec<u64> = codes.into_iter().collect();
    codes.sort_unstable();
    codes
}

fn decode_level(n: usize, codes: &[u64]) -> Vec<Graph> {
    codes
        .iter()
        .map(|&c| graph_from_code(n, c).expect("code within range"))
        .collect()
}

/// One canonically labeled representative of every connected graph on `n`
/// vertices, ordered by canonical code.
///
/// Each level joins a new vertex to every nonempty subset of the previous
/// level's vertices; removing a non-cut vertex shows every class is reached.
pub fn enumerate_connected(n: usize) -> Result<Vec<Graph>> {
    if !(1..=MAX_CONNECTED_N).contains(&n) {
        return Err(range_error("enumerate_connected", n, 1, MAX_CONNECTED_N));
    }
    let mut level = vec![0u64];
    for m in 2..=n {
        level = extend_level(&level, m, |rows, emit| {
            let new = m - 1;
            for mask in 1u16..(1 << new) {
                let mut child = *rows;
                child[new] = mask;
                let mut rest = mask;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    child[v] |= 1 << new;
                }
                emit(child);
            }
        });
    }
    Ok(decode_level(n, &level))
}

/// One canonically labeled representative of every tree on `n` vertices.
pub fn enumerate_trees(n: usize) -> Result<Vec<Graph>> {
    if !(1..=MAX_TREE_N).contains(&n) {
        return Err(range_error("enumerate_trees", n, 1, MAX_TREE_N));
    }
    let mut level = vec![0u64];
    for m in 2..=n {
        level = extend_level(&level, m, |rows, emit| {
            let new = m - 1;
            for v in 0..new {
                let mut child = *rows;
                child[new] = 1 << v;
                child[v] |= 1 << new;
                emit(child);
            }
        });
    }
    Ok(decode_level(n, &level))
}

/// Which statement a scan checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjectureKind {
    /// `min(s^+, s^-) >= n - 1` on connected graphs.
    Hong,
    /// `E_p^+(G + uv) >= E_p^+(G)` for every non-edge `uv`.
    SqMonotone,
    /// `E_p^+(G) >= E_p^+(P_n)` on connected graphs.
    PathLower,
    /// Star and path are the extremes of `E_p` over trees.
    TreeExtremal,
    /// `E_{2k}(G) >= E_{2k}(P_n)` on connected graphs.
    EvenEnergy,
}

impl ConjectureKind {
    pub const ALL: [ConjectureKind; 5] = [
        ConjectureKind::Hong,
        ConjectureKind::SqMonotone,
        ConjectureKind::PathLower,
        ConjectureKind::TreeExtremal,
        ConjectureKind::EvenEnergy,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ConjectureKind::Hong => "hong",
            ConjectureKind::SqMonotone => "sq_monotone",
            ConjectureKind::PathLower => "path_lower",
            ConjectureKind::TreeExtremal => "tree_extremal",
            ConjectureKind::EvenEnergy => "even_energy",
        }
    }

    /// Whether the statement is a proven theorem, so a violation is a bug.
    pub fn is_theorem(&self) -> bool {
        matches!(self, ConjectureKind::EvenEnergy)
    }
}

impl fmt::Display for ConjectureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConjectureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ConjectureKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown conjecture kind {s:?}")))
    }
}

/// Where the graphs of a scan come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Source {
    #[serde(rename = "internal-enumeration")]
    Internal,
    #[serde(rename = "graph6-stream")]
    Stream,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureSpec {
    pub kind: ConjectureKind,
    #[serde(with = "decimal::vec")]
    pub p_values: Vec<f64>,
    /// Required for internal enumeration; for streams, graphs of any
    /// other order are skipped.
    pub n: Option<usize>,
    pub source: Source,
    /// Keep one row per checked instance (for CSV output).
    #[serde(skip)]
    pub record_rows: bool,
}

impl ConjectureSpec {
    pub fn internal(kind: ConjectureKind, n: usize, p_values: &[f64]) -> Self {
        ConjectureSpec {
            kind,
            p_values: p_values.to_vec(),
            n: Some(n),
            source: Source::Internal,
            record_rows: false,
        }
    }

    pub fn stream(kind: ConjectureKind, p_values: &[f64]) -> Self {
        ConjectureSpec {
            kind,
            p_values: p_values.to_vec(),
            n: None,
            source: Source::Stream,
            record_rows: false,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.p_values.is_empty() {
            return bad("p_values must be nonempty".into());
        }
        for &p in &self.p_values {
            check_exponent(p)?;
        }
        match self.kind {
            ConjectureKind::Hong if self.p_values.iter().any(|&p| p != 2.0) => {
                return bad("hong is a statement about p = 2 only".into())
            }
            ConjectureKind::PathLower if self.p_values.iter().any(|&p| p < 2.0) => {
                return bad("path_lower is stated for p >= 2".into())
            }
            ConjectureKind::EvenEnergy => {
                if let Some(&p) = self
                    .p_values
                    .iter()
                    .find(|&&p| p < 4.0 || p.fract() != 0.0 || p % 2.0 != 0.0)
                {
                    return bad(format!("even_energy needs p = 2k with k >= 2, got {p}"));
                }
            }
            _ => {}
        }
        if self.n == Some(0) {
            return bad("n must be at least 1".into());
        }
        if self.source == Source::Internal {
            let n = self
                .n
                .ok_or_else(|| Error::InvalidParameter("internal enumeration needs n".into()))?;
            let max = if self.kind == ConjectureKind::TreeExtremal {
                MAX_TREE_N
            } else {
                MAX_CONNECTED_N
            };
            if n > max {
                return bad(format!(
                    "internal enumeration stops at n = {max}; supply larger graphs as a graph6 stream"
                ));
            }
        }
        Ok(())
    }
}

/// Named witness values of one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness(pub Vec<(&'static str, f64)>);

impl Witness {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.iter().find(|(k, _)| *k == name).map(|e| e.1)
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, &sig12(*v))?;
        }
        map.end()
    }
}

fn edge_string<S: Serializer>(e: &Option<Edge>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match e {
        Some(e) => s.serialize_str(&e.to_string()),
        None => s.serialize_none(),
    }
}

/// One checked instance: a graph, an exponent and possibly a non-edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub graph6: String,
    #[serde(with = "decimal")]
    pub p: f64,
    #[serde(serialize_with = "edge_string", skip_serializing_if = "Option::is_none")]
    pub edge: Option<Edge>,
    pub witness: Witness,
    #[serde(with = "decimal")]
    pub margin: f64,
    /// Scale of the compared quantities; the violation threshold is
    /// `-1e-7 (1 + |reference|)`.
    #[serde(skip)]
    pub reference: f64,
}

impl Violation {
    pub const CSV_HEADER: &'static str = "graph6,p,edge,margin";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.graph6,
            sig12(self.p),
            self.edge.map(|e| e.to_string()).unwrap_or_default(),
            sig12(self.margin)
        )
    }

    fn threshold(&self) -> f64 {
        VIOLATION_TOLERANCE * (1.0 + self.reference.abs())
    }

    pub fn is_violation(&self) -> bool {
        self.margin < -self.threshold()
    }

    pub fn is_tight(&self) -> bool {
        self.margin.abs() <= self.threshold()
    }

    fn key(&self) -> (&str, Option<Edge>, f64) {
        (&self.graph6, self.edge, self.p)
    }
}

fn instance_order(a: &Violation, b: &Violation) -> std::cmp::Ordering {
    let (ga, ea, pa) = a.key();
    let (gb, eb, pb) = b.key();
    ga.cmp(gb).then(ea.cmp(&eb)).then(pa.total_cmp(&pb))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub spec: ConjectureSpec,
    pub graphs_checked: usize,
    pub instances_checked: usize,
    /// Stream entries outside the statement's domain (disconnected graphs,
    /// or non-trees for the tree statement).
    pub skipped_out_of_domain: usize,
    /// Stream entries whose order differs from `spec.n`.
    pub skipped_order: usize,
    /// Instances with `|margin| <= 1e-7 (1 + |reference|)`.
    pub tight: usize,
    pub violations: Vec<Violation>,
    #[serde(with = "decimal::option")]
    pub min_margin: Option<f64>,
    pub argmin: Option<Violation>,
    pub status: String,
    #[serde(skip)]
    pub rows: Vec<Violation>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl VerificationReport {
    fn empty(spec: &ConjectureSpec) -> Self {
        VerificationReport {
            spec: spec.clone(),
            graphs_checked: 0,
            instances_checked: 0,
            skipped_out_of_domain: 0,
            skipped_order: 0,
            tight: 0,
            violations: Vec::new(),
            min_margin: None,
            argmin: None,
            status: String::new(),
            rows: Vec::new(),
            runtime: Duration::ZERO,
        }
    }

    fn absorb(&mut self, outcome: Outcome, keep_rows: bool) {
        match outcome {
            Outcome::OutOfDomain => self.skipped_out_of_domain += 1,
            Outcome::Checked(instances) => {
                self.graphs_checked += 1;
                for inst in instances {
                    self.instances_checked += 1;
                    if inst.is_tight() {
                        self.tight += 1;
                    }
                    let better = match &self.argmin {
                        None => true,
                        Some(cur) => {
                            inst.margin < cur.margin
                                || (inst.margin == cur.margin
                                    && instance_order(&inst, cur).is_lt())
                        }
                    };
                    if better {
                        self.min_margin = Some(inst.margin);
                        self.argmin = Some(inst.clone());
                    }
                    if inst.is_violation() {
                        self.violations.push(inst.clone());
                    }
                    if keep_rows {
                        self.rows.push(inst);
                    }
                }
            }
        }
    }

    fn finish(&mut self) {
        self.violations.sort_by(instance_order);
        self.rows.sort_by(instance_order);
        self.status = if !self.violations.is_empty() {
            format!("{} violation(s) found", self.violations.len())
        } else if self.spec.kind.is_theorem() {
            "no violations".into()
        } else {
            "no counterexamples found at this scale".into()
        };
    }
}

enum Outcome {
    OutOfDomain,
    Checked(Vec<Violation>),
}

fn total_energy(s: &Spectrum, p: f64) -> Result<f64> {
    Ok(p_energy(s, p)?.e_total)
}

/// Star and path energies for one order, shared by every tree of that order.
struct TreeReference {
    star: Spectrum,
    path: Spectrum,
}

impl TreeReference {
    fn new(n: usize) -> Result<Self> {
        Ok(TreeReference {
            star: eigenvalues(&make_family(FamilyKind::Star, &[n])?)?,
            path: eigenvalues(&make_family(FamilyKind::Path, &[n])?)?,
        })
    }
}

fn check_graph(spec: &ConjectureSpec, g: &Graph) -> Result<Outcome> {
    let n = g.n();
    let graph6 = encode_graph6(g);
    let instance = |p: f64, edge: Option<Edge>, witness: Vec<(&'static str, f64)>, margin: f64, reference: f64| {
        Violation {
            graph6: graph6.clone(),
            p,
            edge,
            witness: Witness(witness),
            margin,
            reference,
        }
    };
    let needs_connected = !matches!(spec.kind, ConjectureKind::SqMonotone);
    if needs_connected && (n == 0 || !g.is_connected()?) {
        return Ok(Outcome::OutOfDomain);
    }
    let mut out = Vec::new();
    match spec.kind {
        ConjectureKind::Hong => {
            let r = p_energy(&eigenvalues(g)?, 2.0)?;
            let bound = n as f64 - 1.0;
            let w = vec![("s_plus", r.e_plus), ("s_minus", r.e_minus), ("bound", bound)];
            out.push(instance(2.0, None, w, r.e_plus.min(r.e_minus) - bound, bound));
        }
        ConjectureKind::SqMonotone => {
            if n == 0 {
                return Ok(Outcome::Checked(out));
            }
            let before = eigenvalues(g)?;
            for e in g.non_edges() {
                let after = eigenvalues(&g.add_edge(e)?)?;
                for &p in &spec.p_values {
                    let b = p_energy(&before, p)?.e_plus;
                    let a = p_energy(&after, p)?.e_plus;
                    let w = vec![("before", b), ("after", a)];
                    out.push(instance(p, Some(e), w, a - b, b));
                }
            }
        }
        ConjectureKind::PathLower => {
            let s = eigenvalues(g)?;
            for &p in &spec.p_values {
                let actual = p_energy(&s, p)?.e_plus;
                let path = path_positive_energy(n, p)?;
                let w = vec![("e_plus", actual), ("path_e_plus", path)];
                out.push(instance(p, None, w, actual - path, path));
            }
        }
        ConjectureKind::EvenEnergy => {
            let s = eigenvalues(g)?;
            let path = eigenvalues(&make_family(FamilyKind::Path, &[n])?)?;
            for &p in &spec.p_values {
                let actual = total_energy(&s, p)?;
                let floor = total_energy(&path, p)?;
                let w = vec![("energy", actual), ("path_energy", floor)];
                out.push(instance(p, None, w, actual - floor, floor));
            }
        }
        ConjectureKind::TreeExtremal => {
            if g.edge_count() + 1 != n {
                return Ok(Outcome::OutOfDomain);
            }
            let refs = TreeReference::new(n)?;
            let s = eigenvalues(g)?;
            for &p in &spec.p_values {
                let actual = total_energy(&s, p)?;
                let star = total_energy(&refs.star, p)?;
                let path = total_energy(&refs.path, p)?;
                let (lower, upper) = if p <= 2.0 { (star, path) } else { (path, star) };
                let w = vec![("energy", actual), ("star_energy", star), ("path_energy", path)];
                let margin = (actual - lower).min(upper - actual);
                out.push(instance(p, None, w, margin, upper));
            }
        }
    }
    Ok(Outcome::Checked(out))
}

struct Scan<'a> {
    spec: &'a ConjectureSpec,
    report: VerificationReport,
}

impl<'a> Scan<'a> {
    fn new(spec: &'a ConjectureSpec) -> Self {
        Scan {
            spec,
            report: VerificationReport::empty(spec),
        }
    }

    fn feed(&mut self, chunk: &[Graph]) -> Result<()> {
        let outcomes: Vec<Outcome> = chunk
            .par_iter()
            .map(|g| check_graph(self.spec, g))
            .collect::<Result<_>>()?;
        for o in outcomes {
            self.report.absorb(o, self.spec.record_rows);
        }
        Ok(())
    }

    fn feed_filtered(&mut self, chunk: &mut Vec<Graph>) -> Result<()> {
        if let Some(n) = self.spec.n {
            let before = chunk.len();
            chunk.retain(|g| g.n() == n);
            self.report.skipped_order += before - chunk.len();
        }
        self.feed(chunk)?;
        chunk.clear();
        Ok(())
    }

    fn finish(mut self, started: Instant) -> VerificationReport {
        self.report.finish();
        self.report.runtime = started.elapsed();
        self.report
    }
}

/// Runs a scan over internally enumerated graphs (`input = None`) or a
/// graph6 stream. Results are identical for any number of worker threads.
pub fn verify(spec: &ConjectureSpec, input: Option<&mut dyn BufRead>) -> Result<VerificationReport> {
    spec.validate()?;
    let started = Instant::now();
    let mut scan = Scan::new(spec);
    match (spec.source, input) {
        (Source::Internal, None) => {
            let n = spec.n.expect("validated");
            let graphs = if spec.kind == ConjectureKind::TreeExtremal {
                enumerate_trees(n)?
            } else {
                enumerate_connected(n)?
            };
            for chunk in graphs.chunks(CHUNK) {
                scan.feed(chunk)?;
            }
        }
        (Source::Stream, Some(input)) => {
            let mut chunk = Vec::with_capacity(CHUNK);
            for item in Graph6Reader::new(input, ReadMode::Strict) {
                chunk.push(item?.1);
                if chunk.len() == CHUNK {
                    scan.feed_filtered(&mut chunk)?;
                }
            }
            scan.feed_filtered(&mut chunk)?;
        }
        (Source::Internal, Some(_)) => {
            return Err(Error::InvalidParameter(
                "internal enumeration takes no input stream".into(),
            ))
        }
        (Source::Stream, None) => {
            return Err(Error::InvalidParameter("stream source needs an input".into()))
        }
    }
    Ok(scan.finish(started))
}

/// Scans an in-memory list of graphs as if it were a stream.
pub fn verify_graphs(spec: &ConjectureSpec, graphs: &[Graph]) -> Result<VerificationReport> {
    if spec.source != Source::Stream {
        return Err(Error::InvalidParameter("graph lists are scanned as streams".into()));
    }
    spec.validate()?;
    let started = Instant::now();
    let mut scan = Scan::new(spec);
    let mut owned = graphs.to_vec();
    scan.feed_filtered(&mut owned)?;
    Ok(scan.finish(started))
}

/// `E_{2k}(G) >= E_{2k}(P_n)` over every connected graph on `n` vertices.
pub fn even_energy_floor(n: usize, k: usize) -> Result<VerificationReport> {
    if !(2..=8).contains(&n) {
        return Err(range_error("even_energy_floor", n, 2, 8));
    }
    if k < 2 {
        return Err(Error::InvalidParameter(format!("even_energy_floor needs k >= 2, got {k}")));
    }
    let spec = ConjectureSpec::internal(ConjectureKind::EvenEnergy, n, &[2.0 * k as f64]);
    verify(&spec, None)
}

/// Extremes of `E_p` over all trees on `n` vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TreeExtremalReport {
    pub n: usize,
    #[serde(with = "decimal")]
    pub p: f64,
    pub trees: usize,
    #[serde(with = "decimal")]
    pub t_p_min: f64,
    pub argmin: String,
    /// Every tree within `1e-9 (1 + |t_p_min|)` of the minimum.
    pub argmin_ties: Vec<String>,
    #[serde(with = "decimal")]
    pub t_p_max: f64,
    pub argmax: String,
    pub argmax_ties: Vec<String>,
}

/// Relative width of a tie class in [`tree_extremal`].
pub const TIE_TOLERANCE: f64 = 1e-9;

pub fn tree_extremal(n: usize, p: f64) -> Result<TreeExtremalReport> {
    if !(2..=MAX_TREE_N).contains(&n) {
        return Err(range_error("tree_extremal", n, 2, MAX_TREE_N));
    }
    check_exponent(p)?;
    let trees = enumerate_trees(n)?;
    let mut scored: Vec<(f64, String)> = trees
        .par_iter()
        .map(|t| Ok((total_energy(&eigenvalues(t)?, p)?, encode_graph6(t))))
        .collect::<Result<_>>()?;
    scored.sort_by(|a, b| a.1.cmp(&b.1));
    let lo = scored.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hi = scored.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    let ties = |target: f64| -> Vec<String> {
        let width = TIE_TOLERANCE * (1.0 + target.abs());
        scored
            .iter()
            .filter(|s| (s.0 - target).abs() <= width)
            .map(|s| s.1.clone())
            .collect()
    };
    let argmin_ties = ties(lo);
    let argmax_ties = ties(hi);
    Ok(TreeExtremalReport {
        n,
        p,
        trees: scored.len(),
        t_p_min: lo,
        argmin: argmin_ties[0].clone(),
        argmin_ties,
        t_p_max: hi,
        argmax: argmax_ties[0].clone(),
        argmax_ties,
    })
}

/// `E_p` of a graph, for callers comparing against report values.
pub fn graph_energy(g: &Graph, p: f64) -> Result<f64> {
    total_energy(&eigenvalues(g)?, p)
}
