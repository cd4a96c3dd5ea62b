//! Command-line front end. [`run`] is the whole program minus process
//! plumbing, so tests can drive it with in-memory streams.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use penergy::bounds::{abiad_bound_square, edge_bound_square, BoundCheck, Verdict};
use penergy::families::GapReport;
use penergy::numeric::sig12;
use penergy::search::Violation;
use penergy::{
    closed_spectrum, decode_graph6, edge_bound_p, eigenvalues, encode_graph6, gap_f,
    gap_threshold, make_family, p_energy, tree_extremal, verify, ConjectureKind, ConjectureSpec,
    Edge, FamilyKind, Graph, Side,
};
use serde::Serialize;
use serde_json::{json, Value};

/// Version tag of every JSON payload.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "penergy", version, about = "Positive and negative p-energies of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Adjacency spectrum of one graph.
    Spectrum {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        csv: bool,
    },
    /// Positive, negative and total p-energy.
    Energy {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        csv: bool,
    },
    /// Edge-removal lower bounds, for one edge or every edge.
    Bound {
        #[command(flatten)]
        graph: GraphArg,
        /// Edge as `u,v`; all edges when omitted.
        #[arg(long)]
        edge: Option<Edge>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// `plus` or `minus`; both when omitted.
        #[arg(long)]
        side: Option<Side>,
        /// Also report the p = 2 piecewise form and the second-order bound.
        #[arg(long)]
        abiad: bool,
        #[arg(long)]
        csv: bool,
    },
    /// A named family member, optionally with its exact spectrum.
    Family {
        #[arg(long)]
        kind: FamilyKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        closed: bool,
    },
    /// Sign sweep of the double-star complement gap.
    Gap {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 100)]
        nmax: usize,
        /// Report the single value at this n instead of the sweep.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        csv: bool,
    },
    /// Exhaustive conjecture scan.
    Verify {
        #[arg(long)]
        kind: ConjectureKind,
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated exponents.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        p: Vec<f64>,
        /// graph6 file, or `-` for standard input; internal enumeration when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Print one CSV row per checked instance.
        #[arg(long)]
        full: bool,
        /// Print the violations as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Extremes of E_p over all trees on n vertices.
    Trees {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Encode a graph as graph6.
    Encode {
        #[command(flatten)]
        graph: EdgeListArg,
        /// Print only the graph6 string.
        #[arg(long)]
        raw: bool,
    },
    /// Decode graph6 strings.
    Decode {
        strings: Vec<String>,
        /// Read one graph6 string per line from a file, or `-` for standard input.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct GraphArg {
    #[arg(long)]
    graph6: Option<String>,
    /// `kind:params`, e.g. `snn:5`, `double_star_complement:5,4`, `path:4`.
    #[arg(long)]
    family: Option<String>,
}

#[derive(Args, Debug)]
struct EdgeListArg {
    /// Edges as `u-v` separated by commas or spaces (needs --n).
    #[arg(long, requires = "n")]
    edges: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    /// `kind:params`.
    #[arg(long)]
    family: Option<String>,
}

type Failure = String;

fn parse_family(text: &str) -> Result<Graph, Failure> {
    let (kind, params) = text
        .split_once(':')
        .ok_or_else(|| format!("family must look like kind:params, got {text:?}"))?;
    let kind: FamilyKind = kind.parse().map_err(|e: penergy::Error| e.to_string())?;
    let params: Vec<usize> = params
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| format!("bad family parameter {s:?}")))
        .collect::<Result<_, _>>()?;
    make_family(kind, &params).map_err(|e| e.to_string())
}

impl GraphArg {
    fn load(&self) -> Result<Graph, Failure> {
        match (&self.graph6, &self.family) {
            (Some(s), None) => decode_graph6(s).map_err(|e| e.to_string()),
            (None, Some(f)) => parse_family(f),
            _ => Err("give exactly one of --graph6 and --family".into()),
        }
    }
}

impl EdgeListArg {
    fn load(&self) -> Result<Graph, Failure> {
        if let Some(f) = &self.family {
            if self.edges.is_some() {
                return Err("give either --edges or --family, not both".into());
            }
            return parse_family(f);
        }
        let n = self.n.ok_or("--edges needs --n")?;
        let edges: Vec<(usize, usize)> = self
            .edges
            .as_deref()
            .unwrap_or("")
            .split([',', ' '])
            .filter(|s| !s.is_empty())
            .map(|s| {
                let e: Edge = s.parse().map_err(|e: penergy::Error| e.to_string())?;
                Ok((e.u(), e.v()))
            })
            .collect::<Result<_, Failure>>()?;
        Graph::from_edges(n, edges).map_err(|e| e.to_string())
    }
}

fn payload(command: &str, body: impl Serialize) -> Result<Value, Failure> {
    let mut value = serde_json::to_value(body).map_err(|e| e.to_string())?;
    let map = value.as_object_mut().ok_or("payload must be an object")?;
    map.insert(
        "schema".into(),
        Value::String(format!("penergy/{command}/v{SCHEMA_VERSION}")),
    );
    Ok(value)
}

fn print_json(out: &mut dyn Write, value: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

fn open_input(path: &PathBuf) -> Result<Box<dyn BufRead>, Failure> {
    if path.as_os_str() == "-" {
        Ok(Box::new(BufReader::new(io::stdin())))
    } else {
        let f = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(Box::new(BufReader::new(f)))
    }
}

fn edges_of(g: &Graph) -> Vec<String> {
    g.edges().map(|e| e.to_string()).collect()
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let io_err = |e: io::Error| e.to_string();
    match cli.command {
        Command::Spectrum { graph, csv } => {
            let g = graph.load()?;
            let s = eigenvalues(&g).map_err(|e| e.to_string())?;
            if csv {
                writeln!(out, "index,eigenvalue").map_err(io_err)?;
                for (i, x) in s.shown_values().iter().enumerate() {
                    writeln!(out, "{},{}", i + 1, sig12(*x)).map_err(io_err)?;
                }
            } else {
                let part = s.sign_partition();
                let clusters: Vec<Value> = s
                    .clusters()
                    .into_iter()
                    .map(|(v, m)| json!({"value": sig12(s.shown(v)), "multiplicity": m}))
                    .collect();
                let body = json!({
                    "graph6": encode_graph6(&g),
                    "n": g.n(),
                    "m": g.edge_count(),
                    "spectrum": s,
                    "positive": part.positives.len(),
                    "zero": part.zeros.len(),
                    "negative": part.negatives.len(),
                    "clusters": clusters,
                });
                print_json(out, &payload("spectrum", body)?).map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
        Command::Energy { graph, p, csv } => {
            let g = graph.load()?;
            let r = p_energy(&eigenvalues(&g).map_err(|e| e.to_string())?, p)
                .map_err(|e| e.to_string())?;
            if csv {
                writeln!(out, "graph6,p,e_plus,e_minus,e_total").map_err(io_err)?;
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    encode_graph6(&g),
                    sig12(r.p),
                    sig12(r.e_plus),
                    sig12(r.e_minus),
                    sig12(r.e_total)
                )
                .map_err(io_err)?;
            } else {
                let mut v = payload("energy", &r)?;
                v["graph6"] = Value::String(encode_graph6(&g));
                v["schatten_norm"] = Value::String(sig12(r.schatten_norm()));
                print_json(out, &v).map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
        Command::Bound { graph, edge, p, side, abiad, csv } => {
            let g = graph.load()?;
            if abiad && p != 2.0 {
                return Err("--abiad compares p = 2 bounds; drop --p or pass --p 2".into());
            }
            let edges: Vec<Edge> = match edge {
                Some(e) => vec![e],
                None => g.edges().collect(),
            };
            if edges.is_empty() {
                return Err("graph has no edges".into());
            }
            let sides = match side {
                Some(s) => vec![s],
                None => vec![Side::Plus, Side::Minus],
            };
            let mut checks: Vec<BoundCheck> = Vec::new();
            for &e in &edges {
                for &s in &sides {
                    checks.push(edge_bound_p(&g, e, p, s).map_err(|e| e.to_string())?);
                    if abiad {
                        checks.push(edge_bound_square(&g, e, s).map_err(|e| e.to_string())?);
                        checks.push(abiad_bound_square(&g, e, s).map_err(|e| e.to_string())?);
                    }
                }
            }
            let failed = checks.iter().filter(|c| c.verdict() == Verdict::Fail).count();
            if csv {
                writeln!(out, "{}", BoundCheck::CSV_HEADER).map_err(io_err)?;
                for c in &checks {
                    writeln!(out, "{}", c.csv_row()).map_err(io_err)?;
                }
            } else {
                let verdicts: Vec<Verdict> = checks.iter().map(|c| c.verdict()).collect();
                let body = json!({ "checks": checks, "verdicts": verdicts, "failed": failed });
                print_json(out, &payload("bound", body)?).map_err(io_err)?;
            }
            Ok(if failed > 0 { EXIT_VIOLATIONS } else { EXIT_OK })
        }
        Command::Family { kind, n, closed } => {
            let g = make_family(kind, &[n]).map_err(|e| e.to_string())?;
            let s = eigenvalues(&g).map_err(|e| e.to_string())?;
            let mut body = json!({
                "kind": kind.name(),
                "n": n,
                "order": g.n(),
                "graph6": encode_graph6(&g),
                "edges": edges_of(&g),
                "spectrum": s,
            });
            if closed {
                let c = closed_spectrum(kind, n).map_err(|e| e.to_string())?;
                body["closed"] = serde_json::to_value(c).map_err(|e| e.to_string())?;
            }
            print_json(out, &payload("family", body)?).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Gap { p, nmax, n, csv } => {
            let rows: Vec<GapReport>;
            let value = if let Some(n) = n {
                let r = gap_f(n, p).map_err(|e| e.to_string())?;
                rows = vec![r];
                payload("gap-value", r)?
            } else {
                let t = gap_threshold(p, nmax).map_err(|e| e.to_string())?;
                rows = t.reports.clone();
                payload("gap", &t)?
            };
            if csv {
                writeln!(out, "{}", GapReport::CSV_HEADER).map_err(io_err)?;
                for r in &rows {
                    writeln!(out, "{}", r.csv_row()).map_err(io_err)?;
                }
            } else {
                print_json(out, &value).map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
        Command::Verify { kind, n, p, input, jobs, full, csv } => {
            let mut spec = match &input {
                Some(_) => ConjectureSpec::stream(kind, &p),
                None => ConjectureSpec::internal(kind, n.ok_or("--n is required without --input")?, &p),
            };
            spec.n = n;
            spec.record_rows = full;
            let threads = jobs.unwrap_or(0);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| e.to_string())?;
            let report = pool.install(|| -> Result<_, Failure> {
                match &input {
                    Some(path) => {
                        let mut reader = open_input(path)?;
                        verify(&spec, Some(&mut *reader)).map_err(|e| e.to_string())
                    }
                    None => verify(&spec, None).map_err(|e| e.to_string()),
                }
            })?;
            writeln!(
                err,
                "checked {} graphs ({} instances) in {:.3} s",
                report.graphs_checked,
                report.instances_checked,
                report.runtime.as_secs_f64()
            )
            .map_err(io_err)?;
            let rows: Option<&[Violation]> = if full {
                Some(&report.rows)
            } else if csv {
                Some(&report.violations)
            } else {
                None
            };
            match rows {
                Some(rows) => {
                    writeln!(out, "{}", Violation::CSV_HEADER).map_err(io_err)?;
                    for r in rows {
                        writeln!(out, "{}", r.csv_row()).map_err(io_err)?;
                    }
                }
                None => print_json(out, &payload("verify", &report)?).map_err(io_err)?,
            }
            Ok(if report.violations.is_empty() { EXIT_OK } else { EXIT_VIOLATIONS })
        }
        Command::Trees { n, p } => {
            let r = tree_extremal(n, p).map_err(|e| e.to_string())?;
            print_json(out, &payload("trees", &r)?).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Encode { graph, raw } => {
            let g = graph.load()?;
            let text = encode_graph6(&g);
            if raw {
                writeln!(out, "{text}").map_err(io_err)?;
            } else {
                let body = json!({ "graph6": text, "n": g.n(), "m": g.edge_count() });
                print_json(out, &payload("encode", body)?).map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
        Command::Decode { strings, input, csv } => {
            let mut texts = strings;
            if let Some(path) = &input {
                for line in open_input(path)?.lines() {
                    let line = line.map_err(io_err)?;
                    let line = line.trim();
                    if !line.is_empty() {
                        texts.push(line.strip_prefix(">>graph6<<").unwrap_or(line).to_string());
                    }
                }
            }
            if texts.is_empty() {
                return Err("nothing to decode".into());
            }
            let mut graphs = Vec::with_capacity(texts.len());
            for (i, t) in texts.iter().enumerate() {
                let g = decode_graph6(t).map_err(|e| format!("record {}: {e}", i + 1))?;
                graphs.push((t, g));
            }
            if csv {
                writeln!(out, "graph6,n,m,edges").map_err(io_err)?;
                for (t, g) in &graphs {
                    writeln!(out, "{t},{},{},{}", g.n(), g.edge_count(), edges_of(g).join(" "))
                        .map_err(io_err)?;
                }
            } else {
                let list: Vec<Value> = graphs
                    .iter()
                    .map(|(t, g)| json!({"graph6": t, "n": g.n(), "m": g.edge_count(), "edges": edges_of(g)}))
                    .collect();
                print_json(out, &payload("decode", json!({ "graphs": list }))?).map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
    }
}

/// Runs the program on `argv` (including the program name) and returns
/// the exit code: 0 success, 1 violations found, 2 usage or input error.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let text = e.render().to_string();
            if informational {
                let _ = write!(out, "{text}");
                return EXIT_OK;
            }
            let _ = write!(err, "{text}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            let _ = writeln!(err, "run `penergy --help` for usage");
            EXIT_USAGE
        }
    }
}
