//! Closed-form spectra of the named families, equitable partitions with
//! their divisor matrices, and the gap
//!
//! ```text
//! f(n) = E_p^+(complement of S_{n,n}) - E_p^+(same plus the center edge)
//!      = lambda_1^p + lambda_2^p - theta_1^p - theta_2^p - theta_3^p
//! ```
//!
//! whose eventual positivity shows that adding an edge can lower `E_p^+`.

use std::fmt;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{FamilyKind, Graph};
use crate::numeric::{abs_pow, decimal, CompensatedSum};
use crate::spectra::{check_exponent, eigenvalues};

/// Reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    num: i64,
    den: i64,
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        let sign = den.signum();
        Ratio {
            num: sign * num / g.max(1),
            den: sign * den / g.max(1),
        }
    }

    pub fn int(v: i64) -> Self {
        Ratio { num: v, den: 1 }
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn is_zero(&self) -> bool {
        self.num == 0
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// An exact eigenvalue: `a + b*sqrt(c)` or `2 cos(k*pi/m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedValue {
    Radical { a: Ratio, b: Ratio, c: u64 },
    TwoCos { k: usize, m: usize },
}

impl ClosedValue {
    fn int(v: i64) -> Self {
        ClosedValue::Radical {
            a: Ratio::int(v),
            b: Ratio::int(0),
            c: 1,
        }
    }

    /// `a + b*sqrt(c)` with square factors pulled out of `c`.
    fn radical(a: Ratio, b: Ratio, c: u64) -> Self {
        let (mut outside, mut inside) = (1u64, c);
        let mut k = 2u64;
        while k * k <= inside {
            while inside % (k * k) == 0 {
                inside /= k * k;
                outside *= k;
            }
            k += 1;
        }
        let b = Ratio::new(b.num * outside as i64, b.den);
        if inside <= 1 || b.is_zero() {
            let rational = b.num * inside as i64;
            let a = Ratio::new(a.num * b.den + rational * a.den, a.den * b.den);
            return ClosedValue::Radical {
                a,
                b: Ratio::int(0),
                c: 1,
            };
        }
        ClosedValue::Radical { a, b, c: inside }
    }


    pub fn value(&self) -> f64 {
        match *self {
            ClosedValue::Radical { a, b, c } => a.value() + b.value() * (c as f64).sqrt(),
            ClosedValue::TwoCos { k, m } if 2 * k == m => 0.0,
            ClosedValue::TwoCos { k, m } => {
                2.0 * (k as f64 * std::f64::consts::PI / m as f64).cos()
            }
        }
    }
}

impl fmt::Display for ClosedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ClosedValue::Radical { a, b, c } => {
                if b.is_zero() || c <= 1 {
                    return write!(f, "{}", Ratio::new(a.num * b.den + b.num * c as i64 * a.den, a.den * b.den));
                }
                let coeff = |r: Ratio| -> String {
                    match (r.num.abs(), r.den) {
                        (1, 1) => String::new(),
                        (num, 1) => num.to_string(),
                        (num, den) => format!("{num}/{den}"),
                    }
                };
                let sign = if b.num < 0 { "-" } else { "+" };
                if a.is_zero() {
                    let lead = if b.num < 0 { "-" } else { "" };
                    write!(f, "{lead}{}√{c}", coeff(b))
                } else {
                    write!(f, "{a}{sign}{}√{c}", coeff(b))
                }
            }
            ClosedValue::TwoCos { k, m } => write!(f, "2cos({k}π/{m})"),
        }
    }
}

/// Exact spectrum with multiplicities plus its numeric evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedSpectrum {
    #[serde(serialize_with = "kind_name")]
    pub kind: FamilyKind,
    /// Family parameter as passed to [`closed_spectrum`].
    pub n: usize,
    /// Number of vertices of the graph.
    pub order: usize,
    #[serde(serialize_with = "entry_strings")]
    pub entries: Vec<(ClosedValue, usize)>,
    #[serde(with = "decimal::vec")]
    pub numeric: Vec<f64>,
}

fn kind_name<S: Serializer>(k: &FamilyKind, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(k.name())
}

fn entry_strings<S: Serializer>(
    entries: &[(ClosedValue, usize)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(entries.iter().map(|(v, m)| format!("{v} (×{m})")))
}

/// Exact spectrum of a named family.
///
/// `DoubleStarComplement` and `DoubleStarComplementPlus` take the common
/// star size `n >= 3` (the graph has `2n` vertices); `Path`, `Star` and
/// `Complete` take the vertex count `n >= 1`.
pub fn closed_spectrum(kind: FamilyKind, n: usize) -> Result<ClosedSpectrum> {
    let bad = |why: &str| Error::InvalidParameter(format!("closed spectrum of {kind}({n}): {why}"));
    let ni = n as i64;
    let half = |x: i64| Ratio::new(x, 2);
    let entries: Vec<(ClosedValue, usize)> = match kind {
        FamilyKind::DoubleStarComplement | FamilyKind::DoubleStarComplementPlus if n < 3 => {
            return Err(bad("needs n >= 3"))
        }
        FamilyKind::DoubleStarComplement => {
            let c1 = (4 * ni - 3) as u64;
            let c2 = (4 * ni * ni - 8 * ni + 5) as u64;
            vec![
                (ClosedValue::radical(half(2 * ni - 3), half(1), c2), 1),
                (ClosedValue::radical(half(-1), half(1), c1), 1),
                (ClosedValue::radical(half(2 * ni - 3), half(-1), c2), 1),
                (ClosedValue::int(-1), 2 * n - 4),
                (ClosedValue::radical(half(-1), half(-1), c1), 1),
            ]
        }
        FamilyKind::DoubleStarComplementPlus => {
            let c1 = (ni * ni - 3 * ni + 3) as u64;
            let c2 = (ni - 1) as u64;
            let one = Ratio::int(1);
            let minus = Ratio::int(-1);
            vec![
                (ClosedValue::radical(Ratio::int(ni - 1), one, c1), 1),
                (ClosedValue::radical(minus, one, c2), 1),
                (ClosedValue::radical(Ratio::int(ni - 1), minus, c1), 1),
                (ClosedValue::int(-1), 2 * n - 4),
                (ClosedValue::radical(minus, minus, c2), 1),
            ]
        }
        _ if n == 0 => return Err(bad("needs n >= 1")),
        FamilyKind::Path => (1..=n)
            .map(|k| (ClosedValue::TwoCos { k, m: n + 1 }, 1))
            .collect(),
        FamilyKind::Star if n == 1 => vec![(ClosedValue::int(0), 1)],
        FamilyKind::Star => {
            let c = (n - 1) as u64;
            let mut v = vec![(ClosedValue::radical(Ratio::int(0), Ratio::int(1), c), 1)];
            if n > 2 {
                v.push((ClosedValue::int(0), n - 2));
            }
            v.push((ClosedValue::radical(Ratio::int(0), Ratio::int(-1), c), 1));
            v
        }
        FamilyKind::Complete if n == 1 => vec![(ClosedValue::int(0), 1)],
        FamilyKind::Complete => vec![(ClosedValue::int(ni - 1), 1), (ClosedValue::int(-1), n - 1)],
        _ => return Err(bad("no closed form for this family")),
    };
    let mut numeric: Vec<f64> = entries
        .iter()
        .flat_map(|(v, m)| std::iter::repeat_n(v.value(), *m))
        .collect();
    numeric.sort_by(|a, b| b.total_cmp(a));
    Ok(ClosedSpectrum {
        kind,
        n,
        order: numeric.len(),
        entries,
        numeric,
    })
}

/// `E_p^+` of the path on `n` vertices: the sum of `(2 cos(k pi/(n+1)))^p`
/// over `k <= (n+1)/2`.
pub fn path_positive_energy(n: usize, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok((1..=n.div_ceil(2))
        .map(|k| abs_pow(ClosedValue::TwoCos { k, m: n + 1 }.value(), p))
        .collect::<CompensatedSum>()
        .value())
}

/// A verified equitable partition and its divisor matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquitablePartition {
    pub cells: Vec<Vec<usize>>,
    /// `b[i][j]`: neighbors every vertex of cell `i` has in cell `j`.
    pub b: Vec<Vec<usize>>,
}

/// Checks that `cells` is an equitable partition of `g` and computes its divisor matrix.
pub fn verify_equitable(g: &Graph, cells: &[Vec<usize>]) -> Result<EquitablePartition> {
    let n = g.n();
    let mut cell_of = vec![usize::MAX; n];
    for (i, cell) in cells.iter().enumerate() {
        if cell.is_empty() {
            return Err(Error::PartitionMismatch(format!("cell {i} is empty")));
        }
        for &v in cell {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if cell_of[v] != usize::MAX {
                return Err(Error::PartitionMismatch(format!("vertex {v} in two cells")));
            }
            cell_of[v] = i;
        }
    }
    if let Some(v) = cell_of.iter().position(|&c| c == usize::MAX) {
        return Err(Error::PartitionMismatch(format!("vertex {v} not covered")));
    }
    let k = cells.len();
    let counts = |v: usize| {
        let mut row = vec![0usize; k];
        for w in g.neighbors(v) {
            row[cell_of[w]] += 1;
        }
        row
    };
    let mut b = Vec::with_capacity(k);
    for cell in cells {
        let first = counts(cell[0]);
        for &v in &cell[1..] {
            let row = counts(v);
            if let Some(j) = (0..k).find(|&j| row[j] != first[j]) {
                return Err(Error::NotEquitable { vertex: v, cell: j });
            }
        }
        b.push(first);
    }
    Ok(EquitablePartition {
        cells: cells.to_vec(),
        b,
    })
}

/// Largest imaginary part tolerated in a divisor-matrix eigenvalue.
pub const DIVISOR_IMAGINARY_TOLERANCE: f64 = 1e-7;
/// Distance within which a divisor eigenvalue must match a graph eigenvalue.
pub const DIVISOR_MATCH_TOLERANCE: f64 = 1e-7;

/// Eigenvalues of the (generally non-symmetric) divisor matrix, descending.
pub fn divisor_eigenvalues(part: &EquitablePartition) -> Result<Vec<f64>> {
    let k = part.b.len();
    let m = DMatrix::from_fn(k, k, |i, j| part.b[i][j] as f64);
    let mut out = Vec::with_capacity(k);
    for z in m.complex_eigenvalues().iter() {
        if z.im.abs() > DIVISOR_IMAGINARY_TOLERANCE {
            return Err(Error::ComplexEigenvalue(z.im));
        }
        out.push(z.re);
    }
    out.sort_by(|a, b| b.total_cmp(a));
    Ok(out)
}

/// Whether every divisor-matrix eigenvalue occurs in the spectrum of `g`.
pub fn divisor_eigencheck(g: &Graph, part: &EquitablePartition) -> Result<bool> {
    let fresh = verify_equitable(g, &part.cells)?;
    if fresh.b != part.b {
        return Err(Error::PartitionMismatch(
            "divisor matrix does not match the graph".into(),
        ));
    }
    let spectrum = eigenvalues(g)?;
    Ok(divisor_eigenvalues(part)?.iter().all(|x| {
        spectrum
            .values()
            .iter()
            .any(|y| (x - y).abs() <= DIVISOR_MATCH_TOLERANCE)
    }))
}

/// The standard four-cell partition `{v1}, {v2}, leaves of v1, leaves of v2`
/// of a double-star complement on `n1 + n2` vertices.
pub fn double_star_cells(n1: usize, n2: usize) -> Vec<Vec<usize>> {
    vec![
        vec![0],
        vec![1],
        (2..n1 + 1).collect(),
        (n1 + 1..n1 + n2).collect(),
    ]
}

/// One evaluation of the gap function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapReport {
    pub n: usize,
    #[serde(with = "decimal")]
    pub p: f64,
    #[serde(with = "decimal")]
    pub f: f64,
    #[serde(with = "decimal")]
    pub lambda1: f64,
    #[serde(with = "decimal")]
    pub lambda2: f64,
    #[serde(with = "decimal")]
    pub theta1: f64,
    #[serde(with = "decimal")]
    pub theta2: f64,
    #[serde(with = "decimal")]
    pub theta3: f64,
}

impl GapReport {
    pub const CSV_HEADER: &'static str = "n,p,f,lambda1,lambda2,theta1,theta2,theta3";

    pub fn csv_row(&self) -> String {
        use crate::numeric::sig12;
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            sig12(self.p),
            sig12(self.f),
            sig12(self.lambda1),
            sig12(self.lambda2),
            sig12(self.theta1),
            sig12(self.theta2),
            sig12(self.theta3)
        )
    }

    /// `f` recomputed by plain summation of the recorded terms.
    pub fn naive_f(&self) -> f64 {
        let p = self.p;
        abs_pow(self.lambda1, p) + abs_pow(self.lambda2, p)
            - abs_pow(self.theta1, p)
            - abs_pow(self.theta2, p)
            - abs_pow(self.theta3, p)
    }
}

/// Largest family parameter accepted by [`gap_f`]; keeps the exact
/// integer step inside `i128`.
pub const MAX_GAP_N: usize = 10_000_000;

/// `a^p - b^p` for positive `a = b + d`, without forming either power's
/// leading digits twice.
fn power_difference(b: f64, d: f64, p: f64) -> f64 {
    abs_pow(b, p) * (p * (d / b).ln_1p()).exp_m1()
}

/// The gap `f(n)` evaluated from the closed-form eigenvalues.
///
/// `lambda_2 - theta_2` is a difference of two `~2n` quantities and is
/// recovered by rationalizing twice with an exact integer step;
/// `lambda_2^p - theta_2^p` is then formed as `theta_2^p * expm1(...)`.
pub fn gap_f(n: usize, p: f64) -> Result<GapReport> {
    if !(3..=MAX_GAP_N).contains(&n) {
        return Err(Error::InvalidParameter(format!(
            "gap needs 3 <= n <= {MAX_GAP_N}, got {n}"
        )));
    }
    check_exponent(p)?;
    if p < 1.0 {
        return Err(Error::InvalidParameter(format!("gap needs p >= 1, got {p}")));
    }
    let ni = n as i128;
    let nf = n as f64;
    let a = 4 * ni * ni - 8 * ni + 5;
    let b = ni * ni - 3 * ni + 3;
    let q = 8 * ni * ni - 36 * ni + 32;
    let sa = (a as f64).sqrt();
    let sb = (b as f64).sqrt();

    let lambda1 = (-1.0 + (4.0 * nf - 3.0).sqrt()) / 2.0;
    let lambda2 = (2.0 * nf - 3.0 + sa) / 2.0;
    let theta1 = -1.0 + (nf - 1.0).sqrt();
    let theta2 = nf - 1.0 + sb;
    let theta3 = (nf - 2.0) / (nf - 1.0 + sb);

    // lambda2 - theta2 = ((4n-7) - s) / (2s) with s = sa + 2 sb;
    // (4n-7)^2 - s^2 = q - 4 sa sb = (q^2 - 16ab) / (q + 4 sa sb).
    let s = sa + 2.0 * sb;
    let exact = (q * q - 16 * a * b) as f64;
    let diff_sq = exact / (q as f64 + 4.0 * sa * sb);
    let numerator = diff_sq / ((4.0 * nf - 7.0) + s);
    let d2 = numerator / (2.0 * s);

    // lambda1 - theta1 = 1/2 + sqrt(n - 3/4) - sqrt(n - 1)
    let d1 = 0.5 + 0.25 / ((nf - 0.75).sqrt() + (nf - 1.0).sqrt());

    let mut acc = CompensatedSum::new();
    acc.add(power_difference(theta2, d2, p));
    acc.add(power_difference(theta1, d1, p));
    acc.add(-abs_pow(theta3, p));
    Ok(GapReport {
        n,
        p,
        f: acc.value(),
        lambda1,
        lambda2,
        theta1,
        theta2,
        theta3,
    })
}

/// Result of the sign sweep over `3..=n_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapThreshold {
    #[serde(with = "decimal")]
    pub p: f64,
    pub n_max: usize,
    pub n0: Option<usize>,
    /// `(n, sign of f(n))` for every swept `n`.
    pub trace: Vec<(usize, i8)>,
    #[serde(skip)]
    pub reports: Vec<GapReport>,
}

/// Relative size `f(n) / (2n)^p` a threshold value must exceed.
pub const GAP_SIGNAL_FLOOR: f64 = 1e-12;

/// Smallest `n0 <= n_max` with `f(n0) > 1e-12 (2 n0)^p` and `f(m) > 0` for
/// every `m` in `n0..=n_max`.
pub fn gap_threshold(p: f64, n_max: usize) -> Result<GapThreshold> {
    if n_max < 3 {
        return Err(Error::InvalidParameter(format!("n_max must be at least 3, got {n_max}")));
    }
    let reports: Vec<GapReport> = (3..=n_max)
        .into_par_iter()
        .map(|n| gap_f(n, p))
        .collect::<Result<_>>()?;
    let trace: Vec<(usize, i8)> = reports
        .iter()
        .map(|r| (r.n, if r.f > 0.0 { 1 } else if r.f < 0.0 { -1 } else { 0 }))
        .collect();
    let stable_from = reports
        .iter()
        .rposition(|r| r.f <= 0.0)
        .map_or(0, |i| i + 1);
    let n0 = reports[stable_from..]
        .iter()
        .find(|r| r.f > GAP_SIGNAL_FLOOR * abs_pow(2.0 * r.n as f64, p))
        .map(|r| r.n);
    Ok(GapThreshold {
        p,
        n_max,
        n0,
        trace,
        reports,
    })
}
