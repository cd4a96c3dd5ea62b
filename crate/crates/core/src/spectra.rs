//! Adjacency spectra, positive/negative p-energies, and the interlacing and
//! majorization predicates.
//!
//! Eigenvalues are classified as positive, zero, or negative against a
//! tolerance `tol = 1e-8 * max(1, radius)`. Anything classified zero
//! contributes nothing to any energy.

use serde::Serialize;

use crate::eigen::symmetric_eigenvalues;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::numeric::{self, abs_pow, decimal, CompensatedSum};

/// Relative sign-classification tolerance.
pub const SIGN_TOLERANCE: f64 = 1e-8;
/// Cluster radius for multiplicity queries.
pub const CLUSTER_RADIUS: f64 = 1e-6;
/// Largest accepted energy exponent.
pub const MAX_EXPONENT: f64 = 64.0;
/// Relative tolerance for prefix-sum comparisons in majorization.
pub const MAJORIZATION_TOLERANCE: f64 = 1e-9;

/// Eigenvalues sorted in non-increasing order. Serialized values within
/// the sign tolerance of zero are written as exactly `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
    radius: f64,
    tol: f64,
}

impl Serialize for Spectrum {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Shown {
            #[serde(with = "decimal::vec")]
            values: Vec<f64>,
            #[serde(with = "decimal")]
            radius: f64,
            #[serde(with = "decimal")]
            tol: f64,
        }
        Shown {
            values: self.shown_values(),
            radius: self.radius,
            tol: self.tol,
        }
        .serialize(serializer)
    }
}

impl Spectrum {
    /// Sorts `values` descending and derives the radius and tolerance.
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        let radius = values.iter().fold(0.0f64, |r, x| r.max(x.abs()));
        Spectrum {
            values,
            radius,
            tol: SIGN_TOLERANCE * radius.max(1.0),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `x`, or `0` when it is classified zero.
    pub fn shown(&self, x: f64) -> f64 {
        if x.abs() <= self.tol {
            0.0
        } else {
            x
        }
    }

    /// The eigenvalues with zero-classified entries replaced by `0`.
    pub fn shown_values(&self) -> Vec<f64> {
        self.values.iter().map(|&x| self.shown(x)).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest eigenvalue magnitude.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// The `i`-th largest eigenvalue, 1-based.
    pub fn lambda(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    pub fn sign_partition(&self) -> SignPartition {
        sign_partition(self)
    }

    pub fn positive_count(&self) -> usize {
        self.values.iter().filter(|&&x| x > self.tol).count()
    }

    pub fn negative_count(&self) -> usize {
        self.values.iter().filter(|&&x| x < -self.tol).count()
    }

    /// Number of eigenvalues within [`CLUSTER_RADIUS`] of `value`.
    pub fn multiplicity(&self, value: f64) -> usize {
        self.values
            .iter()
            .filter(|x| (**x - value).abs() <= CLUSTER_RADIUS)
            .count()
    }

    /// Groups of consecutive eigenvalues closer than [`CLUSTER_RADIUS`],
    /// as `(mean, count)`.
    pub fn clusters(&self) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize, f64)> = Vec::new();
        for &x in &self.values {
            match out.last_mut() {
                Some((sum, count, last)) if (*last - x).abs() <= CLUSTER_RADIUS => {
                    *sum += x;
                    *count += 1;
                    *last = x;
                }
                _ => out.push((x, 1, x)),
            }
        }
        out.into_iter()
            .map(|(sum, count, _)| (sum / count as f64, count))
            .collect()
    }
}

/// All adjacency eigenvalues of `g`, sorted descending.
pub fn eigenvalues(g: &Graph) -> Result<Spectrum> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut a = g.adjacency_matrix();
    Ok(Spectrum::from_values(symmetric_eigenvalues(&mut a, g.n())?))
}

/// Eigenvalues split by sign; concatenating the three lists gives back the spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SignPartition {
    pub positives: Vec<f64>,
    pub zeros: Vec<f64>,
    pub negatives: Vec<f64>,
}

pub fn sign_partition(s: &Spectrum) -> SignPartition {
    let mut part = SignPartition {
        positives: Vec::new(),
        zeros: Vec::new(),
        negatives: Vec::new(),
    };
    for &x in &s.values {
        if x > s.tol {
            part.positives.push(x);
        } else if x < -s.tol {
            part.negatives.push(x);
        } else {
            part.zeros.push(x);
        }
    }
    part
}

/// Positive, negative and total p-energy of one spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyReport {
    #[serde(with = "decimal")]
    pub p: f64,
    #[serde(with = "decimal")]
    pub e_plus: f64,
    #[serde(with = "decimal")]
    pub e_minus: f64,
    #[serde(with = "decimal")]
    pub e_total: f64,
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
    /// Set when `0 < p < 1`, where the Schatten quantity is not a norm.
    pub below_one: bool,
}

impl EnergyReport {
    /// `e_total^(1/p)`, the Schatten p-norm of the adjacency matrix.
    pub fn schatten_norm(&self) -> f64 {
        self.e_total.powf(1.0 / self.p)
    }
}

pub(crate) fn check_exponent(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= MAX_EXPONENT) {
        return Err(Error::InvalidParameter(format!(
            "exponent {p} outside (0, {MAX_EXPONENT}]"
        )));
    }
    Ok(())
}

pub fn p_energy(s: &Spectrum, p: f64) -> Result<EnergyReport> {
    check_exponent(p)?;
    let part = s.sign_partition();
    let e_plus = numeric::sum(part.positives.iter().map(|&x| abs_pow(x, p)));
    let e_minus = numeric::sum(part.negatives.iter().map(|&x| abs_pow(x, p)));
    Ok(EnergyReport {
        p,
        e_plus,
        e_minus,
        e_total: e_plus + e_minus,
        positive: part.positives.len(),
        zero: part.zeros.len(),
        negative: part.negatives.len(),
        below_one: p < 1.0,
    })
}

/// Positive p-energy alone.
pub fn positive_energy(s: &Spectrum, p: f64) -> Result<f64> {
    Ok(p_energy(s, p)?.e_plus)
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Prefix-sum comparison; returns (all prefixes dominate, totals equal).
fn prefix_compare(y: &[f64], x: &[f64]) -> Result<(bool, bool)> {
    if y.len() != x.len() {
        return Err(Error::LengthMismatch {
            left: y.len(),
            right: x.len(),
        });
    }
    let scale = y.iter().chain(x).fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = MAJORIZATION_TOLERANCE * (1.0 + scale);
    let (y, x) = (sorted_desc(y), sorted_desc(x));
    let mut sy = CompensatedSum::new();
    let mut sx = CompensatedSum::new();
    let mut dominated = true;
    for (a, b) in y.iter().zip(&x) {
        sy.add(*a);
        sx.add(*b);
        if sy.value() < sx.value() - tol {
            dominated = false;
        }
    }
    Ok((dominated, (sy.value() - sx.value()).abs() <= tol))
}

/// Whether every prefix sum of `y` sorted descending dominates that of `x`.
pub fn weakly_majorizes(y: &[f64], x: &[f64]) -> Result<bool> {
    Ok(prefix_compare(y, x)?.0)
}

/// Weak majorization with equal totals.
pub fn majorizes(y: &[f64], x: &[f64]) -> Result<bool> {
    let (dominated, equal) = prefix_compare(y, x)?;
    Ok(dominated && equal)
}

/// Checks `lambda_{i-1} >= theta_i >= lambda_{i+1}` for `1 < i < n`, plus
/// `theta_1 >= lambda_2` and `theta_n <= lambda_{n-1}`, where `theta` is the
/// spectrum of `g - e`.
pub fn check_edge_interlacing(g: &Graph, e: Edge) -> Result<bool> {
    if g.n() < 3 {
        return Err(Error::InvalidParameter(
            "edge interlacing needs at least 3 vertices".into(),
        ));
    }
    let h = g.remove_edge(e)?;
    let lam = eigenvalues(g)?;
    let theta = eigenvalues(&h)?;
    Ok(edge_interlaces(&lam, &theta))
}

pub(crate) fn edge_interlaces(lam: &Spectrum, theta: &Spectrum) -> bool {
    let n = lam.len();
    let tol = lam.tol().max(theta.tol());
    let (l, t) = (lam.values(), theta.values());
    // zero-based: l[i-2] >= t[i-1] >= l[i] for i = 2..n-1
    let middle = (1..n - 1).all(|i| l[i - 1] >= t[i] - tol && t[i] >= l[i + 1] - tol);
    middle && t[0] >= l[1] - tol && t[n - 1] <= l[n - 2] + tol
}

/// Checks `lambda_i >= theta_i >= lambda_{i+1}` for the spectrum `theta` of `g - v`.
pub fn check_vertex_interlacing(g: &Graph, v: usize) -> Result<bool> {
    if g.n() < 2 {
        return Err(Error::InvalidParameter(
            "vertex interlacing needs at least 2 vertices".into(),
        ));
    }
    let h = g.remove_vertex(v)?;
    let lam = eigenvalues(g)?;
    let theta = eigenvalues(&h)?;
    Ok(vertex_interlaces(&lam, &theta))
}

pub(crate) fn vertex_interlaces(lam: &Spectrum, theta: &Spectrum) -> bool {
    let tol = lam.tol().max(theta.tol());
    let (l, t) = (lam.values(), theta.values());
    (0..t.len()).all(|i| l[i] >= t[i] - tol && t[i] >= l[i + 1] - tol)
}
