//! Lower bounds on `E_p^+(G)` and `E_p^-(G)` in terms of `H = G - e`.
//!
//! With `theta_1 >= ... >= theta_n` the spectrum of `H`, and `H` having at
//! least two positive and two negative eigenvalues:
//!
//! ```text
//! E_p^+(G) >= E_p^+(H) + max(theta_2 - 1, 0)^p - theta_2^p
//! E_p^-(G) >= E_p^-(H) + max(-theta_n - 1, 0)^p - |theta_n|^p
//! ```
//!
//! The `p = 2` specialization is exposed separately in its piecewise form,
//! alongside the older second-order bound `s^+(H) - theta_2^2`
//! (resp. `s^-(H) - theta_n^2`) for comparison. When the two-and-two
//! hypothesis fails the check carries no bound and no verdict.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::graph6::encode_graph6;
use crate::numeric::{abs_pow, decimal};
use crate::spectra::{check_exponent, eigenvalues, p_energy, Spectrum};

/// Relative slack below which a bound counts as violated.
pub const SLACK_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Side::Plus),
            "minus" | "-" => Ok(Side::Minus),
            _ => Err(Error::InvalidParameter(format!("unknown side {s:?}"))),
        }
    }
}

/// Which formula produced a [`BoundCheck`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// General exponent, `max(theta - 1, 0)^p - theta^p` correction.
    Theorem,
    /// Piecewise `p = 2` form.
    Square,
    /// Second-order `p = 2` bound without the `max` term.
    Abiad,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

/// One instance of an edge-removal bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub graph6: String,
    #[serde(serialize_with = "edge_str")]
    pub edge: Edge,
    #[serde(with = "decimal")]
    pub p: f64,
    pub side: Side,
    pub kind: BoundKind,
    /// `None` when the preconditions fail.
    #[serde(with = "decimal::option")]
    pub bound: Option<f64>,
    #[serde(with = "decimal")]
    pub actual: f64,
    #[serde(with = "decimal::option")]
    pub slack: Option<f64>,
    pub preconditions_met: bool,
    /// `theta_2` on the plus side, `theta_n` on the minus side.
    #[serde(with = "decimal")]
    pub theta: f64,
    pub h_positive: usize,
    pub h_negative: usize,
}

fn edge_str<S: serde::Serializer>(e: &Edge, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

impl BoundCheck {
    pub fn verdict(&self) -> Verdict {
        match self.slack {
            None => Verdict::NotApplicable,
            Some(slack) if slack >= -SLACK_TOLERANCE * (1.0 + self.actual.abs()) => Verdict::Pass,
            Some(_) => Verdict::Fail,
        }
    }

    pub const CSV_HEADER: &'static str =
        "graph6,edge,p,side,kind,bound,actual,slack,preconditions_met";

    pub fn csv_row(&self) -> String {
        use crate::numeric::sig12;
        let opt = |x: Option<f64>| x.map(sig12).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.graph6,
            self.edge,
            sig12(self.p),
            self.side,
            match self.kind {
                BoundKind::Theorem => "theorem",
                BoundKind::Square => "square",
                BoundKind::Abiad => "abiad",
            },
            opt(self.bound),
            sig12(self.actual),
            opt(self.slack),
            self.preconditions_met
        )
    }
}

/// Fresh spectra of `G` and `H = G - e`.
struct Removal {
    graph6: String,
    g: Spectrum,
    h: Spectrum,
}

impl Removal {
    fn new(g: &Graph, e: Edge) -> Result<Self> {
        let h = g.remove_edge(e)?;
        Ok(Removal {
            graph6: encode_graph6(g),
            g: eigenvalues(g)?,
            h: eigenvalues(&h)?,
        })
    }

    fn preconditions_met(&self) -> bool {
        self.h.positive_count() >= 2 && self.h.negative_count() >= 2
    }

    fn theta(&self, side: Side) -> f64 {
        match side {
            Side::Plus => self.h.lambda(2),
            Side::Minus => self.h.lambda(self.h.len()),
        }
    }

    fn energy(s: &Spectrum, p: f64, side: Side) -> Result<f64> {
        let r = p_energy(s, p)?;
        Ok(match side {
            Side::Plus => r.e_plus,
            Side::Minus => r.e_minus,
        })
    }

    fn check(
        &self,
        e: Edge,
        p: f64,
        side: Side,
        kind: BoundKind,
        correction: impl Fn(f64) -> f64,
    ) -> Result<BoundCheck> {
        let actual = Self::energy(&self.g, p, side)?;
        let theta = self.theta(side);
        let met = self.preconditions_met();
        let bound = if met {
            Some(Self::energy(&self.h, p, side)? + correction(theta))
        } else {
            None
        };
        Ok(BoundCheck {
            graph6: self.graph6.clone(),
            edge: e,
            p,
            side,
            kind,
            bound,
            actual,
            slack: bound.map(|b| actual - b),
            preconditions_met: met,
            theta,
            h_positive: self.h.positive_count(),
            h_negative: self.h.negative_count(),
        })
    }
}

fn check_bound_exponent(p: f64) -> Result<()> {
    check_exponent(p)?;
    if p < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "edge bounds need p >= 1, got {p}"
        )));
    }
    Ok(())
}

/// General-exponent bound for one edge and side.
pub fn edge_bound_p(g: &Graph, e: Edge, p: f64, side: Side) -> Result<BoundCheck> {
    check_bound_exponent(p)?;
    Removal::new(g, e)?.check(e, p, side, BoundKind::Theorem, |theta| match side {
        Side::Plus => abs_pow((theta - 1.0).max(0.0), p) - abs_pow(theta, p),
        Side::Minus => abs_pow((-theta - 1.0).max(0.0), p) - abs_pow(theta, p),
    })
}

/// Piecewise `p = 2` bound.
pub fn edge_bound_square(g: &Graph, e: Edge, side: Side) -> Result<BoundCheck> {
    Removal::new(g, e)?.check(e, 2.0, side, BoundKind::Square, |theta| match side {
        Side::Plus if theta < 1.0 => -theta * theta,
        Side::Plus => 1.0 - 2.0 * theta,
        Side::Minus if theta > -1.0 => -theta * theta,
        Side::Minus => 2.0 * theta + 1.0,
    })
}

/// Second-order `p = 2` bound, `s^±(H) - theta^2`.
pub fn abiad_bound_square(g: &Graph, e: Edge, side: Side) -> Result<BoundCheck> {
    Removal::new(g, e)?.check(e, 2.0, side, BoundKind::Abiad, |theta| -theta * theta)
}

/// `min(s^+, s^-) - (n - 1)` for a connected graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HongCheck {
    #[serde(with = "decimal")]
    pub s_plus: f64,
    #[serde(with = "decimal")]
    pub s_minus: f64,
    #[serde(with = "decimal")]
    pub margin: f64,
}

impl HongCheck {
    pub fn holds(&self) -> bool {
        self.margin >= -SLACK_TOLERANCE
    }
}

pub fn hong_extension_check(g: &Graph) -> Result<HongCheck> {
    if !g.is_connected()? {
        return Err(Error::Disconnected);
    }
    let r = p_energy(&eigenvalues(g)?, 2.0)?;
    Ok(HongCheck {
        s_plus: r.e_plus,
        s_minus: r.e_minus,
        margin: r.e_plus.min(r.e_minus) - (g.n() as f64 - 1.0),
    })
}

/// General-exponent checks for every edge of every graph, both sides and
/// every `p`, ordered by graph6, edge, `p`, side.
pub fn sweep_edge_bounds(graphs: &[Graph], exponents: &[f64]) -> Result<Vec<BoundCheck>> {
    for &p in exponents {
        check_bound_exponent(p)?;
    }
    let pairs: Vec<(&Graph, Edge)> = graphs
        .iter()
        .flat_map(|g| g.edges().map(move |e| (g, e)))
        .collect();
    let mut rows: Vec<BoundCheck> = pairs
        .par_iter()
        .map(|&(g, e)| -> Result<Vec<BoundCheck>> {
            let mut out = Vec::with_capacity(exponents.len() * 2);
            for &p in exponents {
                for side in [Side::Plus, Side::Minus] {
                    out.push(edge_bound_p(g, e, p, side)?);
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    rows.sort_by(|a, b| {
        (&a.graph6, a.edge, a.side)
            .cmp(&(&b.graph6, b.edge, b.side))
            .then(a.p.total_cmp(&b.p))
    });
    Ok(rows)
}
