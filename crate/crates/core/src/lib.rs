//! Positive and negative p-energies of graphs.
//!
//! The crate computes adjacency spectra and the energies
//! `E_p^+(G) = sum over positive eigenvalues of lambda^p` and
//! `E_p^-(G) = sum over negative eigenvalues of |lambda|^p`, checks the
//! edge-removal lower bounds for these quantities, reproduces the
//! complement-of-double-star counterexamples to edge-addition monotonicity,
//! and scans every small connected graph for violations of the related
//! conjectures.

pub mod bounds;
pub mod canon;
pub mod eigen;
pub mod error;
pub mod families;
pub mod graph;
pub mod graph6;
pub mod numeric;
pub mod search;
pub mod spectra;

pub use error::{Error, Graph6Error, Result};
pub use graph::{make_family, Edge, FamilyKind, Graph, MAX_VERTICES};
pub use graph6::{decode_graph6, encode_graph6, stream_graph6, Graph6Reader, ReadMode};
pub use spectra::{eigenvalues, p_energy, EnergyReport, Spectrum};
pub use bounds::{edge_bound_p, edge_bound_square, hong_extension_check, BoundCheck, Side};
pub use canon::{canonical_code, canonical_form, isomorphic};
pub use families::{closed_spectrum, gap_f, gap_threshold, verify_equitable, ClosedSpectrum, GapReport};
pub use search::{
    enumerate_connected, enumerate_trees, even_energy_floor, tree_extremal, verify, verify_graphs,
    ConjectureKind, ConjectureSpec, VerificationReport,
};
