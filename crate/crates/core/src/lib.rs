//! Exact Λ-packing (vertex-disjoint 3-vertex paths) for small graphs.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`], [`connectivity`], [`planarity`], [`io`]: immutable graphs,
//!   structural checks with verifiable witnesses, JSON and DOT formats;
//! * [`constructions`]: composition operators, the named-graph atlas and the
//!   construction script language;
//! * [`packing`]: exact branch-and-bound solver for constrained packing and
//!   factor problems, a naive oracle, and related analyses;
//! * [`certifier`]: replayable certificates that composite graphs have no
//!   Λ-factor, combining exhaustive base checks with composition rules.

pub mod certifier;
pub mod connectivity;
pub mod constructions;
pub mod error;
pub mod graph;
pub mod io;
pub mod packing;
pub mod par;
pub mod planarity;

pub use error::{Error, Result};
pub use graph::{CutReport, DegreeProfile, Edge, Graph};
