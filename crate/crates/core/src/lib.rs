//! Local causal discovery around a target variable.
//!
//! The crate learns the local essential graph of a target from conditional
//! independence tests, grows it hop by hop, and decides whether the
//! controlled direct effect of a treatment on the target is identifiable.

pub mod bench;
pub mod ci;
pub mod datagen;
pub mod discovery;
pub mod error;
pub mod graph;
pub mod local;

pub use ci::{oracle_ci, CiSource, CiVerdict, Counted, Dataset, FisherZ, GSquare, SepsetCache};
pub use discovery::{ci_test_bound, loc_pc, loc_pc_cde, pc, BackgroundKnowledge, CdeReport, StopReason};
pub use graph::{Dag, EdgeMark, Leg, Link, NodeId, Pdag};
