//! Partial Steiner systems with popularity-rank point labelings: constructions,
//! block-sum metrics and their bounds, independent sets, labeling searches and
//! a rank-weighted storage load model.

pub mod constructions;
pub mod design;
pub mod error;
pub mod independence;
pub mod io;
pub mod metrics;
pub mod numtheory;
pub mod rational;
pub mod search;
pub mod storage;

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use design::{validate, Design, Labeling, PackingStatus};
pub use error::{Error, Result};
pub use independence::IndependentPair;
pub use metrics::{metric_report, BoundSheet, MetricReport};
pub use numtheory::FactorSplit;
pub use rational::Rational;
pub use search::Optimality;
pub use storage::{AccessProfile, LoadReport};
