//! Numerical laboratory for upper bounds on `L^q` empirical processes
//! indexed by classes of linear functionals under sub-Gaussian ensembles.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod applications;
pub mod bounds;
pub mod chaining;
pub mod ensembles;
pub mod error;
pub mod index_sets;
pub mod process;
pub mod rng;
pub mod stats;

pub use applications::{RipCertificate, RipQuery, SectionEstimate, Verdict};
pub use bounds::{BoundInputs, BoundReport, RhsForm, ScalingFit};
pub use chaining::{AdmissibleSequence, ChainDiagnostics, ChainingEstimate};
pub use ensembles::{EnsembleSpec, Estimate, Family, SampleBatch};
pub use error::{LabError, Result};
pub use index_sets::{IndexSet, Net, SetKind};
pub use process::{ProcessConfig, SupEstimate, TrialSummary};
