//! The tomography protocol: outcome sampling, estimators, median-of-means
//! aggregation, variance bounds and the randomized-Clifford baseline.

pub mod bounds;
pub mod clifford;
pub mod estimator;
pub mod noise_tol;
pub mod observable;
pub mod protocol;
pub mod sample;

pub use bounds::{copy_bound, variance_bound};
pub use clifford::{
    clifford_baseline_noisy, clifford_baseline_sample, invert_circuit, random_clifford_tableau,
};
pub use estimator::{estimator_single, ghz_estimator, graph_estimator, w_estimator};
pub use noise_tol::bitflip_tolerance;
pub use observable::Observable;
pub use protocol::{
    collect_shadow_sample, lower_median, run_protocol, EstimateReport, EstimationConfig,
    ProtocolInput, ShadowSample,
};
pub use sample::{
    apply_prep_noise, exact_label_distribution, label_tableau, measure_label_basis,
    sample_espovm_outcome, sample_espovm_outcome_noisy,
};

// the noise gadget transform lives with the noise model
pub use crate::qsim::gadgetize;

use thiserror::Error;

use crate::eqcore::EqError;
use crate::qsim::QsimError;
use crate::synth::SynthError;

#[derive(Debug, Error, PartialEq)]
pub enum ShadowError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("estimator scheme does not match the label scheme")]
    SchemeMismatch,
    #[error("the real scheme requires a real observable")]
    ObservableNotReal,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("unsupported backend: {0}")]
    BackendUnsupported(&'static str),
    #[error(transparent)]
    Core(#[from] EqError),
    #[error(transparent)]
    Backend(#[from] QsimError),
    #[error(transparent)]
    Synth(#[from] SynthError),
}
