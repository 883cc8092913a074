//! State-simulation backends and Pauli noise.

pub mod circuit;
pub mod dense;
pub mod density;
pub mod noise;
pub mod sparse;
pub mod tableau;

pub use circuit::{Circuit, Gate, Layer, MeasBasis};
pub use dense::DenseState;
pub use density::DensityMatrix;
pub use noise::{
    bitflip_inject, classify_pair, gadgetize, sample_meas_error, sample_pauli_errors, GateClass,
    NoiseModel, Pauli, PauliDist, PauliInsertion, TwoQubitNoise,
};
pub use sparse::{parity_amplitude_distribution, sample_parity_amplitude, SparseState};
pub use tableau::StabilizerTableau;

use rand::Rng;
use thiserror::Error;

use crate::eqcore::BitString;

#[derive(Debug, Error, PartialEq)]
pub enum QsimError {
    #[error("qubit index {qubit} out of range for n = {n}")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("layer {layer} has overlapping gate supports")]
    OverlappingSupports { layer: usize },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("state norm {norm} outside tolerance")]
    NotNormalized { norm: f64 },
    #[error("amplitude count {len} is not a power of two")]
    BadAmplitudeCount { len: usize },
    #[error("duplicate basis component in sparse state")]
    DuplicateComponent,
    #[error("probabilities invalid (negative or not summing to one)")]
    BadDistribution,
    #[error("n = {n} exceeds backend cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("invalid tableau: {0}")]
    InvalidTableau(&'static str),
    #[error("operation unsupported on this backend: {0}")]
    BackendUnsupported(&'static str),
}

/// Tagged union over the simulation backends.
#[derive(Clone, Debug)]
pub enum QuantumState {
    Dense(DenseState),
    Sparse(SparseState),
    Tableau(StabilizerTableau),
}

impl QuantumState {
    pub fn n(&self) -> usize {
        match self {
            QuantumState::Dense(s) => s.n(),
            QuantumState::Sparse(s) => s.n(),
            QuantumState::Tableau(t) => t.n(),
        }
    }

    /// Full Z-basis measurement sample.
    pub fn measure_z_all<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        match self {
            QuantumState::Dense(s) => s.measure_z_all(rng),
            QuantumState::Sparse(s) => s.measure_z_all(rng),
            QuantumState::Tableau(t) => t.clone().measure_z_all(rng),
        }
    }

    /// Dense amplitude vector (tableau states go through circuit synthesis,
    /// so their global phase is arbitrary).
    pub fn to_dense(&self, cap: usize) -> Result<DenseState, QsimError> {
        if self.n() > cap {
            return Err(QsimError::CapExceeded { n: self.n(), cap });
        }
        match self {
            QuantumState::Dense(s) => Ok(s.clone()),
            QuantumState::Sparse(s) => DenseState::from_amplitudes(s.to_dense()),
            QuantumState::Tableau(t) => {
                let mut d = DenseState::zero_state(t.n());
                d.apply_circuit(&t.to_circuit())?;
                Ok(d)
            }
        }
    }

    /// Per-qubit Pauli application across backends.
    pub fn apply_pauli(&mut self, q: usize, p: Pauli) {
        match self {
            QuantumState::Dense(s) => s.apply_pauli(q, p),
            QuantumState::Sparse(s) => s.apply_pauli(q, p),
            QuantumState::Tableau(t) => t.apply_pauli(q, p),
        }
    }
}
