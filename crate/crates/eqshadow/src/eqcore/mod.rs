//! Exact mathematics of equatorial stabilizer states: labels, phases,
//! overlaps, moments, six-string predicates and frame operators.

mod bits;
mod frame;
mod gauss;
mod kset;
mod label;
mod moments;
mod overlap;

pub use bits::BitString;
pub use frame::{
    computational_elements, espovm_elements, frame_operator, ic_check, min_eigenvalue_hermitian,
    IC_EIG_TOL,
};
pub use gauss::{gauss_overlap_quadratic, graph_state_vector, QuadraticForm};
pub use kset::{k_set_contains, KVariant, SixTuple};
pub use label::{i_pow, label_count, label_count_log2, EquatorialLabel, Scheme};
pub use moments::{
    max_entry_diff, moment_closed_form, moment_exact, moment_third_c_combination, DenseOperator,
};
pub use overlap::{overlap_dense, overlap_sparse};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EqError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("label count 2^{exponent} does not fit the integer width")]
    CountOverflow { exponent: u64 },
    #[error("enumeration capped at n <= {max}, got n = {n}")]
    TooLarge { n: usize, max: usize },
    #[error("duplicate basis component in sparse state")]
    DuplicateComponent,
    #[error("adjacency must be a simple graph (symmetric, zero diagonal)")]
    NotAGraph,
    #[error("moment order {t} unsupported; only t = 1, 2, 3")]
    UnsupportedOrder { t: usize },
    #[error("malformed label string: {0}")]
    BadLabelString(String),
    #[error("POVM weights must be positive")]
    NonPositiveWeight,
}
