//! Measurement-circuit construction and depth-bounded synthesis.

pub mod coloring;
pub mod counts;
pub mod espovm;
pub mod lnn;

pub use coloring::{cz_layers_edge_coloring, edge_coloring};
pub use counts::{depth_and_counts, depth_comparison_table, CircuitCounts, DepthRow};
pub use espovm::espovm_measurement_circuit;
pub use lnn::{
    decompose_cz_phase, lnn_layers, lnn_patterns, lnn_synthesize, slot_schedule, LnnSchedule,
    ParityVar, PatternPair,
};

use thiserror::Error;

use crate::eqcore::EquatorialLabel;
use crate::qsim::QsimError;

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("not a simple graph: edge ({a}, {b}) invalid for n = {n}")]
    BadEdge { a: usize, b: usize, n: usize },
    #[error("pattern sequences are defined for odd n >= 3, got {n}")]
    PatternsOddOnly { n: usize },
    #[error("n = {n} too small for the neighbor construction")]
    TooSmall { n: usize },
    #[error("n = {n} exceeds the neighbor-synthesis cap {max}")]
    TooLargeForLnn { n: usize, max: usize },
    #[error("pair ({mu}, {nu}) invalid for n = {n}")]
    BadPair { mu: usize, nu: usize, n: usize },
    #[error("internal schedule invariant failed at n = {n}")]
    ScheduleBroken { n: usize },
    #[error("bias must be positive, got {bias}")]
    BadBias { bias: f64 },
    #[error(transparent)]
    Circuit(QsimError),
}

/// Simple graph on n vertices given by its edge set; the support of a
/// label's off-diagonal couplings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CzGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl CzGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self, SynthError> {
        let mut canon: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(SynthError::BadEdge { a, b, n });
            }
            let e = (a.min(b), a.max(b));
            if !canon.contains(&e) {
                canon.push(e);
            }
        }
        canon.sort_unstable();
        Ok(Self { n, edges: canon })
    }

    pub fn from_label(a: &EquatorialLabel) -> Self {
        Self {
            n: a.n(),
            edges: a.coupled_pairs(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * (self.n.saturating_sub(1)) / 2 && self.n > 1
    }

    /// Grid graph on rows x cols vertices, row-major vertex order.
    pub fn grid(rows: usize, cols: usize) -> Self {
        let n = rows * cols;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols));
                }
            }
        }
        Self { n, edges }
    }
}
