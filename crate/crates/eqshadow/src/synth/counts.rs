//! Depth and gate-count reports.

use serde::Serialize;

use crate::qsim::{Circuit, Gate};

use super::SynthError;

/// Depth and per-kind gate counts of a circuit.
///
/// `depth` counts every layer plus one for a terminal measurement;
/// `entangling_depth` counts only layers containing a two-qubit gate, which
/// is the quantity the depth bounds of the synthesis routines refer to
/// (single-qubit phase layers ride between the entangling layers).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircuitCounts {
    pub depth: usize,
    pub entangling_depth: usize,
    pub cz_count: usize,
    pub cnot_count: usize,
    pub nn_cnot_count: usize,
    pub single_qubit_count: usize,
}

pub fn depth_and_counts(circuit: &Circuit) -> CircuitCounts {
    let mut counts = CircuitCounts {
        depth: circuit.layers.len() + usize::from(circuit.has_measurement()),
        entangling_depth: 0,
        cz_count: 0,
        cnot_count: 0,
        nn_cnot_count: 0,
        single_qubit_count: 0,
    };
    for layer in &circuit.layers {
        if layer.iter().any(Gate::is_two_qubit) {
            counts.entangling_depth += 1;
        }
        for g in layer {
            match g {
                Gate::Cz(..) => counts.cz_count += 1,
                Gate::Cnot(c, t) => {
                    counts.cnot_count += 1;
                    if c.abs_diff(*t) == 1 {
                        counts.nn_cnot_count += 1;
                    }
                }
                _ => counts.single_qubit_count += 1,
            }
        }
    }
    counts
}

/// One row of the maximal-depth comparison across schemes.
#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct DepthRow {
    pub n: usize,
    /// Neighbor-gate depth of the equatorial measurement circuit: 2n.
    pub espovm_lnn: f64,
    /// Neighbor-gate depth of randomized-Clifford measurements: 3n.
    pub clifford_lnn: f64,
    /// Approximate-design depth 20 ln(9n / bias).
    pub approx_design: f64,
}

pub fn depth_comparison_table(n_values: &[usize], bias: f64) -> Result<Vec<DepthRow>, SynthError> {
    if bias <= 0.0 {
        return Err(SynthError::BadBias { bias });
    }
    Ok(n_values
        .iter()
        .map(|&n| DepthRow {
            n,
            espovm_lnn: 2.0 * n as f64,
            clifford_lnn: 3.0 * n as f64,
            approx_design: 20.0 * (9.0 * n as f64 / bias).ln(),
        })
        .collect())
}
