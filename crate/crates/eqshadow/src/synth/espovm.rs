//! Measurement circuits realizing one equatorial-label projector.

use crate::eqcore::{EquatorialLabel, Scheme};
use crate::qsim::{Circuit, Gate, Layer, MeasBasis};

use super::coloring::cz_layers_edge_coloring;
use super::{CzGraph, SynthError};

/// Circuit measuring in the rotated basis of a label: CZ gates on the
/// off-diagonal support (layered by edge coloring, depth <= n), diagonal
/// phase gates, a Hadamard layer, then a full Z measurement.
///
/// With `alt_basis` the diagonal phase gates are dropped and the terminal
/// measurement bases carry them instead: the complex family measures X or Y
/// (with a classical flip for the negated cases), the real family only ever
/// needs X.
pub fn espovm_measurement_circuit(
    a: &EquatorialLabel,
    alt_basis: bool,
) -> Result<Circuit, SynthError> {
    let n = a.n();
    let graph = CzGraph::new(n, a.coupled_pairs())?;
    let mut circuit = cz_layers_edge_coloring(&graph)?;

    if alt_basis {
        for (q, &d) in a.diag().iter().enumerate() {
            let (basis, flip) = match (a.scheme(), d % 4) {
                (Scheme::Eq, 0) => (MeasBasis::X, false),
                (Scheme::Eq, 1) => (MeasBasis::Y, false),
                (Scheme::Eq, 2) => (MeasBasis::X, true),
                (Scheme::Eq, 3) => (MeasBasis::Y, true),
                (Scheme::Req, 0) => (MeasBasis::X, false),
                _ => (MeasBasis::X, true),
            };
            circuit.meas[q] = basis;
            circuit.flip[q] = flip;
        }
        return Ok(circuit);
    }

    let mut phases: Layer = Vec::new();
    for (q, &d) in a.diag().iter().enumerate() {
        let g = match a.scheme() {
            // (S†)^d: 1 -> S†, 2 -> Z, 3 -> S
            Scheme::Eq => Gate::phase_power(q, (4 - d) % 4),
            Scheme::Req => (d == 1).then_some(Gate::Z(q)),
        };
        if let Some(g) = g {
            phases.push(g);
        }
    }
    if !phases.is_empty() {
        circuit.push_layer(phases).map_err(SynthError::Circuit)?;
    }
    circuit
        .push_layer((0..n).map(Gate::H).collect())
        .map_err(SynthError::Circuit)?;
    circuit.measure_all_z();
    Ok(circuit)
}
