//! Pauli noise models and trajectory sampling.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::eqcore::BitString;

use super::circuit::Circuit;
use super::QsimError;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// Distribution over single-qubit Paulis (I, X, Y, Z).
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliDist {
    pub probs: [f64; 4],
}

impl PauliDist {
    pub fn new(probs: [f64; 4]) -> Result<Self, QsimError> {
        if probs.iter().any(|&p| p < 0.0) || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(QsimError::BadDistribution);
        }
        Ok(Self { probs })
    }

    pub fn identity() -> Self {
        Self {
            probs: [1.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn bit_flip(eta: f64) -> Self {
        Self {
            probs: [1.0 - eta, eta, 0.0, 0.0],
        }
    }

    pub fn phase_flip(eta: f64) -> Self {
        Self {
            probs: [1.0 - eta, 0.0, 0.0, eta],
        }
    }

    /// With probability eta apply a uniform draw from {I, X, Y, Z}.
    pub fn depolarizing(eta: f64) -> Self {
        Self {
            probs: [1.0 - 0.75 * eta, eta / 4.0, eta / 4.0, eta / 4.0],
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.probs[1] == 0.0 && self.probs[2] == 0.0 && self.probs[3] == 0.0
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Pauli {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][i];
            }
        }
        Pauli::Z
    }
}

/// Error channel attached to a two-qubit gate class. The error event fires
/// with the stated rate; on firing, each of the two qubits independently
/// receives a uniform draw from {I,X,Y,Z} (depolarizing) or {I,Z}
/// (dephasing). The all-identity draw counts as a valid no-error outcome.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TwoQubitNoise {
    None,
    Depolarizing { rate: f64 },
    Dephasing { rate: f64 },
}

impl TwoQubitNoise {
    pub fn rate(&self) -> f64 {
        match *self {
            TwoQubitNoise::None => 0.0,
            TwoQubitNoise::Depolarizing { rate } | TwoQubitNoise::Dephasing { rate } => rate,
        }
    }
}

/// Gate classes distinguished by the noise model. Two-qubit gates count as
/// nearest-neighbor when ring-adjacent (|i-j| = 1 or the {first, last} pair).
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GateClass {
    SingleQubit,
    NnTwoQubit,
    LongTwoQubit,
}

pub fn classify_pair(a: usize, b: usize, n: usize) -> GateClass {
    let d = a.abs_diff(b);
    if d == 1 || (d == n - 1 && n > 2) {
        GateClass::NnTwoQubit
    } else {
        GateClass::LongTwoQubit
    }
}

/// Pauli noise model: preparation noise per qubit, per-class gate noise and
/// measurement bit flips (rates and/or an explicit injected error string).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub prep: Option<Vec<PauliDist>>,
    pub long_gate: TwoQubitNoise,
    pub nn_gate: TwoQubitNoise,
    pub single_gate: Option<PauliDist>,
    pub meas_flip: Option<Vec<f64>>,
    pub meas_inject: Option<String>,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self {
            prep: None,
            long_gate: TwoQubitNoise::None,
            nn_gate: TwoQubitNoise::None,
            single_gate: None,
            meas_flip: None,
            meas_inject: None,
        }
    }

    pub fn is_noiseless(&self) -> bool {
        self.prep
            .as_ref()
            .map_or(true, |v| v.iter().all(PauliDist::is_noiseless))
            && self.long_gate == TwoQubitNoise::None
            && self.nn_gate == TwoQubitNoise::None
            && self.single_gate.map_or(true, |d| d.is_noiseless())
            && self.meas_flip.as_ref().map_or(true, |v| v.iter().all(|&p| p == 0.0))
            && self.meas_inject.is_none()
    }

    pub fn gate_noise(&self, class: GateClass) -> TwoQubitNoise {
        match class {
            GateClass::NnTwoQubit => self.nn_gate,
            GateClass::LongTwoQubit => self.long_gate,
            GateClass::SingleQubit => TwoQubitNoise::None,
        }
    }

    pub fn has_gate_noise(&self) -> bool {
        self.long_gate != TwoQubitNoise::None
            || self.nn_gate != TwoQubitNoise::None
            || self.single_gate.map_or(false, |d| !d.is_noiseless())
    }
}

/// Replace the long-ranged two-qubit error channel with dephasing at the
/// same rate, leaving the nearest-neighbor class untouched. Models the
/// teleportation gadget that turns arbitrary Pauli noise on a long-ranged
/// diagonal gate into dephasing. Idempotent.
pub fn gadgetize(noise: &NoiseModel) -> NoiseModel {
    let mut out = noise.clone();
    out.long_gate = match noise.long_gate {
        TwoQubitNoise::None => TwoQubitNoise::None,
        TwoQubitNoise::Depolarizing { rate } | TwoQubitNoise::Dephasing { rate } => {
            TwoQubitNoise::Dephasing { rate }
        }
    };
    out
}

/// `p XOR xi`.
pub fn bitflip_inject(p: &BitString, xi: &BitString) -> Result<BitString, QsimError> {
    p.xor(xi).map_err(|_| QsimError::QubitOutOfRange {
        qubit: xi.len(),
        n: p.len(),
    })
}

/// One sampled Pauli insertion, applied right after the gate at
/// `(layer, position-in-layer)` on `qubit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliInsertion {
    pub layer: usize,
    pub qubit: usize,
    pub pauli: Pauli,
}

/// Independently sample the per-gate Pauli errors of one circuit shot.
pub fn sample_pauli_errors<R: Rng + ?Sized>(
    noise: &NoiseModel,
    circuit: &Circuit,
    rng: &mut R,
) -> Vec<PauliInsertion> {
    let mut out = Vec::new();
    for (li, layer) in circuit.layers.iter().enumerate() {
        for g in layer {
            let (a, b) = g.qubits();
            match b {
                Some(b) => {
                    let class = classify_pair(a, b, circuit.n);
                    match noise.gate_noise(class) {
                        TwoQubitNoise::None => {}
                        TwoQubitNoise::Depolarizing { rate } => {
                            if rng.gen_bool(rate) {
                                for q in [a, b] {
                                    let p = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z]
                                        [rng.gen_range(0..4)];
                                    if p != Pauli::I {
                                        out.push(PauliInsertion {
                                            layer: li,
                                            qubit: q,
                                            pauli: p,
                                        });
                                    }
                                }
                            }
                        }
                        TwoQubitNoise::Dephasing { rate } => {
                            if rng.gen_bool(rate) {
                                for q in [a, b] {
                                    if rng.gen_bool(0.5) {
                                        out.push(PauliInsertion {
                                            layer: li,
                                            qubit: q,
                                            pauli: Pauli::Z,
                                        });
                                    }
                                }
                            }
                        }
                    }
                }
                None => {
                    if let Some(dist) = &noise.single_gate {
                        let p = dist.sample(rng);
                        if p != Pauli::I {
                            out.push(PauliInsertion {
                                layer: li,
                                qubit: a,
                                pauli: p,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Sample the measurement bit-flip string: Bernoulli flips per qubit XORed
/// with the explicit injected string when present.
pub fn sample_meas_error<R: Rng + ?Sized>(
    noise: &NoiseModel,
    n: usize,
    rng: &mut R,
) -> Result<BitString, QsimError> {
    let mut xi = BitString::zeros(n);
    if let Some(rates) = &noise.meas_flip {
        if rates.len() != n {
            return Err(QsimError::QubitOutOfRange {
                qubit: rates.len(),
                n,
            });
        }
        for (q, &r) in rates.iter().enumerate() {
            if r > 0.0 && rng.gen_bool(r) {
                xi.flip(q);
            }
        }
    }
    if let Some(s) = &noise.meas_inject {
        let inject: BitString = s
            .parse()
            .map_err(|_| QsimError::Parse {
                line: 0,
                message: format!("bad injected error string '{s}'"),
            })?;
        xi = bitflip_inject(&xi, &inject)?;
    }
    Ok(xi)
}
