//! Layered Clifford circuits with a terminal measurement specification.
//!
//! Text format, one gate per line (`H 3`, `CZ 0 5`, `CNOT 2 3`), layers
//! separated by `---`. The terminal block may carry `MEAS X 1` lines plus
//! optional `FLIP i` and `REVERSE` outcome bookkeeping.

use std::fmt;

use super::QsimError;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    Z(usize),
    X(usize),
    Cz(usize, usize),
    Cnot(usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::Z(q) | Gate::X(q) => (q, None),
            Gate::Cz(a, b) | Gate::Cnot(a, b) => (a, Some(b)),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cz(..) | Gate::Cnot(..))
    }

    pub fn max_qubit(&self) -> usize {
        let (a, b) = self.qubits();
        b.map_or(a, |b| a.max(b))
    }

    /// S-power gate by Z4 exponent: 1 -> S, 2 -> Z, 3 -> S†.
    pub fn phase_power(q: usize, u: u8) -> Option<Gate> {
        match u % 4 {
            1 => Some(Gate::S(q)),
            2 => Some(Gate::Z(q)),
            3 => Some(Gate::Sdg(q)),
            _ => None,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::S(q) => write!(f, "S {q}"),
            Gate::Sdg(q) => write!(f, "SDG {q}"),
            Gate::Z(q) => write!(f, "Z {q}"),
            Gate::X(q) => write!(f, "X {q}"),
            Gate::Cz(a, b) => write!(f, "CZ {a} {b}"),
            Gate::Cnot(c, t) => write!(f, "CNOT {c} {t}"),
        }
    }
}

pub type Layer = Vec<Gate>;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum MeasBasis {
    X,
    Y,
    Z,
    #[default]
    None,
}

/// Layered gate list plus terminal measurement spec and outcome bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub n: usize,
    pub layers: Vec<Layer>,
    pub meas: Vec<MeasBasis>,
    /// Per-qubit classical flip applied to the raw outcome bit.
    pub flip: Vec<bool>,
    /// Reverse the qubit order of the outcome string.
    pub reverse: bool,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            layers: Vec::new(),
            meas: vec![MeasBasis::None; n],
            flip: vec![false; n],
            reverse: false,
        }
    }

    /// Append a layer, validating disjoint supports and index range.
    pub fn push_layer(&mut self, layer: Layer) -> Result<(), QsimError> {
        let mut used = vec![false; self.n];
        for g in &layer {
            if g.max_qubit() >= self.n {
                return Err(QsimError::QubitOutOfRange {
                    qubit: g.max_qubit(),
                    n: self.n,
                });
            }
            let (a, b) = g.qubits();
            for q in std::iter::once(a).chain(b) {
                if used[q] {
                    return Err(QsimError::OverlappingSupports { layer: self.layers.len() });
                }
                used[q] = true;
            }
            if let (a, Some(b)) = g.qubits() {
                if a == b {
                    return Err(QsimError::OverlappingSupports { layer: self.layers.len() });
                }
            }
        }
        self.layers.push(layer);
        Ok(())
    }

    pub fn measure_all_z(&mut self) {
        self.meas = vec![MeasBasis::Z; self.n];
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flatten()
    }

    pub fn has_measurement(&self) -> bool {
        self.meas.iter().any(|&m| m != MeasBasis::None)
    }

    /// Concatenate the layers of `other` after this circuit's layers. The
    /// measurement spec of `other` replaces ours when it has one.
    pub fn compose(&mut self, other: &Circuit) -> Result<(), QsimError> {
        if other.n != self.n {
            return Err(QsimError::QubitOutOfRange {
                qubit: other.n,
                n: self.n,
            });
        }
        for l in &other.layers {
            self.push_layer(l.clone())?;
        }
        if other.has_measurement() {
            self.meas = other.meas.clone();
            self.flip = other.flip.clone();
            self.reverse = other.reverse;
        }
        Ok(())
    }

    /// Layer rotating each measured qubit into its basis (X -> H, Y -> S†,H)
    /// so a final Z measurement realizes the spec. Y needs two sublayers.
    pub fn basis_rotation_layers(&self) -> Vec<Layer> {
        let mut sdg = Vec::new();
        let mut h = Vec::new();
        for (q, m) in self.meas.iter().enumerate() {
            match m {
                MeasBasis::X => h.push(Gate::H(q)),
                MeasBasis::Y => {
                    sdg.push(Gate::Sdg(q));
                    h.push(Gate::H(q));
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        if !sdg.is_empty() {
            out.push(sdg);
        }
        if !h.is_empty() {
            out.push(h);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, layer) in self.layers.iter().enumerate() {
            if i > 0 {
                out.push_str("---\n");
            }
            for g in layer {
                out.push_str(&g.to_string());
                out.push('\n');
            }
        }
        for (q, m) in self.meas.iter().enumerate() {
            let name = match m {
                MeasBasis::X => "X",
                MeasBasis::Y => "Y",
                MeasBasis::Z => "Z",
                MeasBasis::None => continue,
            };
            out.push_str(&format!("MEAS {name} {q}\n"));
        }
        for (q, f) in self.flip.iter().enumerate() {
            if *f {
                out.push_str(&format!("FLIP {q}\n"));
            }
        }
        if self.reverse {
            out.push_str("REVERSE\n");
        }
        out
    }

    /// Parse the text format for a circuit on `n` qubits.
    pub fn from_text(n: usize, text: &str) -> Result<Self, QsimError> {
        let mut circuit = Circuit::new(n);
        let mut layer: Layer = Vec::new();
        let bad = |line: usize, msg: &str| QsimError::Parse {
            line,
            message: msg.to_string(),
        };
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == "---" {
                circuit.push_layer(std::mem::take(&mut layer))?;
                continue;
            }
            let mut parts = line.split_whitespace();
            let op = parts.next().unwrap();
            let mut arg = |what: &str| -> Result<usize, QsimError> {
                parts
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| bad(ln + 1, &format!("missing or bad {what}")))
            };
            match op {
                "H" => layer.push(Gate::H(arg("qubit")?)),
                "S" => layer.push(Gate::S(arg("qubit")?)),
                "SDG" => layer.push(Gate::Sdg(arg("qubit")?)),
                "Z" => layer.push(Gate::Z(arg("qubit")?)),
                "X" => layer.push(Gate::X(arg("qubit")?)),
                "CZ" => {
                    let a = arg("control")?;
                    let b = arg("target")?;
                    layer.push(Gate::Cz(a, b));
                }
                "CNOT" => {
                    let c = arg("control")?;
                    let t = arg("target")?;
                    layer.push(Gate::Cnot(c, t));
                }
                "MEAS" => {
                    let basis = match parts.next() {
                        Some("X") => MeasBasis::X,
                        Some("Y") => MeasBasis::Y,
                        Some("Z") => MeasBasis::Z,
                        _ => return Err(bad(ln + 1, "measurement basis")),
                    };
                    let q: usize = parts
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| bad(ln + 1, "measurement qubit"))?;
                    if q >= n {
                        return Err(QsimError::QubitOutOfRange { qubit: q, n });
                    }
                    circuit.meas[q] = basis;
                }
                "FLIP" => {
                    let q = arg("qubit")?;
                    if q >= n {
                        return Err(QsimError::QubitOutOfRange { qubit: q, n });
                    }
                    circuit.flip[q] = true;
                }
                "REVERSE" => circuit.reverse = true,
                other => return Err(bad(ln + 1, &format!("unknown op '{other}'"))),
            }
        }
        if !layer.is_empty() {
            circuit.push_layer(layer)?;
        }
        Ok(circuit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let mut c = Circuit::new(4);
        c.push_layer(vec![Gate::H(0), Gate::Cz(1, 3)]).unwrap();
        c.push_layer(vec![Gate::Cnot(2, 3), Gate::Sdg(0)]).unwrap();
        c.meas = vec![MeasBasis::X, MeasBasis::Y, MeasBasis::Z, MeasBasis::Z];
        c.flip[1] = true;
        c.reverse = true;
        let text = c.to_text();
        let back = Circuit::from_text(4, &text).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn overlapping_supports_rejected() {
        let mut c = Circuit::new(3);
        let r = c.push_layer(vec![Gate::Cz(0, 1), Gate::H(1)]);
        assert!(matches!(r, Err(QsimError::OverlappingSupports { .. })));
        let r2 = Circuit::from_text(3, "CZ 0 1\nH 1\n");
        assert!(r2.is_err());
    }

    #[test]
    fn out_of_range_rejected() {
        let mut c = Circuit::new(2);
        assert!(matches!(
            c.push_layer(vec![Gate::H(2)]),
            Err(QsimError::QubitOutOfRange { .. })
        ));
    }
}
