//! Exact density-matrix oracle for small systems.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::DENSITY_ORACLE_CAP;

use super::circuit::{Circuit, Gate};
use super::dense::DenseState;
use super::noise::{classify_pair, NoiseModel, Pauli, PauliDist, TwoQubitNoise};
use super::QsimError;

/// Exact 2^n x 2^n density matrix. Capped at `DENSITY_ORACLE_CAP` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    mat: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn from_pure(state: &DenseState) -> Result<Self, QsimError> {
        let n = state.n();
        if n > DENSITY_ORACLE_CAP {
            return Err(QsimError::CapExceeded {
                n,
                cap: DENSITY_ORACLE_CAP,
            });
        }
        let dim = 1usize << n;
        let a = state.amplitudes();
        let mat = DMatrix::from_fn(dim, dim, |r, c| a[r] * a[c].conj());
        Ok(Self { n, mat })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    /// rho -> U rho U† for one gate.
    pub fn apply_gate(&mut self, g: &Gate) {
        self.left_apply(g);
        self.mat.adjoint_mut();
        self.left_apply(g);
        self.mat.adjoint_mut();
    }

    /// rho -> U rho (columns transformed as kets).
    fn left_apply(&mut self, g: &Gate) {
        let dim = 1usize << self.n;
        for c in 0..dim {
            let col: Vec<Complex64> = (0..dim).map(|r| self.mat[(r, c)]).collect();
            let mut ket = DenseStateRaw { amps: col };
            ket.apply_gate(g);
            for r in 0..dim {
                self.mat[(r, c)] = ket.amps[r];
            }
        }
    }

    fn conjugate_pauli(&mut self, q: usize, p: Pauli) {
        match p {
            Pauli::I => {}
            Pauli::X => self.apply_gate(&Gate::X(q)),
            Pauli::Z => self.apply_gate(&Gate::Z(q)),
            Pauli::Y => {
                // Y rho Y = X Z rho Z X (phases cancel)
                self.apply_gate(&Gate::Z(q));
                self.apply_gate(&Gate::X(q));
            }
        }
    }

    /// rho -> sum_P p_P P rho P on one qubit.
    pub fn apply_pauli_channel(&mut self, q: usize, dist: &PauliDist) {
        let mut acc = DMatrix::from_element(self.mat.nrows(), self.mat.ncols(), Complex64::new(0.0, 0.0));
        for (i, p) in [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z].into_iter().enumerate() {
            let w = dist.probs[i];
            if w == 0.0 {
                continue;
            }
            let mut branch = self.clone();
            branch.conjugate_pauli(q, p);
            acc += branch.mat * Complex64::new(w, 0.0);
        }
        self.mat = acc;
    }

    fn apply_two_qubit_noise(&mut self, a: usize, b: usize, noise: TwoQubitNoise) {
        match noise {
            TwoQubitNoise::None => {}
            TwoQubitNoise::Depolarizing { rate } => {
                let mut noisy = self.clone();
                let uni = PauliDist::new([0.25; 4]).expect("valid");
                noisy.apply_pauli_channel(a, &uni);
                noisy.apply_pauli_channel(b, &uni);
                self.mix(rate, &noisy);
            }
            TwoQubitNoise::Dephasing { rate } => {
                let mut noisy = self.clone();
                let iz = PauliDist::new([0.5, 0.0, 0.0, 0.5]).expect("valid");
                noisy.apply_pauli_channel(a, &iz);
                noisy.apply_pauli_channel(b, &iz);
                self.mix(rate, &noisy);
            }
        }
    }

    fn mix(&mut self, rate: f64, other: &DensityMatrix) {
        self.mat = &self.mat * Complex64::new(1.0 - rate, 0.0)
            + &other.mat * Complex64::new(rate, 0.0);
    }

    /// Apply gate layers with the model's per-gate error channels composed
    /// after each gate; exact for Pauli channels.
    pub fn apply_circuit_noisy(
        &mut self,
        circuit: &Circuit,
        noise: &NoiseModel,
    ) -> Result<(), QsimError> {
        if circuit.n != self.n {
            return Err(QsimError::QubitOutOfRange {
                qubit: circuit.n,
                n: self.n,
            });
        }
        for layer in &circuit.layers {
            for g in layer {
                self.apply_gate(g);
                let (a, b) = g.qubits();
                match b {
                    Some(b) => {
                        let class = classify_pair(a, b, self.n);
                        self.apply_two_qubit_noise(a, b, noise.gate_noise(class));
                    }
                    None => {
                        if let Some(d) = &noise.single_gate {
                            self.apply_pauli_channel(a, d);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Per-qubit preparation channels.
    pub fn apply_prep_noise(&mut self, prep: &[PauliDist]) -> Result<(), QsimError> {
        if prep.len() != self.n {
            return Err(QsimError::QubitOutOfRange {
                qubit: prep.len(),
                n: self.n,
            });
        }
        for (q, d) in prep.iter().enumerate() {
            self.apply_pauli_channel(q, d);
        }
        Ok(())
    }

    pub fn trace(&self) -> f64 {
        (0..self.mat.nrows()).map(|i| self.mat[(i, i)].re).sum()
    }

    /// Re tr(rho O).
    pub fn expectation_dense(&self, op: &DMatrix<Complex64>) -> f64 {
        let dim = self.mat.nrows();
        assert_eq!(op.nrows(), dim);
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..dim {
            for c in 0..dim {
                acc += self.mat[(r, c)] * op[(c, r)];
            }
        }
        acc.re
    }

    /// <psi| rho |psi>.
    pub fn expectation_pure(&self, psi: &[Complex64]) -> f64 {
        let dim = self.mat.nrows();
        assert_eq!(psi.len(), dim);
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..dim {
            for c in 0..dim {
                acc += psi[r].conj() * self.mat[(r, c)] * psi[c];
            }
        }
        acc.re
    }
}

/// Minimal gate application on a raw amplitude vector (shared with the
/// density-matrix column transform; normalization not enforced).
struct DenseStateRaw {
    amps: Vec<Complex64>,
}

impl DenseStateRaw {
    fn apply_gate(&mut self, g: &Gate) {
        match *g {
            Gate::H(q) => {
                let s = 1usize << q;
                let inv = 1.0 / 2f64.sqrt();
                for i in 0..self.amps.len() {
                    if i & s == 0 {
                        let a = self.amps[i];
                        let b = self.amps[i + s];
                        self.amps[i] = (a + b) * inv;
                        self.amps[i + s] = (a - b) * inv;
                    }
                }
            }
            Gate::S(q) => self.phase(q, Complex64::new(0.0, 1.0)),
            Gate::Sdg(q) => self.phase(q, Complex64::new(0.0, -1.0)),
            Gate::Z(q) => self.phase(q, Complex64::new(-1.0, 0.0)),
            Gate::X(q) => {
                let s = 1usize << q;
                for i in 0..self.amps.len() {
                    if i & s == 0 {
                        self.amps.swap(i, i + s);
                    }
                }
            }
            Gate::Cz(a, b) => {
                let (ma, mb) = (1usize << a, 1usize << b);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & ma != 0 && i & mb != 0 {
                        *amp = -*amp;
                    }
                }
            }
            Gate::Cnot(c, t) => {
                let (mc, mt) = (1usize << c, 1usize << t);
                for i in 0..self.amps.len() {
                    if i & mc != 0 && i & mt == 0 {
                        self.amps.swap(i, i | mt);
                    }
                }
            }
        }
    }

    fn phase(&mut self, q: usize, phase: Complex64) {
        let m = 1usize << q;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & m != 0 {
                *amp *= phase;
            }
        }
    }
}
