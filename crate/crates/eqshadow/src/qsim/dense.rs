//! Dense statevector backend.

use num_complex::Complex64;
use rand::Rng;

use crate::eqcore::BitString;

use super::circuit::{Circuit, Gate, MeasBasis};
use super::noise::Pauli;
use super::QsimError;

/// 2^n complex amplitudes, qubit 0 on the least-significant index bit.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn zero_state(n: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { n, amps }
    }

    pub fn basis_state(n: usize, x: &BitString) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[x.to_index() as usize] = Complex64::new(1.0, 0.0);
        Self { n, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, QsimError> {
        let n = amps.len().trailing_zeros() as usize;
        if amps.len() != 1 << n || amps.is_empty() {
            return Err(QsimError::BadAmplitudeCount { len: amps.len() });
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(QsimError::NotNormalized { norm });
        }
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_gate(&mut self, g: &Gate) {
        match *g {
            Gate::H(q) => {
                let s = 1usize << q;
                let inv = 1.0 / 2f64.sqrt();
                for base in strided(self.amps.len(), s) {
                    let a = self.amps[base];
                    let b = self.amps[base + s];
                    self.amps[base] = (a + b) * inv;
                    self.amps[base + s] = (a - b) * inv;
                }
            }
            Gate::S(q) => self.phase_one(q, Complex64::new(0.0, 1.0)),
            Gate::Sdg(q) => self.phase_one(q, Complex64::new(0.0, -1.0)),
            Gate::Z(q) => self.phase_one(q, Complex64::new(-1.0, 0.0)),
            Gate::X(q) => {
                let s = 1usize << q;
                for base in strided(self.amps.len(), s) {
                    self.amps.swap(base, base + s);
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

    fn phase_one(&mut self, q: usize, phase: Complex64) {
        let m = 1usize << q;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & m != 0 {
                *amp *= phase;
            }
        }
    }

    pub fn apply_pauli(&mut self, q: usize, p: Pauli) {
        match p {
            Pauli::I => {}
            Pauli::X => self.apply_gate(&Gate::X(q)),
            Pauli::Z => self.apply_gate(&Gate::Z(q)),
            Pauli::Y => {
                // Y = i X Z
                self.apply_gate(&Gate::Z(q));
                self.apply_gate(&Gate::X(q));
                for a in self.amps.iter_mut() {
                    *a *= Complex64::new(0.0, 1.0);
                }
            }
        }
    }

    /// Apply the circuit's gate layers (measurement spec ignored here).
    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<(), QsimError> {
        if circuit.n != self.n {
            return Err(QsimError::QubitOutOfRange {
                qubit: circuit.n,
                n: self.n,
            });
        }
        for layer in &circuit.layers {
            for g in layer {
                self.apply_gate(g);
            }
        }
        debug_assert!((self.norm_sqr() - 1.0).abs() < 1e-10);
        Ok(())
    }

    /// Born-rule sample of a full Z-basis measurement (state not collapsed;
    /// every caller here discards the post-measurement state).
    pub fn measure_z_all<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        let total = self.norm_sqr();
        let mut u = rng.gen::<f64>() * total;
        let mut chosen = self.amps.len() - 1;
        for (i, a) in self.amps.iter().enumerate() {
            u -= a.norm_sqr();
            if u < 0.0 {
                chosen = i;
                break;
            }
        }
        BitString::from_index(chosen as u64, self.n)
    }

    /// Run the circuit and sample its terminal measurement: basis rotations,
    /// Z readout, classical flips, optional qubit reversal.
    pub fn measure_circuit<R: Rng + ?Sized>(
        &self,
        circuit: &Circuit,
        rng: &mut R,
    ) -> Result<BitString, QsimError> {
        let mut work = self.clone();
        work.apply_circuit(circuit)?;
        for layer in circuit.basis_rotation_layers() {
            for g in &layer {
                work.apply_gate(g);
            }
        }
        let mut p = work.measure_z_all(rng);
        apply_outcome_bookkeeping(circuit, &mut p);
        Ok(p)
    }

    /// Exact outcome distribution of the circuit's terminal measurement.
    pub fn circuit_distribution(&self, circuit: &Circuit) -> Result<Vec<f64>, QsimError> {
        let mut work = self.clone();
        work.apply_circuit(circuit)?;
        for layer in circuit.basis_rotation_layers() {
            for g in &layer {
                work.apply_gate(g);
            }
        }
        let mut probs = vec![0.0; work.amps.len()];
        for (i, a) in work.amps.iter().enumerate() {
            let mut p = BitString::from_index(i as u64, self.n);
            apply_outcome_bookkeeping(circuit, &mut p);
            probs[p.to_index() as usize] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// <self|other>.
    pub fn inner(&self, other: &DenseState) -> Complex64 {
        assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// <self| O |self> for a dense Hermitian operator in row-major order.
    pub fn expectation_dense(&self, op: &nalgebra::DMatrix<Complex64>) -> f64 {
        let dim = self.amps.len();
        assert_eq!(op.nrows(), dim);
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..dim {
            let mut row = Complex64::new(0.0, 0.0);
            for c in 0..dim {
                row += op[(r, c)] * self.amps[c];
            }
            acc += self.amps[r].conj() * row;
        }
        acc.re
    }
}

pub(crate) fn apply_outcome_bookkeeping(circuit: &Circuit, p: &mut BitString) {
    for (q, f) in circuit.flip.iter().enumerate() {
        if *f && circuit.meas[q] != MeasBasis::None {
            p.flip(q);
        }
    }
    if circuit.reverse {
        p.reverse();
    }
}

fn strided(len: usize, stride: usize) -> impl Iterator<Item = usize> {
    (0..len).filter(move |i| i & stride == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::circuit::MeasBasis;

    #[test]
    fn empty_circuit_is_identity() {
        let psi = DenseState::zero_state(3);
        let mut out = psi.clone();
        out.apply_circuit(&Circuit::new(3)).unwrap();
        assert_eq!(psi, out);
    }

    #[test]
    fn hadamards_make_uniform_superposition() {
        let mut psi = DenseState::zero_state(3);
        let mut c = Circuit::new(3);
        c.push_layer((0..3).map(Gate::H).collect()).unwrap();
        psi.apply_circuit(&c).unwrap();
        for a in psi.amplitudes() {
            assert!((a - Complex64::new(0.125f64.sqrt(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn cz_flips_sign_of_11() {
        let mut psi = DenseState::basis_state(2, &BitString::from_bits(vec![1, 1]));
        psi.apply_gate(&Gate::Cz(0, 1));
        assert!((psi.amplitudes()[3] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn composition_matches_sequential_application() {
        let mut rng = crate::rng::stream_rng(21, 0, 0);
        let mut c1 = Circuit::new(3);
        c1.push_layer(vec![Gate::H(0), Gate::H(1), Gate::H(2)]).unwrap();
        c1.push_layer(vec![Gate::Cz(0, 2)]).unwrap();
        let mut c2 = Circuit::new(3);
        c2.push_layer(vec![Gate::Cnot(0, 1)]).unwrap();
        c2.push_layer(vec![Gate::S(2), Gate::X(0)]).unwrap();

        let mut seq = DenseState::zero_state(3);
        seq.apply_circuit(&c1).unwrap();
        seq.apply_circuit(&c2).unwrap();

        let mut both = c1.clone();
        both.compose(&c2).unwrap();
        let mut joined = DenseState::zero_state(3);
        joined.apply_circuit(&both).unwrap();
        assert_eq!(seq, joined);
        assert!((seq.norm_sqr() - 1.0).abs() < 1e-10);
        let _ = rng.gen::<f64>();
    }

    #[test]
    fn measurement_marginals_on_plus_states() {
        let mut psi = DenseState::zero_state(4);
        let mut c = Circuit::new(4);
        c.push_layer((0..4).map(Gate::H).collect()).unwrap();
        psi.apply_circuit(&c).unwrap();
        let mut rng = crate::rng::stream_rng(22, 0, 0);
        let shots = 100_000;
        let mut ones = [0u32; 4];
        for _ in 0..shots {
            let p = psi.measure_z_all(&mut rng);
            for q in 0..4 {
                ones[q] += p.get(q) as u32;
            }
        }
        let sigma = (shots as f64 * 0.25).sqrt();
        for q in 0..4 {
            assert!((ones[q] as f64 - shots as f64 / 2.0).abs() < 5.0 * sigma);
        }
    }

    #[test]
    fn basis_rotation_and_flip_bookkeeping() {
        // measure |+> in X basis: deterministic 0; flip makes it 1
        let mut psi = DenseState::zero_state(1);
        psi.apply_gate(&Gate::H(0));
        let mut c = Circuit::new(1);
        c.meas = vec![MeasBasis::X];
        let mut rng = crate::rng::stream_rng(23, 0, 0);
        let p = psi.measure_circuit(&c, &mut rng).unwrap();
        assert_eq!(p.get(0), 0);
        c.flip[0] = true;
        let p = psi.measure_circuit(&c, &mut rng).unwrap();
        assert_eq!(p.get(0), 1);
    }
}
