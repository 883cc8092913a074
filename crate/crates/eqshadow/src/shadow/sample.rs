//! Sampling equatorial measurement outcomes on every backend.

use num_complex::Complex64;
use rand::Rng;

use crate::eqcore::{i_pow, BitString, EquatorialLabel, Scheme};
use crate::qsim::{
    sample_meas_error, sample_parity_amplitude, sample_pauli_errors, Circuit, DenseState,
    NoiseModel, PauliDist, QuantumState, StabilizerTableau,
};
use crate::synth::espovm_measurement_circuit;

use super::ShadowError;

/// One equatorial measurement: draw a uniform label, measure to get `p`, and
/// fold `p` into the diagonal. The returned label follows the law
/// `(2^n / |S|) <phi_A| rho |phi_A>`.
///
/// Dense and tableau backends run the measurement circuit; the sparse
/// backend samples `p` through the prefix-marginal chain rule.
pub fn sample_espovm_outcome<R: Rng + ?Sized>(
    state: &QuantumState,
    scheme: Scheme,
    rng: &mut R,
) -> Result<(EquatorialLabel, BitString), ShadowError> {
    let n = state.n();
    let a_prime = EquatorialLabel::sample_uniform(scheme, n, rng);
    let p = measure_label_basis(state, &a_prime, rng)?;
    let mut a = a_prime;
    a.shift_diagonal(&p)?;
    Ok((a, p))
}

/// Measure the state in the rotated basis of `a_prime` and return the raw
/// outcome string.
pub fn measure_label_basis<R: Rng + ?Sized>(
    state: &QuantumState,
    a_prime: &EquatorialLabel,
    rng: &mut R,
) -> Result<BitString, ShadowError> {
    Ok(match state {
        QuantumState::Dense(s) => {
            let circuit = espovm_measurement_circuit(a_prime, false)?;
            s.measure_circuit(&circuit, rng)?
        }
        QuantumState::Tableau(t) => {
            let circuit = espovm_measurement_circuit(a_prime, false)?;
            t.measure_circuit(&circuit, rng)?
        }
        QuantumState::Sparse(s) => {
            let beta: Vec<(BitString, Complex64)> = s
                .components()
                .iter()
                .map(|(x, c)| {
                    let q = a_prime.quadratic_phase(x).expect("matching n");
                    (x.clone(), c * i_pow((4 - q) % 4))
                })
                .collect();
            sample_parity_amplitude(state.n(), &beta, rng)
        }
    })
}

/// Noisy variant: Pauli errors drawn per two-qubit gate of the measurement
/// circuit plus measurement bit flips. Gate noise needs a circuit-level
/// backend (dense or tableau).
pub fn sample_espovm_outcome_noisy<R: Rng + ?Sized>(
    state: &QuantumState,
    scheme: Scheme,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<(EquatorialLabel, BitString), ShadowError> {
    let n = state.n();
    let a_prime = EquatorialLabel::sample_uniform(scheme, n, rng);
    let circuit = espovm_measurement_circuit(&a_prime, false)?;
    let mut p = match state {
        QuantumState::Dense(s) => measure_noisy_dense(s, &circuit, noise, rng)?,
        QuantumState::Tableau(t) => {
            let mut work = t.clone();
            let insertions = sample_pauli_errors(noise, &circuit, rng);
            for (li, layer) in circuit.layers.iter().enumerate() {
                for g in layer {
                    work.apply_gate(g);
                }
                for ins in insertions.iter().filter(|i| i.layer == li) {
                    work.apply_pauli(ins.qubit, ins.pauli);
                }
            }
            for layer in circuit.basis_rotation_layers() {
                for g in &layer {
                    work.apply_gate(g);
                }
            }
            work.measure_z_all(rng)
        }
        QuantumState::Sparse(_) => {
            if noise.has_gate_noise() {
                return Err(ShadowError::BackendUnsupported(
                    "gate noise needs a circuit-level backend",
                ));
            }
            measure_label_basis(state, &a_prime, rng)?
        }
    };
    let xi = sample_meas_error(noise, n, rng)?;
    if !xi.is_zero() {
        p = p.xor(&xi)?;
    }
    let mut a = a_prime;
    a.shift_diagonal(&p)?;
    Ok((a, p))
}

pub(crate) fn measure_noisy_dense<R: Rng + ?Sized>(
    state: &DenseState,
    circuit: &Circuit,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<BitString, ShadowError> {
    let insertions = sample_pauli_errors(noise, circuit, rng);
    let mut work = state.clone();
    for (li, layer) in circuit.layers.iter().enumerate() {
        for g in layer {
            work.apply_gate(g);
        }
        for ins in insertions.iter().filter(|i| i.layer == li) {
            work.apply_pauli(ins.qubit, ins.pauli);
        }
    }
    for layer in circuit.basis_rotation_layers() {
        for g in &layer {
            work.apply_gate(g);
        }
    }
    Ok(work.measure_z_all(rng))
}

/// Fresh preparation-noise trajectory: one sampled Pauli per qubit.
pub fn apply_prep_noise<R: Rng + ?Sized>(
    state: &mut QuantumState,
    prep: &[PauliDist],
    rng: &mut R,
) -> Result<(), ShadowError> {
    if prep.len() != state.n() {
        return Err(ShadowError::DimensionMismatch {
            expected: state.n(),
            got: prep.len(),
        });
    }
    for (q, dist) in prep.iter().enumerate() {
        let p = dist.sample(rng);
        state.apply_pauli(q, p);
    }
    Ok(())
}

/// Exact outcome-label distribution of the equatorial measurement on a dense
/// state: prob(A) = (2^n / |S|) |<phi_A|psi>|^2, enumerated for small n.
pub fn exact_label_distribution(
    psi: &DenseState,
    scheme: Scheme,
) -> Result<Vec<(EquatorialLabel, f64)>, ShadowError> {
    let n = psi.n();
    let labels = EquatorialLabel::enumerate(scheme, n)?;
    let count = labels.len() as f64;
    let weight = 2f64.powi(n as i32) / count;
    Ok(labels
        .into_iter()
        .map(|a| {
            let ov = crate::eqcore::overlap_dense(&a, psi.amplitudes()).expect("matching n");
            let p = weight * ov.norm_sqr();
            (a, p)
        })
        .collect())
}

/// The state |phi_A> as a tableau (used by tests and the tableau oracle
/// path).
pub fn label_tableau(a: &EquatorialLabel) -> Result<StabilizerTableau, ShadowError> {
    let n = a.n();
    let mut t = StabilizerTableau::zero_state(n);
    for q in 0..n {
        t.apply_gate(&crate::qsim::Gate::H(q));
    }
    for q in 0..n {
        let u = match a.scheme() {
            Scheme::Eq => a.diag()[q],
            Scheme::Req => 2 * a.diag()[q],
        };
        if let Some(g) = crate::qsim::Gate::phase_power(q, u) {
            t.apply_gate(&g);
        }
    }
    for (i, j) in a.coupled_pairs() {
        t.apply_gate(&crate::qsim::Gate::Cz(i, j));
    }
    Ok(t)
}
