//! Few-component sparse states and their prefix-marginal samplers.

use num_complex::Complex64;
use rand::Rng;

use crate::eqcore::BitString;

use super::noise::Pauli;
use super::QsimError;

/// State `sum_j c_j |x_j>` with distinct basis strings.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState {
    n: usize,
    components: Vec<(BitString, Complex64)>,
}

impl SparseState {
    pub fn new(n: usize, components: Vec<(BitString, Complex64)>) -> Result<Self, QsimError> {
        for (i, (x, _)) in components.iter().enumerate() {
            if x.len() != n {
                return Err(QsimError::QubitOutOfRange { qubit: x.len(), n });
            }
            if components[i + 1..].iter().any(|(y, _)| y == x) {
                return Err(QsimError::DuplicateComponent);
            }
        }
        let norm: f64 = components.iter().map(|(_, c)| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(QsimError::NotNormalized { norm });
        }
        Ok(Self { n, components })
    }

    /// (|0..0> + |1..1>)/sqrt(2).
    pub fn ghz(n: usize) -> Self {
        let c = Complex64::new(1.0 / 2f64.sqrt(), 0.0);
        Self {
            n,
            components: vec![(BitString::zeros(n), c), (BitString::ones(n), c)],
        }
    }

    /// Uniform single-excitation state over n qubits.
    pub fn w_state(n: usize) -> Self {
        let c = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        Self {
            n,
            components: (0..n).map(|i| (BitString::unit(n, i), c)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[(BitString, Complex64)] {
        &self.components
    }

    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << self.n];
        for (x, c) in &self.components {
            amps[x.to_index() as usize] = *c;
        }
        amps
    }

    /// Amplitude of a basis string.
    pub fn amplitude(&self, x: &BitString) -> Complex64 {
        self.components
            .iter()
            .find(|(y, _)| y == x)
            .map_or(Complex64::new(0.0, 0.0), |(_, c)| *c)
    }

    pub fn apply_pauli(&mut self, q: usize, p: Pauli) {
        match p {
            Pauli::I => {}
            Pauli::X => {
                for (x, _) in self.components.iter_mut() {
                    x.flip(q);
                }
            }
            Pauli::Z => {
                for (x, c) in self.components.iter_mut() {
                    if x.get(q) == 1 {
                        *c = -*c;
                    }
                }
            }
            Pauli::Y => {
                for (x, c) in self.components.iter_mut() {
                    *c *= if x.get(q) == 1 {
                        Complex64::new(0.0, -1.0)
                    } else {
                        Complex64::new(0.0, 1.0)
                    };
                    x.flip(q);
                }
            }
        }
    }

    /// Z-basis measurement: outcome x_j with probability |c_j|^2.
    pub fn measure_z_all<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        let mut u = rng.gen::<f64>();
        for (x, c) in &self.components {
            u -= c.norm_sqr();
            if u < 0.0 {
                return x.clone();
            }
        }
        self.components.last().expect("nonempty state").0.clone()
    }
}

/// Samples `p` with probability `|sum_j beta_j (-1)^{p . x_j}|^2 / 2^n`,
/// qubit by qubit through prefix marginals in O(n L^2) after setup.
///
/// The marginal of a fixed prefix keeps exactly the component pairs whose
/// difference string is supported inside the prefix; each contributes
/// `beta_j beta_k* (-1)^{prefix . (x_j xor x_k)}` times the free-bit count.
pub fn sample_parity_amplitude<R: Rng + ?Sized>(
    n: usize,
    components: &[(BitString, Complex64)],
    rng: &mut R,
) -> BitString {
    // pairs (j, k) bucketed by the highest set bit of x_j xor x_k; a pair
    // enters the marginal once the prefix covers that bit
    let l = components.len();
    let mut active: Vec<(usize, usize)> = Vec::new(); // diff inside current prefix
    let mut buckets: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for j in 0..l {
        for k in 0..l {
            if j == k {
                active.push((j, k));
                continue;
            }
            let diff = components[j].0.xor(&components[k].0).expect("same n");
            match (0..n).rev().find(|&q| diff.get(q) == 1) {
                Some(top) => buckets[top].push((j, k)),
                None => unreachable!("distinct components"),
            }
        }
    }

    let mut p = BitString::zeros(n);
    let mut prev_marginal = 1.0; // P(empty prefix)
    for q in 0..n {
        // trial value 0 for bit q; marginal over bits 0..=q
        let mut m0 = 0.0;
        let mut m1 = 0.0;
        for &(j, k) in active.iter().chain(&buckets[q]) {
            let (xj, bj) = &components[j];
            let (xk, bk) = &components[k];
            let coeff = (bj * bk.conj()).re;
            let mut par = 0u8;
            for t in 0..q {
                par ^= p.get(t) & (xj.get(t) ^ xk.get(t));
            }
            let dq = xj.get(q) ^ xk.get(q);
            let s0 = if par == 1 { -coeff } else { coeff };
            m0 += s0;
            m1 += if dq == 1 { -s0 } else { s0 };
        }
        // common factor 2^{n-q-1}/2^n cancels in the conditional
        let p0 = (m0.max(0.0)) / (m0.max(0.0) + m1.max(0.0)).max(f64::MIN_POSITIVE);
        let bit = if rng.gen::<f64>() < p0 { 0 } else { 1 };
        p.set(q, bit);
        active.extend(buckets[q].iter().copied());
        prev_marginal *= if bit == 0 { p0 } else { 1.0 - p0 };
    }
    let _ = prev_marginal;
    p
}

/// Exact distribution of `sample_parity_amplitude` for testing, via the
/// dense 2^n evaluation. Requires small n.
pub fn parity_amplitude_distribution(n: usize, components: &[(BitString, Complex64)]) -> Vec<f64> {
    let dim = 1usize << n;
    let mut probs = vec![0.0; dim];
    for pi in 0..dim {
        let p = BitString::from_index(pi as u64, n);
        let mut f = Complex64::new(0.0, 0.0);
        for (x, b) in components {
            let s = p.dot(x).expect("same n");
            f += if s == 1 { -b } else { *b };
        }
        probs[pi] = f.norm_sqr() / dim as f64;
    }
    probs
}
