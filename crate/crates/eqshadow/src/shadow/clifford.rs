//! Exactly uniform Clifford sampling and the randomized-Clifford baseline.
//!
//! The symplectic part is drawn by the hyperbolic-pair construction: pick a
//! uniform nonzero image for the first basis vector, a uniform partner with
//! symplectic product one, map the pair there with at most four
//! transvections, and recurse on the complement. Together with uniform sign
//! bits this is exactly uniform over the Clifford group modulo phase.

use rand::Rng;

use crate::qsim::{
    Circuit, DenseState, Gate, NoiseModel, QuantumState, StabilizerTableau,
};

use super::observable::Observable;
use super::ShadowError;

/// Symplectic vectors over F_2^{2n}, interleaved as (x_0, z_0, x_1, z_1, ...).
type Vec2n = Vec<u8>;

fn sp_inner(a: &Vec2n, b: &Vec2n) -> u8 {
    let mut s = 0u8;
    for q in 0..a.len() / 2 {
        s ^= (a[2 * q] & b[2 * q + 1]) ^ (a[2 * q + 1] & b[2 * q]);
    }
    s
}

fn xor_into(dst: &mut Vec2n, src: &Vec2n) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

/// Transvection Z_h: v -> v + <v,h> h.
fn transvect(h: &Vec2n, v: &mut Vec2n) {
    if sp_inner(v, h) == 1 {
        let hc = h.clone();
        xor_into(v, &hc);
    }
}

fn random_nonzero<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec2n {
    loop {
        let v: Vec2n = (0..dim).map(|_| u8::from(rng.gen_bool(0.5))).collect();
        if v.iter().any(|&b| b == 1) {
            return v;
        }
    }
}

/// Uniform w with <v, w> = 1: draw uniformly and, on even pairing, add a
/// fixed odd-pairing partner (a 2-to-1 map onto the target set).
fn random_sp_partner<R: Rng + ?Sized>(v: &Vec2n, rng: &mut R) -> Vec2n {
    let k = (0..v.len()).find(|&i| v[i] == 1).expect("nonzero");
    let mut w0 = vec![0u8; v.len()];
    w0[k ^ 1] = 1; // partner coordinate under the interleaved form
    let mut w: Vec2n = (0..v.len()).map(|_| u8::from(rng.gen_bool(0.5))).collect();
    if sp_inner(v, &w) == 0 {
        xor_into(&mut w, &w0);
    }
    debug_assert_eq!(sp_inner(v, &w), 1);
    w
}

/// Transvections sending x to y (one or two of them).
fn find_transvections<R: Rng + ?Sized>(x: &Vec2n, y: &Vec2n, rng: &mut R) -> Vec<Vec2n> {
    if x == y {
        return vec![];
    }
    if sp_inner(x, y) == 1 {
        let mut h = x.clone();
        xor_into(&mut h, y);
        return vec![h];
    }
    // find z with <x,z> = <y,z> = 1 by rejection
    loop {
        let z = random_nonzero(x.len(), rng);
        if sp_inner(x, &z) == 1 && sp_inner(y, &z) == 1 {
            let mut h1 = x.clone();
            xor_into(&mut h1, &z);
            let mut h2 = z.clone();
            xor_into(&mut h2, y);
            return vec![h1, h2];
        }
    }
}

/// Uniform element of Sp(2n, 2) as the list of images of the basis vectors.
fn random_symplectic<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Vec2n> {
    if n == 0 {
        return vec![];
    }
    let dim = 2 * n;
    let embed = |v: &Vec2n| -> Vec2n {
        let mut out = vec![0u8; dim];
        out[2..2 + v.len()].copy_from_slice(v);
        out
    };
    // S fixes e0, e1 and acts as a uniform symplectic on the complement
    let inner = random_symplectic(n - 1, rng);
    let mut rows: Vec<Vec2n> = Vec::with_capacity(dim);
    let mut e0 = vec![0u8; dim];
    e0[0] = 1;
    let mut e1 = vec![0u8; dim];
    e1[1] = 1;
    rows.push(e0.clone());
    rows.push(e1.clone());
    for r in inner {
        rows.push(embed(&r));
    }
    // G maps (e0, e1) to a uniform hyperbolic pair (v1, v2)
    let v1 = random_nonzero(dim, rng);
    let v2 = random_sp_partner(&v1, rng);
    let t1 = find_transvections(&e0, &v1, rng);
    let mut u = e1;
    for h in &t1 {
        transvect(h, &mut u);
    }
    // map u to v2 while fixing v1
    let mut t2: Vec<Vec2n> = Vec::new();
    if u != v2 {
        if sp_inner(&u, &v2) == 1 {
            let mut h = u.clone();
            xor_into(&mut h, &v2);
            debug_assert_eq!(sp_inner(&v1, &h), 0);
            t2.push(h);
        } else {
            // w with <u,w> = <v2,w> = <v1,w> = 1
            let w = loop {
                let z = random_nonzero(dim, rng);
                if sp_inner(&u, &z) == 1 && sp_inner(&v2, &z) == 1 && sp_inner(&v1, &z) == 1 {
                    break z;
                }
            };
            let mut h1 = u.clone();
            xor_into(&mut h1, &w);
            let mut h2 = w.clone();
            xor_into(&mut h2, &v2);
            debug_assert_eq!(sp_inner(&v1, &h1), 0);
            debug_assert_eq!(sp_inner(&v1, &h2), 0);
            t2.push(h1);
            t2.push(h2);
        }
    }
    for row in rows.iter_mut() {
        for h in &t1 {
            transvect(h, row);
        }
        for h in &t2 {
            transvect(h, row);
        }
    }
    rows
}

/// Uniform random Clifford element modulo global phase, as a tableau.
pub fn random_clifford_tableau<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StabilizerTableau {
    let rows = random_symplectic(n, rng);
    let mut destab = Vec::with_capacity(n);
    let mut stab = Vec::with_capacity(n);
    for q in 0..n {
        destab.push((rows[2 * q].clone(), u8::from(rng.gen_bool(0.5))));
        stab.push((rows[2 * q + 1].clone(), u8::from(rng.gen_bool(0.5))));
    }
    StabilizerTableau::from_symplectic_rows(n, &destab, &stab)
        .expect("symplectic construction yields a valid tableau")
}

/// Invert a circuit's gate layers (no measurement handling).
pub fn invert_circuit(c: &Circuit) -> Circuit {
    let mut inv = Circuit::new(c.n);
    for layer in c.layers.iter().rev() {
        let gates: Vec<Gate> = layer
            .iter()
            .map(|g| match g {
                Gate::S(q) => Gate::Sdg(*q),
                Gate::Sdg(q) => Gate::S(*q),
                other => *other,
            })
            .collect();
        inv.push_layer(gates).expect("valid source layer");
    }
    inv
}

/// One randomized-Clifford baseline sample:
/// `(2^n + 1) <p| U O U† |p> - tr O` with U exactly uniform and `p` measured
/// on U applied to the state. Runs on the dense backend.
pub fn clifford_baseline_sample<R: Rng + ?Sized>(
    state: &QuantumState,
    obs: &Observable,
    rng: &mut R,
) -> Result<f64, ShadowError> {
    clifford_baseline_noisy(state, obs, &NoiseModel::noiseless(), rng)
}

/// Baseline sample with Pauli noise on the physical circuit; the estimator
/// still uses the ideal sampled unitary.
pub fn clifford_baseline_noisy<R: Rng + ?Sized>(
    state: &QuantumState,
    obs: &Observable,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<f64, ShadowError> {
    let n = state.n();
    let cap = crate::dense_cap();
    let dense = state.to_dense(cap)?;
    let tableau = random_clifford_tableau(n, rng);
    let circuit = tableau.to_circuit();
    let p = super::sample::measure_noisy_dense(&dense, &circuit, noise, rng)?;
    // phi = U† |p>
    let mut phi = DenseState::basis_state(n, &p);
    phi.apply_circuit(&invert_circuit(&circuit))?;
    let val = obs.expval_dense_state(&phi)?;
    Ok((2f64.powi(n as i32) + 1.0) * val - obs.trace())
}

/// Canonical byte key of a tableau modulo global phase (tests use this for
/// uniformity counting).
pub fn tableau_key(t: &StabilizerTableau) -> Vec<u8> {
    t.canonical_key()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::QsimError;
    use std::collections::{HashMap, HashSet, VecDeque};

    /// Group enumeration oracle: BFS closure over generators.
    fn enumerate_clifford(n: usize) -> HashSet<Vec<u8>> {
        let mut gens: Vec<Gate> = Vec::new();
        for q in 0..n {
            gens.push(Gate::H(q));
            gens.push(Gate::S(q));
        }
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    gens.push(Gate::Cnot(a, b));
                }
            }
        }
        let start = StabilizerTableau::zero_state(n);
        let mut seen = HashSet::new();
        seen.insert(tableau_key(&start));
        let mut queue = VecDeque::new();
        queue.push_back(start);
        while let Some(t) = queue.pop_front() {
            for g in &gens {
                let mut u = t.clone();
                u.apply_gate(g);
                if seen.insert(tableau_key(&u)) {
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    #[test]
    fn clifford_group_sizes() {
        assert_eq!(enumerate_clifford(1).len(), 24);
        assert_eq!(enumerate_clifford(2).len(), 11520);
    }

    #[test]
    fn sampled_tableaus_are_valid() {
        let mut rng = crate::rng::stream_rng(141, 0, 0);
        for n in 1..=6 {
            for _ in 0..50 {
                let t = random_clifford_tableau(n, &mut rng);
                t.check_invariants().unwrap();
            }
        }
    }

    #[test]
    fn single_qubit_sampling_is_uniform() {
        let group = enumerate_clifford(1);
        let mut rng = crate::rng::stream_rng(142, 0, 0);
        let mut counts: HashMap<Vec<u8>, u64> = HashMap::new();
        let shots = 240_000u64;
        for _ in 0..shots {
            let t = random_clifford_tableau(1, &mut rng);
            *counts.entry(tableau_key(&t)).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 24);
        for k in counts.keys() {
            assert!(group.contains(k));
        }
        // chi-square at significance 1e-3, df = 23: critical ~ 49.7
        let expect = shots as f64 / 24.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expect).powi(2) / expect)
            .sum();
        assert!(chi2 < 49.73, "chi2 = {chi2}");
    }

    #[test]
    fn two_qubit_sampling_is_uniform() {
        let group = enumerate_clifford(2);
        let mut rng = crate::rng::stream_rng(143, 0, 0);
        let mut counts: HashMap<Vec<u8>, u64> = HashMap::new();
        let shots = 1_000_000u64;
        for _ in 0..shots {
            let t = random_clifford_tableau(2, &mut rng);
            *counts.entry(tableau_key(&t)).or_insert(0) += 1;
        }
        for k in counts.keys() {
            assert!(group.contains(k));
        }
        assert_eq!(counts.len(), 11520);
        // chi-square, df = 11519; critical at 1e-3 ~ df + 3.09 sqrt(2 df)
        let df = 11519f64;
        let critical = df + 3.0902 * (2.0 * df).sqrt() + 2.0;
        let expect = shots as f64 / 11520.0;
        let chi2: f64 = counts
            .values()
            .map(|&c| (c as f64 - expect).powi(2) / expect)
            .sum();
        assert!(chi2 < critical, "chi2 = {chi2}, critical = {critical}");
    }

    #[test]
    fn identity_observable_always_one() {
        use nalgebra::DMatrix;
        use num_complex::Complex64;
        let mut rng = crate::rng::stream_rng(144, 0, 0);
        let state = QuantumState::Dense(DenseState::zero_state(2));
        let eye = Observable::Dense(DMatrix::from_diagonal_element(
            4,
            4,
            Complex64::new(1.0, 0.0),
        ));
        for _ in 0..50 {
            let v = clifford_baseline_sample(&state, &eye, &mut rng).unwrap();
            assert!((v - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn baseline_is_unbiased_small() {
        // mean over samples approaches tr(rho O) for random rho, O at n = 2
        use nalgebra::DMatrix;
        use num_complex::Complex64;
        use rand::Rng;
        let mut rng = crate::rng::stream_rng(145, 0, 0);
        let dim = 4usize;
        let mut amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let norm: f64 = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|c| *c /= norm);
        let psi = DenseState::from_amplitudes(amps.clone()).unwrap();
        let mut h = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
        for r in 0..dim {
            for c in 0..=r {
                let v = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                if r == c {
                    h[(r, c)] = Complex64::new(v.re, 0.0);
                } else {
                    h[(r, c)] = v;
                    h[(c, r)] = v.conj();
                }
            }
        }
        let truth = psi.expectation_dense(&h);
        let obs = Observable::Dense(h);
        let state = QuantumState::Dense(psi);
        let shots = 200_000;
        let mut values = Vec::with_capacity(shots);
        for _ in 0..shots {
            values.push(clifford_baseline_sample(&state, &obs, &mut rng).unwrap());
        }
        let mean: f64 = values.iter().sum::<f64>() / shots as f64;
        let var: f64 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / shots as f64;
        let se = (var / shots as f64).sqrt();
        assert!(
            (mean - truth).abs() < 5.0 * se,
            "mean {mean} truth {truth} se {se}"
        );
    }

    #[test]
    fn baseline_respects_dense_cap() {
        let state = QuantumState::Sparse(crate::qsim::SparseState::ghz(40));
        let obs = Observable::ghz(40);
        let mut rng = crate::rng::stream_rng(146, 0, 0);
        let r = clifford_baseline_sample(&state, &obs, &mut rng);
        assert!(matches!(
            r,
            Err(ShadowError::Backend(QsimError::CapExceeded { .. }))
        ));
    }
}
