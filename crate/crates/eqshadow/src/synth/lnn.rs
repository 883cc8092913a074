//! Nearest-neighbor realization of diagonal phase circuits.
//!
//! The CNOT skeleton is a fixed brick pattern `C = [A0, B1, A1, B0]` of
//! alternating neighbor layers. Iterating it sweeps every contiguous parity
//! interval of the inputs across the wires exactly where the lookup table
//! says, and finishes as the qubit-reversal permutation: after m+1 = (n+1)/2
//! applications for odd n, and after n/2 applications plus an [A0, B1] tail
//! for even n. Diagonal phases ride along as S-power insertions at the
//! recorded (slot, wire) positions, giving 2n+2 entangling layers and
//! n^2 - 1 neighbor CNOTs overall.

use std::collections::HashMap;

use crate::eqcore::{EquatorialLabel, Scheme};
use crate::qsim::{Circuit, Gate, Layer};

use super::SynthError;

const LNN_MAX_N: usize = 64;

/// y-space parity variable: `Single(a)` is x_1 xor ... xor x_a (1-indexed),
/// `Pair(a, b)` with a < b is y_a xor y_b.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ParityVar {
    Single(usize),
    Pair(usize, usize),
}

impl ParityVar {
    /// The contiguous 0-indexed inclusive interval [lo, hi] of x-variables
    /// this parity covers.
    pub fn interval(&self) -> (usize, usize) {
        match *self {
            ParityVar::Single(a) => (0, a - 1),
            ParityVar::Pair(a, b) => (a, b - 1),
        }
    }

    /// Evaluate on a packed bit assignment (bit i of x = variable x_{i+1}).
    pub fn eval(&self, x: u64) -> u8 {
        let (lo, hi) = self.interval();
        let mask = ((1u128 << (hi - lo + 1)) - 1) as u64;
        (((x >> lo) & mask).count_ones() % 2) as u8
    }
}

/// The two pattern sequences indexing which interval sits on which wire after
/// each application, as defined for odd n; both have length 2n - 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternPair {
    pub pj: Vec<usize>,
    pub pk: Vec<usize>,
}

/// Pattern pair for odd n >= 3. The even case has no closed pattern here;
/// its schedule comes from `slot_table`, which is validated by the same
/// coverage and reversal checks.
pub fn lnn_patterns(n: usize) -> Result<PatternPair, SynthError> {
    if n < 3 || n % 2 == 0 {
        return Err(SynthError::PatternsOddOnly { n });
    }
    let mut pj = vec![n - 1];
    let mut v = n as i64 - 3;
    while v >= 2 {
        pj.push(v as usize);
        pj.push(v as usize);
        v -= 2;
    }
    let mut v = 1usize;
    while v <= n - 2 {
        pj.push(v);
        pj.push(v);
        v += 2;
    }
    let mut pk = Vec::new();
    let mut v = 3usize;
    while v <= n {
        pk.push(v);
        pk.push(v);
        v += 2;
    }
    let mut v = n as i64 - 1;
    while v >= 4 {
        pk.push(v as usize);
        pk.push(v as usize);
        v -= 2;
    }
    pk.push(2);
    debug_assert_eq!(pj.len(), 2 * n - 3);
    debug_assert_eq!(pk.len(), 2 * n - 3);
    Ok(PatternPair { pj, pk })
}

/// The four alternating neighbor-CNOT layers making up one application of
/// the brick map, split as (C1, C2) = ([A0, B1], [A1, B0]).
pub fn lnn_layers(n: usize) -> Result<(Vec<Layer>, Vec<Layer>), SynthError> {
    if n < 2 {
        return Err(SynthError::TooSmall { n });
    }
    let a_pairs: Vec<(usize, usize)> = (0..n.saturating_sub(1))
        .step_by(2)
        .map(|i| (i, i + 1))
        .collect();
    let b_pairs: Vec<(usize, usize)> = (1..n.saturating_sub(1))
        .step_by(2)
        .map(|i| (i, i + 1))
        .collect();
    let a0: Layer = a_pairs.iter().map(|&(i, j)| Gate::Cnot(i, j)).collect();
    let b1: Layer = b_pairs.iter().map(|&(i, j)| Gate::Cnot(j, i)).collect();
    let a1: Layer = a_pairs.iter().map(|&(i, j)| Gate::Cnot(j, i)).collect();
    let b0: Layer = b_pairs.iter().map(|&(i, j)| Gate::Cnot(i, j)).collect();
    Ok((vec![a0, b1], vec![a1, b0]))
}

/// Brick-pattern schedule: the CNOT layers of the full reversal network plus
/// the wire-interval table at each phase slot.
pub struct LnnSchedule {
    pub n: usize,
    /// CNOT layers grouped per application step (4 each, 2 for the tail).
    pub steps: Vec<Vec<Layer>>,
    /// slots[t][wire] = inclusive interval (lo, hi) present after t steps.
    pub slots: Vec<Vec<(usize, usize)>>,
}

/// Build the schedule by symbolically running the layers on parity masks.
pub fn slot_schedule(n: usize) -> Result<LnnSchedule, SynthError> {
    if n < 1 {
        return Err(SynthError::TooSmall { n });
    }
    if n > LNN_MAX_N {
        return Err(SynthError::TooLargeForLnn { n, max: LNN_MAX_N });
    }
    if n == 1 {
        return Ok(LnnSchedule {
            n,
            steps: vec![],
            slots: vec![vec![(0, 0)]],
        });
    }
    let (c1, c2) = lnn_layers(n)?;
    let full: Vec<Layer> = c1.iter().chain(c2.iter()).cloned().collect();
    let apps = if n % 2 == 1 { (n - 1) / 2 } else { n / 2 };
    let mut steps: Vec<Vec<Layer>> = vec![full.clone(); apps];
    if n % 2 == 0 {
        steps.push(c1.clone());
    } else {
        steps.push(full);
    }

    // symbolic wires as parity masks over the inputs
    let mut wires: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    let mut slots: Vec<Vec<(usize, usize)>> = vec![wires.iter().map(|&w| mask_interval(w)).collect()];
    let phase_slots = if n % 2 == 1 { (n - 1) / 2 } else { n / 2 };
    for (si, step) in steps.iter().enumerate() {
        for layer in step {
            for g in layer {
                if let Gate::Cnot(c, t) = g {
                    wires[*t] ^= wires[*c];
                }
            }
        }
        if si < phase_slots {
            slots.push(wires.iter().map(|&w| mask_interval(w)).collect());
        }
    }
    // final state must be the qubit reversal
    for (i, &w) in wires.iter().enumerate() {
        if w != 1u64 << (n - 1 - i) {
            return Err(SynthError::ScheduleBroken { n });
        }
    }
    Ok(LnnSchedule { n, steps, slots })
}

fn mask_interval(w: u64) -> (usize, usize) {
    debug_assert!(w != 0);
    let lo = w.trailing_zeros() as usize;
    let hi = 63 - w.leading_zeros() as usize;
    debug_assert_eq!(w, (((1u128 << (hi - lo + 1)) - 1) as u64) << lo, "wire not contiguous");
    (lo, hi)
}

/// Express `(-1)^{x_mu x_nu}` (0-indexed, mu < nu) as a Z4 combination of
/// parity variables: constant-size output of singles `y_a` and pairs
/// `y_a xor y_b`.
pub fn decompose_cz_phase(
    mu: usize,
    nu: usize,
    n: usize,
) -> Result<Vec<(ParityVar, u8)>, SynthError> {
    if mu >= nu || nu >= n {
        return Err(SynthError::BadPair { mu, nu, n });
    }
    // x_i (0-indexed) = y_i xor y_{i+1} in 1-indexed y's, with y_0 dropped
    let set_of_x = |i: usize| -> Vec<usize> {
        if i == 0 {
            vec![1]
        } else {
            vec![i, i + 1]
        }
    };
    let sym_diff = |a: &[usize], b: &[usize]| -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for &x in a.iter().chain(b.iter()) {
            if let Some(pos) = out.iter().position(|&y| y == x) {
                out.remove(pos);
            } else {
                out.push(x);
            }
        }
        out.sort_unstable();
        out
    };
    let su = set_of_x(mu);
    let sv = set_of_x(nu);
    // (-1)^{ab} = i^{3a + 3b + (a xor b)}
    let mut terms: Vec<(Vec<usize>, u8)> = vec![
        (su.clone(), 3),
        (sv.clone(), 3),
        (sym_diff(&su, &sv), 1),
    ];
    // reduce all terms to size <= 2
    let mut done: HashMap<Vec<usize>, u8> = HashMap::new();
    while let Some((set, coeff)) = terms.pop() {
        let coeff = coeff % 4;
        if coeff == 0 || set.is_empty() {
            continue;
        }
        if set.len() <= 2 {
            *done.entry(set).or_insert(0) += coeff;
            continue;
        }
        if coeff % 2 == 0 {
            // 2 * XOR(S) = 2 * sum(S) (mod 4)
            for &a in &set {
                terms.push((vec![a], coeff));
            }
            continue;
        }
        // i^{u(a+b+c)} with c the rest: six terms of coefficient 3u
        let a = vec![set[0]];
        let b = vec![set[1]];
        let c: Vec<usize> = set[2..].to_vec();
        let w = (3 * coeff) % 4;
        terms.push((a.clone(), w));
        terms.push((b.clone(), w));
        terms.push((c.clone(), w));
        terms.push((sym_diff(&a, &b), w));
        terms.push((sym_diff(&a, &c), w));
        terms.push((sym_diff(&b, &c), w));
    }
    let mut out = Vec::new();
    let mut keys: Vec<Vec<usize>> = done.keys().cloned().collect();
    keys.sort_unstable();
    for k in keys {
        let coeff = done[&k] % 4;
        if coeff == 0 {
            continue;
        }
        let var = match k.len() {
            1 => ParityVar::Single(k[0]),
            2 => ParityVar::Pair(k[0], k[1]),
            _ => unreachable!("terms reduced to size <= 2"),
        };
        out.push((var, coeff));
    }
    Ok(out)
}

/// Synthesize the diagonal phase unitary of a label in the neighbor-CNOT
/// architecture: the output circuit, run left to right, equals
/// `REV * diag(i^{q_A(x)})` exactly; the reversal is flagged for classical
/// outcome post-processing rather than undone with gates.
pub fn lnn_synthesize(a: &EquatorialLabel) -> Result<Circuit, SynthError> {
    let n = a.n();
    let schedule = slot_schedule(n)?;
    // accumulate Z4 coefficients per interval
    let mut coeffs: HashMap<(usize, usize), u8> = HashMap::new();
    let mut add = |iv: (usize, usize), u: u8| {
        let e = coeffs.entry(iv).or_insert(0);
        *e = (*e + u) % 4;
    };
    for i in 0..n {
        let u = match a.scheme() {
            Scheme::Eq => a.diag()[i],
            Scheme::Req => (2 * a.diag()[i]) % 4,
        };
        add((i, i), u);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if a.offdiag(i, j) == 1 {
                for (var, u) in decompose_cz_phase(i, j, n)? {
                    add(var.interval(), u);
                }
            }
        }
    }
    // first slot/wire where each interval appears
    let mut slot_of: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for (t, row) in schedule.slots.iter().enumerate() {
        for (wire, &iv) in row.iter().enumerate() {
            slot_of.entry(iv).or_insert((t, wire));
        }
    }
    let mut phase_layers: Vec<Layer> = vec![Vec::new(); schedule.slots.len()];
    let mut intervals: Vec<((usize, usize), u8)> = coeffs
        .into_iter()
        .filter(|&(_, u)| u % 4 != 0)
        .collect();
    intervals.sort_unstable();
    for (iv, u) in intervals {
        let &(t, wire) = slot_of
            .get(&iv)
            .ok_or(SynthError::ScheduleBroken { n })?;
        if let Some(g) = Gate::phase_power(wire, u) {
            phase_layers[t].push(g);
        }
    }

    let mut circuit = Circuit::new(n);
    let mut push = |c: &mut Circuit, layer: Layer| -> Result<(), SynthError> {
        if !layer.is_empty() {
            c.push_layer(layer).map_err(SynthError::Circuit)?;
        }
        Ok(())
    };
    push(&mut circuit, phase_layers[0].clone())?;
    for (si, step) in schedule.steps.iter().enumerate() {
        for layer in step {
            push(&mut circuit, layer.clone())?;
        }
        if si + 1 < phase_layers.len() {
            push(&mut circuit, phase_layers[si + 1].clone())?;
        }
    }
    circuit.reverse = true;
    Ok(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqcore::BitString;
    use crate::qsim::DenseState;
    use num_complex::Complex64;
    use std::collections::HashSet;

    #[test]
    fn patterns_match_worked_case() {
        let p = lnn_patterns(5).unwrap();
        assert_eq!(p.pj, vec![4, 2, 2, 1, 1, 3, 3]);
        assert_eq!(p.pk, vec![3, 3, 5, 5, 4, 4, 2]);
        assert!(lnn_patterns(4).is_err());
    }

    #[test]
    fn patterns_agree_with_schedule_for_odd_n() {
        // slot t wire i (1-indexed) holds [Pj(n-3-2(t-1)+i), Pk(2(t-1)+i)]
        for n in [3usize, 5, 7, 9] {
            let pat = lnn_patterns(n).unwrap();
            let sched = slot_schedule(n).unwrap();
            let m = (n - 1) / 2;
            for t in 1..=m {
                for i in 1..=n {
                    let j = pat.pj[n - 3 - 2 * (t - 1) + i - 1];
                    let k = pat.pk[2 * (t - 1) + i - 1];
                    let (lo, hi) = (j.min(k), j.max(k));
                    // patterns are 1-indexed variable names
                    assert_eq!(
                        sched.slots[t][i - 1],
                        (lo - 1, hi - 1),
                        "n={n} t={t} wire={i}"
                    );
                }
            }
        }
    }

    #[test]
    fn schedule_covers_all_intervals_once_for_odd_n() {
        for n in [3usize, 5, 7, 9, 11] {
            let sched = slot_schedule(n).unwrap();
            let mut seen = HashSet::new();
            for row in &sched.slots {
                for &iv in row {
                    assert!(seen.insert(iv), "n={n}: interval {iv:?} repeated");
                }
            }
            assert_eq!(seen.len(), n * (n + 1) / 2);
        }
    }

    #[test]
    fn schedule_covers_all_intervals_for_even_n() {
        for n in [2usize, 4, 6, 8, 10, 12] {
            let sched = slot_schedule(n).unwrap();
            let mut seen = HashSet::new();
            for row in &sched.slots {
                for &iv in row {
                    seen.insert(iv);
                }
            }
            assert_eq!(seen.len(), n * (n + 1) / 2, "n={n}");
        }
    }

    #[test]
    fn reversal_verified_by_construction() {
        // slot_schedule errors out if the network is not the reversal
        for n in 1..=16 {
            assert!(slot_schedule(n).is_ok(), "n={n}");
        }
    }

    #[test]
    fn decomposition_reproduces_cz_sign_exhaustively() {
        for n in 2..=8usize {
            for mu in 0..n {
                for nu in (mu + 1)..n {
                    let terms = decompose_cz_phase(mu, nu, n).unwrap();
                    for x in 0..1u64 << n {
                        let mut e = 0u32;
                        for (var, u) in &terms {
                            e += (*u as u32) * var.eval(x) as u32;
                        }
                        let want = (((x >> mu) & 1) * ((x >> nu) & 1) * 2) as u32;
                        assert_eq!(e % 4, want % 4, "n={n} mu={mu} nu={nu} x={x:b}");
                    }
                }
            }
        }
    }

    #[test]
    fn adjacent_pair_uses_three_consecutive_parities() {
        let n = 6;
        let nu = 3usize;
        let mu = nu - 1;
        let terms = decompose_cz_phase(mu, nu, n).unwrap();
        // only y-indices {nu-1, nu, nu+1} may appear
        for (var, _) in &terms {
            let idx: Vec<usize> = match var {
                ParityVar::Single(a) => vec![*a],
                ParityVar::Pair(a, b) => vec![*a, *b],
            };
            for i in idx {
                assert!((nu - 1..=nu + 1).contains(&i), "unexpected y_{i}");
            }
        }
    }

    #[test]
    fn two_qubit_cz_diagonal_check() {
        let terms = decompose_cz_phase(0, 1, 2).unwrap();
        for x in 0..4u64 {
            let mut e = 0u32;
            for (var, u) in &terms {
                e += (*u as u32) * var.eval(x) as u32;
            }
            let want = if x == 3 { 2 } else { 0 };
            assert_eq!(e % 4, want);
        }
    }

    fn check_label(a: &EquatorialLabel) {
        let n = a.n();
        let circuit = lnn_synthesize(a).unwrap();
        assert!(circuit.reverse);
        // gate set: neighbor CNOTs and S-powers only
        for g in circuit.gates() {
            match g {
                Gate::Cnot(c, t) => assert_eq!(c.abs_diff(*t), 1),
                Gate::S(_) | Gate::Sdg(_) | Gate::Z(_) => {}
                other => panic!("unexpected gate {other:?}"),
            }
        }
        // unitary equals diag(i^q) after undoing the flagged reversal
        for x in 0..1u64 << n {
            let mut psi = DenseState::basis_state(n, &BitString::from_index(x, n));
            psi.apply_circuit(&circuit).unwrap();
            let mut rev = BitString::from_index(x, n);
            rev.reverse();
            let amp = psi.amplitudes()[rev.to_index() as usize];
            let q = a
                .quadratic_phase(&BitString::from_index(x, n))
                .unwrap();
            let want = crate::eqcore::i_pow(q);
            assert!(
                (amp - want).norm() < 1e-10,
                "x={x:b}: amp {amp} want {want}"
            );
            let norm: f64 = psi.amplitudes().iter().map(Complex64::norm_sqr).sum();
            assert!((norm - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_label_is_pure_reversal() {
        for n in 2..=6 {
            let a = EquatorialLabel::zero(Scheme::Eq, n);
            let c = lnn_synthesize(&a).unwrap();
            assert!(c.gates().all(|g| matches!(g, Gate::Cnot(..))));
            check_label(&a);
        }
    }

    #[test]
    fn random_labels_synthesize_exactly() {
        let mut rng = crate::rng::stream_rng(81, 0, 0);
        for n in 2..=7 {
            for _ in 0..8 {
                let scheme = if n % 2 == 0 { Scheme::Eq } else { Scheme::Req };
                let a = EquatorialLabel::sample_uniform(scheme, n, &mut rng);
                check_label(&a);
            }
        }
    }
}
