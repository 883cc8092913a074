//! Stabilizer tableau backend with destabilizer bookkeeping.

use rand::Rng;

use crate::eqcore::BitString;

use super::circuit::{Circuit, Gate};
use super::noise::Pauli;
use super::QsimError;

/// One Pauli row: sign bit `r` and per-qubit X/Z bits; `(1,1)` encodes Y.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Row {
    x: Vec<u8>,
    z: Vec<u8>,
    r: u8,
}

impl Row {
    fn zero(n: usize) -> Self {
        Self {
            x: vec![0; n],
            z: vec![0; n],
            r: 0,
        }
    }
}

/// CHP-style tableau: rows 0..n are destabilizers, n..2n stabilizers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    rows: Vec<Row>,
}

impl StabilizerTableau {
    /// |0...0>: destabilizers X_i, stabilizers Z_i.
    pub fn zero_state(n: usize) -> Self {
        let mut rows = vec![Row::zero(n); 2 * n];
        for i in 0..n {
            rows[i].x[i] = 1;
            rows[n + i].z[i] = 1;
        }
        Self { n, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply_gate(&mut self, g: &Gate) {
        match *g {
            Gate::H(q) => {
                for row in &mut self.rows {
                    row.r ^= row.x[q] & row.z[q];
                    std::mem::swap(&mut row.x[q], &mut row.z[q]);
                }
            }
            Gate::S(q) => {
                for row in &mut self.rows {
                    row.r ^= row.x[q] & row.z[q];
                    row.z[q] ^= row.x[q];
                }
            }
            Gate::Sdg(q) => {
                for row in &mut self.rows {
                    row.r ^= row.x[q] & (row.z[q] ^ 1);
                    row.z[q] ^= row.x[q];
                }
            }
            Gate::Z(q) => {
                for row in &mut self.rows {
                    row.r ^= row.x[q];
                }
            }
            Gate::X(q) => {
                for row in &mut self.rows {
                    row.r ^= row.z[q];
                }
            }
            Gate::Cnot(c, t) => {
                for row in &mut self.rows {
                    row.r ^= row.x[c] & row.z[t] & (row.x[t] ^ row.z[c] ^ 1);
                    row.x[t] ^= row.x[c];
                    row.z[c] ^= row.z[t];
                }
            }
            Gate::Cz(a, b) => {
                self.apply_gate(&Gate::H(b));
                self.apply_gate(&Gate::Cnot(a, b));
                self.apply_gate(&Gate::H(b));
            }
        }
    }

    pub fn apply_pauli(&mut self, q: usize, p: Pauli) {
        match p {
            Pauli::I => {}
            Pauli::X => self.apply_gate(&Gate::X(q)),
            Pauli::Z => self.apply_gate(&Gate::Z(q)),
            Pauli::Y => {
                self.apply_gate(&Gate::Z(q));
                self.apply_gate(&Gate::X(q));
            }
        }
    }

    /// Apply all gate layers (Clifford by construction of `Gate`).
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
        Ok(())
    }

    /// Phase contribution of multiplying row `i` into row `h` (per qubit).
    fn g_accum(x1: u8, z1: u8, x2: u8, z2: u8) -> i32 {
        match (x1, z1) {
            (0, 0) => 0,
            (1, 1) => z2 as i32 - x2 as i32,
            (1, 0) => z2 as i32 * (2 * x2 as i32 - 1),
            _ => x2 as i32 * (1 - 2 * z2 as i32),
        }
    }

    /// row_h <- row_i * row_h (Pauli product, exact sign tracking).
    fn rowsum(&mut self, h: usize, i: usize) {
        let (rh, ri) = if h < i {
            let (a, b) = self.rows.split_at_mut(i);
            (&mut a[h], &b[0])
        } else {
            let (a, b) = self.rows.split_at_mut(h);
            (&mut b[0], &a[i])
        };
        let mut phase = 2 * rh.r as i32 + 2 * ri.r as i32;
        for q in 0..rh.x.len() {
            phase += Self::g_accum(ri.x[q], ri.z[q], rh.x[q], rh.z[q]);
            rh.x[q] ^= ri.x[q];
            rh.z[q] ^= ri.z[q];
        }
        debug_assert_eq!(phase.rem_euclid(2), 0);
        rh.r = ((phase.rem_euclid(4)) / 2) as u8;
    }

    fn random_stab_row(&self, q: usize) -> Option<usize> {
        (self.n..2 * self.n).find(|&i| self.rows[i].x[q] == 1)
    }

    fn collapse(&mut self, q: usize, p: usize, outcome: u8) {
        // the paired destabilizer p - n anticommutes with row p and is
        // overwritten below, so it is excluded from the sweep
        for i in 0..2 * self.n {
            if i != p && i != p - self.n && self.rows[i].x[q] == 1 {
                self.rowsum(i, p);
            }
        }
        self.rows[p - self.n] = self.rows[p].clone();
        let mut z = Row::zero(self.n);
        z.z[q] = 1;
        z.r = outcome;
        self.rows[p] = z;
    }

    fn deterministic_outcome(&self, q: usize) -> u8 {
        // accumulate product of stabilizers indexed by destabilizer x-bits
        let mut scratch = Row::zero(self.n);
        let mut phase = 0i32;
        for i in 0..self.n {
            if self.rows[i].x[q] == 1 {
                let src = &self.rows[self.n + i];
                phase += 2 * src.r as i32;
                for qq in 0..self.n {
                    phase += Self::g_accum(src.x[qq], src.z[qq], scratch.x[qq], scratch.z[qq]);
                    scratch.x[qq] ^= src.x[qq];
                    scratch.z[qq] ^= src.z[qq];
                }
            }
        }
        ((phase.rem_euclid(4)) / 2) as u8
    }

    /// Measure qubit `q` in the Z basis, collapsing the state.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> u8 {
        match self.random_stab_row(q) {
            Some(p) => {
                let outcome = u8::from(rng.gen_bool(0.5));
                self.collapse(q, p, outcome);
                outcome
            }
            None => self.deterministic_outcome(q),
        }
    }

    /// Measure every qubit in ascending order (one rng draw per random
    /// outcome).
    pub fn measure_z_all<R: Rng + ?Sized>(&mut self, rng: &mut R) -> BitString {
        let mut p = BitString::zeros(self.n);
        for q in 0..self.n {
            p.set(q, self.measure_z(q, rng));
        }
        p
    }

    /// Run a circuit and sample its terminal measurement spec.
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
        super::dense::apply_outcome_bookkeeping(circuit, &mut p);
        Ok(p)
    }

    /// Exact full-measurement distribution by branching on random outcomes.
    /// Exponential in the number of random qubits; intended for tests.
    pub fn outcome_distribution(&self) -> Vec<(BitString, f64)> {
        let mut out = Vec::new();
        let mut stack = vec![(self.clone(), BitString::zeros(self.n), 1.0f64, 0usize)];
        while let Some((mut tab, mut bits, prob, q)) = stack.pop() {
            if q == self.n {
                out.push((bits, prob));
                continue;
            }
            match tab.random_stab_row(q) {
                Some(p) => {
                    let mut other = tab.clone();
                    tab.collapse(q, p, 0);
                    let mut b0 = bits.clone();
                    b0.set(q, 0);
                    stack.push((tab, b0, prob / 2.0, q + 1));
                    other.collapse(q, p, 1);
                    bits.set(q, 1);
                    stack.push((other, bits, prob / 2.0, q + 1));
                }
                None => {
                    let o = tab.deterministic_outcome(q);
                    bits.set(q, o);
                    stack.push((tab, bits, prob, q + 1));
                }
            }
        }
        out
    }

    fn stab_vector(&self, i: usize) -> Vec<u8> {
        let row = &self.rows[self.n + i];
        row.x.iter().chain(row.z.iter()).copied().collect()
    }

    /// Squared overlap |<self|other>|^2: either 0 or 2^(k-n) with k the
    /// dimension of the stabilizer-group intersection, zero when any shared
    /// element carries opposite signs.
    pub fn overlap_sq(&self, other: &StabilizerTableau) -> Result<f64, QsimError> {
        if self.n != other.n {
            return Err(QsimError::QubitOutOfRange {
                qubit: other.n,
                n: self.n,
            });
        }
        let n = self.n;
        let a: Vec<Vec<u8>> = (0..n).map(|i| self.stab_vector(i)).collect();
        let b: Vec<Vec<u8>> = (0..n).map(|i| other.stab_vector(i)).collect();
        let inter = subspace_intersection(&a, &b);
        for v in &inter {
            let sa = pauli_sign_in_group(self, v);
            let sb = pauli_sign_in_group(other, v);
            if sa != sb {
                return Ok(0.0);
            }
        }
        Ok(2f64.powi(inter.len() as i32 - n as i32))
    }

    /// Circuit preparing this state from |0..0> (up to global phase), via
    /// tableau reduction; also valid as a synthesis of the tableau's unitary.
    pub fn to_circuit(&self) -> Circuit {
        let mut t = self.clone();
        let n = self.n;
        let mut gates: Vec<Gate> = Vec::new();
        let mut emit = |t: &mut Self, g: Gate| {
            t.apply_gate(&g);
            gates.push(g);
        };
        for i in 0..n {
            // destabilizer row i -> +-X_i
            if !t.rows[i].x[i..].contains(&1) {
                let j = (i..n).find(|&j| t.rows[i].z[j] == 1).expect("full rank");
                emit(&mut t, Gate::H(j));
            }
            let j = (i..n).find(|&j| t.rows[i].x[j] == 1).expect("x pivot");
            if j != i {
                emit(&mut t, Gate::Cnot(i, j));
                emit(&mut t, Gate::Cnot(j, i));
                emit(&mut t, Gate::Cnot(i, j));
            }
            for k in (i + 1)..n {
                if t.rows[i].x[k] == 1 {
                    emit(&mut t, Gate::Cnot(i, k));
                }
            }
            if t.rows[i].z[i] == 1 {
                emit(&mut t, Gate::S(i));
            }
            for k in (i + 1)..n {
                if t.rows[i].z[k] == 1 {
                    emit(&mut t, Gate::Cz(i, k));
                }
            }
            // stabilizer row n+i -> +-Z_i
            let s = n + i;
            let stab_done = |t: &Self| {
                let row = &t.rows[s];
                row.x[i..].iter().all(|&b| b == 0)
                    && row.z[i] == 1
                    && row.z[i + 1..].iter().all(|&b| b == 0)
            };
            if !stab_done(&t) {
                emit(&mut t, Gate::H(i));
                debug_assert_eq!(t.rows[s].x[i], 1);
                for k in (i + 1)..n {
                    if t.rows[s].x[k] == 1 {
                        emit(&mut t, Gate::Cnot(i, k));
                    }
                }
                if t.rows[s].z[i] == 1 {
                    emit(&mut t, Gate::S(i));
                }
                for k in (i + 1)..n {
                    if t.rows[s].z[k] == 1 {
                        emit(&mut t, Gate::Cz(i, k));
                    }
                }
                emit(&mut t, Gate::H(i));
            }
        }
        for i in 0..n {
            if t.rows[i].r == 1 {
                emit(&mut t, Gate::Z(i));
            }
            if t.rows[n + i].r == 1 {
                emit(&mut t, Gate::X(i));
            }
        }
        debug_assert_eq!(t, Self::zero_state(n));
        // recorded gates reduce U to identity; invert and reverse
        let mut c = Circuit::new(n);
        for g in gates.into_iter().rev() {
            let inv = match g {
                Gate::S(q) => Gate::Sdg(q),
                Gate::Sdg(q) => Gate::S(q),
                other => other,
            };
            c.push_layer(vec![inv]).expect("single-gate layer");
        }
        c
    }

    /// Build a tableau from interleaved symplectic vectors
    /// (x_0, z_0, x_1, z_1, ...) with sign bits, destabilizers first.
    pub fn from_symplectic_rows(
        n: usize,
        destab: &[(Vec<u8>, u8)],
        stab: &[(Vec<u8>, u8)],
    ) -> Result<Self, QsimError> {
        if destab.len() != n || stab.len() != n {
            return Err(QsimError::InvalidTableau("wrong generator count"));
        }
        let unpack = |(v, r): &(Vec<u8>, u8)| -> Result<Row, QsimError> {
            if v.len() != 2 * n {
                return Err(QsimError::InvalidTableau("wrong vector length"));
            }
            Ok(Row {
                x: (0..n).map(|q| v[2 * q]).collect(),
                z: (0..n).map(|q| v[2 * q + 1]).collect(),
                r: r & 1,
            })
        };
        let mut rows = Vec::with_capacity(2 * n);
        for d in destab {
            rows.push(unpack(d)?);
        }
        for s in stab {
            rows.push(unpack(s)?);
        }
        let t = Self { n, rows };
        t.check_invariants()?;
        Ok(t)
    }

    /// Canonical byte key (bits and signs); tableaus equal modulo global
    /// phase produce identical keys.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.rows.len() * (2 * self.n + 1));
        for row in &self.rows {
            out.extend_from_slice(&row.x);
            out.extend_from_slice(&row.z);
            out.push(row.r);
        }
        out
    }

    /// True when every stabilizer generator carries an even number of Y
    /// factors, which holds exactly when the projector onto this state is a
    /// real matrix in the computational basis.
    pub fn all_stabilizers_real(&self) -> bool {
        (self.n..2 * self.n).all(|i| {
            let row = &self.rows[i];
            row.x
                .iter()
                .zip(&row.z)
                .fold(0u8, |acc, (&x, &z)| acc ^ (x & z))
                == 0
        })
    }

    /// Structural invariants: stabilizers commute, destabilizer i
    /// anticommutes exactly with stabilizer i, and the rows are independent.
    pub fn check_invariants(&self) -> Result<(), QsimError> {
        let n = self.n;
        let symp = |a: &Row, b: &Row| -> u8 {
            let mut s = 0u8;
            for q in 0..n {
                s ^= (a.x[q] & b.z[q]) ^ (a.z[q] & b.x[q]);
            }
            s
        };
        for i in 0..n {
            for j in 0..n {
                if symp(&self.rows[n + i], &self.rows[n + j]) != 0 {
                    return Err(QsimError::InvalidTableau("stabilizers must commute"));
                }
                let want = u8::from(i == j);
                if symp(&self.rows[i], &self.rows[n + j]) != want {
                    return Err(QsimError::InvalidTableau("destabilizer pairing broken"));
                }
            }
        }
        let vectors: Vec<Vec<u8>> = (0..2 * n)
            .map(|i| {
                self.rows[i]
                    .x
                    .iter()
                    .chain(self.rows[i].z.iter())
                    .copied()
                    .collect()
            })
            .collect();
        if gf2_rank(vectors) != 2 * n {
            return Err(QsimError::InvalidTableau("rows not independent"));
        }
        Ok(())
    }
}

fn gf2_rank(mut rows: Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        if let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] == 1) {
            rows.swap(rank, p);
            for r in 0..rows.len() {
                if r != rank && rows[r][c] == 1 {
                    let (a, b) = if r < rank {
                        let (x, y) = rows.split_at_mut(rank);
                        (&mut x[r], &y[0])
                    } else {
                        let (x, y) = rows.split_at_mut(r);
                        (&mut y[0], &x[rank])
                    };
                    for (ai, bi) in a.iter_mut().zip(b.iter()) {
                        *ai ^= bi;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Basis of the intersection of two GF(2) row spaces (Zassenhaus).
fn subspace_intersection(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let d = a.first().or(b.first()).map_or(0, Vec::len);
    // rows [u | u] for u in A, [v | 0] for v in B
    let mut rows: Vec<Vec<u8>> = Vec::new();
    for u in a {
        let mut r = u.clone();
        r.extend(u.iter().copied());
        rows.push(r);
    }
    for v in b {
        let mut r = v.clone();
        r.extend(std::iter::repeat(0).take(d));
        rows.push(r);
    }
    // eliminate on the left block
    let mut rank = 0usize;
    for c in 0..d {
        if let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] == 1) {
            rows.swap(rank, p);
            for r in 0..rows.len() {
                if r != rank && rows[r][c] == 1 {
                    let pivot = rows[rank].clone();
                    for (ai, bi) in rows[r].iter_mut().zip(pivot.iter()) {
                        *ai ^= bi;
                    }
                }
            }
            rank += 1;
        }
    }
    // rows with zero left block: right block spans the intersection
    let tail: Vec<Vec<u8>> = rows[rank..]
        .iter()
        .map(|r| r[d..].to_vec())
        .filter(|v| v.iter().any(|&b| b == 1))
        .collect();
    // reduce to a basis
    let mut basis: Vec<Vec<u8>> = Vec::new();
    let mut work = tail;
    let mut r0 = 0usize;
    for c in 0..d {
        if let Some(p) = (r0..work.len()).find(|&r| work[r][c] == 1) {
            work.swap(r0, p);
            let pivot = work[r0].clone();
            for (rr, row) in work.iter_mut().enumerate() {
                if rr != r0 && row[c] == 1 {
                    for (ai, bi) in row.iter_mut().zip(pivot.iter()) {
                        *ai ^= bi;
                    }
                }
            }
            basis.push(pivot);
            r0 += 1;
        }
    }
    basis
}

/// Sign (+1 -> 0, -1 -> 1) of the Pauli with symplectic vector `v` inside the
/// stabilizer group of `tab`. `v` must lie in the group's row space.
fn pauli_sign_in_group(tab: &StabilizerTableau, v: &[u8]) -> u8 {
    let n = tab.n;
    // echelonize generators, tracking which products realize each pivot row
    #[derive(Clone)]
    struct Acc {
        vec: Vec<u8>,
        members: Vec<usize>,
    }
    let mut rows: Vec<Acc> = (0..n)
        .map(|i| Acc {
            vec: tab.stab_vector(i),
            members: vec![i],
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (col, row index)
    let mut rank = 0usize;
    for c in 0..2 * n {
        if let Some(p) = (rank..rows.len()).find(|&r| rows[r].vec[c] == 1) {
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (rr, row) in rows.iter_mut().enumerate() {
                if rr != rank && row.vec[c] == 1 {
                    for (ai, bi) in row.vec.iter_mut().zip(pivot.vec.iter()) {
                        *ai ^= bi;
                    }
                    row.members.extend(pivot.members.iter().copied());
                }
            }
            pivots.push((c, rank));
            rank += 1;
        }
    }
    // decompose v over the echelon rows
    let mut residue = v.to_vec();
    let mut members: Vec<usize> = Vec::new();
    for &(c, r) in &pivots {
        if residue[c] == 1 {
            for (ai, bi) in residue.iter_mut().zip(rows[r].vec.iter()) {
                *ai ^= bi;
            }
            members.extend(rows[r].members.iter().copied());
        }
    }
    debug_assert!(residue.iter().all(|&b| b == 0), "vector outside group");
    // multiply the chosen generators (mod-2 multiplicity)
    let mut counts = vec![0u32; n];
    for m in members {
        counts[m] += 1;
    }
    let mut acc = Row::zero(n);
    let mut phase = 0i32;
    for (i, &cnt) in counts.iter().enumerate() {
        if cnt % 2 == 1 {
            let src = &tab.rows[n + i];
            phase += 2 * src.r as i32;
            for q in 0..n {
                phase += StabilizerTableau::g_accum(src.x[q], src.z[q], acc.x[q], acc.z[q]);
                acc.x[q] ^= src.x[q];
                acc.z[q] ^= src.z[q];
            }
        }
    }
    debug_assert_eq!(phase.rem_euclid(2), 0);
    ((phase.rem_euclid(4)) / 2) as u8
}
