//! Exact evaluation of exponential sums of Z4-valued quadratic forms.
//!
//! Sums of the shape `W = sum_x i^{L(x) + 2 Q(x)}` with `L` linear over Z4 and
//! `Q` binary quadratic are reduced one variable at a time. Summing a
//! variable with odd linear coefficient contributes `sqrt(2) e^{+-i pi/4}`
//! and leaves a parity term that re-expands into the form; an even
//! coefficient turns into a parity constraint that either eliminates a second
//! variable, contributes a factor 2, or kills the sum. Every intermediate
//! quantity is a power of sqrt(2) times an eighth root of unity, so the
//! result is exact up to final float rounding.

use num_complex::Complex64;

use super::bits::BitString;
use super::label::{EquatorialLabel, Scheme};
use super::EqError;

/// `L(x) + 2 Q(x)` with linear coefficients in Z4 and binary pair couplings.
#[derive(Clone, Debug)]
pub struct QuadraticForm {
    n: usize,
    linear: Vec<u8>,
    quad: Vec<Vec<u8>>,
}

impl QuadraticForm {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            linear: vec![0; n],
            quad: vec![vec![0; n]; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_linear(&mut self, i: usize, c: u8) {
        self.linear[i] = (self.linear[i] + c) % 4;
    }

    /// Toggle the coupling `2 x_i x_j`.
    pub fn toggle_pair(&mut self, i: usize, j: usize) {
        assert!(i != j);
        self.quad[i][j] ^= 1;
        self.quad[j][i] ^= 1;
    }

    /// Z4 exponent at one assignment. O(n^2); used by the brute-force path.
    pub fn exponent(&self, x: &BitString) -> u8 {
        let mut e = 0u32;
        for i in 0..self.n {
            if x.get(i) == 1 {
                e += self.linear[i] as u32;
                for j in (i + 1)..self.n {
                    if x.get(j) == 1 {
                        e += 2 * self.quad[i][j] as u32;
                    }
                }
            }
        }
        (e % 4) as u8
    }

    /// `sum_x i^{L(x) + 2Q(x)}` over all 2^n assignments, via variable
    /// elimination in O(n^3).
    pub fn exponential_sum(&self) -> Complex64 {
        let mut form = self.clone();
        let mut alive: Vec<bool> = vec![true; form.n];
        // value accumulates as 2^(pow2/2) * e^(i pi phase8 / 4)
        let mut pow2: i64 = 0;
        let mut phase8: u32 = 0;

        loop {
            let Some(v) = (0..form.n).find(|&i| alive[i]) else {
                break;
            };
            alive[v] = false;
            let neighbors: Vec<usize> = (0..form.n)
                .filter(|&w| alive[w] && form.quad[v][w] == 1)
                .collect();
            for &w in &neighbors {
                form.quad[v][w] = 0;
                form.quad[w][v] = 0;
            }
            let c = form.linear[v];
            if c % 2 == 1 {
                // 1 + i^(c + 2l) = sqrt2 * e^(+-i pi/4) * i^(m*l), l = parity
                pow2 += 1;
                let m = if c == 1 {
                    phase8 += 1;
                    3
                } else {
                    phase8 += 7;
                    1
                };
                form.add_parity_multiple(&neighbors, m);
            } else {
                let target = c / 2;
                if neighbors.is_empty() {
                    if target == 0 {
                        pow2 += 2;
                    } else {
                        return Complex64::new(0.0, 0.0);
                    }
                } else {
                    // parity constraint XOR(neighbors) = target; eliminate a pivot
                    let pivot = neighbors[0];
                    let rest = &neighbors[1..];
                    alive[pivot] = false;
                    pow2 += 2;
                    phase8 += form.substitute(pivot, target, rest, &alive);
                }
            }
            phase8 %= 8;
        }

        let mag = 2f64.powf(pow2 as f64 / 2.0);
        let ang = std::f64::consts::FRAC_PI_4 * phase8 as f64;
        mag * Complex64::new(ang.cos(), ang.sin())
    }

    /// Add `m * XOR(set)` (odd m) to the exponent:
    /// `m*XOR = m*sum + 2*e2 (mod 4)`.
    fn add_parity_multiple(&mut self, set: &[usize], m: u8) {
        debug_assert_eq!(m % 2, 1);
        for &a in set {
            self.add_linear(a, m);
        }
        for (idx, &a) in set.iter().enumerate() {
            for &b in &set[idx + 1..] {
                self.toggle_pair(a, b);
            }
        }
    }

    /// Substitute `x_pivot = target XOR P`, `P = XOR(rest)`, into the linear
    /// and quadratic terms of `pivot`. Returns a global phase in eighths.
    fn substitute(&mut self, pivot: usize, target: u8, rest: &[usize], alive: &[bool]) -> u32 {
        let mut phase8 = 0u32;
        let cj = self.linear[pivot];
        self.linear[pivot] = 0;
        // c_j * x_pivot = [target=1] (c_j - c_j P) else c_j P
        let cp = if target == 1 {
            phase8 += 2 * cj as u32;
            (4 - cj) % 4
        } else {
            cj
        };
        if cp != 0 {
            for &a in rest {
                self.add_linear(a, cp);
            }
            if cp % 2 == 1 {
                for (idx, &a) in rest.iter().enumerate() {
                    for &b in &rest[idx + 1..] {
                        self.toggle_pair(a, b);
                    }
                }
            }
        }
        // couplings 2 x_pivot x_k -> 2 target x_k + sum_{a in rest} 2 x_a x_k
        let coupled: Vec<usize> = (0..self.n)
            .filter(|&k| alive[k] && self.quad[pivot][k] == 1)
            .collect();
        for &k in &coupled {
            self.quad[pivot][k] = 0;
            self.quad[k][pivot] = 0;
            if target == 1 {
                self.add_linear(k, 2);
            }
            for &a in rest {
                if a == k {
                    self.add_linear(k, 2);
                } else {
                    self.toggle_pair(a, k);
                }
            }
        }
        phase8
    }
}

/// Amplitudes of the graph-ish state `2^{-n/2} (-1)^{sum_{(i,j) in edges} x_i x_j + b.x}`.
pub fn graph_state_vector(
    n: usize,
    edges: &[(usize, usize)],
    b: &BitString,
) -> Result<Vec<Complex64>, EqError> {
    validate_edges(n, edges)?;
    if b.len() != n {
        return Err(EqError::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let norm = 0.5f64.powf(n as f64 / 2.0);
    Ok((0..1usize << n)
        .map(|ix| {
            let x = BitString::from_index(ix as u64, n);
            let mut par = b.dot(&x).expect("length checked");
            for &(i, j) in edges {
                par ^= x.get(i) & x.get(j);
            }
            Complex64::new(if par == 0 { norm } else { -norm }, 0.0)
        })
        .collect())
}

fn validate_edges(n: usize, edges: &[(usize, usize)]) -> Result<(), EqError> {
    for &(i, j) in edges {
        if i == j || i >= n || j >= n {
            return Err(EqError::NotAGraph);
        }
    }
    Ok(())
}

/// `<phi_A | psi_{edges,b}>` where the target is the graph-ish state above,
/// evaluated as an exponential sum in O(n^3).
pub fn gauss_overlap_quadratic(
    a: &EquatorialLabel,
    edges: &[(usize, usize)],
    b: &BitString,
) -> Result<Complex64, EqError> {
    let n = a.n();
    validate_edges(n, edges)?;
    if b.len() != n {
        return Err(EqError::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    // 2^-n sum_x i^{ -q_A(x) + 2 q_G(x) + 2 b.x }
    let mut form = QuadraticForm::new(n);
    for i in 0..n {
        let lin = match a.scheme() {
            Scheme::Eq => a.diag()[i],
            Scheme::Req => 2 * a.diag()[i],
        };
        form.add_linear(i, ((4 - lin) % 4 + 2 * b.get(i)) % 4);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if a.offdiag(i, j) == 1 {
                form.toggle_pair(i, j);
            }
        }
    }
    for &(i, j) in edges {
        form.toggle_pair(i, j);
    }
    Ok(form.exponential_sum() * 0.5f64.powi(n as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    /// Independent oracle: the plain 2^n-term sum.
    fn brute_force_sum(form: &QuadraticForm) -> Complex64 {
        let n = form.n();
        let mut acc = Complex64::new(0.0, 0.0);
        for x in 0..1u64 << n {
            acc += crate::eqcore::label::i_pow(form.exponent(&BitString::from_index(x, n)));
        }
        acc
    }

    fn random_form(n: usize, rng: &mut impl Rng) -> QuadraticForm {
        let mut f = QuadraticForm::new(n);
        for i in 0..n {
            f.add_linear(i, rng.gen_range(0..4));
            for j in (i + 1)..n {
                if rng.gen_bool(0.5) {
                    f.toggle_pair(i, j);
                }
            }
        }
        f
    }

    #[test]
    fn elimination_matches_brute_force() {
        let mut rng = crate::rng::stream_rng(101, 0, 0);
        for n in 1..=10 {
            for _ in 0..40 {
                let f = random_form(n, &mut rng);
                let fast = f.exponential_sum();
                let slow = brute_force_sum(&f);
                assert!(
                    (fast - slow).norm() < 1e-10,
                    "n={n}: fast {fast} vs brute {slow}"
                );
            }
        }
    }

    #[test]
    fn identical_states_give_unit_overlap() {
        let mut rng = crate::rng::stream_rng(102, 0, 0);
        for _ in 0..20 {
            let n = 6;
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.gen_bool(0.4) {
                        edges.push((i, j));
                    }
                }
            }
            let mut a = EquatorialLabel::zero(Scheme::Req, n);
            for &(i, j) in &edges {
                a.set_offdiag(i, j, 1);
            }
            let ov = gauss_overlap_quadratic(&a, &edges, &BitString::zeros(n)).unwrap();
            assert!((ov - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn character_orthogonality() {
        let n = 5;
        let a = EquatorialLabel::zero(Scheme::Eq, n);
        let b = BitString::from_bits(vec![0, 1, 0, 1, 1]);
        let ov = gauss_overlap_quadratic(&a, &[], &b).unwrap();
        assert!(ov.norm() < 1e-14);
    }

    #[test]
    fn overlap_matches_dense_oracle() {
        let mut rng = crate::rng::stream_rng(103, 0, 0);
        for n in 2..=10 {
            for _ in 0..15 {
                let scheme = if rng.gen_bool(0.5) {
                    Scheme::Eq
                } else {
                    Scheme::Req
                };
                let a = EquatorialLabel::sample_uniform(scheme, n, &mut rng);
                let mut edges = Vec::new();
                for i in 0..n {
                    for j in (i + 1)..n {
                        if rng.gen_bool(0.5) {
                            edges.push((i, j));
                        }
                    }
                }
                let b = BitString::from_index(rng.gen_range(0..1 << n), n);
                let fast = gauss_overlap_quadratic(&a, &edges, &b).unwrap();
                let target = graph_state_vector(n, &edges, &b).unwrap();
                let slow = crate::eqcore::overlap_dense(&a, &target).unwrap();
                assert!(
                    (fast - slow).norm() < 1e-10,
                    "n={n} scheme={scheme:?}: {fast} vs {slow}"
                );
            }
        }
    }

    #[test]
    fn rejects_self_loops() {
        let a = EquatorialLabel::zero(Scheme::Eq, 3);
        let r = gauss_overlap_quadratic(&a, &[(1, 1)], &BitString::zeros(3));
        assert_eq!(r, Err(EqError::NotAGraph));
    }
}
