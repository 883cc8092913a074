//! Observables and the quadratic forms the estimators need from them.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::eqcore::{
    gauss_overlap_quadratic, graph_state_vector, overlap_dense, overlap_sparse, BitString,
    EquatorialLabel,
};
use crate::qsim::{DenseState, SparseState, StabilizerTableau};
use crate::synth::espovm_measurement_circuit;

use super::ShadowError;

const REALITY_TOL: f64 = 1e-12;

/// Hermitian observable, either dense or a structured pure-state projector.
#[derive(Clone, Debug)]
pub enum Observable {
    /// Dense Hermitian matrix.
    Dense(DMatrix<Complex64>),
    /// |psi><psi| for a dense pure state.
    PureDense(Vec<Complex64>),
    /// |psi><psi| for a sparse pure state.
    PureSparse(SparseState),
    /// Graph-state projector (optionally with a sign character b).
    Graph {
        n: usize,
        edges: Vec<(usize, usize)>,
        b: BitString,
    },
    /// Stabilizer-state projector.
    Stabilizer(StabilizerTableau),
}

impl Observable {
    pub fn ghz(n: usize) -> Self {
        Observable::PureSparse(SparseState::ghz(n))
    }

    pub fn w_state(n: usize) -> Self {
        Observable::PureSparse(SparseState::w_state(n))
    }

    pub fn graph(n: usize, edges: Vec<(usize, usize)>) -> Self {
        Observable::Graph {
            n,
            edges,
            b: BitString::zeros(n),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Observable::Dense(m) => m.nrows().trailing_zeros() as usize,
            Observable::PureDense(v) => v.len().trailing_zeros() as usize,
            Observable::PureSparse(s) => s.n(),
            Observable::Graph { n, .. } => *n,
            Observable::Stabilizer(t) => t.n(),
        }
    }

    pub fn trace(&self) -> f64 {
        match self {
            Observable::Dense(m) => (0..m.nrows()).map(|i| m[(i, i)].re).sum(),
            _ => 1.0,
        }
    }

    /// tr(O_0^2) = tr(O^2) - tr(O)^2 / 2^n for the traceless part O_0.
    pub fn traceless_frobenius_sq(&self) -> f64 {
        let dim = (1u64 << self.n()) as f64;
        match self {
            Observable::Dense(m) => {
                let fro: f64 = m.iter().map(|v| v.norm_sqr()).sum();
                fro - self.trace() * self.trace() / dim
            }
            _ => 1.0 - 1.0 / dim,
        }
    }

    /// Whether the matrix is real in the computational basis (tolerance
    /// 1e-12); pure projectors are real iff the amplitudes share one global
    /// phase up to signs, stabilizer projectors iff every generator carries
    /// an even number of Y factors.
    pub fn is_real(&self) -> bool {
        match self {
            Observable::Dense(m) => m.iter().all(|v| v.im.abs() <= REALITY_TOL),
            Observable::PureDense(v) => phase_aligned_real(v.iter()),
            Observable::PureSparse(s) => phase_aligned_real(s.components().iter().map(|(_, c)| c)),
            Observable::Graph { .. } => true,
            Observable::Stabilizer(t) => t.all_stabilizers_real(),
        }
    }

    /// <phi_A| O |phi_A>.
    pub fn expval_equatorial(&self, a: &EquatorialLabel) -> Result<f64, ShadowError> {
        if a.n() != self.n() {
            return Err(ShadowError::DimensionMismatch {
                expected: self.n(),
                got: a.n(),
            });
        }
        Ok(match self {
            Observable::Dense(m) => {
                let phi = a.state_vector();
                quadratic_form(m, &phi)
            }
            Observable::PureDense(v) => overlap_dense(a, v)?.norm_sqr(),
            Observable::PureSparse(s) => overlap_sparse(a, s.components())?.norm_sqr(),
            Observable::Graph { edges, b, .. } => {
                gauss_overlap_quadratic(a, edges, b)?.norm_sqr()
            }
            Observable::Stabilizer(t) => {
                let mut phi = StabilizerTableau::zero_state(a.n());
                let prep = espovm_preparation(a)?;
                phi.apply_circuit(&prep)?;
                t.overlap_sq(&phi)?
            }
        })
    }

    /// <p| O |p> for a computational basis string.
    pub fn expval_basis(&self, p: &BitString) -> Result<f64, ShadowError> {
        if p.len() != self.n() {
            return Err(ShadowError::DimensionMismatch {
                expected: self.n(),
                got: p.len(),
            });
        }
        Ok(match self {
            Observable::Dense(m) => {
                let i = p.to_index() as usize;
                m[(i, i)].re
            }
            Observable::PureDense(v) => v[p.to_index() as usize].norm_sqr(),
            Observable::PureSparse(s) => s.amplitude(p).norm_sqr(),
            Observable::Graph { n, .. } => 0.5f64.powi(*n as i32),
            Observable::Stabilizer(t) => {
                let basis = basis_tableau(p);
                t.overlap_sq(&basis)?
            }
        })
    }

    /// <psi| O |psi> for an arbitrary dense state.
    pub fn expval_dense_state(&self, psi: &DenseState) -> Result<f64, ShadowError> {
        if psi.n() != self.n() {
            return Err(ShadowError::DimensionMismatch {
                expected: self.n(),
                got: psi.n(),
            });
        }
        Ok(match self {
            Observable::Dense(m) => quadratic_form(m, psi.amplitudes()),
            Observable::PureDense(v) => {
                let ov: Complex64 = v
                    .iter()
                    .zip(psi.amplitudes())
                    .map(|(t, a)| t.conj() * a)
                    .sum();
                ov.norm_sqr()
            }
            Observable::PureSparse(s) => {
                let ov: Complex64 = s
                    .components()
                    .iter()
                    .map(|(x, c)| c.conj() * psi.amplitudes()[x.to_index() as usize])
                    .sum();
                ov.norm_sqr()
            }
            Observable::Graph { n, edges, b } => {
                let g = graph_state_vector(*n, edges, b)?;
                let ov: Complex64 = g
                    .iter()
                    .zip(psi.amplitudes())
                    .map(|(t, a)| t.conj() * a)
                    .sum();
                ov.norm_sqr()
            }
            Observable::Stabilizer(t) => {
                let mut d = DenseState::zero_state(t.n());
                d.apply_circuit(&t.to_circuit())?;
                d.inner(psi).norm_sqr()
            }
        })
    }

    /// Dense matrix form (guarded by the dense cap in callers).
    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>, ShadowError> {
        let dim = 1usize << self.n();
        Ok(match self {
            Observable::Dense(m) => m.clone(),
            Observable::PureDense(v) => outer(v),
            Observable::PureSparse(s) => outer(&s.to_dense()),
            Observable::Graph { n, edges, b } => outer(&graph_state_vector(*n, edges, b)?),
            Observable::Stabilizer(t) => {
                let mut d = DenseState::zero_state(t.n());
                d.apply_circuit(&t.to_circuit())?;
                let _ = dim;
                outer(d.amplitudes())
            }
        })
    }
}

/// Gate layers of the label's measurement circuit read backwards prepare
/// |phi_A> from the uniform superposition; concretely H then the inverse
/// diagonal gates, which equals H, S-powers and the CZ support.
fn espovm_preparation(a: &EquatorialLabel) -> Result<crate::qsim::Circuit, ShadowError> {
    use crate::qsim::{Circuit, Gate};
    let n = a.n();
    let meas = espovm_measurement_circuit(a, false)?;
    let mut prep = Circuit::new(n);
    prep.push_layer((0..n).map(Gate::H).collect())?;
    // invert the measurement circuit's gate layers minus its own H layer
    let mut layers: Vec<Vec<Gate>> = meas.layers[..meas.layers.len() - 1].to_vec();
    layers.reverse();
    for layer in layers {
        let inv: Vec<Gate> = layer
            .iter()
            .map(|g| match g {
                Gate::S(q) => Gate::Sdg(*q),
                Gate::Sdg(q) => Gate::S(*q),
                other => *other,
            })
            .collect();
        prep.push_layer(inv)?;
    }
    Ok(prep)
}

fn basis_tableau(p: &BitString) -> StabilizerTableau {
    let mut t = StabilizerTableau::zero_state(p.len());
    for q in 0..p.len() {
        if p.get(q) == 1 {
            t.apply_gate(&crate::qsim::Gate::X(q));
        }
    }
    t
}

fn quadratic_form(m: &DMatrix<Complex64>, v: &[Complex64]) -> f64 {
    let dim = v.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..dim {
        let mut row = Complex64::new(0.0, 0.0);
        for c in 0..dim {
            row += m[(r, c)] * v[c];
        }
        acc += v[r].conj() * row;
    }
    acc.re
}

fn outer(v: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_fn(v.len(), v.len(), |r, c| v[r] * v[c].conj())
}

fn phase_aligned_real<'a>(vals: impl Iterator<Item = &'a Complex64> + Clone) -> bool {
    let reference = vals
        .clone()
        .find(|c| c.norm() > REALITY_TOL)
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = reference / reference.norm();
    vals.into_iter()
        .all(|c| (c / phase).im.abs() <= REALITY_TOL * 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqcore::Scheme;
    use rand::Rng;

    #[test]
    fn traces_and_frobenius() {
        let o = Observable::ghz(4);
        assert_eq!(o.trace(), 1.0);
        assert!((o.traceless_frobenius_sq() - (1.0 - 1.0 / 16.0)).abs() < 1e-15);
    }

    #[test]
    fn reality_checks() {
        assert!(Observable::ghz(3).is_real());
        assert!(Observable::w_state(4).is_real());
        assert!(Observable::graph(3, vec![(0, 1), (1, 2)]).is_real());
        // |+i> is not real
        let v = vec![
            Complex64::new(1.0 / 2f64.sqrt(), 0.0),
            Complex64::new(0.0, 1.0 / 2f64.sqrt()),
        ];
        assert!(!Observable::PureDense(v).is_real());
        // global phase does not break reality
        let phase = Complex64::from_polar(1.0, 0.7);
        let v2 = vec![
            Complex64::new(1.0 / 2f64.sqrt(), 0.0) * phase,
            Complex64::new(-1.0 / 2f64.sqrt(), 0.0) * phase,
        ];
        assert!(Observable::PureDense(v2).is_real());
        // stabilizer reality: |0> real, |+i> = S|+> not real
        let mut t = StabilizerTableau::zero_state(1);
        assert!(Observable::Stabilizer(t.clone()).is_real());
        t.apply_gate(&crate::qsim::Gate::H(0));
        t.apply_gate(&crate::qsim::Gate::S(0));
        assert!(!Observable::Stabilizer(t).is_real());
    }

    #[test]
    fn equatorial_expectations_agree_across_forms() {
        let mut rng = crate::rng::stream_rng(111, 0, 0);
        let n = 3;
        let edges = vec![(0, 1), (1, 2)];
        let graph = Observable::graph(n, edges.clone());
        let dense_vec = graph_state_vector(n, &edges, &BitString::zeros(n)).unwrap();
        let pure_dense = Observable::PureDense(dense_vec.clone());
        let as_matrix = Observable::Dense(outer(&dense_vec));
        // stabilizer form of the same graph state
        let mut t = StabilizerTableau::zero_state(n);
        for q in 0..n {
            t.apply_gate(&crate::qsim::Gate::H(q));
        }
        for &(a, b) in &edges {
            t.apply_gate(&crate::qsim::Gate::Cz(a, b));
        }
        let stab = Observable::Stabilizer(t);
        for _ in 0..40 {
            let scheme = if rng.gen_bool(0.5) { Scheme::Eq } else { Scheme::Req };
            let a = EquatorialLabel::sample_uniform(scheme, n, &mut rng);
            let v1 = graph.expval_equatorial(&a).unwrap();
            let v2 = pure_dense.expval_equatorial(&a).unwrap();
            let v3 = as_matrix.expval_equatorial(&a).unwrap();
            let v4 = stab.expval_equatorial(&a).unwrap();
            assert!((v1 - v2).abs() < 1e-10, "{v1} {v2}");
            assert!((v1 - v3).abs() < 1e-10, "{v1} {v3}");
            assert!((v1 - v4).abs() < 1e-10, "{v1} {v4}");
        }
        for p in 0..8u64 {
            let p = BitString::from_index(p, n);
            let b1 = graph.expval_basis(&p).unwrap();
            let b2 = pure_dense.expval_basis(&p).unwrap();
            let b3 = stab.expval_basis(&p).unwrap();
            assert!((b1 - b2).abs() < 1e-12 && (b1 - b3).abs() < 1e-12);
        }
    }
}
