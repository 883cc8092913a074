//! Frame operators and informational-completeness checks.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::label::{label_count, EquatorialLabel, Scheme};
use super::moments::DenseOperator;
use super::EqError;

/// Tolerance below which a frame-operator eigenvalue counts as null.
pub const IC_EIG_TOL: f64 = 1e-9;

/// Frame operator of a rank-one POVM given as `(weight, |psi>)` pairs with
/// elements `Pi_j = w_j |psi_j><psi_j|`:
/// `F = sum_j |Pi_j>><<Pi_j| / tr(Pi_j) = sum_j w_j |psi_j (x) psi_j*><...|`.
pub fn frame_operator(povm: &[(f64, Vec<Complex64>)]) -> Result<DenseOperator, EqError> {
    assert!(!povm.is_empty());
    let d = povm[0].1.len();
    let dim = d * d;
    let mut f = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for (w, psi) in povm {
        if *w <= 0.0 {
            return Err(EqError::NonPositiveWeight);
        }
        if psi.len() != d {
            return Err(EqError::DimensionMismatch {
                expected: d,
                got: psi.len(),
            });
        }
        let mut v = Vec::with_capacity(dim);
        for a in psi {
            for b in psi {
                v.push(a * b.conj());
            }
        }
        for r in 0..dim {
            for c in 0..dim {
                f[(r, c)] += Complex64::new(*w, 0.0) * v[r] * v[c].conj();
            }
        }
    }
    Ok(f)
}

/// Minimal eigenvalue of a Hermitian operator and whether it clears the
/// invertibility tolerance.
pub fn ic_check(f: &DenseOperator) -> (f64, bool) {
    let min = min_eigenvalue_hermitian(f);
    (min, min > IC_EIG_TOL)
}

/// Smallest eigenvalue of a Hermitian matrix via the real symmetric
/// embedding [[Re, -Im], [Im, Re]], whose spectrum doubles the original.
pub fn min_eigenvalue_hermitian(f: &DenseOperator) -> f64 {
    let d = f.nrows();
    let mut real = DMatrix::from_element(2 * d, 2 * d, 0.0f64);
    for r in 0..d {
        for c in 0..d {
            let v = f[(r, c)];
            real[(r, c)] = v.re;
            real[(r, c + d)] = -v.im;
            real[(r + d, c)] = v.im;
            real[(r + d, c + d)] = v.re;
        }
    }
    let eig = real.symmetric_eigen();
    eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// The full equatorial POVM at small n: every label with weight 2^n/|S|.
pub fn espovm_elements(scheme: Scheme, n: usize) -> Result<Vec<(f64, Vec<Complex64>)>, EqError> {
    let labels = EquatorialLabel::enumerate(scheme, n)?;
    let w = (1u64 << n) as f64 / label_count(scheme, n)? as f64;
    Ok(labels.into_iter().map(|l| (w, l.state_vector())).collect())
}

/// The computational-basis POVM (unit weights).
pub fn computational_elements(n: usize) -> Vec<(f64, Vec<Complex64>)> {
    let d = 1usize << n;
    (0..d)
        .map(|x| {
            let mut v = vec![Complex64::new(0.0, 0.0); d];
            v[x] = Complex64::new(1.0, 0.0);
            (1.0, v)
        })
        .collect()
}
