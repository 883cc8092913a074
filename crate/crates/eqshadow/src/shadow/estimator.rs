//! Single-outcome estimators.

use crate::eqcore::{gauss_overlap_quadratic, BitString, EquatorialLabel, Scheme};

use super::observable::Observable;
use super::ShadowError;

/// Unbiased single-pair estimator from one equatorial outcome `a`
/// (post-update label) and one computational-basis outcome `p_prime`:
/// `2^n <phi|O|phi> + <p'|O|p'> - tr O` for the complex family and
/// `2^{n-1} <phi|O|phi> + <p'|O|p'> - tr(O)/2` for the real one.
pub fn estimator_single(
    a: &EquatorialLabel,
    p_prime: &BitString,
    obs: &Observable,
) -> Result<f64, ShadowError> {
    if a.scheme() == Scheme::Req && !obs.is_real() {
        return Err(ShadowError::ObservableNotReal);
    }
    estimator_single_unchecked(a, p_prime, obs)
}

/// Same as `estimator_single` without the reality re-check (callers that
/// validated the observable once, e.g. the protocol loop).
pub(crate) fn estimator_single_unchecked(
    a: &EquatorialLabel,
    p_prime: &BitString,
    obs: &Observable,
) -> Result<f64, ShadowError> {
    let quad = obs.expval_equatorial(a)?;
    let comp = obs.expval_basis(p_prime)?;
    Ok(combine(a.scheme(), a.n(), quad, comp, obs.trace()))
}

pub(crate) fn combine(scheme: Scheme, n: usize, quad: f64, comp: f64, trace: f64) -> f64 {
    match scheme {
        Scheme::Eq => 2f64.powi(n as i32) * quad + comp - trace,
        Scheme::Req => 2f64.powi(n as i32 - 1) * quad + comp - trace / 2.0,
    }
}

/// Closed-form estimator for the GHZ projector under the real scheme,
/// evaluated on the post-update label: the equatorial part collapses to the
/// total parity of the label entries.
pub fn ghz_estimator(a: &EquatorialLabel, p_prime: &BitString) -> Result<f64, ShadowError> {
    if a.scheme() != Scheme::Req {
        return Err(ShadowError::SchemeMismatch);
    }
    let n = a.n();
    if p_prime.len() != n {
        return Err(ShadowError::DimensionMismatch {
            expected: n,
            got: p_prime.len(),
        });
    }
    let mut parity = 0u8;
    for &d in a.diag() {
        parity ^= d;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            parity ^= a.offdiag(i, j);
        }
    }
    let first = if parity == 0 { 1.0 } else { 0.0 };
    let w = p_prime.weight();
    let comp = if w == 0 || w == n { 0.5 } else { 0.0 };
    Ok(first + comp - 0.5)
}

/// Closed-form estimator for the single-excitation (W) projector under the
/// real scheme.
pub fn w_estimator(a: &EquatorialLabel, p_prime: &BitString) -> Result<f64, ShadowError> {
    if a.scheme() != Scheme::Req {
        return Err(ShadowError::SchemeMismatch);
    }
    let n = a.n();
    if p_prime.len() != n {
        return Err(ShadowError::DimensionMismatch {
            expected: n,
            got: p_prime.len(),
        });
    }
    let signed: f64 = a
        .diag()
        .iter()
        .map(|&d| if d == 0 { 1.0 } else { -1.0 })
        .sum();
    let first = signed * signed / (2.0 * n as f64);
    let comp = if p_prime.weight() == 1 {
        1.0 / n as f64
    } else {
        0.0
    };
    Ok(first + comp - 0.5)
}

/// Closed-form estimator for a graph-state projector under the real scheme.
/// Every computational-basis outcome contributes the same 2^-n, so the
/// second measurement is folded in analytically.
pub fn graph_estimator(
    a: &EquatorialLabel,
    edges: &[(usize, usize)],
) -> Result<f64, ShadowError> {
    if a.scheme() != Scheme::Req {
        return Err(ShadowError::SchemeMismatch);
    }
    let n = a.n();
    let quad = gauss_overlap_quadratic(a, edges, &BitString::zeros(n))?.norm_sqr();
    Ok(2f64.powi(n as i32 - 1) * quad + 0.5f64.powi(n as i32) - 0.5)
}
