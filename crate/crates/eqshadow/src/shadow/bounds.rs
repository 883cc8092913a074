//! Variance and sampling-copy bounds.

use crate::eqcore::Scheme;

use super::observable::Observable;
use super::ShadowError;

/// Second-moment bound on the single-pair estimator: the equatorial part is
/// bounded by 14 tr(O_0^2) (complex family) or 13 tr(O_0^2) (real family),
/// and the computational-basis part adds at most tr(O_0^2).
pub fn variance_bound(scheme: Scheme, obs: &Observable) -> f64 {
    let fro = obs.traceless_frobenius_sq();
    match scheme {
        Scheme::Eq => 15.0 * fro,
        Scheme::Req => 14.0 * fro,
    }
}

/// Informative copy-count bound `ceil(136 * bound * ln(2M/delta) / eps^2)`
/// for estimating M observables to accuracy eps with confidence 1 - delta
/// under median-of-means aggregation.
pub fn copy_bound(
    scheme: Scheme,
    obs: &Observable,
    eps: f64,
    delta: f64,
    m: usize,
) -> Result<u64, ShadowError> {
    if !(0.0 < eps && eps < 1.0) || !(0.0 < delta && delta < 1.0) || m < 1 {
        return Err(ShadowError::InvalidConfig(format!(
            "eps = {eps}, delta = {delta}, M = {m} outside valid ranges"
        )));
    }
    let scale = variance_bound(scheme, obs);
    let val = 136.0 * scale * (2.0 * m as f64 / delta).ln() / (eps * eps);
    Ok(val.ceil().max(0.0) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    #[test]
    fn pure_targets_have_constant_bounds() {
        for n in [2usize, 6, 20] {
            let o = Observable::ghz(n);
            let fro = o.traceless_frobenius_sq();
            assert!((fro - (1.0 - 0.5f64.powi(n as i32))).abs() < 1e-12);
            assert!(variance_bound(Scheme::Eq, &o) <= 15.0);
            assert!(variance_bound(Scheme::Req, &o) <= 14.0);
        }
    }

    #[test]
    fn identity_observable_has_zero_bounds() {
        let eye = Observable::Dense(DMatrix::from_diagonal_element(
            8,
            8,
            Complex64::new(1.0, 0.0),
        ));
        assert!(variance_bound(Scheme::Eq, &eye).abs() < 1e-12);
        assert_eq!(copy_bound(Scheme::Eq, &eye, 0.1, 0.05, 3).unwrap(), 0);
    }

    #[test]
    fn invalid_parameters_rejected() {
        let o = Observable::ghz(2);
        assert!(copy_bound(Scheme::Eq, &o, 0.0, 0.5, 1).is_err());
        assert!(copy_bound(Scheme::Eq, &o, 0.1, 1.5, 1).is_err());
        assert!(copy_bound(Scheme::Eq, &o, 0.1, 0.5, 0).is_err());
    }
}
