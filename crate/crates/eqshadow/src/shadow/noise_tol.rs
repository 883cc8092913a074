//! Bit-flip tolerance predicate for sparse targets.

use crate::eqcore::BitString;

use super::ShadowError;

/// True when every component string of the target has even overlap with the
/// flip string, i.e. `x_j . xi = 0 (mod 2)` for all j; then an injected
/// measurement error `xi` leaves the sparse-target estimator unchanged.
pub fn bitflip_tolerance(components: &[BitString], xi: &BitString) -> Result<bool, ShadowError> {
    for x in components {
        if x.len() != xi.len() {
            return Err(ShadowError::DimensionMismatch {
                expected: xi.len(),
                got: x.len(),
            });
        }
        if x.dot(xi)? == 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ghz_components(n: usize) -> Vec<BitString> {
        vec![BitString::zeros(n), BitString::ones(n)]
    }

    #[test]
    fn ghz_tolerates_even_weight_only() {
        let comps = ghz_components(6);
        let even: BitString = "110000".parse().unwrap();
        let odd: BitString = "111000".parse().unwrap();
        assert!(bitflip_tolerance(&comps, &even).unwrap());
        assert!(!bitflip_tolerance(&comps, &odd).unwrap());
    }

    #[test]
    fn zero_string_always_tolerated() {
        let comps = vec![
            "0011".parse().unwrap(),
            "0101".parse().unwrap(),
            "1110".parse().unwrap(),
        ];
        assert!(bitflip_tolerance(&comps, &BitString::zeros(4)).unwrap());
    }

    #[test]
    fn length_mismatch_rejected() {
        let comps = ghz_components(4);
        assert!(bitflip_tolerance(&comps, &BitString::zeros(3)).is_err());
    }
}
