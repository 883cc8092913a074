//! Moments of the equatorial families: brute-force enumeration and closed
//! forms, kept as two independent routes that must agree.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::kset::{k1_packed, k2_packed};
use super::label::{label_count, EquatorialLabel, Scheme};
use super::EqError;

pub type DenseOperator = DMatrix<Complex64>;

const ENUM_MAX_N: usize = 3;

fn c64(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Average of |phi><phi|^{tensor t} over every label of the family,
/// enumerated directly. This is the oracle the closed forms are tested
/// against; n is capped accordingly.
pub fn moment_exact(scheme: Scheme, n: usize, t: usize) -> Result<DenseOperator, EqError> {
    if !(1..=3).contains(&t) {
        return Err(EqError::UnsupportedOrder { t });
    }
    if n == 0 || n > ENUM_MAX_N {
        return Err(EqError::TooLarge { n, max: ENUM_MAX_N });
    }
    let count = label_count(scheme, n)? as usize;
    let dim = 1usize << (n * t);
    let mut acc = vec![Complex64::new(0.0, 0.0); dim * dim];
    for idx in 0..count {
        let label = EquatorialLabel::from_enumeration_index(scheme, n, idx as u128);
        let phi = label.state_vector();
        let mut tv = phi.clone();
        for _ in 1..t {
            tv = kron_vec(&tv, &phi);
        }
        for r in 0..dim {
            let row = tv[r];
            let base = r * dim;
            for c in 0..dim {
                acc[base + c] += row * tv[c].conj();
            }
        }
    }
    let w = 1.0 / count as f64;
    Ok(DMatrix::from_row_iterator(
        dim,
        dim,
        acc.into_iter().map(|v| v * w),
    ))
}

fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        for &y in b {
            out.push(x * y);
        }
    }
    out
}

/// Closed forms for the first three moments. The third moment is the
/// six-string filtered sum; see `moment_third_c_combination` for the
/// independent combination route.
pub fn moment_closed_form(scheme: Scheme, n: usize, t: usize) -> Result<DenseOperator, EqError> {
    match t {
        1 => {
            let dim = 1usize << n;
            Ok(DMatrix::from_diagonal_element(
                dim,
                dim,
                c64(1.0 / dim as f64),
            ))
        }
        2 => Ok(second_moment(scheme, n)),
        3 => {
            if n > ENUM_MAX_N {
                return Err(EqError::TooLarge { n, max: ENUM_MAX_N });
            }
            Ok(third_moment_filtered(scheme, n))
        }
        t => Err(EqError::UnsupportedOrder { t }),
    }
}

fn second_moment(scheme: Scheme, n: usize) -> DenseOperator {
    let d = 1usize << n;
    let dim = d * d;
    let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    let w = c64(1.0 / (dim as f64));
    for i in 0..dim {
        m[(i, i)] += w;
    }
    // swap: |xy><yx|
    for x in 0..d {
        for y in 0..d {
            m[(x * d + y, y * d + x)] += w;
        }
    }
    match scheme {
        Scheme::Eq => {
            for x in 0..d {
                m[(x * d + x, x * d + x)] -= w;
            }
        }
        Scheme::Req => {
            for x in 0..d {
                for y in 0..d {
                    m[(x * d + x, y * d + y)] += w;
                }
            }
            for x in 0..d {
                m[(x * d + x, x * d + x)] -= w * c64(2.0);
            }
        }
    }
    m
}

fn third_moment_filtered(scheme: Scheme, n: usize) -> DenseOperator {
    let d = 1u64 << n;
    let dim = (d * d * d) as usize;
    let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    let w = c64(1.0 / dim as f64);
    let idx = |a: u64, b: u64, c: u64| ((a * d + b) * d + c) as usize;
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                for ww in 0..d {
                    for s in 0..d {
                        for t in 0..d {
                            let v = [x, y, z, ww, s, t];
                            let keep = match scheme {
                                Scheme::Eq => k2_packed(&v, n),
                                Scheme::Req => k1_packed(&v),
                            };
                            if keep {
                                m[(idx(x, y, z), idx(ww, s, t))] += w;
                            }
                        }
                    }
                }
            }
        }
    }
    m
}

/// Third moment assembled from the five structured series:
/// `4 C1 - C2 + C4` for the complex family and
/// `16 C1 - 2 C2 - 2 C3 + C4 + C5` for the real one, each divided by 8^n.
/// Independent of the filtered construction; the two must agree entrywise.
pub fn moment_third_c_combination(scheme: Scheme, n: usize) -> Result<DenseOperator, EqError> {
    if n > ENUM_MAX_N {
        return Err(EqError::TooLarge { n, max: ENUM_MAX_N });
    }
    let d = 1usize << n;
    let dim = d * d * d;
    let idx = |a: usize, b: usize, c: usize| (a * d + b) * d + c;
    let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    let (c1w, c2w, c3w, c4w, c5w) = match scheme {
        Scheme::Eq => (4.0, -1.0, 0.0, 1.0, 0.0),
        Scheme::Req => (16.0, -2.0, -2.0, 1.0, 1.0),
    };
    let w = 1.0 / dim as f64;

    for x in 0..d {
        m[(idx(x, x, x), idx(x, x, x))] += c64(c1w * w);
    }
    // one odd string out, in every ket/bra position combination
    let place = |pos: usize, odd: usize, rest: usize| -> usize {
        match pos {
            0 => idx(odd, rest, rest),
            1 => idx(rest, odd, rest),
            _ => idx(rest, rest, odd),
        }
    };
    if c2w != 0.0 {
        for x in 0..d {
            for y in 0..d {
                for kp in 0..3 {
                    for bp in 0..3 {
                        m[(place(kp, y, x), place(bp, y, x))] += c64(c2w * w);
                    }
                }
            }
        }
    }
    if c3w != 0.0 {
        for x in 0..d {
            for y in 0..d {
                for pos in 0..3 {
                    m[(place(pos, y, x), idx(y, y, y))] += c64(c3w * w);
                    m[(idx(y, y, y), place(pos, y, x))] += c64(c3w * w);
                }
            }
        }
    }
    {
        // all six permutations of |xyz>
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [2, 0, 1],
            [1, 2, 0],
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
        ];
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    let v = [x, y, z];
                    for p in perms {
                        m[(idx(x, y, z), idx(v[p[0]], v[p[1]], v[p[2]]))] += c64(c4w * w);
                    }
                }
            }
        }
    }
    if c5w != 0.0 {
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    for kp in [2usize, 1, 0] {
                        for bp in [2usize, 1, 0] {
                            m[(place(kp, z, x), place(bp, z, y))] += c64(c5w * w);
                        }
                    }
                }
            }
        }
    }
    Ok(m)
}

/// Largest absolute entry difference between two operators.
pub fn max_entry_diff(a: &DenseOperator, b: &DenseOperator) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_moment_is_maximally_mixed() {
        for scheme in [Scheme::Eq, Scheme::Req] {
            for n in 1..=2 {
                let exact = moment_exact(scheme, n, 1).unwrap();
                let closed = moment_closed_form(scheme, n, 1).unwrap();
                assert!(max_entry_diff(&exact, &closed) < 1e-12);
            }
        }
    }

    #[test]
    fn second_moment_closed_form_single_qubit() {
        // (1/4)(I + SWAP - |00><00| - |11><11|)
        let m = moment_closed_form(Scheme::Eq, 1, 2).unwrap();
        let e = moment_exact(Scheme::Eq, 1, 2).unwrap();
        assert!(max_entry_diff(&m, &e) < 1e-12);
        assert!((m[(0, 0)].re - 0.25).abs() < 1e-15);
        assert!((m[(1, 2)].re - 0.25).abs() < 1e-15);
        assert!(m[(0, 3)].norm() < 1e-15);
    }

    #[test]
    fn req_second_moment_has_cross_block() {
        let m = moment_closed_form(Scheme::Req, 1, 2).unwrap();
        let e = moment_exact(Scheme::Req, 1, 2).unwrap();
        assert!(max_entry_diff(&m, &e) < 1e-12);
        // |00><11| entry: (1/4)(0 + 0 + 1 - 0)
        assert!((m[(0, 3)].re - 0.25).abs() < 1e-15);
    }

    #[test]
    fn third_moment_routes_agree_n1() {
        for scheme in [Scheme::Eq, Scheme::Req] {
            let exact = moment_exact(scheme, 1, 3).unwrap();
            let filtered = moment_closed_form(scheme, 1, 3).unwrap();
            let combo = moment_third_c_combination(scheme, 1).unwrap();
            assert!(max_entry_diff(&exact, &filtered) < 1e-12);
            assert!(max_entry_diff(&filtered, &combo) < 1e-12);
        }
    }

    #[test]
    fn third_moment_routes_agree_n2() {
        for scheme in [Scheme::Eq, Scheme::Req] {
            let exact = moment_exact(scheme, 2, 3).unwrap();
            let filtered = moment_closed_form(scheme, 2, 3).unwrap();
            let combo = moment_third_c_combination(scheme, 2).unwrap();
            assert!(max_entry_diff(&exact, &filtered) < 1e-12);
            assert!(max_entry_diff(&filtered, &combo) < 1e-12);
        }
    }

    #[test]
    fn second_moment_exact_matches_closed_n2() {
        let exact = moment_exact(Scheme::Eq, 2, 2).unwrap();
        let closed = moment_closed_form(Scheme::Eq, 2, 2).unwrap();
        assert!(max_entry_diff(&exact, &closed) < 1e-12);
    }

    #[test]
    fn completeness_scaled_first_moment() {
        // sum over labels of (2^n/|S|) |phi><phi| = I
        for scheme in [Scheme::Eq, Scheme::Req] {
            for n in 1..=3 {
                let m = moment_exact(scheme, n, 1).unwrap();
                let dim = 1usize << n;
                let scaled = m * c64(dim as f64);
                let eye = DMatrix::from_diagonal_element(dim, dim, c64(1.0));
                assert!(max_entry_diff(&scaled, &eye) < 1e-12);
            }
        }
    }

    #[test]
    fn order_and_size_guards() {
        assert!(matches!(
            moment_exact(Scheme::Eq, 1, 4),
            Err(EqError::UnsupportedOrder { t: 4 })
        ));
        assert!(matches!(
            moment_exact(Scheme::Eq, 4, 2),
            Err(EqError::TooLarge { .. })
        ));
        assert!(matches!(
            moment_closed_form(Scheme::Eq, 4, 3),
            Err(EqError::TooLarge { .. })
        ));
    }
}
