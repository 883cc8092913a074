//! Membership predicates for the six-string index sets behind third moments.

use super::bits::BitString;
use super::EqError;

/// Six bit strings (x, y, z, w, s, t) of a common length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SixTuple {
    strings: [BitString; 6],
}

impl SixTuple {
    pub fn new(strings: [BitString; 6]) -> Result<Self, EqError> {
        let n = strings[0].len();
        if strings.iter().any(|s| s.len() != n) {
            return Err(EqError::DimensionMismatch {
                expected: n,
                got: strings.iter().map(|s| s.len()).find(|&l| l != n).unwrap(),
            });
        }
        Ok(Self { strings })
    }

    pub fn n(&self) -> usize {
        self.strings[0].len()
    }

    pub fn strings(&self) -> &[BitString; 6] {
        &self.strings
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum KVariant {
    /// Pairing condition only: the six strings split into three equal pairs.
    K1,
    /// Pairing condition plus the cross bra/ket constraint (the Z4 diagonal
    /// balance between the first and last three strings).
    K2,
}

/// K1 holds iff every distinct string occurs an even number of times, which
/// is equivalent to the existence of a perfect pairing into equal pairs.
pub(crate) fn k1_packed(v: &[u64; 6]) -> bool {
    let mut sorted = *v;
    sorted.sort_unstable();
    sorted[0] == sorted[1] && sorted[2] == sorted[3] && sorted[4] == sorted[5]
}

/// K2 adds, on top of K1, the per-position balance
/// `x_p + y_p + z_p = w_p + s_p + t_p (mod 4)`, which encodes the
/// ket-versus-bra constraint on shared strings.
pub(crate) fn k2_packed(v: &[u64; 6], n: usize) -> bool {
    if !k1_packed(v) {
        return false;
    }
    for p in 0..n {
        let ket: u64 = (0..3).map(|i| (v[i] >> p) & 1).sum();
        let bra: u64 = (3..6).map(|i| (v[i] >> p) & 1).sum();
        if ket % 4 != bra % 4 {
            return false;
        }
    }
    true
}

pub fn k_set_contains(variant: KVariant, v: &SixTuple) -> bool {
    let n = v.n();
    assert!(n <= 64, "packed predicate limited to 64 bits");
    let packed: [u64; 6] = std::array::from_fn(|i| v.strings[i].to_index());
    match variant {
        KVariant::K1 => k1_packed(&packed),
        KVariant::K2 => k2_packed(&packed, n),
    }
}
