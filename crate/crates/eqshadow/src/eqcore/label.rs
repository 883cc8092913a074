//! Labels of (real) equatorial stabilizer states.
//!
//! An n-qubit equatorial state is indexed by a symmetric matrix A with
//! diagonal entries in Z4 (complex family) or Z2 (real family) and binary
//! off-diagonal entries; its amplitudes are `i^{x^T A x} / sqrt(2^n)`. Only
//! the strictly upper triangle is stored; the symmetric double counting is
//! folded into a factor 2 on the cross terms of the quadratic phase.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::bits::BitString;
use super::EqError;

/// Which equatorial family a label belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// Complex equatorial states: diagonal entries in Z4, phases i^q.
    Eq,
    /// Real equatorial states: diagonal entries in Z2, phases (-1)^q.
    Req,
}

impl Scheme {
    /// Modulus of the diagonal entries.
    pub fn diag_modulus(self) -> u8 {
        match self {
            Scheme::Eq => 4,
            Scheme::Req => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Eq => "eq",
            Scheme::Req => "req",
        }
    }
}

impl FromStr for Scheme {
    type Err = EqError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "eq" => Ok(Scheme::Eq),
            "req" => Ok(Scheme::Req),
            other => Err(EqError::BadLabelString(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Number of states in the family: 2^((n^2+3n)/2) for `Eq`, 2^((n^2+n)/2) for
/// `Req`. Errors if the count does not fit in a u128; `label_count_log2`
/// always works.
pub fn label_count(scheme: Scheme, n: usize) -> Result<u128, EqError> {
    let exp = label_count_log2(scheme, n);
    if exp >= 128 {
        return Err(EqError::CountOverflow { exponent: exp });
    }
    Ok(1u128 << exp)
}

/// Base-2 logarithm of the family size.
pub fn label_count_log2(scheme: Scheme, n: usize) -> u64 {
    let n = n as u64;
    match scheme {
        Scheme::Eq => (n * n + 3 * n) / 2,
        Scheme::Req => (n * n + n) / 2,
    }
}

/// Label of one (real) equatorial stabilizer state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquatorialLabel {
    scheme: Scheme,
    n: usize,
    /// Diagonal entries, length n, values below the scheme modulus.
    diag: Vec<u8>,
    /// Strictly upper-triangular entries in row-major pair order
    /// (0,1),(0,2),...,(0,n-1),(1,2),...
    offdiag: Vec<u8>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl EquatorialLabel {
    pub fn zero(scheme: Scheme, n: usize) -> Self {
        Self {
            scheme,
            n,
            diag: vec![0; n],
            offdiag: vec![0; n * (n - 1) / 2],
        }
    }

    pub fn new(scheme: Scheme, diag: Vec<u8>, offdiag: Vec<u8>) -> Result<Self, EqError> {
        let n = diag.len();
        if offdiag.len() != n * (n - 1) / 2 {
            return Err(EqError::DimensionMismatch {
                expected: n * (n - 1) / 2,
                got: offdiag.len(),
            });
        }
        let m = scheme.diag_modulus();
        if diag.iter().any(|&d| d >= m) || offdiag.iter().any(|&b| b > 1) {
            return Err(EqError::BadLabelString("entry out of range".into()));
        }
        Ok(Self {
            scheme,
            n,
            diag,
            offdiag,
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diag(&self) -> &[u8] {
        &self.diag
    }

    pub fn diag_mut(&mut self) -> &mut [u8] {
        &mut self.diag
    }

    /// Symmetric accessor of the off-diagonal bit a_ij = a_ji, i != j.
    pub fn offdiag(&self, i: usize, j: usize) -> u8 {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.offdiag[pair_index(self.n, a, b)]
    }

    pub fn set_offdiag(&mut self, i: usize, j: usize, v: u8) {
        assert!(v <= 1);
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.offdiag[pair_index(self.n, a, b)] = v;
    }

    /// Pairs (i, j) with i < j and a_ij = 1.
    pub fn coupled_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.offdiag(i, j) == 1 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Uniform draw over the whole family.
    pub fn sample_uniform<R: Rng + ?Sized>(scheme: Scheme, n: usize, rng: &mut R) -> Self {
        let m = scheme.diag_modulus();
        let diag = (0..n).map(|_| rng.gen_range(0..m)).collect();
        let offdiag = (0..n * (n - 1) / 2)
            .map(|_| u8::from(rng.gen_bool(0.5)))
            .collect();
        Self {
            scheme,
            n,
            diag,
            offdiag,
        }
    }

    /// Decode label number `idx` (0-based, row-major: diagonal digits first,
    /// then off-diagonal bits). Used for exhaustive enumeration at small n.
    pub fn from_enumeration_index(scheme: Scheme, n: usize, idx: u128) -> Self {
        let m = scheme.diag_modulus() as u128;
        let mut rest = idx;
        let mut diag = vec![0u8; n];
        for d in diag.iter_mut() {
            *d = (rest % m) as u8;
            rest /= m;
        }
        let mut offdiag = vec![0u8; n * (n - 1) / 2];
        for b in offdiag.iter_mut() {
            *b = (rest & 1) as u8;
            rest >>= 1;
        }
        Self {
            scheme,
            n,
            diag,
            offdiag,
        }
    }

    /// All labels of the family. Guarded to enumeration scale.
    pub fn enumerate(scheme: Scheme, n: usize) -> Result<Vec<Self>, EqError> {
        let count = label_count(scheme, n)?;
        if count > 1 << 22 {
            return Err(EqError::TooLarge { n, max: 4 });
        }
        Ok((0..count)
            .map(|i| Self::from_enumeration_index(scheme, n, i))
            .collect())
    }

    /// Z4 exponent q(x) of the amplitude phase i^{q(x)}.
    ///
    /// For the complex family q = sum_i a_ii x_i + 2 sum_{i<j} a_ij x_i x_j
    /// (mod 4); for the real family the phase is a sign, so q is always even.
    pub fn quadratic_phase(&self, x: &BitString) -> Result<u8, EqError> {
        if x.len() != self.n {
            return Err(EqError::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        let mut cross = 0u8;
        let mut k = 0usize;
        for i in 0..self.n {
            if x.get(i) == 1 {
                for j in (i + 1)..self.n {
                    cross ^= self.offdiag[k + (j - i - 1)] & x.get(j);
                }
            }
            k += self.n - i - 1;
        }
        match self.scheme {
            Scheme::Eq => {
                let mut q = 0u32;
                for i in 0..self.n {
                    q += (self.diag[i] & (x.get(i) * 3)) as u32;
                }
                Ok(((q + 2 * cross as u32) % 4) as u8)
            }
            Scheme::Req => {
                let mut q = 0u8;
                for i in 0..self.n {
                    q ^= self.diag[i] & x.get(i);
                }
                Ok(2 * (q ^ cross))
            }
        }
    }

    /// The amplitude <x|phi_A> = i^{q(x)} / 2^{n/2}.
    pub fn amplitude(&self, x: &BitString) -> Result<Complex64, EqError> {
        let q = self.quadratic_phase(x)?;
        Ok(i_pow(q) * 0.5f64.powf(self.n as f64 / 2.0))
    }

    /// Full state vector (index = packed bit string). Intended for n within
    /// the dense cap.
    pub fn state_vector(&self) -> Vec<Complex64> {
        let dim = 1usize << self.n;
        let norm = 0.5f64.powf(self.n as f64 / 2.0);
        (0..dim)
            .map(|x| {
                let q = self
                    .quadratic_phase(&BitString::from_index(x as u64, self.n))
                    .expect("matching length");
                i_pow(q) * norm
            })
            .collect()
    }

    /// Fold a measurement outcome into the diagonal: a_ii += 2 p_i (mod 4)
    /// for the complex family, a_ii += p_i (mod 2) for the real one.
    pub fn shift_diagonal(&mut self, p: &BitString) -> Result<(), EqError> {
        if p.len() != self.n {
            return Err(EqError::DimensionMismatch {
                expected: self.n,
                got: p.len(),
            });
        }
        match self.scheme {
            Scheme::Eq => {
                for i in 0..self.n {
                    self.diag[i] = (self.diag[i] + 2 * p.get(i)) % 4;
                }
            }
            Scheme::Req => {
                for i in 0..self.n {
                    self.diag[i] ^= p.get(i);
                }
            }
        }
        Ok(())
    }
}

/// Exact value of i^k.
pub fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl fmt::Display for EquatorialLabel {
    /// Canonical text form `scheme:n:diag-digits:offdiag-bits`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:", self.scheme.name(), self.n)?;
        for d in &self.diag {
            write!(f, "{d}")?;
        }
        write!(f, ":")?;
        for b in &self.offdiag {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for EquatorialLabel {
    type Err = EqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(EqError::BadLabelString(format!(
                "expected scheme:n:diag:offdiag, got '{s}'"
            )));
        }
        let scheme: Scheme = parts[0].parse()?;
        let n: usize = parts[1]
            .parse()
            .map_err(|_| EqError::BadLabelString(format!("bad qubit count '{}'", parts[1])))?;
        let digit = |c: char| -> Result<u8, EqError> {
            c.to_digit(10)
                .map(|d| d as u8)
                .ok_or_else(|| EqError::BadLabelString(format!("bad digit '{c}'")))
        };
        let diag = parts[2].chars().map(digit).collect::<Result<Vec<_>, _>>()?;
        let offdiag = parts[3].chars().map(digit).collect::<Result<Vec<_>, _>>()?;
        if diag.len() != n {
            return Err(EqError::BadLabelString(format!(
                "diagonal length {} != n = {n}",
                diag.len()
            )));
        }
        Self::new(scheme, diag, offdiag)
    }
}
