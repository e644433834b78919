//! Exact arithmetic modulo a prime dimension, plus root-of-unity phases.
//!
//! Every index that appears in the protocol (basis labels, preparation
//! parameters, measurement outcomes) lives in the ring of integers mod a
//! prime `d`. Phases come in two flavors: the *state* phase used by the
//! basis and entangled-state constructions, which for `d = 2` substitutes
//! the imaginary unit for the d-th root of unity, and the plain d-th root
//! of unity used by the clock operator and the harmonic diagonal unitaries.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Default upper bound for [`PrimeDim::new`]. The exhaustive verification
/// suites are O(d^4) and worse, so a runaway dimension is almost certainly a
/// mistake; use [`PrimeDim::with_limit`] to lift the guard.
pub const DEFAULT_MAX_DIM: u64 = 97;

/// A prime Hilbert-space dimension `d >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PrimeDim(u64);

impl PrimeDim {
    /// Construct a dimension, requiring `d` prime and `d <= DEFAULT_MAX_DIM`.
    pub fn new(d: u64) -> Result<Self> {
        Self::with_limit(d, DEFAULT_MAX_DIM)
    }

    /// Construct a dimension with a caller-chosen upper bound.
    pub fn with_limit(d: u64, limit: u64) -> Result<Self> {
        if !is_prime(d) {
            return Err(Error::NotPrime(d));
        }
        if d > limit {
            return Err(Error::DimTooLarge { dim: d, limit });
        }
        Ok(Self(d))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// The dimension as a `usize`, for indexing.
    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn is_two(self) -> bool {
        self.0 == 2
    }

    /// The residue `value mod d`.
    pub fn residue(self, value: i64) -> Residue {
        Residue::new(self, value)
    }

    /// All residues `0, 1, ..., d-1`.
    pub fn residues(self) -> impl Iterator<Item = Residue> {
        (0..self.0).map(move |v| Residue {
            value: v,
            dim: self,
        })
    }
}

impl fmt::Display for PrimeDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of the integers modulo a prime `d`, always kept reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    dim: PrimeDim,
}

impl Residue {
    /// Reduce an arbitrary (possibly negative) integer mod `d`.
    pub fn new(dim: PrimeDim, value: i64) -> Self {
        let d = dim.get() as i64;
        Self {
            value: value.rem_euclid(d) as u64,
            dim,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn dim(self) -> PrimeDim {
        self.dim
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse mod `d`, by Fermat exponentiation.
    pub fn inverse(self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::NotInvertible {
                value: self.value,
                modulus: self.dim.get(),
            });
        }
        let d = self.dim.get();
        Ok(Self {
            value: pow_mod(self.value, d - 2, d),
            dim: self.dim,
        })
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// serialized as the bare value; the dimension is carried by the context
impl Serialize for Residue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.value)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        assert_eq!(self.dim, rhs.dim, "residue dimension mismatch");
        let d = self.dim.get();
        Residue {
            value: (self.value + rhs.value) % d,
            dim: self.dim,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        assert_eq!(self.dim, rhs.dim, "residue dimension mismatch");
        let d = self.dim.get();
        Residue {
            value: (self.value + d - rhs.value) % d,
            dim: self.dim,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        assert_eq!(self.dim, rhs.dim, "residue dimension mismatch");
        let d = self.dim.get() as u128;
        Residue {
            value: ((self.value as u128 * rhs.value as u128) % d) as u64,
            dim: self.dim,
        }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        let d = self.dim.get();
        Residue {
            value: (d - self.value) % d,
            dim: self.dim,
        }
    }
}

/// The exponent of a state phase, reduced into its natural ring: mod `d` for
/// odd primes, mod 4 for `d = 2` where the base is `i` (a fourth root of
/// unity) rather than `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseExponent {
    exponent: u64,
    modulus: u64,
}

impl PhaseExponent {
    pub fn new(d: PrimeDim, e: i64) -> Self {
        let modulus = if d.is_two() { 4 } else { d.get() };
        Self {
            exponent: e.rem_euclid(modulus as i64) as u64,
            modulus,
        }
    }

    pub fn exponent(self) -> u64 {
        self.exponent
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    /// The unit complex number `base^exponent` where `base` is `exp(2*pi*i/d)`
    /// for odd `d` and `i` for `d = 2`.
    pub fn eval(self) -> Complex64 {
        unit_phase(self.exponent, self.modulus)
    }
}

/// `exp(2*pi*i*e/d)` for odd prime `d`; `i^e` for `d = 2`.
///
/// This is the phase that enters the basis kets and the entangled states.
pub fn phase(d: PrimeDim, e: i64) -> Complex64 {
    PhaseExponent::new(d, e).eval()
}

/// `exp(2*pi*i*e/d)` for any prime `d`; for `d = 2` this is `(-1)^e`.
///
/// This is the clock-operator phase, also used by the harmonic diagonal
/// unitaries whose uniform average reproduces the dephasing map.
pub fn root_of_unity(d: PrimeDim, e: i64) -> Complex64 {
    let dd = d.get();
    unit_phase(e.rem_euclid(dd as i64) as u64, dd)
}

/// `exp(2*pi*i*num/den)` with `0 <= num < den`, exact on the axes.
fn unit_phase(num: u64, den: u64) -> Complex64 {
    if num == 0 {
        Complex64::new(1.0, 0.0)
    } else if 2 * num == den {
        Complex64::new(-1.0, 0.0)
    } else if 4 * num == den {
        Complex64::new(0.0, 1.0)
    } else if 4 * num == 3 * den {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::from_polar(1.0, TAU * num as f64 / den as f64)
    }
}

/// Deterministic trial-division primality check.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut i = 5u64;
    while i * i <= n {
        if n.is_multiple_of(i) || n.is_multiple_of(i + 2) {
            return false;
        }
        i += 6;
    }
    true
}

fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut base = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dim(d: u64) -> PrimeDim {
        PrimeDim::new(d).unwrap()
    }

    /// Brute-force inverse: scan all residues for a*x = 1 (mod d).
    fn inverse_by_search(a: u64, d: u64) -> Option<u64> {
        (0..d).find(|&x| (a * x) % d == 1)
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(!is_prime(9));
        assert!(is_prime(13));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(is_prime(97));
        assert!(!is_prime(91)); // 7 * 13
    }

    #[test]
    fn prime_dim_rejects_composites_and_oversize() {
        assert!(PrimeDim::new(4).is_err());
        assert!(PrimeDim::new(101).is_err());
        assert!(PrimeDim::with_limit(101, 200).is_ok());
        assert_eq!(dim(7).get(), 7);
    }

    #[test]
    fn inverse_small_cases() {
        assert_eq!(dim(7).residue(1).inverse().unwrap().value(), 1);
        assert_eq!(dim(5).residue(2).inverse().unwrap().value(), 3);
        // frozen from the exhaustive-search oracle below
        assert_eq!(inverse_by_search(4, 11), Some(3));
        assert_eq!(dim(11).residue(4).inverse().unwrap().value(), 3);
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let err = dim(5).residue(0).inverse().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains('0') && msg.contains('5'), "{msg}");
    }

    #[test]
    fn inverse_matches_search_and_involutes() {
        for d in [2u64, 3, 5, 7, 11, 13, 97] {
            let pd = PrimeDim::with_limit(d, 97).unwrap();
            for a in pd.residues().filter(|a| !a.is_zero()) {
                let inv = a.inverse().unwrap();
                assert_eq!(inv.value(), inverse_by_search(a.value(), d).unwrap());
                assert_eq!((a * inv).value(), 1);
                assert_eq!(inv.inverse().unwrap(), a);
            }
        }
    }

    #[test]
    fn residue_arithmetic_reduces() {
        let d = dim(5);
        assert_eq!((d.residue(3) + d.residue(4)).value(), 2);
        assert_eq!((d.residue(1) - d.residue(3)).value(), 3);
        assert_eq!((d.residue(4) * d.residue(4)).value(), 1);
        assert_eq!((-d.residue(0)).value(), 0);
        assert_eq!(d.residue(-7).value(), 3);
    }

    #[test]
    fn phase_small_cases() {
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(phase(dim(3), 0), one);
        assert_eq!(phase(dim(2), 1), i);
        assert_eq!(phase(dim(3), 3), one); // full period, exact
        assert_eq!(phase(dim(2), 2), -one);
        assert_eq!(phase(dim(2), 3), -i);
        assert_eq!(phase(dim(2), -2), -one);
    }

    #[test]
    fn phase_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in [2u64, 3, 5, 7] {
            let pd = dim(d);
            for _ in 0..1000 {
                let e1: i64 = rng.gen_range(-1000..1000);
                let e2: i64 = rng.gen_range(-1000..1000);
                let lhs = phase(pd, e1) * phase(pd, e2);
                let rhs = phase(pd, e1 + e2);
                assert!((lhs - rhs).norm() <= 1e-14, "d={d} e1={e1} e2={e2}");
            }
        }
    }

    #[test]
    fn phase_period_is_d_for_odd_and_4_for_two() {
        for d in [3u64, 5, 7] {
            let pd = dim(d);
            for e in 0..(4 * d) as i64 {
                assert_eq!(phase(pd, e), phase(pd, e % d as i64));
            }
        }
        let two = dim(2);
        for e in 0..8i64 {
            assert_eq!(phase(two, e), phase(two, e % 4));
        }
        // and i^2 != 1: the period really is 4, not 2
        assert_ne!(phase(two, 0), phase(two, 2));
    }

    #[test]
    fn phase_has_unit_modulus() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [2u64, 3, 5, 7, 11] {
            let pd = dim(d);
            for _ in 0..200 {
                let e: i64 = rng.gen_range(-10_000..10_000);
                assert!((phase(pd, e).norm() - 1.0).abs() <= 1e-15);
                assert!((root_of_unity(pd, e).norm() - 1.0).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn root_of_unity_differs_from_phase_only_at_two() {
        for e in 0..10i64 {
            assert_eq!(root_of_unity(dim(2), e), Complex64::new((-1f64).powi((e % 2) as i32), 0.0));
        }
        for d in [3u64, 5, 7] {
            let pd = dim(d);
            for e in -10..10i64 {
                assert_eq!(root_of_unity(pd, e), phase(pd, e));
            }
        }
    }

    #[test]
    fn phase_exponent_ring() {
        let pe = PhaseExponent::new(dim(2), -3);
        assert_eq!(pe.modulus(), 4);
        assert_eq!(pe.exponent(), 1);
        let pe = PhaseExponent::new(dim(7), 15);
        assert_eq!(pe.modulus(), 7);
        assert_eq!(pe.exponent(), 1);
    }
}
