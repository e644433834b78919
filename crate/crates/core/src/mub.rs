//! The d+1 mutually unbiased bases in prime dimension, and the generalized
//! Pauli operators whose eigenbases they are.
//!
//! The computational basis is labelled `ddot0`; the other `d` bases carry a
//! quadratic-phase label `b`. The ket `|m; b>` has amplitude
//! `phase(b*n^2 - 2*n*m) / sqrt(d)` on `|n>`, where the phase base is the
//! d-th root of unity for odd `d` and the imaginary unit for `d = 2`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{StateVector, UnitaryMatrix};
use crate::modmath::{phase, root_of_unity, PrimeDim, Residue};
use crate::report::{Tolerances, VerificationReport};

/// The message alphabet: the computational basis or one of the `d`
/// quadratic-phase bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    /// The standard basis, printed as `ddot0`.
    Computational,
    Fourier(Residue),
}

impl BasisLabel {
    /// All `d + 1` labels, computational first.
    pub fn all(d: PrimeDim) -> Vec<BasisLabel> {
        let mut labels = Vec::with_capacity(d.size() + 1);
        labels.push(BasisLabel::Computational);
        labels.extend(d.residues().map(BasisLabel::Fourier));
        labels
    }

    /// Position in the [`all`](Self::all) ordering: 0 for the computational
    /// basis, `1 + b` for `Fourier(b)`.
    pub fn index(&self) -> usize {
        match self {
            BasisLabel::Computational => 0,
            BasisLabel::Fourier(b) => 1 + b.value() as usize,
        }
    }

    /// Parse the CLI spelling: the literal token `ddot0`, or an integer in
    /// `0..d`.
    pub fn parse(d: PrimeDim, token: &str) -> Result<Self> {
        if token == "ddot0" {
            return Ok(BasisLabel::Computational);
        }
        match token.parse::<u64>() {
            Ok(b) if b < d.get() => Ok(BasisLabel::Fourier(d.residue(b as i64))),
            _ => Err(Error::InvalidLabel(token.to_string())),
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Computational => write!(f, "ddot0"),
            BasisLabel::Fourier(b) => write!(f, "{}", b.value()),
        }
    }
}

impl Serialize for BasisLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// One of the d+1 bases: `d` orthonormal kets of dimension `d`.
#[derive(Debug, Clone)]
pub struct MubBasis {
    pub label: BasisLabel,
    pub kets: Vec<StateVector>,
    pub dim: PrimeDim,
}

impl MubBasis {
    pub fn build(d: PrimeDim, label: BasisLabel) -> Self {
        let kets = d.residues().map(|m| mub_ket(d, label, m)).collect();
        Self {
            label,
            kets,
            dim: d,
        }
    }

    pub fn ket(&self, m: usize) -> &StateVector {
        &self.kets[m]
    }
}

/// The ket `|m; b>`.
pub fn mub_ket(d: PrimeDim, label: BasisLabel, m: Residue) -> StateVector {
    let n = d.size();
    match label {
        BasisLabel::Computational => StateVector::basis_state(n, m.value() as usize),
        BasisLabel::Fourier(b) => {
            let scale = 1.0 / (n as f64).sqrt();
            let bv = b.value() as i64;
            let mv = m.value() as i64;
            let mut v = StateVector::zeros(n);
            for k in 0..n as i64 {
                let e = bv * k * k - 2 * k * mv;
                v.set(k as usize, phase(d, e) * scale);
            }
            v
        }
    }
}

/// The cyclic shift `X|n> = |n+1 mod d>`.
pub fn pauli_x(d: PrimeDim) -> UnitaryMatrix {
    let n = d.size();
    let mut x = UnitaryMatrix::zeros(n);
    for j in 0..n {
        x.set((j + 1) % n, j, num_complex::Complex64::new(1.0, 0.0));
    }
    x
}

/// The clock operator `Z|n> = w^n |n>` with `w = exp(2*pi*i/d)`; for
/// `d = 2` this is the usual `diag(1, -1)`.
pub fn pauli_z(d: PrimeDim) -> UnitaryMatrix {
    z_power(d, 1)
}

/// `Z^k`, as a diagonal matrix of d-th roots of unity.
pub fn z_power(d: PrimeDim, k: i64) -> UnitaryMatrix {
    let n = d.size();
    let mut z = UnitaryMatrix::zeros(n);
    for j in 0..n {
        z.set(j, j, root_of_unity(d, k * j as i64));
    }
    z
}

/// Check orthonormality within each basis, unbiasedness across distinct
/// bases, and the flat-amplitude structure of the quadratic-phase kets.
pub fn verify_mub(d: PrimeDim, tol: &Tolerances) -> VerificationReport {
    let bases: Vec<MubBasis> = BasisLabel::all(d)
        .into_iter()
        .map(|label| MubBasis::build(d, label))
        .collect();
    let n = d.size();
    let target = 1.0 / n as f64;

    let mut ortho_dev = 0.0f64;
    let mut unbiased_dev = 0.0f64;
    let mut flat_dev = 0.0f64;

    for (bi, basis) in bases.iter().enumerate() {
        for (m, ket) in basis.kets.iter().enumerate() {
            for (m2, ket2) in basis.kets.iter().enumerate() {
                let expect = if m == m2 { 1.0 } else { 0.0 };
                ortho_dev = ortho_dev.max((ket.inner(ket2).norm() - expect).abs());
            }
            if matches!(basis.label, BasisLabel::Fourier(_)) {
                for k in 0..n {
                    flat_dev = flat_dev.max((ket.amp(k).norm() - target.sqrt()).abs());
                }
            }
            for other in bases.iter().skip(bi + 1) {
                for ket2 in &other.kets {
                    let overlap_sq = ket.inner(ket2).norm_sqr();
                    unbiased_dev = unbiased_dev.max((overlap_sq - target).abs());
                }
            }
        }
    }

    let mut report = VerificationReport::new();
    report.record("mub_orthonormality", ortho_dev, tol.structural);
    report.record("mub_unbiasedness", unbiased_dev, tol.structural);
    report.record("mub_fourier_flatness", flat_dev, tol.structural);
    report
}

/// Residual and eigenvalue of `X Z^{2b}` on `|m; b>`.
///
/// For odd prime `d`, every quadratic-phase ket is an eigenvector of
/// `X Z^{2b}` with a d-th-root-of-unity eigenvalue; the eigenvalue is read
/// off as the Rayleigh quotient.
pub fn eigenoperator_residual(
    d: PrimeDim,
    b: Residue,
    m: Residue,
) -> (f64, num_complex::Complex64) {
    let op = pauli_x(d).mul(&z_power(d, 2 * b.value() as i64));
    let ket = mub_ket(d, BasisLabel::Fourier(b), m);
    let image = op.apply(&ket);
    let lambda = ket.inner(&image);
    let mut residual = 0.0f64;
    for i in 0..d.size() {
        residual += (image.amp(i) - lambda * ket.amp(i)).norm_sqr();
    }
    (residual.sqrt(), lambda)
}

/// Eigenvector checks: computational kets against `Z` for every `d`, and
/// (odd `d` only) the quadratic-phase kets against `X Z^{2b}`.
pub fn verify_eigenoperators(d: PrimeDim, tol: &Tolerances) -> VerificationReport {
    let mut report = VerificationReport::new();

    let z = pauli_z(d);
    let mut z_dev = 0.0f64;
    for m in d.residues() {
        let ket = mub_ket(d, BasisLabel::Computational, m);
        let image = z.apply(&ket);
        let lambda = root_of_unity(d, m.value() as i64);
        for i in 0..d.size() {
            z_dev = z_dev.max((image.amp(i) - lambda * ket.amp(i)).norm());
        }
    }
    report.record("computational_z_eigenvector", z_dev, tol.structural);

    if !d.is_two() {
        let mut residual_dev = 0.0f64;
        let mut worst_root = 0.0f64;
        for b in d.residues() {
            for m in d.residues() {
                let (residual, lambda) = eigenoperator_residual(d, b, m);
                residual_dev = residual_dev.max(residual);
                let root_dev = (0..d.get() as i64)
                    .map(|j| (lambda - root_of_unity(d, j)).norm())
                    .fold(f64::INFINITY, f64::min);
                worst_root = worst_root.max(root_dev);
            }
        }
        report.record("fourier_eigen_residual", residual_dev, tol.structural);
        report.record("fourier_eigen_root_of_unity", worst_root, tol.structural);
    }

    report
}
