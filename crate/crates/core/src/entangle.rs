//! The d^3 maximally entangled two-qudit states.
//!
//! A preparation `(c, r, s)` fixes the state
//! `sum_n |n>_1 |c-n>_2 phase(s*n^2 - 2*r*n) / sqrt(d)`; for a given `s` the
//! d^2 states over `(c, r)` form an orthonormal basis of the joint space,
//! and every one of them has completely mixed one-qudit marginals.

use serde::Serialize;

use crate::linalg::{DensityMatrix, StateVector};
use crate::modmath::{phase, PrimeDim, Residue};
use crate::report::{Tolerances, VerificationReport};

/// The label `(c, r, s)` of an entangled two-qudit state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Preparation {
    pub c: Residue,
    pub r: Residue,
    pub s: Residue,
}

impl Preparation {
    pub fn new(c: Residue, r: Residue, s: Residue) -> Self {
        assert_eq!(c.dim(), r.dim(), "preparation dimension mismatch");
        assert_eq!(c.dim(), s.dim(), "preparation dimension mismatch");
        Self { c, r, s }
    }

    pub fn from_values(d: PrimeDim, c: i64, r: i64, s: i64) -> Self {
        Self {
            c: d.residue(c),
            r: d.residue(r),
            s: d.residue(s),
        }
    }

    pub fn dim(&self) -> PrimeDim {
        self.c.dim()
    }

    /// All d^3 preparations, in lexicographic `(c, r, s)` order.
    pub fn all(d: PrimeDim) -> Vec<Preparation> {
        let mut out = Vec::with_capacity(d.size().pow(3));
        for c in d.residues() {
            for r in d.residues() {
                for s in d.residues() {
                    out.push(Preparation { c, r, s });
                }
            }
        }
        out
    }
}

/// The normalized two-qudit state `|c, r; s>`: amplitude
/// `phase(s*n^2 - 2*r*n)/sqrt(d)` at joint index `(n, c-n mod d)`, zero
/// elsewhere. Qudit 1 is the slow index.
pub fn entangled_state(d: PrimeDim, prep: &Preparation) -> StateVector {
    let n = d.size();
    let scale = 1.0 / (n as f64).sqrt();
    let sv = prep.s.value() as i64;
    let rv = prep.r.value() as i64;
    let mut psi = StateVector::zeros(n * n);
    for k in d.residues() {
        let col = (prep.c - k).value() as usize;
        let kv = k.value() as i64;
        let e = sv * kv * kv - 2 * rv * kv;
        psi.set(k.value() as usize * n + col, phase(d, e) * scale);
    }
    psi
}

/// Check that the d^2 states at fixed `s` form an orthonormal basis and that
/// both one-qudit marginals of each state are completely mixed.
pub fn verify_entangled_basis(d: PrimeDim, s: Residue, tol: &Tolerances) -> VerificationReport {
    let states: Vec<StateVector> = d
        .residues()
        .flat_map(|c| {
            d.residues()
                .map(move |r| entangled_state(d, &Preparation::new(c, r, s)))
        })
        .collect();

    let mut gram_dev = 0.0f64;
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let expect = if i == j { 1.0 } else { 0.0 };
            gram_dev = gram_dev.max((a.inner(b).norm() - expect).abs());
        }
    }

    let mixed = DensityMatrix::maximally_mixed(d.size());
    let mut marginal1_dev = 0.0f64;
    let mut marginal2_dev = 0.0f64;
    for state in &states {
        let rho = state.projector();
        let m1 = rho.partial_trace_keep1(d).expect("joint dimension");
        let m2 = rho.partial_trace_keep2(d).expect("joint dimension");
        marginal1_dev = marginal1_dev.max(m1.frobenius_distance(&mixed).unwrap());
        marginal2_dev = marginal2_dev.max(m2.frobenius_distance(&mixed).unwrap());
    }

    let mut report = VerificationReport::new();
    report.record("entangled_gram", gram_dev, tol.structural);
    report.record("entangled_marginal_qudit1", marginal1_dev, tol.structural);
    report.record("entangled_marginal_qudit2", marginal2_dev, tol.structural);
    report
}
