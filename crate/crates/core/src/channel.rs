//! Non-selective measurement on qudit 1 as a quantum channel.
//!
//! Measuring qudit 1 in a basis `b` and discarding the outcome dephases the
//! joint state in that basis: `rho -> sum_m (P_m (x) I) rho (P_m (x) I)`.
//! The same map is realized as the uniform average of the d harmonic
//! diagonal unitaries `U_k = sum_m w^{k m} |m;b><m;b|` with
//! `w = exp(2*pi*i/d)`; the two routes are implemented independently and
//! cross-checked.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, StateVector, UnitaryMatrix};
use crate::modmath::{root_of_unity, PrimeDim, Residue};
use crate::mub::{BasisLabel, MubBasis};
use crate::entangle::{entangled_state, Preparation};
use crate::report::{Tolerances, VerificationReport};

/// The dephasing channel induced by a non-selective measurement of qudit 1
/// in the basis `basis`.
#[derive(Debug, Clone)]
pub struct DephasingChannel {
    d: PrimeDim,
    basis: MubBasis,
}

impl DephasingChannel {
    pub fn new(d: PrimeDim, basis: BasisLabel) -> Self {
        Self {
            d,
            basis: MubBasis::build(d, basis),
        }
    }

    pub fn dim(&self) -> PrimeDim {
        self.d
    }

    pub fn basis_label(&self) -> BasisLabel {
        self.basis.label
    }

    /// Apply the channel to a pure two-qudit state: the output is
    /// `sum_m |w_m><w_m|` over the projected branches
    /// `|w_m> = (P_m (x) I) |psi>`.
    pub fn apply_nonselective(&self, psi: &StateVector) -> Result<DensityMatrix> {
        let branches = self.branches(psi)?;
        let n = self.d.size();
        let mut rho = DensityMatrix::zeros(n * n);
        for w in &branches {
            rho.add_scaled_outer(w, 1.0);
        }
        Ok(rho)
    }

    /// Density-matrix-in variant, for chaining. Acts as
    /// `rho -> sum_m (P_m (x) I) rho (P_m (x) I)`.
    pub fn apply_to_density(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let n = self.d.size();
        if rho.dim() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: rho.dim(),
            });
        }
        let mut out = DensityMatrix::zeros(n * n);
        for ket in &self.basis.kets {
            for j1 in 0..n {
                for j2 in 0..n {
                    // s = <ket (x) j1| rho |ket (x) j2>
                    let mut s = Complex64::new(0.0, 0.0);
                    for n1 in 0..n {
                        for n2 in 0..n {
                            s += ket.amp(n1).conj()
                                * rho.get(n1 * n + j1, n2 * n + j2)
                                * ket.amp(n2);
                        }
                    }
                    if s.norm_sqr() == 0.0 {
                        continue;
                    }
                    for i1 in 0..n {
                        let left = ket.amp(i1) * s;
                        for i2 in 0..n {
                            let add = left * ket.amp(i2).conj();
                            let cur = out.get(i1 * n + j1, i2 * n + j2);
                            out.set(i1 * n + j1, i2 * n + j2, cur + add);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// The independent realization: average the conjugations by the d
    /// harmonic diagonal unitaries, `(1/d) sum_k (U_k (x) I) rho (U_k (x) I)^dagger`.
    pub fn unitary_average(&self, psi: &StateVector) -> Result<DensityMatrix> {
        let n = self.d.size();
        if psi.dim() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: psi.dim(),
            });
        }
        let rho = psi.projector();
        let weight = 1.0 / n as f64;
        let mut out = DensityMatrix::zeros(n * n);
        for k in self.d.residues() {
            let u = diagonal_unitary(self.d, self.basis.label, k).tensor_identity(n);
            let term = u.conjugate_density(&rho);
            for i in 0..n * n {
                for j in 0..n * n {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + term.get(i, j) * weight);
                }
            }
        }
        Ok(out)
    }

    /// The projected branches `(P_m (x) I)|psi>` for `m = 0..d`.
    fn branches(&self, psi: &StateVector) -> Result<Vec<StateVector>> {
        let n = self.d.size();
        if psi.dim() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: psi.dim(),
            });
        }
        let mut branches = Vec::with_capacity(n);
        for ket in &self.basis.kets {
            // t[j] = <ket|_1 psi[., j]
            let mut w = StateVector::zeros(n * n);
            for j in 0..n {
                let mut t = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    t += ket.amp(k).conj() * psi.amp(k * n + j);
                }
                for i in 0..n {
                    w.set(i * n + j, ket.amp(i) * t);
                }
            }
            branches.push(w);
        }
        Ok(branches)
    }
}

/// The k-th harmonic diagonal unitary of a basis:
/// `U_k = sum_m w^{k m} |m;b><m;b|` with `w = exp(2*pi*i/d)`. `U_0` is the
/// identity, and the uniform average of `U_k rho U_k^dagger` over all k
/// equals the dephasing map in that basis.
pub fn diagonal_unitary(d: PrimeDim, basis: BasisLabel, k: Residue) -> UnitaryMatrix {
    let n = d.size();
    let kets = MubBasis::build(d, basis).kets;
    let mut u = UnitaryMatrix::zeros(n);
    for (m, ket) in kets.iter().enumerate() {
        let w = root_of_unity(d, k.value() as i64 * m as i64);
        for i in 0..n {
            for j in 0..n {
                let cur = u.get(i, j);
                u.set(i, j, cur + w * ket.amp(i) * ket.amp(j).conj());
            }
        }
    }
    u
}

/// Cross-check the channel over the given preparations and every basis:
/// dual-realization agreement, trace preservation, idempotence, and the
/// 1/d output purity on maximally entangled inputs.
pub fn verify_channel(
    d: PrimeDim,
    preparations: &[Preparation],
    tol: &Tolerances,
) -> VerificationReport {
    let mut dual_dev = 0.0f64;
    let mut trace_dev = 0.0f64;
    let mut idem_dev = 0.0f64;
    let mut purity_dev = 0.0f64;
    let target_purity = 1.0 / d.get() as f64;

    for label in BasisLabel::all(d) {
        let ch = DephasingChannel::new(d, label);
        for prep in preparations {
            let psi = entangled_state(d, prep);
            let by_projectors = ch.apply_nonselective(&psi).expect("dimensions match");
            let by_unitaries = ch.unitary_average(&psi).expect("dimensions match");
            dual_dev = dual_dev.max(
                by_projectors
                    .frobenius_distance(&by_unitaries)
                    .expect("same dims"),
            );
            trace_dev = trace_dev.max((by_projectors.trace().re - 1.0).abs());
            let twice = ch.apply_to_density(&by_projectors).expect("dimensions match");
            idem_dev = idem_dev.max(
                twice
                    .frobenius_distance(&by_projectors)
                    .expect("same dims"),
            );
            purity_dev = purity_dev.max((by_projectors.purity() - target_purity).abs());
        }
    }

    let mut report = VerificationReport::new();
    report.record("channel_dual_realization", dual_dev, tol.structural);
    report.record("channel_trace_preservation", trace_dev, tol.structural);
    report.record("channel_idempotence", idem_dev, tol.structural);
    report.record("channel_output_purity", purity_dev, tol.structural);
    report
}
