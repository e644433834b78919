//! Dense complex vectors and matrices over the small dimensions `d` and `d^2`.
//!
//! Everything is stored row-major. For the two-qudit space the joint index is
//! `n1 * d + n2` with qudit 1 as the slow index; every module in this crate
//! relies on that single convention.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modmath::PrimeDim;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            amps: vec![ZERO; dim],
        }
    }

    /// The standard basis ket `|index>`.
    pub fn basis_state(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amp(&self, i: usize) -> Complex64 {
        self.amps[i]
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn set(&mut self, i: usize, value: Complex64) {
        self.amps[i] = value;
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "state dimension mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Tensor product; the joint amplitude at `i * other.dim() + j` is
    /// `self[i] * other[j]` (self is the slow index).
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector { amps }
    }

    /// The rank-1 projector `|self><self|`.
    pub fn projector(&self) -> DensityMatrix {
        let n = self.dim();
        let mut rho = DensityMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                rho.entries[i * n + j] = self.amps[i] * self.amps[j].conj();
            }
        }
        rho
    }
}

/// A dim x dim complex matrix intended to hold a density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    /// The completely mixed state `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let mut rho = Self::zeros(dim);
        let w = Complex64::new(1.0 / dim as f64, 0.0);
        for i in 0..dim {
            rho.entries[i * dim + i] = w;
        }
        rho
    }

    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(entries.len(), dim * dim, "entry count mismatch");
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    /// `Re tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                // tr(A A) = sum_ij A_ij A_ji; for Hermitian A_ji = conj(A_ij)
                acc += (self.entries[i * n + j] * self.entries[j * n + i]).re;
            }
        }
        acc
    }

    /// Largest entry-wise deviation from Hermiticity.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut max = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let dev = (self.entries[i * n + j] - self.entries[j * n + i].conj()).norm();
                max = max.max(dev);
            }
        }
        max
    }

    /// Spot-check positive semidefiniteness by Cholesky-style elimination:
    /// a pivot below `-tol`, or a non-vanishing column under a zero pivot,
    /// disqualifies the matrix.
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        let n = self.dim;
        let mut a = self.entries.clone();
        for k in 0..n {
            let pivot = a[k * n + k].re;
            if pivot < -tol {
                return false;
            }
            if pivot <= tol {
                for i in (k + 1)..n {
                    if a[i * n + k].norm() > tol.sqrt() {
                        return false;
                    }
                }
                continue;
            }
            for i in (k + 1)..n {
                let lik = a[i * n + k] / pivot;
                for j in (k + 1)..n {
                    let update = lik * a[k * n + j];
                    a[i * n + j] -= update;
                }
            }
        }
        true
    }

    /// Frobenius distance `||self - other||_F`.
    pub fn frobenius_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        let sum: f64 = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok(sum.sqrt())
    }

    /// Trace out qudit 2, keeping qudit 1 (the slow index). `self` must act
    /// on the joint space of dimension `d^2`.
    pub fn partial_trace_keep1(&self, d: PrimeDim) -> Result<DensityMatrix> {
        let dd = d.size();
        self.check_joint_dim(dd)?;
        let mut out = DensityMatrix::zeros(dd);
        for i1 in 0..dd {
            for i2 in 0..dd {
                let mut acc = ZERO;
                for j in 0..dd {
                    acc += self.entries[(i1 * dd + j) * self.dim + (i2 * dd + j)];
                }
                out.entries[i1 * dd + i2] = acc;
            }
        }
        Ok(out)
    }

    /// Trace out qudit 1, keeping qudit 2 (the fast index).
    pub fn partial_trace_keep2(&self, d: PrimeDim) -> Result<DensityMatrix> {
        let dd = d.size();
        self.check_joint_dim(dd)?;
        let mut out = DensityMatrix::zeros(dd);
        for j1 in 0..dd {
            for j2 in 0..dd {
                let mut acc = ZERO;
                for i in 0..dd {
                    acc += self.entries[(i * dd + j1) * self.dim + (i * dd + j2)];
                }
                out.entries[j1 * dd + j2] = acc;
            }
        }
        Ok(out)
    }

    fn check_joint_dim(&self, d: usize) -> Result<()> {
        if self.dim != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                actual: self.dim,
            });
        }
        Ok(())
    }

    /// `self += weight * |v><v|`.
    pub fn add_scaled_outer(&mut self, v: &StateVector, weight: f64) {
        assert_eq!(self.dim, v.dim(), "state dimension mismatch");
        let n = self.dim;
        for i in 0..n {
            let wi = v.amp(i) * weight;
            for j in 0..n {
                self.entries[i * n + j] += wi * v.amp(j).conj();
            }
        }
    }

    /// `<v|rho|v>` as a real number (the imaginary part of a Hermitian
    /// quadratic form vanishes).
    pub fn expectation(&self, v: &StateVector) -> f64 {
        assert_eq!(self.dim, v.dim(), "state dimension mismatch");
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            let mut row = ZERO;
            for j in 0..n {
                row += self.entries[i * n + j] * v.amp(j);
            }
            acc += v.amp(i).conj() * row;
        }
        acc.re
    }
}

/// A dim x dim complex matrix intended to hold a unitary operator.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = ONE;
        }
        Self { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Self {
        assert_eq!(entries.len(), dim * dim, "entry count mismatch");
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn mul(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = UnitaryMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.entries[i * n + k];
                if aik == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += aik * other.entries[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        let n = self.dim;
        let mut out = UnitaryMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        out
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        assert_eq!(self.dim, v.dim(), "state dimension mismatch");
        let n = self.dim;
        let mut out = StateVector::zeros(n);
        for i in 0..n {
            let mut acc = ZERO;
            for j in 0..n {
                acc += self.entries[i * n + j] * v.amp(j);
            }
            out.set(i, acc);
        }
        out
    }

    /// `U rho U^dagger`.
    pub fn conjugate_density(&self, rho: &DensityMatrix) -> DensityMatrix {
        assert_eq!(self.dim, rho.dim(), "matrix dimension mismatch");
        let n = self.dim;
        // tmp = U * rho
        let mut tmp = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let uik = self.entries[i * n + k];
                if uik == ZERO {
                    continue;
                }
                for j in 0..n {
                    tmp[i * n + j] += uik * rho.get(k, j);
                }
            }
        }
        // out = tmp * U^dagger
        let mut out = DensityMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += tmp[i * n + k] * self.entries[j * n + k].conj();
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// `self (x) I_d2`, acting on the joint space with `self` on the slow index.
    pub fn tensor_identity(&self, d2: usize) -> UnitaryMatrix {
        let n = self.dim;
        let mut out = UnitaryMatrix::zeros(n * d2);
        for i in 0..n {
            for j in 0..n {
                let v = self.entries[i * n + j];
                if v == ZERO {
                    continue;
                }
                for k in 0..d2 {
                    out.entries[(i * d2 + k) * n * d2 + (j * d2 + k)] = v;
                }
            }
        }
        out
    }

    /// Largest entry-wise deviation of `U U^dagger` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut max = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += self.entries[i * n + k] * self.entries[j * n + k].conj();
                }
                let expect = if i == j { ONE } else { ZERO };
                max = max.max((acc - expect).norm());
            }
        }
        max
    }
}
