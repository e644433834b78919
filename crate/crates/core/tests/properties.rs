//! Property-based invariants over randomized inputs.

use mubsig_core::{
    channel_matrix, phase, BasisLabel, DephasingChannel, Preparation, PrimeDim, StateVector,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn dim(d: u64) -> PrimeDim {
    PrimeDim::new(d).unwrap()
}

fn normalized_state(dim: usize, raw: &[(f64, f64)]) -> StateVector {
    let mut v = StateVector::new(
        raw.iter()
            .take(dim)
            .map(|(re, im)| Complex64::new(*re, *im))
            .collect(),
    );
    let n = v.norm();
    for i in 0..dim {
        v.set(i, v.amp(i) / n);
    }
    v
}

proptest! {
    #[test]
    fn phase_multiplicativity(
        d in prop::sample::select(vec![2u64, 3, 5, 7]),
        e1 in -10_000i64..10_000,
        e2 in -10_000i64..10_000,
    ) {
        let pd = dim(d);
        let lhs = phase(pd, e1) * phase(pd, e2);
        let rhs = phase(pd, e1 + e2);
        prop_assert!((lhs - rhs).norm() <= 1e-14);
    }

    #[test]
    fn tensor_amplitudes_follow_index_convention(
        raw1 in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5),
        raw2 in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 5),
        d1 in 2usize..=5,
        d2 in 2usize..=5,
    ) {
        prop_assume!(raw1.iter().take(d1).any(|(re, im)| re.abs() + im.abs() > 1e-3));
        prop_assume!(raw2.iter().take(d2).any(|(re, im)| re.abs() + im.abs() > 1e-3));
        let u = normalized_state(d1, &raw1);
        let v = normalized_state(d2, &raw2);
        let t = u.tensor(&v);
        prop_assert_eq!(t.dim(), d1 * d2);
        for n1 in 0..d1 {
            for n2 in 0..d2 {
                let expect = u.amp(n1) * v.amp(n2);
                prop_assert!((t.amp(n1 * d2 + n2) - expect).norm() <= 1e-14);
            }
        }
        prop_assert!((t.norm() - u.norm() * v.norm()).abs() <= 1e-12);
    }

    #[test]
    fn product_state_marginals_are_recovered(
        raw1 in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3),
        raw2 in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3),
    ) {
        prop_assume!(raw1.iter().any(|(re, im)| re.abs() + im.abs() > 1e-3));
        prop_assume!(raw2.iter().any(|(re, im)| re.abs() + im.abs() > 1e-3));
        let d = dim(3);
        let a = normalized_state(3, &raw1);
        let b = normalized_state(3, &raw2);
        let joint = a.tensor(&b).projector();
        let keep1 = joint.partial_trace_keep1(d).unwrap();
        let keep2 = joint.partial_trace_keep2(d).unwrap();
        prop_assert!(keep1.frobenius_distance(&a.projector()).unwrap() <= 1e-12);
        prop_assert!(keep2.frobenius_distance(&b.projector()).unwrap() <= 1e-12);
    }

    #[test]
    fn channel_preserves_trace_and_hermiticity(
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 9),
        basis_pick in 0usize..4,
    ) {
        prop_assume!(raw.iter().any(|(re, im)| re.abs() + im.abs() > 1e-3));
        let d = dim(3);
        let psi = normalized_state(9, &raw);
        let label = BasisLabel::all(d)[basis_pick];
        let rho = DephasingChannel::new(d, label).apply_nonselective(&psi).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() <= 1e-12);
        prop_assert!(rho.hermiticity_deviation() <= 1e-12);
        prop_assert!(rho.is_positive_semidefinite(1e-10));
    }

    #[test]
    fn mutual_information_is_bounded(
        weights in prop::collection::vec(0.0f64..1.0, 6),
        c in 0i64..5,
        r in 0i64..5,
        s in 0i64..5,
    ) {
        prop_assume!(weights.iter().sum::<f64>() > 1e-6);
        let d = dim(5);
        let total: f64 = weights.iter().sum();
        let prior: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let ch = channel_matrix(d, &Preparation::from_values(d, c, r, s));
        let mi = ch.mutual_information(&prior).unwrap();
        prop_assert!(mi >= -1e-12);
        prop_assert!(mi <= 6f64.log2() + 1e-12);
    }
}
