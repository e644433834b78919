//! Composition of the library verification suites for `mubsig verify`.

use mubsig_core::{
    verify_channel, verify_decoding, verify_eigenoperators, verify_entangled_basis, verify_mub,
    verify_oracle_equivalence, Preparation, PrimeDim, Tolerances, VerificationReport,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Number of preparations sampled when the exhaustive grid is too large.
const SAMPLE_COUNT: usize = 50;

/// Exhaustive preparations up to `limit`, a seeded sample beyond it.
fn preparations(d: PrimeDim, seed: u64, limit: u64) -> Vec<Preparation> {
    if d.get() <= limit {
        Preparation::all(d)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..SAMPLE_COUNT)
            .map(|_| {
                Preparation::from_values(
                    d,
                    rng.gen_range(0..d.get()) as i64,
                    rng.gen_range(0..d.get()) as i64,
                    rng.gen_range(0..d.get()) as i64,
                )
            })
            .collect()
    }
}

/// Run every invariant suite for the configured dimension and collect the
/// named maximum deviations.
pub fn full_verification(d: PrimeDim, seed: u64, tol: &Tolerances) -> VerificationReport {
    let mut report = verify_mub(d, tol);
    report.merge(verify_eigenoperators(d, tol));

    // entangled-basis checks, folded over the basis parameter s
    let s_values: Vec<_> = if d.get() <= 13 {
        d.residues().collect()
    } else {
        d.residues().take(2).collect()
    };
    let mut gram = 0.0f64;
    let mut marginal1 = 0.0f64;
    let mut marginal2 = 0.0f64;
    for s in s_values {
        let r = verify_entangled_basis(d, s, tol);
        gram = gram.max(r.deviation_of("entangled_gram").unwrap());
        marginal1 = marginal1.max(r.deviation_of("entangled_marginal_qudit1").unwrap());
        marginal2 = marginal2.max(r.deviation_of("entangled_marginal_qudit2").unwrap());
    }
    report.record("entangled_gram", gram, tol.structural);
    report.record("entangled_marginal_qudit1", marginal1, tol.structural);
    report.record("entangled_marginal_qudit2", marginal2, tol.structural);

    report.merge(verify_channel(d, &preparations(d, seed, 3), tol));
    report.merge(verify_oracle_equivalence(d, &preparations(d, seed, 5), tol));
    report.merge(verify_decoding(d, &preparations(d, seed, 7), tol));
    report
}
