//! The end-to-end signaling protocol.
//!
//! Alice prepares an entangled pair `(c, r, s)`, the sender encodes a message
//! as the basis of a non-selective measurement on qudit 1, and Alice measures
//! the pair in the entangled basis of preparation. Conclusive outcomes decode
//! the basis exactly; the outcome equal to the preparation pair `(c, r)` is
//! inconclusive and carries probability exactly 1/d.
//!
//! Outcome statistics are available through two independent routes: a closed
//! form over residue arithmetic, and a brute-force route that builds the
//! joint state, applies the dephasing channel, and projects onto Alice's
//! basis. The two are cross-checked exhaustively by the verification suites.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::DephasingChannel;
use crate::entangle::{entangled_state, Preparation};
use crate::error::{Error, Result};
use crate::modmath::PrimeDim;
use crate::mub::BasisLabel;
use crate::report::{Tolerances, VerificationReport};

/// Alice's measured pair `(c', r')`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Outcome {
    pub c_prime: crate::modmath::Residue,
    pub r_prime: crate::modmath::Residue,
}

impl Outcome {
    pub fn new(c_prime: crate::modmath::Residue, r_prime: crate::modmath::Residue) -> Self {
        assert_eq!(c_prime.dim(), r_prime.dim(), "outcome dimension mismatch");
        Self { c_prime, r_prime }
    }

    /// All d^2 outcomes in lexicographic `(c', r')` order.
    pub fn all(d: PrimeDim) -> Vec<Outcome> {
        let mut out = Vec::with_capacity(d.size() * d.size());
        for c in d.residues() {
            for r in d.residues() {
                out.push(Outcome {
                    c_prime: c,
                    r_prime: r,
                });
            }
        }
        out
    }

    /// Position in the [`all`](Self::all) ordering.
    pub fn index(&self, d: PrimeDim) -> usize {
        (self.c_prime.value() * d.get() + self.r_prime.value()) as usize
    }
}

/// What Alice learns from one outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecodeResult {
    Decoded(BasisLabel),
    Inconclusive,
}

impl std::fmt::Display for DecodeResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecodeResult::Decoded(label) => write!(f, "{label}"),
            DecodeResult::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Probability that Alice detects `out` given the preparation and the
/// sender's basis choice: `(1/d) * delta_{c,c'}` for the computational
/// basis, `(1/d) * delta_{(b-s)c + r, (b-s)c' + r'}` for basis `b`, all
/// arithmetic mod d.
pub fn closed_form_probability(
    d: PrimeDim,
    message: BasisLabel,
    prep: &Preparation,
    out: &Outcome,
) -> f64 {
    let hit = match message {
        BasisLabel::Computational => prep.c == out.c_prime,
        BasisLabel::Fourier(b) => {
            let slope = b - prep.s;
            slope * prep.c + prep.r == slope * out.c_prime + out.r_prime
        }
    };
    if hit {
        1.0 / d.get() as f64
    } else {
        0.0
    }
}

/// The closed-form distribution over all d^2 outcomes, in `Outcome::all`
/// order.
pub fn closed_form_distribution(d: PrimeDim, message: BasisLabel, prep: &Preparation) -> Vec<f64> {
    Outcome::all(d)
        .iter()
        .map(|out| closed_form_probability(d, message, prep, out))
        .collect()
}

/// The brute-force route: build the entangled state, apply the non-selective
/// measurement channel, and project onto each of Alice's basis states
/// `|c', r'; s>`. Returned in `Outcome::all` order, paired with the outcome.
pub fn outcome_distribution(
    d: PrimeDim,
    message: BasisLabel,
    prep: &Preparation,
) -> Vec<(Outcome, f64)> {
    let psi = entangled_state(d, prep);
    let rho = DephasingChannel::new(d, message)
        .apply_nonselective(&psi)
        .expect("entangled state has joint dimension");
    Outcome::all(d)
        .into_iter()
        .map(|out| {
            let alice = entangled_state(
                d,
                &Preparation::new(out.c_prime, out.r_prime, prep.s),
            );
            let p = rho.expectation(&alice);
            (out, p)
        })
        .collect()
}

/// Decode one outcome against the preparation:
/// `c != c'` gives basis `s + (r - r')/(c' - c)`; `c = c', r != r'` gives the
/// computational basis; `c = c', r = r'` is inconclusive.
pub fn decode(prep: &Preparation, out: &Outcome) -> DecodeResult {
    if prep.c != out.c_prime {
        let inv = (out.c_prime - prep.c)
            .inverse()
            .expect("c' - c is nonzero here");
        let b = prep.s + (prep.r - out.r_prime) * inv;
        DecodeResult::Decoded(BasisLabel::Fourier(b))
    } else if prep.r != out.r_prime {
        DecodeResult::Decoded(BasisLabel::Computational)
    } else {
        DecodeResult::Inconclusive
    }
}

/// Sample one protocol round: draw an outcome from the exact distribution
/// and decode it. Deterministic given the RNG state.
pub fn simulate_round(
    rng: &mut impl Rng,
    d: PrimeDim,
    prep: &Preparation,
    message: BasisLabel,
) -> (Outcome, DecodeResult) {
    let probs = closed_form_distribution(d, message, prep);
    let outcomes = Outcome::all(d);
    let out = sample_index(rng, &probs).map(|i| outcomes[i]).expect(
        "closed-form distribution has positive total mass",
    );
    let result = decode(prep, &out);
    (out, result)
}

/// Inverse-CDF sampling over non-negative weights. Returns `None` only when
/// every weight is zero.
fn sample_index(rng: &mut impl Rng, weights: &[f64]) -> Option<usize> {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let u = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last_nonzero = None;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            acc += w;
            last_nonzero = Some(i);
            if u < acc {
                return Some(i);
            }
        }
    }
    last_nonzero
}

/// How the preparation is chosen per round.
#[derive(Debug, Clone, Copy)]
pub enum PrepPolicy {
    Fixed(Preparation),
    /// Draw `(c, r, s)` uniformly each round.
    ResampleUniform,
}

/// A distribution over the d+1 message labels, in `BasisLabel::all` order.
#[derive(Debug, Clone)]
pub struct MessagePrior {
    weights: Vec<f64>,
}

impl MessagePrior {
    pub fn uniform(d: PrimeDim) -> Self {
        Self {
            weights: vec![1.0; d.size() + 1],
        }
    }

    /// All mass on a single message.
    pub fn point(d: PrimeDim, message: BasisLabel) -> Self {
        let mut weights = vec![0.0; d.size() + 1];
        weights[message.index()] = 1.0;
        Self { weights }
    }

    /// Arbitrary non-negative weights over the d+1 labels; they need not be
    /// normalized.
    pub fn from_weights(d: PrimeDim, weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyPrior);
        }
        if weights.len() != d.size() + 1 {
            return Err(Error::PriorLength {
                expected: d.size() + 1,
                actual: weights.len(),
            });
        }
        if weights.iter().any(|w| *w < 0.0 || !w.is_finite())
            || weights.iter().sum::<f64>() <= 0.0
        {
            return Err(Error::InvalidPrior);
        }
        Ok(Self { weights })
    }

    /// Normalized probabilities, in `BasisLabel::all` order.
    pub fn probabilities(&self) -> Vec<f64> {
        let total: f64 = self.weights.iter().sum();
        self.weights.iter().map(|w| w / total).collect()
    }

    fn sample(&self, rng: &mut impl Rng, labels: &[BasisLabel]) -> BasisLabel {
        let i = sample_index(rng, &self.weights).expect("prior has positive mass");
        labels[i]
    }
}

/// Aggregated results of a batch of rounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialStats {
    pub trials: u64,
    pub conclusive: u64,
    /// sent message -> decoded message -> count; off-diagonals stay zero.
    pub confusion: BTreeMap<BasisLabel, BTreeMap<BasisLabel, u64>>,
    pub inconclusive_per_message: BTreeMap<BasisLabel, u64>,
}

impl TrialStats {
    fn empty(d: PrimeDim) -> Self {
        let labels = BasisLabel::all(d);
        let confusion = labels
            .iter()
            .map(|sent| {
                (
                    *sent,
                    labels.iter().map(|dec| (*dec, 0u64)).collect(),
                )
            })
            .collect();
        let inconclusive_per_message = labels.iter().map(|l| (*l, 0u64)).collect();
        Self {
            trials: 0,
            conclusive: 0,
            confusion,
            inconclusive_per_message,
        }
    }

    fn record(&mut self, sent: BasisLabel, result: DecodeResult) {
        self.trials += 1;
        match result {
            DecodeResult::Decoded(decoded) => {
                self.conclusive += 1;
                *self
                    .confusion
                    .get_mut(&sent)
                    .expect("all labels preinserted")
                    .get_mut(&decoded)
                    .expect("all labels preinserted") += 1;
            }
            DecodeResult::Inconclusive => {
                *self
                    .inconclusive_per_message
                    .get_mut(&sent)
                    .expect("all labels preinserted") += 1;
            }
        }
    }

    fn merge(mut self, other: TrialStats) -> TrialStats {
        self.trials += other.trials;
        self.conclusive += other.conclusive;
        for (sent, row) in other.confusion {
            let target = self.confusion.get_mut(&sent).expect("same label set");
            for (dec, count) in row {
                *target.get_mut(&dec).expect("same label set") += count;
            }
        }
        for (sent, count) in other.inconclusive_per_message {
            *self
                .inconclusive_per_message
                .get_mut(&sent)
                .expect("same label set") += count;
        }
        self
    }

    pub fn conclusive_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.conclusive as f64 / self.trials as f64
        }
    }

    /// Total count on decoded labels different from the sent one.
    pub fn off_diagonal_errors(&self) -> u64 {
        self.confusion
            .iter()
            .flat_map(|(sent, row)| {
                row.iter()
                    .filter(move |(dec, _)| *dec != sent)
                    .map(|(_, count)| *count)
            })
            .sum()
    }
}

/// Per-round RNG substreams: round `k` always sees the stream derived from
/// `(seed, k)`, so parallel execution reproduces the serial transcript.
#[derive(Debug, Clone, Copy)]
pub struct RngStream {
    seed: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn substream(&self, round: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(round);
        rng
    }
}

/// Run `n` protocol rounds. Each round draws, in order, the message from the
/// prior, the preparation (when resampling), and the outcome — all from its
/// own substream, so the aggregate is identical whether or not the rounds
/// run in parallel.
pub fn run_trials(
    seed: u64,
    d: PrimeDim,
    policy: &PrepPolicy,
    prior: &MessagePrior,
    n: u64,
    parallel: bool,
) -> Result<TrialStats> {
    if n == 0 {
        return Err(Error::NoTrials);
    }
    // surface prior shape errors before running
    let _ = MessagePrior::from_weights(d, prior.weights.clone())?;
    let labels = BasisLabel::all(d);
    let stream = RngStream::new(seed);

    let one_round = |k: u64| -> (BasisLabel, DecodeResult) {
        let mut rng = stream.substream(k);
        let message = prior.sample(&mut rng, &labels);
        let prep = match policy {
            PrepPolicy::Fixed(p) => *p,
            PrepPolicy::ResampleUniform => {
                let c = rng.gen_range(0..d.get());
                let r = rng.gen_range(0..d.get());
                let s = rng.gen_range(0..d.get());
                Preparation::from_values(d, c as i64, r as i64, s as i64)
            }
        };
        let (_, result) = simulate_round(&mut rng, d, &prep, message);
        (message, result)
    };

    let stats = if parallel {
        (0..n)
            .into_par_iter()
            .fold(
                || TrialStats::empty(d),
                |mut acc, k| {
                    let (message, result) = one_round(k);
                    acc.record(message, result);
                    acc
                },
            )
            .reduce(|| TrialStats::empty(d), TrialStats::merge)
    } else {
        let mut acc = TrialStats::empty(d);
        for k in 0..n {
            let (message, result) = one_round(k);
            acc.record(message, result);
        }
        acc
    };
    Ok(stats)
}

/// Compare the closed form against the brute-force route for every
/// `(message, outcome)` pair over the given preparations.
pub fn verify_oracle_equivalence(
    d: PrimeDim,
    preparations: &[Preparation],
    tol: &Tolerances,
) -> VerificationReport {
    let mut max_diff = 0.0f64;
    let mut closed_mass_dev = 0.0f64;
    let mut brute_mass_dev = 0.0f64;
    for message in BasisLabel::all(d) {
        for prep in preparations {
            let brute = outcome_distribution(d, message, prep);
            let mut closed_total = 0.0;
            let mut brute_total = 0.0;
            for (out, p_brute) in &brute {
                let p_closed = closed_form_probability(d, message, prep, out);
                max_diff = max_diff.max((p_closed - p_brute).abs());
                closed_total += p_closed;
                brute_total += p_brute;
            }
            closed_mass_dev = closed_mass_dev.max((closed_total - 1.0).abs());
            brute_mass_dev = brute_mass_dev.max((brute_total - 1.0).abs());
        }
    }
    let mut report = VerificationReport::new();
    report.record("oracle_max_abs_diff", max_diff, tol.oracle);
    report.record("closed_form_total_mass", closed_mass_dev, tol.oracle);
    report.record("brute_force_total_mass", brute_mass_dev, tol.oracle);
    report
}

/// Check the decode table against the closed-form supports: every conclusive
/// outcome in a message's support decodes to that message, the inconclusive
/// outcome `(c, r)` carries mass exactly 1/d, and the supports of two
/// distinct messages intersect only in `(c, r)`.
pub fn verify_decoding(
    d: PrimeDim,
    preparations: &[Preparation],
    tol: &Tolerances,
) -> VerificationReport {
    let labels = BasisLabel::all(d);
    let outcomes = Outcome::all(d);
    let inv_d = 1.0 / d.get() as f64;

    let mut wrong_decodes = 0u64;
    let mut inconclusive_mass_dev = 0.0f64;
    let mut intersection_errors = 0u64;

    for prep in preparations {
        let supports: Vec<Vec<usize>> = labels
            .iter()
            .map(|&message| {
                outcomes
                    .iter()
                    .enumerate()
                    .filter(|(_, out)| {
                        closed_form_probability(d, message, prep, out) > 0.0
                    })
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();

        let prep_index = (prep.c.value() * d.get() + prep.r.value()) as usize;
        for (label_idx, support) in supports.iter().enumerate() {
            let message = labels[label_idx];
            let p_inconclusive =
                closed_form_probability(d, message, prep, &outcomes[prep_index]);
            inconclusive_mass_dev = inconclusive_mass_dev.max((p_inconclusive - inv_d).abs());
            for &out_idx in support {
                if out_idx == prep_index {
                    continue;
                }
                match decode(prep, &outcomes[out_idx]) {
                    DecodeResult::Decoded(decoded) if decoded == message => {}
                    _ => wrong_decodes += 1,
                }
            }
        }

        for i in 0..supports.len() {
            for j in (i + 1)..supports.len() {
                let shared: Vec<usize> = supports[i]
                    .iter()
                    .filter(|idx| supports[j].contains(idx))
                    .copied()
                    .collect();
                if shared != vec![prep_index] {
                    intersection_errors += 1;
                }
            }
        }
    }

    let mut report = VerificationReport::new();
    report.record("decode_zero_error", wrong_decodes as f64, 0.0);
    report.record("inconclusive_mass", inconclusive_mass_dev, tol.structural);
    report.record("support_intersection", intersection_errors as f64, 0.0);
    report
}
