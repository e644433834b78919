//! Simulator for a two-qudit signaling protocol in prime dimension, where
//! the message is the *choice* of a non-selective measurement basis rather
//! than any measurement outcome.
//!
//! The crate provides:
//!
//! - construction of the d+1 mutually unbiased bases and the generalized
//!   Pauli (clock and shift) operators ([`mub`]);
//! - the d^3 maximally entangled two-qudit states ([`entangle`]);
//! - the non-selective measurement channel in two independent realizations,
//!   projector dephasing and the average of harmonic diagonal unitaries
//!   ([`channel`]);
//! - exact outcome statistics by closed form and by brute force, decoding,
//!   and seeded Monte Carlo with per-round RNG substreams ([`protocol`]);
//! - the induced discrete channel and its mutual information ([`info`]).
//!
//! All dense linear algebra is exact to floating point over the small
//! dimensions involved; verification suites report named maximum deviations
//! against the central [`Tolerances`].

pub mod channel;
pub mod entangle;
pub mod error;
pub mod info;
pub mod linalg;
pub mod modmath;
pub mod mub;
pub mod protocol;
pub mod report;

pub use channel::{diagonal_unitary, verify_channel, DephasingChannel};
pub use entangle::{entangled_state, verify_entangled_basis, Preparation};
pub use error::{Error, Result};
pub use info::{channel_matrix, info_report, uniform_prior, DiscreteChannel, InfoReport};
pub use linalg::{DensityMatrix, StateVector, UnitaryMatrix};
pub use modmath::{is_prime, phase, root_of_unity, PhaseExponent, PrimeDim, Residue};
pub use mub::{mub_ket, pauli_x, pauli_z, verify_eigenoperators, verify_mub, BasisLabel, MubBasis};
pub use protocol::{
    closed_form_probability, decode, outcome_distribution, run_trials, simulate_round,
    verify_decoding, verify_oracle_equivalence, DecodeResult, MessagePrior, Outcome, PrepPolicy,
    RngStream, TrialStats,
};
pub use report::{Check, Tolerances, VerificationReport};
