//! Information-theoretic analysis of the signaling channel.
//!
//! The channel has d+1 inputs (the basis labels) and d^2 outputs (Alice's
//! outcomes). Each input's row puts mass 1/d on d outcomes; the single
//! outcome `(c, r)` is common to every row, and the remaining supports are
//! disjoint, which makes the uniform-prior mutual information
//! `((d-1)/d) * log2(d+1)` — every conclusive outcome identifies its input.

use serde::Serialize;

use crate::entangle::Preparation;
use crate::error::{Error, Result};
use crate::modmath::PrimeDim;
use crate::mub::BasisLabel;
use crate::protocol::{closed_form_probability, decode, DecodeResult, Outcome};

/// A discrete memoryless channel from basis labels to outcomes; each row is
/// a conditional distribution.
#[derive(Debug, Clone, Serialize)]
pub struct DiscreteChannel {
    pub input_labels: Vec<BasisLabel>,
    pub output_labels: Vec<Outcome>,
    /// `rows[i][j] = P(output j | input i)`.
    pub rows: Vec<Vec<f64>>,
}

impl DiscreteChannel {
    /// Mutual information in bits between input and output under `prior`.
    pub fn mutual_information(&self, prior: &[f64]) -> Result<f64> {
        if prior.len() != self.rows.len() {
            return Err(Error::PriorLength {
                expected: self.rows.len(),
                actual: prior.len(),
            });
        }
        Ok(mutual_information_from_rows(prior, &self.rows))
    }
}

/// `I(input; output)` in bits for a row-stochastic matrix and an input
/// distribution, with `0 log 0 = 0`.
pub fn mutual_information_from_rows(prior: &[f64], rows: &[Vec<f64>]) -> f64 {
    let n_out = rows.first().map_or(0, |r| r.len());
    let mut marginal = vec![0.0f64; n_out];
    for (p, row) in prior.iter().zip(rows) {
        for (q, v) in marginal.iter_mut().zip(row) {
            *q += p * v;
        }
    }
    let mut bits = 0.0f64;
    for (p, row) in prior.iter().zip(rows) {
        if *p == 0.0 {
            continue;
        }
        for (v, q) in row.iter().zip(&marginal) {
            if *v > 0.0 {
                bits += p * v * (v / q).log2();
            }
        }
    }
    bits
}

/// A uniform distribution over `n` symbols.
pub fn uniform_prior(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

/// Assemble the channel matrix from the closed form: one row per message,
/// one column per outcome in `Outcome::all` order.
pub fn channel_matrix(d: PrimeDim, prep: &Preparation) -> DiscreteChannel {
    let input_labels = BasisLabel::all(d);
    let output_labels = Outcome::all(d);
    let rows = input_labels
        .iter()
        .map(|&message| {
            output_labels
                .iter()
                .map(|out| closed_form_probability(d, message, prep, out))
                .collect()
        })
        .collect();
    DiscreteChannel {
        input_labels,
        output_labels,
        rows,
    }
}

/// The channel from messages to decode results (d+2 outputs: the d+1 labels
/// plus inconclusive), obtained by pushing each outcome through the decoder.
/// Decoding is a sufficient statistic, so its mutual information matches the
/// outcome channel's.
pub fn decode_channel(d: PrimeDim, prep: &Preparation) -> Vec<Vec<f64>> {
    let labels = BasisLabel::all(d);
    let outcomes = Outcome::all(d);
    labels
        .iter()
        .map(|&message| {
            let mut row = vec![0.0f64; labels.len() + 1];
            for out in &outcomes {
                let p = closed_form_probability(d, message, prep, out);
                if p == 0.0 {
                    continue;
                }
                match decode(prep, out) {
                    DecodeResult::Decoded(label) => row[label.index()] += p,
                    DecodeResult::Inconclusive => row[labels.len()] += p,
                }
            }
            row
        })
        .collect()
}

/// Summary of the information carried by one protocol use, with the
/// dense-coding reference values alongside.
#[derive(Debug, Clone, Serialize)]
pub struct InfoReport {
    pub dim: u64,
    /// Uniform-prior mutual information computed from the channel matrix.
    pub mutual_information_bits: f64,
    /// `((d-1)/d) * log2(d+1)`, the same quantity in closed form.
    pub closed_form_bits: f64,
    pub log2_d: f64,
    pub two_log2_d: f64,
    /// Whether the computed mutual information exceeds `log2 d`. Reported as
    /// a comparison, never asserted: for every prime tested it is false.
    pub exceeds_log2_d: bool,
}

pub fn info_report(d: PrimeDim, prep: &Preparation) -> InfoReport {
    let channel = channel_matrix(d, prep);
    let prior = uniform_prior(channel.rows.len());
    let mi = channel
        .mutual_information(&prior)
        .expect("prior length matches");
    let df = d.get() as f64;
    let log2_d = df.log2();
    InfoReport {
        dim: d.get(),
        mutual_information_bits: mi,
        closed_form_bits: (df - 1.0) / df * (df + 1.0).log2(),
        log2_d,
        two_log2_d: 2.0 * log2_d,
        exceeds_log2_d: mi > log2_d,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn dim(d: u64) -> PrimeDim {
        PrimeDim::new(d).unwrap()
    }

    #[test]
    fn qubit_channel_matrix_shape() {
        let d = dim(2);
        let prep = Preparation::from_values(d, 0, 0, 0);
        let ch = channel_matrix(d, &prep);
        assert_eq!(ch.rows.len(), 3);
        assert_eq!(ch.rows[0].len(), 4);
        for row in &ch.rows {
            let half_entries = row.iter().filter(|p| **p == 0.5).count();
            assert_eq!(half_entries, 2);
            assert_abs_diff_eq!(row.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn every_row_shares_the_inconclusive_column() {
        for d in [2u64, 3, 5] {
            let pd = dim(d);
            for prep in Preparation::all(pd) {
                let ch = channel_matrix(pd, &prep);
                let col = (prep.c.value() * d + prep.r.value()) as usize;
                for row in &ch.rows {
                    assert_eq!(row[col], 1.0 / d as f64);
                }
            }
        }
    }

    #[test]
    fn point_mass_prior_gives_zero_bits() {
        let d = dim(3);
        let ch = channel_matrix(d, &Preparation::from_values(d, 0, 0, 0));
        let mut prior = vec![0.0; 4];
        prior[2] = 1.0;
        assert_eq!(ch.mutual_information(&prior).unwrap(), 0.0);
    }

    #[test]
    fn qubit_uniform_mutual_information() {
        let d = dim(2);
        let ch = channel_matrix(d, &Preparation::from_values(d, 0, 0, 0));
        let mi = ch.mutual_information(&uniform_prior(3)).unwrap();
        // (1/2) log2 3
        assert_abs_diff_eq!(mi, 0.7924812503605781, epsilon = 1e-12);
    }

    #[test]
    fn qutrit_uniform_mutual_information_is_four_thirds() {
        let d = dim(3);
        let ch = channel_matrix(d, &Preparation::from_values(d, 1, 2, 1));
        let mi = ch.mutual_information(&uniform_prior(4)).unwrap();
        assert_abs_diff_eq!(mi, 4.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn closed_form_matches_matrix_for_many_dims() {
        for d in [2u64, 3, 5, 7, 11] {
            let pd = dim(d);
            let prep = Preparation::from_values(pd, 1, 0, 1);
            let report = info_report(pd, &prep);
            assert_abs_diff_eq!(
                report.mutual_information_bits,
                report.closed_form_bits,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn mutual_information_is_preparation_independent() {
        for d in [2u64, 3] {
            let pd = dim(d);
            let prior = uniform_prior(pd.size() + 1);
            let reference = channel_matrix(pd, &Preparation::from_values(pd, 0, 0, 0))
                .mutual_information(&prior)
                .unwrap();
            for prep in Preparation::all(pd) {
                let mi = channel_matrix(pd, &prep)
                    .mutual_information(&prior)
                    .unwrap();
                assert_abs_diff_eq!(mi, reference, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn decode_is_a_sufficient_statistic() {
        for d in [2u64, 3, 5] {
            let pd = dim(d);
            let prep = Preparation::from_values(pd, 1, 1, 0);
            let prior = uniform_prior(pd.size() + 1);
            let via_outcomes = channel_matrix(pd, &prep)
                .mutual_information(&prior)
                .unwrap();
            let via_decode =
                mutual_information_from_rows(&prior, &decode_channel(pd, &prep));
            assert_abs_diff_eq!(via_outcomes, via_decode, epsilon = 1e-12);
        }
    }

    #[test]
    fn report_fields() {
        let d = dim(3);
        let report = info_report(d, &Preparation::from_values(d, 0, 0, 0));
        assert_abs_diff_eq!(report.mutual_information_bits, 4.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.log2_d, 3f64.log2(), epsilon = 1e-15);
        assert_abs_diff_eq!(report.two_log2_d, 2.0 * 3f64.log2(), epsilon = 1e-15);
        // 1.333 < 1.585: the comparison flag stays false
        assert!(!report.exceeds_log2_d);

        let d2 = dim(2);
        let report2 = info_report(d2, &Preparation::from_values(d2, 0, 0, 0));
        assert!(!report2.exceeds_log2_d);
        assert_abs_diff_eq!(report2.log2_d, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn prior_length_is_checked() {
        let d = dim(3);
        let ch = channel_matrix(d, &Preparation::from_values(d, 0, 0, 0));
        assert!(ch.mutual_information(&[0.5, 0.5]).is_err());
    }

    #[test]
    fn information_bounds() {
        let d = dim(5);
        let ch = channel_matrix(d, &Preparation::from_values(d, 2, 3, 4));
        let priors = [
            uniform_prior(6),
            vec![0.5, 0.1, 0.1, 0.1, 0.1, 0.1],
            vec![0.9, 0.02, 0.02, 0.02, 0.02, 0.02],
        ];
        for prior in priors {
            let mi = ch.mutual_information(&prior).unwrap();
            assert!(mi >= 0.0);
            assert!(mi <= 6f64.log2() + 1e-12);
        }
    }
}
