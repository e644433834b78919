//! Output rendering. JSON is the canonical machine format; CSV has fixed
//! documented columns; the human layout shows the same numbers.
//!
//! Floating-point values are printed with Rust's shortest round-trip
//! formatting in every format, so no precision is lost and the three
//! layouts always agree digit for digit.

use clap::ValueEnum;
use mubsig_core::{InfoReport, TrialStats, VerificationReport};
use serde::Serialize;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

/// Render a float exactly as it appears in the JSON payload, so the three
/// formats agree digit for digit.
fn num(x: f64) -> String {
    serde_json::to_string(&x).expect("finite float")
}

/// One row of the `probs` table.
#[derive(Debug, Clone, Serialize)]
pub struct ProbsRow {
    pub c_prime: u64,
    pub r_prime: u64,
    pub closed_form: f64,
    pub brute_force: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbsOutput {
    pub prep: (u64, u64, u64),
    pub message: String,
    pub rows: Vec<ProbsRow>,
    pub closed_form_total: f64,
    pub brute_force_total: f64,
    pub max_abs_diff: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateOutput {
    pub trials: u64,
    pub prep_policy: String,
    pub message_prior: String,
    pub conclusive: u64,
    pub conclusive_rate: f64,
    #[serde(flatten)]
    pub stats: StatsView,
}

/// The confusion and inconclusive maps of a [`TrialStats`].
#[derive(Debug, Clone, Serialize)]
pub struct StatsView {
    pub confusion: std::collections::BTreeMap<String, std::collections::BTreeMap<String, u64>>,
    pub inconclusive_per_message: std::collections::BTreeMap<String, u64>,
}

impl StatsView {
    pub fn from_stats(stats: &TrialStats) -> Self {
        let confusion = stats
            .confusion
            .iter()
            .map(|(sent, row)| {
                (
                    sent.to_string(),
                    row.iter().map(|(dec, n)| (dec.to_string(), *n)).collect(),
                )
            })
            .collect();
        let inconclusive_per_message = stats
            .inconclusive_per_message
            .iter()
            .map(|(sent, n)| (sent.to_string(), *n))
            .collect();
        Self {
            confusion,
            inconclusive_per_message,
        }
    }
}

/// Wrap a command's results in the stable envelope and serialize.
pub fn json_payload<T: Serialize>(command: &str, dim: u64, seed: u64, results: &T) -> String {
    let value = json!({
        "command": command,
        "dim": dim,
        "seed": seed,
        "results": results,
    });
    let mut s = serde_json::to_string_pretty(&value).expect("serializable results");
    s.push('\n');
    s
}

pub fn render_verify(report: &VerificationReport, format: Format, dim: u64, seed: u64) -> String {
    match format {
        Format::Json => {
            let results = json!({
                "checks": report.checks,
                "all_pass": report.all_pass(),
                "max_deviation": report.max_deviation(),
            });
            json_payload("verify", dim, seed, &results)
        }
        Format::Csv => {
            let mut s = String::from("check,deviation,tolerance,pass\n");
            for c in &report.checks {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    c.name,
                    num(c.deviation),
                    num(c.tolerance),
                    c.pass
                ));
            }
            s
        }
        Format::Human => {
            let mut s = format!("verification suites for dim {dim}\n\n");
            for c in &report.checks {
                s.push_str(&format!(
                    "  {:<34} deviation {:<24} tolerance {:<8} {}\n",
                    c.name,
                    num(c.deviation),
                    num(c.tolerance),
                    if c.pass { "PASS" } else { "FAIL" }
                ));
            }
            s.push_str(&format!(
                "\n{}: max deviation {}\n",
                if report.all_pass() { "PASS" } else { "FAIL" },
                num(report.max_deviation())
            ));
            s
        }
    }
}

pub fn render_probs(output: &ProbsOutput, format: Format, dim: u64, seed: u64) -> String {
    match format {
        Format::Json => json_payload("probs", dim, seed, output),
        Format::Csv => {
            let mut s = String::from("c_prime,r_prime,closed_form,brute_force,abs_diff\n");
            for row in &output.rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    row.c_prime,
                    row.r_prime,
                    num(row.closed_form),
                    num(row.brute_force),
                    num(row.abs_diff)
                ));
            }
            s
        }
        Format::Human => {
            let (c, r, sp) = output.prep;
            let mut s = format!(
                "outcome probabilities, dim {dim}, prep ({c},{r},{sp}), message {}\n\n",
                output.message
            );
            s.push_str("  c' r'  closed form           brute force           |diff|\n");
            for row in &output.rows {
                s.push_str(&format!(
                    "  {:<2} {:<2}  {:<20}  {:<20}  {}\n",
                    row.c_prime,
                    row.r_prime,
                    num(row.closed_form),
                    num(row.brute_force),
                    num(row.abs_diff)
                ));
            }
            s.push_str(&format!(
                "\ntotals: closed form {}, brute force {}\nmax |diff| = {}\n",
                num(output.closed_form_total),
                num(output.brute_force_total),
                num(output.max_abs_diff)
            ));
            s
        }
    }
}

pub fn render_simulate(output: &SimulateOutput, format: Format, dim: u64, seed: u64) -> String {
    match format {
        Format::Json => json_payload("simulate", dim, seed, output),
        Format::Csv => {
            let mut s = String::from("sent,decoded,count\n");
            for (sent, row) in &output.stats.confusion {
                for (dec, n) in row {
                    s.push_str(&format!("{sent},{dec},{n}\n"));
                }
                let inconclusive = output.stats.inconclusive_per_message[sent];
                s.push_str(&format!("{sent},inconclusive,{inconclusive}\n"));
            }
            s
        }
        Format::Human => {
            let mut s = format!(
                "simulation: dim {dim}, seed {seed}, {} trials\nprep policy {}, message prior {}\n\n",
                output.trials, output.prep_policy, output.message_prior
            );
            s.push_str(&format!(
                "conclusive {} / {}  (rate {})\n\nconfusion (sent -> decoded):\n",
                output.conclusive,
                output.trials,
                num(output.conclusive_rate)
            ));
            for (sent, row) in &output.stats.confusion {
                s.push_str(&format!("  {sent:<6}"));
                for (dec, n) in row {
                    s.push_str(&format!(" {dec}:{n}"));
                }
                s.push_str(&format!(
                    " inconclusive:{}\n",
                    output.stats.inconclusive_per_message[sent]
                ));
            }
            s
        }
    }
}

pub fn render_capacity(reports: &[InfoReport], format: Format, dim: u64, seed: u64) -> String {
    match format {
        Format::Json => json_payload("capacity", dim, seed, &reports),
        Format::Csv => {
            let mut s = String::from(
                "dim,mutual_information_bits,closed_form_bits,log2_d,two_log2_d,exceeds_log2_d\n",
            );
            for r in reports {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.dim,
                    num(r.mutual_information_bits),
                    num(r.closed_form_bits),
                    num(r.log2_d),
                    num(r.two_log2_d),
                    r.exceeds_log2_d
                ));
            }
            s
        }
        Format::Human => {
            let mut s = String::from("information per protocol use (uniform message prior)\n\n");
            for r in reports {
                s.push_str(&format!(
                    "  dim {:<3} I = {:<22} closed form {:<22} log2 d = {:<22} 2 log2 d = {}\n",
                    r.dim,
                    num(r.mutual_information_bits),
                    num(r.closed_form_bits),
                    num(r.log2_d),
                    num(r.two_log2_d)
                ));
            }
            s.push_str("\nexceeds log2 d: ");
            let flags: Vec<String> = reports
                .iter()
                .map(|r| format!("d={}:{}", r.dim, r.exceeds_log2_d))
                .collect();
            s.push_str(&flags.join(" "));
            s.push('\n');
            s
        }
    }
}
