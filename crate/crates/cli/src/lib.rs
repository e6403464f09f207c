//! Command-line front end for terkit: corpus scoring, ablation sweeps,
//! normalization debugging and alignment reports.

pub mod ablate;
pub mod error;
pub mod render;
pub mod score;

use terkit::textnorm::normalize_traced;
use terkit::NormConfig;

pub use error::{CliError, CliResult};

/// Normalized text of every input line plus, when `trace` is set, a
/// stage-by-stage account of each line.
pub fn normalize_lines(text: &str, cfg: &NormConfig, trace: bool) -> (String, String) {
    let mut out = String::new();
    let mut log = String::new();
    for line in text.lines() {
        let n = normalize_traced(line, cfg);
        if trace {
            log.push_str(&format!("input: {line}\n"));
            for (stage, form) in &n.trace {
                log.push_str(&format!("  {:<4} : {form}\n", stage.name()));
            }
        }
        for w in &n.warnings {
            log::warn!("nsw: {w}");
        }
        out.push_str(&n.tokens.join());
        out.push('\n');
    }
    (out, log)
}
