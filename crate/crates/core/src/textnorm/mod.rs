//! Text normalization pipeline applied symmetrically to references and
//! hypotheses.
//!
//! Stage order is fixed: NSW expansion, case folding, punctuation removal,
//! tokenization, interjection removal, UK to US spelling. NSW runs first
//! because it needs digits and punctuation intact. Each stage can be
//! switched off independently; a disabled stage is the identity.

mod nsw;
mod numbers;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

pub use nsw::{expand_nsw, NswExpansion, NswWarning};
pub use numbers::{cardinal, ordinal, year};

use crate::error::{Error, Result};
use crate::types::{tokenize, Token, TokenSeq};

/// Environment variable naming a directory whose `interjections.txt` and
/// `ukus.tsv` replace the bundled defaults.
pub const RESOURCE_DIR_ENV: &str = "TERKIT_RESOURCE_DIR";

const DEFAULT_INTERJECTIONS: &str = include_str!("../../resources/interjections.txt");
const DEFAULT_UKUS: &str = include_str!("../../resources/ukus.tsv");

/// Pipeline stages, including the alignment-time DAE switch so that one
/// toggle vocabulary covers a whole scoring configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Case,
    Punc,
    Itj,
    UkUs,
    Nsw,
    Dae,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Case,
        Stage::Punc,
        Stage::Itj,
        Stage::UkUs,
        Stage::Nsw,
        Stage::Dae,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Case => "case",
            Stage::Punc => "punc",
            Stage::Itj => "itj",
            Stage::UkUs => "ukus",
            Stage::Nsw => "nsw",
            Stage::Dae => "dae",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Stage::ALL
            .into_iter()
            .find(|st| {
                st.name().eq_ignore_ascii_case(s)
                    || (s.eq_ignore_ascii_case("uk-us") && *st == Stage::UkUs)
            })
            .ok_or_else(|| {
                format!("unknown stage {s:?} (expected case, punc, itj, ukus, nsw or dae)")
            })
    }
}

/// Toggle vector plus the word lists used by the token-level stages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormConfig {
    pub case_on: bool,
    pub punc_on: bool,
    pub itj_on: bool,
    pub ukus_on: bool,
    pub nsw_on: bool,
    pub interjections: BTreeSet<String>,
    pub ukus: BTreeMap<String, String>,
}

impl NormConfig {
    /// Every stage on, bundled word lists.
    pub fn all_on() -> Self {
        NormConfig {
            case_on: true,
            punc_on: true,
            itj_on: true,
            ukus_on: true,
            nsw_on: true,
            interjections: parse_interjections(DEFAULT_INTERJECTIONS)
                .expect("bundled interjections parse"),
            ukus: parse_ukus(DEFAULT_UKUS).expect("bundled ukus map parses"),
        }
    }

    pub fn all_off() -> Self {
        NormConfig {
            case_on: false,
            punc_on: false,
            itj_on: false,
            ukus_on: false,
            nsw_on: false,
            ..NormConfig::all_on()
        }
    }

    /// All-on config whose word lists come from `$TERKIT_RESOURCE_DIR` when
    /// that variable is set; missing files fall back to the bundled lists.
    pub fn from_env() -> Result<Self> {
        let mut cfg = NormConfig::all_on();
        if let Some(dir) = std::env::var_os(RESOURCE_DIR_ENV) {
            cfg.load_resources(Path::new(&dir))?;
        }
        Ok(cfg)
    }

    pub fn load_resources(&mut self, dir: &Path) -> Result<()> {
        let itj = dir.join("interjections.txt");
        if itj.is_file() {
            self.interjections = parse_interjections(&std::fs::read_to_string(itj)?)?;
        }
        let ukus = dir.join("ukus.tsv");
        if ukus.is_file() {
            self.ukus = parse_ukus(&std::fs::read_to_string(ukus)?)?;
        }
        Ok(())
    }

    pub fn set(&mut self, stage: Stage, on: bool) {
        match stage {
            Stage::Case => self.case_on = on,
            Stage::Punc => self.punc_on = on,
            Stage::Itj => self.itj_on = on,
            Stage::UkUs => self.ukus_on = on,
            Stage::Nsw => self.nsw_on = on,
            Stage::Dae => {}
        }
    }

    /// DAE is not a text stage, so `Stage::Dae` reports `false`.
    pub fn is_on(&self, stage: Stage) -> bool {
        match stage {
            Stage::Case => self.case_on,
            Stage::Punc => self.punc_on,
            Stage::Itj => self.itj_on,
            Stage::UkUs => self.ukus_on,
            Stage::Nsw => self.nsw_on,
            Stage::Dae => false,
        }
    }
}

impl Default for NormConfig {
    fn default() -> Self {
        NormConfig::all_on()
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

/// One lowercase token per line, `#` comments.
pub fn parse_interjections(text: &str) -> Result<BTreeSet<String>> {
    content_lines(text)
        .map(|(n, line)| {
            if line.chars().any(char::is_whitespace) {
                Err(Error::parse(
                    n,
                    format!("interjection {line:?} contains whitespace"),
                ))
            } else {
                Ok(line.to_lowercase())
            }
        })
        .collect()
}

/// `uk<TAB>us` per line, `#` comments.
pub fn parse_ukus(text: &str) -> Result<BTreeMap<String, String>> {
    content_lines(text)
        .map(|(n, line)| {
            let mut cols = line.split('\t').map(str::trim);
            match (cols.next(), cols.next(), cols.next()) {
                (Some(uk), Some(us), None)
                    if !uk.is_empty()
                        && !us.is_empty()
                        && !uk.contains(' ')
                        && !us.contains(' ') =>
                {
                    Ok((uk.to_lowercase(), us.to_lowercase()))
                }
                _ => Err(Error::parse(
                    n,
                    "expected two tab-separated single words (UK<TAB>US)",
                )),
            }
        })
        .collect()
}

/// Lowercases every cased character.
pub fn normalize_case(text: &str) -> String {
    text.to_lowercase()
}

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}')
}

fn is_dropped(c: char) -> bool {
    matches!(
        c,
        ',' | '.' | '?' | '!' | '"' | '\u{201C}' | '\u{201D}' | '\u{2018}'
    )
}

/// Removes `, . ? ! "` and quotes. A single quote survives only when it sits
/// between two alphanumerics (`doesn't`). Hyphens become spaces so that
/// compounds split into their parts. Whitespace in the result is collapsed.
pub fn strip_punctuation(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len());
    for (i, &c) in chars.iter().enumerate() {
        if is_dropped(c) {
            continue;
        }
        if c == '-' {
            out.push(' ');
            continue;
        }
        if is_apostrophe(c) {
            let left = i.checked_sub(1).and_then(|j| chars.get(j));
            let right = chars.get(i + 1);
            let inner = matches!((left, right), (Some(l), Some(r)) if l.is_alphanumeric() && r.is_alphanumeric());
            if inner {
                out.push(c);
            }
            continue;
        }
        out.push(c);
    }
    out.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Drops tokens that exactly match a list entry.
pub fn remove_interjections(seq: &TokenSeq, list: &BTreeSet<String>) -> TokenSeq {
    seq.iter()
        .filter(|t| !list.contains(t.as_str()))
        .cloned()
        .collect()
}

/// Replaces UK spellings with their US counterparts.
pub fn unify_spelling(seq: &TokenSeq, map: &BTreeMap<String, String>) -> TokenSeq {
    seq.iter()
        .map(|t| match map.get(t.as_str()) {
            Some(us) => Token::new(us.clone()).unwrap_or_else(|_| t.clone()),
            None => t.clone(),
        })
        .collect()
}

/// Result of running the pipeline, with the intermediate form after every
/// enabled stage for tracing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub tokens: TokenSeq,
    pub warnings: Vec<NswWarning>,
    pub trace: Vec<(Stage, String)>,
}

/// Runs the enabled stages and returns tokens, NSW warnings and a trace.
pub fn normalize_traced(text: &str, cfg: &NormConfig) -> Normalized {
    let mut trace = Vec::new();
    let mut warnings = Vec::new();
    let mut current = text.to_owned();
    if cfg.nsw_on {
        let out = expand_nsw(&current);
        current = out.text;
        warnings = out.warnings;
        trace.push((Stage::Nsw, current.clone()));
    }
    if cfg.case_on {
        current = normalize_case(&current);
        trace.push((Stage::Case, current.clone()));
    }
    if cfg.punc_on {
        current = strip_punctuation(&current);
        trace.push((Stage::Punc, current.clone()));
    }
    let mut tokens = tokenize(&current);
    if cfg.itj_on {
        tokens = remove_interjections(&tokens, &cfg.interjections);
        trace.push((Stage::Itj, tokens.join()));
    }
    if cfg.ukus_on {
        tokens = unify_spelling(&tokens, &cfg.ukus);
        trace.push((Stage::UkUs, tokens.join()));
    }
    Normalized {
        tokens,
        warnings,
        trace,
    }
}

/// Normalizes raw text into a token sequence. Warnings are logged.
pub fn normalize(text: &str, cfg: &NormConfig) -> TokenSeq {
    let out = normalize_traced(text, cfg);
    for w in &out.warnings {
        log::warn!("nsw: {w}");
    }
    out.tokens
}
