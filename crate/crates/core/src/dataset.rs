//! Corpus file formats: reference metadata TSV, hypothesis TSV and
//! alternative-set files.
//!
//! All readers accept LF or CRLF line endings and skip blank lines. Every
//! error names the 1-based line it was found on. Recoverable oddities are
//! returned as warnings next to the parsed records.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::textnorm::{normalize_case, strip_punctuation};
use crate::types::{tokenize, AlternativeSet, TokenSeq};

/// Longest utterance duration, in seconds, expected in a dataset.
pub const MAX_DURATION_S: f64 = 60.0;

/// One row of `metadata.tsv`.
#[derive(Debug, Clone, PartialEq)]
pub struct UtteranceRecord {
    pub id: String,
    pub audio_path: String,
    pub duration_s: f64,
    pub text: String,
}

/// One row of a hypothesis file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisRecord {
    pub id: String,
    pub text: String,
}

/// Parsed records plus non-fatal diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed<T> {
    pub records: Vec<T>,
    pub warnings: Vec<String>,
}

impl<T> Parsed<T> {
    fn new() -> Self {
        Parsed {
            records: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn warn(&mut self, message: String) {
        self.warnings.push(message);
    }
}

/// Non-blank lines with their 1-based numbers, line terminators removed.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty())
}

fn check_header(first: Option<(usize, &str)>, expected: &[&str]) -> Result<()> {
    let (line, header) =
        first.ok_or_else(|| Error::parse(1, format!("missing header {}", expected.join("\t"))))?;
    let got: Vec<&str> = header.split('\t').map(str::trim).collect();
    let ok = got.len() == expected.len()
        && got
            .iter()
            .zip(expected)
            .all(|(g, e)| g.eq_ignore_ascii_case(e));
    if ok {
        Ok(())
    } else {
        Err(Error::parse(
            line,
            format!(
                "expected header {:?}, found {header:?}",
                expected.join("\t")
            ),
        ))
    }
}

/// Parses `ID<TAB>AUDIO<TAB>DURATION<TAB>TEXT`. TEXT runs to the end of the
/// line, so it may itself contain tabs.
pub fn parse_metadata_tsv(text: &str) -> Result<Parsed<UtteranceRecord>> {
    let mut rows = lines(text);
    check_header(rows.next(), &["ID", "AUDIO", "DURATION", "TEXT"])?;
    let mut out = Parsed::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (line, row) in rows {
        let fields: Vec<&str> = row.splitn(4, '\t').collect();
        if fields.len() != 4 {
            return Err(Error::parse(
                line,
                format!("expected 4 tab-separated columns, found {}", fields.len()),
            ));
        }
        let id = fields[0].trim();
        if id.is_empty() {
            return Err(Error::parse(line, "empty ID"));
        }
        let duration_s: f64 = fields[2]
            .trim()
            .parse()
            .ok()
            .filter(|d: &f64| d.is_finite() && *d >= 0.0)
            .ok_or_else(|| Error::parse(line, format!("invalid duration {:?}", fields[2])))?;
        if let Some(first) = seen.insert(id.to_owned(), line) {
            return Err(Error::parse(
                line,
                format!("duplicate ID {id:?} (first seen on line {first})"),
            ));
        }
        if duration_s > MAX_DURATION_S {
            out.warn(format!(
                "line {line}: utterance {id} lasts {duration_s}s, longer than {MAX_DURATION_S}s"
            ));
        }
        out.records.push(UtteranceRecord {
            id: id.to_owned(),
            audio_path: fields[1].to_owned(),
            duration_s,
            text: fields[3].to_owned(),
        });
    }
    Ok(out)
}

/// Writes records back in `metadata.tsv` form with LF line endings.
pub fn write_metadata_tsv(records: &[UtteranceRecord]) -> String {
    let mut out = String::from("ID\tAUDIO\tDURATION\tTEXT\n");
    for r in records {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}",
            r.id, r.audio_path, r.duration_s, r.text
        );
    }
    out
}

/// Parses `ID<TAB>TEXT`. A row without a TEXT column is an empty hypothesis.
pub fn parse_hypotheses(text: &str) -> Result<Parsed<HypothesisRecord>> {
    let mut rows = lines(text);
    check_header(rows.next(), &["ID", "TEXT"])?;
    let mut out = Parsed::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (line, row) in rows {
        let (id, text) = match row.split_once('\t') {
            Some((id, text)) => (id.trim(), text),
            None => {
                out.warn(format!(
                    "line {line}: no TEXT column, treating hypothesis as empty"
                ));
                (row.trim(), "")
            }
        };
        if id.is_empty() {
            return Err(Error::parse(line, "empty ID"));
        }
        if let Some(first) = seen.insert(id.to_owned(), line) {
            return Err(Error::parse(
                line,
                format!("duplicate ID {id:?} (first seen on line {first})"),
            ));
        }
        out.records.push(HypothesisRecord {
            id: id.to_owned(),
            text: text.to_owned(),
        });
    }
    Ok(out)
}

/// Case-folds and strips punctuation from one alternative member, the same
/// way transcripts are normalized before matching.
fn normalize_member(raw: &str) -> TokenSeq {
    tokenize(&strip_punctuation(&normalize_case(raw)))
}

/// Parses one set per line, members separated by `=`. `#` starts a comment.
/// Members are stored case-folded with punctuation removed; members that
/// become identical only through that normalization are merged with a
/// warning.
pub fn parse_alternatives(text: &str) -> Result<Parsed<AlternativeSet>> {
    let mut out = Parsed::new();
    for (line, row) in lines(text) {
        let content = row.split_once('#').map_or(row, |(before, _)| before);
        if content.trim().is_empty() {
            continue;
        }
        let raw: Vec<&str> = content.split('=').map(str::trim).collect();
        if raw.len() < 2 {
            return Err(Error::parse(
                line,
                format!(
                    "alternative set needs at least two members: {:?}",
                    content.trim()
                ),
            ));
        }
        let mut literal = HashSet::new();
        let mut members: Vec<TokenSeq> = Vec::new();
        for r in &raw {
            if r.is_empty() {
                return Err(Error::parse(line, "empty member"));
            }
            if !literal.insert(*r) {
                return Err(Error::parse(line, format!("duplicate member {r:?}")));
            }
            let m = normalize_member(r);
            if m.is_empty() {
                return Err(Error::parse(
                    line,
                    format!("member {r:?} is empty after normalization"),
                ));
            }
            if members.contains(&m) {
                out.warn(format!("line {line}: member {r:?} equals an earlier member after normalization ({:?}), merged", m.join()));
                continue;
            }
            members.push(m);
        }
        let set = AlternativeSet::new(members).map_err(|e| Error::parse(line, e.to_string()))?;
        out.records.push(set);
    }
    Ok(out)
}

/// Pairs every reference with its hypothesis, in reference order. A missing
/// hypothesis becomes an empty one (all deletions) with a warning; a
/// hypothesis whose ID is not among the references is an error.
pub fn join_corpus(
    refs: &[UtteranceRecord],
    hyps: &[HypothesisRecord],
) -> Result<Parsed<(UtteranceRecord, HypothesisRecord)>> {
    let ids: HashSet<&str> = refs.iter().map(|r| r.id.as_str()).collect();
    if let Some(extra) = hyps.iter().find(|h| !ids.contains(h.id.as_str())) {
        return Err(Error::UnknownHypothesisId(extra.id.clone()));
    }
    let by_id: HashMap<&str, &HypothesisRecord> = hyps.iter().map(|h| (h.id.as_str(), h)).collect();
    let mut out = Parsed::new();
    for r in refs {
        let hyp = match by_id.get(r.id.as_str()) {
            Some(h) => (*h).clone(),
            None => {
                out.warn(format!(
                    "utterance {}: no hypothesis, scoring as empty",
                    r.id
                ));
                HypothesisRecord {
                    id: r.id.clone(),
                    text: String::new(),
                }
            }
        };
        out.records.push((r.clone(), hyp));
    }
    Ok(out)
}
