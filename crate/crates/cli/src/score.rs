//! Normalize, align and score a corpus, and serialize the results.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Map, Number, Value};
use terkit::dataset::{
    join_corpus, parse_alternatives, parse_hypotheses, parse_metadata_tsv, HypothesisRecord,
    UtteranceRecord,
};
use terkit::metrics::{corpus_aggregate, CorpusScore, Rate, UtteranceScore};
use terkit::{
    align_dae, align_fst, build_lev, normalize, AlternativeSet, LevTransducer, NormConfig, Stage,
    SymbolTable, TokenSeq,
};

use crate::error::{CliError, CliResult};
use crate::render::render_alignment;

pub const UTTERANCES_FILE: &str = "utterances.jsonl";
pub const SUMMARY_FILE: &str = "summary.json";
pub const ALIGNMENTS_FILE: &str = "alignments.txt";

/// Normalization toggles plus the alignment-time DAE switch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreConfig {
    pub norm: NormConfig,
    pub dae_on: bool,
}

impl ScoreConfig {
    pub fn all_on() -> Self {
        ScoreConfig {
            norm: NormConfig::all_on(),
            dae_on: true,
        }
    }

    /// All-on with word lists taken from the resource override directory
    /// when one is configured.
    pub fn from_env() -> CliResult<Self> {
        let norm = NormConfig::from_env()
            .map_err(|e| CliError::Usage(format!("loading resources: {e}")))?;
        Ok(ScoreConfig { norm, dae_on: true })
    }

    pub fn set(&mut self, stage: Stage, on: bool) {
        match stage {
            Stage::Dae => self.dae_on = on,
            other => self.norm.set(other, on),
        }
    }

    pub fn is_on(&self, stage: Stage) -> bool {
        match stage {
            Stage::Dae => self.dae_on,
            other => self.norm.is_on(other),
        }
    }

    pub fn with(mut self, stage: Stage, on: bool) -> Self {
        self.set(stage, on);
        self
    }

    /// Applies a `stage=on|off` toggle.
    pub fn apply_toggle(&mut self, spec: &str) -> CliResult<()> {
        let (stage, on) = parse_toggle(spec).map_err(CliError::Usage)?;
        self.set(stage, on);
        Ok(())
    }

    /// `{"case":true, ...}` in pipeline order.
    pub fn toggles_json(&self) -> Value {
        let map: Map<String, Value> = Stage::ALL
            .iter()
            .map(|&s| (s.name().to_owned(), Value::Bool(self.is_on(s))))
            .collect();
        Value::Object(map)
    }
}

pub fn parse_toggle(spec: &str) -> Result<(Stage, bool), String> {
    let (name, value) = spec
        .split_once('=')
        .ok_or_else(|| format!("toggle {spec:?} must look like <stage>=<on|off>"))?;
    let stage: Stage = name.trim().parse()?;
    let on = match value.trim().to_ascii_lowercase().as_str() {
        "on" | "true" | "1" => true,
        "off" | "false" | "0" => false,
        other => return Err(format!("toggle value {other:?} must be on or off")),
    };
    Ok((stage, on))
}

pub fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))
}

fn warn_all(path: &Path, warnings: &[String]) {
    for w in warnings {
        log::warn!("{}: {w}", path.display());
    }
}

pub fn load_references(path: &Path) -> CliResult<Vec<UtteranceRecord>> {
    let parsed = parse_metadata_tsv(&read_file(path)?)
        .map_err(|e| CliError::data(path.display().to_string(), e))?;
    warn_all(path, &parsed.warnings);
    Ok(parsed.records)
}

pub fn load_hypotheses(path: &Path) -> CliResult<Vec<HypothesisRecord>> {
    let parsed = parse_hypotheses(&read_file(path)?)
        .map_err(|e| CliError::data(path.display().to_string(), e))?;
    warn_all(path, &parsed.warnings);
    Ok(parsed.records)
}

pub fn load_alternatives(path: &Path) -> CliResult<Vec<AlternativeSet>> {
    let parsed = parse_alternatives(&read_file(path)?)
        .map_err(|e| CliError::data(path.display().to_string(), e))?;
    warn_all(path, &parsed.warnings);
    Ok(parsed.records)
}

/// One transducer for the whole corpus: every normalized token plus every
/// alternative member, and enough tags for the largest set.
fn corpus_transducer(seqs: &[(TokenSeq, TokenSeq)], alts: &[AlternativeSet]) -> LevTransducer {
    let mut table = SymbolTable::new();
    for (r, h) in seqs {
        table.add_seq(r);
        table.add_seq(h);
    }
    for set in alts {
        for m in set.members() {
            table.add_seq(m);
        }
    }
    table.reserve_tags(alts.iter().map(AlternativeSet::len).max().unwrap_or(0));
    build_lev(table)
}

/// Scores reference/hypothesis pairs in parallel; results keep input order.
pub fn score_pairs(
    pairs: &[(UtteranceRecord, HypothesisRecord)],
    alts: &[AlternativeSet],
    cfg: &ScoreConfig,
) -> terkit::Result<Vec<UtteranceScore>> {
    let alts = if cfg.dae_on { alts } else { &[] };
    let seqs: Vec<(TokenSeq, TokenSeq)> = pairs
        .par_iter()
        .map(|(r, h)| (normalize(&r.text, &cfg.norm), normalize(&h.text, &cfg.norm)))
        .collect();
    let lev = corpus_transducer(&seqs, alts);
    pairs
        .par_iter()
        .zip(seqs.par_iter())
        .map(|((rec, _), (r, h))| {
            let alignment = if alts.is_empty() {
                align_fst(r, h, &lev)?
            } else {
                align_dae(r, h, alts, &lev)?.alignment
            };
            Ok(UtteranceScore::new(rec.id.clone(), alignment))
        })
        .collect()
}

/// Per-utterance scores and their corpus aggregate.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRun {
    pub scores: Vec<UtteranceScore>,
    pub corpus: CorpusScore,
}

pub fn run_score(
    refs: &[UtteranceRecord],
    hyps: &[HypothesisRecord],
    alts: &[AlternativeSet],
    cfg: &ScoreConfig,
) -> CliResult<ScoreRun> {
    let joined = join_corpus(refs, hyps)?;
    for w in &joined.warnings {
        log::warn!("{w}");
    }
    let scores = score_pairs(&joined.records, alts, cfg)?;
    let corpus = corpus_aggregate(&scores)?;
    Ok(ScoreRun { scores, corpus })
}

/// A rate as a JSON number with exactly two decimals (`76.92`, `0.00`).
pub fn percent_json(rate: Rate) -> Value {
    Value::Number(
        rate.percent()
            .parse::<Number>()
            .expect("percent renders as a JSON number"),
    )
}

fn mean_percent_json(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let h = (x * 10_000.0).round() as i64;
    let text = format!("{}.{:02}", h / 100, h % 100);
    Value::Number(
        text.parse::<Number>()
            .expect("mean renders as a JSON number"),
    )
}

/// `uid, TER, mTER, cor, sub, ins, del`, then the `ref_len` and `hyp_len`
/// extensions.
pub fn utterance_json(s: &UtteranceScore) -> Value {
    json!({
        "uid": s.uid,
        "TER": s.ter.map_or(Value::Null, percent_json),
        "mTER": percent_json(s.mter),
        "cor": s.alignment.cor,
        "sub": s.alignment.sub,
        "ins": s.alignment.ins,
        "del": s.alignment.del,
        "ref_len": s.ref_len(),
        "hyp_len": s.hyp_len(),
    })
}

pub fn utterances_jsonl(scores: &[UtteranceScore]) -> String {
    let mut out = String::new();
    for s in scores {
        out.push_str(&utterance_json(s).to_string());
        out.push('\n');
    }
    out
}

pub fn utterances_csv(scores: &[UtteranceScore]) -> String {
    let mut out = String::from("uid,TER,mTER,cor,sub,ins,del,ref_len,hyp_len\n");
    for s in scores {
        let uid = if s.uid.contains([',', '"', '\n']) {
            format!("\"{}\"", s.uid.replace('"', "\"\""))
        } else {
            s.uid.clone()
        };
        out.push_str(&format!(
            "{uid},{},{},{},{},{},{},{},{}\n",
            s.ter.map_or_else(String::new, Rate::percent),
            s.mter.percent(),
            s.alignment.cor,
            s.alignment.sub,
            s.alignment.ins,
            s.alignment.del,
            s.ref_len(),
            s.hyp_len()
        ));
    }
    out
}

pub fn alignments_text(scores: &[UtteranceScore]) -> String {
    scores
        .iter()
        .map(|s| render_alignment(&s.uid, &s.alignment, s.ter, s.mter))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Where the inputs came from, echoed into the summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputEcho {
    pub reference: String,
    pub hypothesis: String,
    pub alternatives: Option<String>,
    pub alternative_sets: usize,
}

pub fn summary_json(run: &ScoreRun, cfg: &ScoreConfig, inputs: &InputEcho) -> Value {
    let c = &run.corpus;
    json!({
        "tool": "terkit",
        "version": env!("CARGO_PKG_VERSION"),
        "inputs": {
            "reference": inputs.reference,
            "hypothesis": inputs.hypothesis,
            "alternatives": inputs.alternatives,
            "alternative_sets": inputs.alternative_sets,
        },
        "config": cfg.toggles_json(),
        "utterances": c.utterances,
        "micro": {
            "TER": percent_json(c.ter),
            "mTER": percent_json(c.mter),
        },
        "macro": {
            "TER": mean_percent_json(c.macro_ter),
            "mTER": mean_percent_json(c.macro_mter),
            "undefined_TER": c.undefined_ter,
        },
        "counts": {
            "cor": c.cor,
            "sub": c.sub,
            "ins": c.ins,
            "del": c.del,
            "ref_words": c.ref_words,
            "hyp_words": c.hyp_words,
        },
    })
}

pub fn summary_text(summary: &Value) -> String {
    let mut s = serde_json::to_string_pretty(summary).expect("summary serializes");
    s.push('\n');
    s
}

/// Writes the per-utterance JSONL, the summary and the alignment report.
pub fn write_outputs(dir: &Path, run: &ScoreRun, summary: &Value) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display().to_string(), e))?;
    let files = [
        (UTTERANCES_FILE, utterances_jsonl(&run.scores)),
        (SUMMARY_FILE, summary_text(summary)),
        (ALIGNMENTS_FILE, alignments_text(&run.scores)),
    ];
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| CliError::io(path.display().to_string(), e))?;
    }
    Ok(())
}
