//! Ablation sweeps: every model scored under several pipeline
//! configurations, with per-configuration competition ranks.

use std::collections::HashSet;
use std::fmt::Write as _;

use terkit::dataset::{join_corpus, HypothesisRecord, UtteranceRecord};
use terkit::metrics::{corpus_aggregate, rank_models, Rate};
use terkit::{AlternativeSet, Stage};

use crate::error::{CliError, CliResult};
use crate::score::{score_pairs, ScoreConfig};

/// A named pipeline configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedConfig {
    pub name: String,
    pub config: ScoreConfig,
}

impl NamedConfig {
    pub fn new(name: impl Into<String>, config: ScoreConfig) -> Self {
        NamedConfig {
            name: name.into(),
            config,
        }
    }
}

/// Configurations to compare against the all-on baseline `A0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AblationSpec {
    configs: Vec<NamedConfig>,
}

pub const BASELINE: &str = "A0";

impl AblationSpec {
    /// Names must be unique and `A0` must be present.
    pub fn new(configs: Vec<NamedConfig>) -> CliResult<Self> {
        let mut seen = HashSet::new();
        for c in &configs {
            if !seen.insert(c.name.as_str()) {
                return Err(CliError::Usage(format!(
                    "duplicate configuration name {:?}",
                    c.name
                )));
            }
        }
        if !seen.contains(BASELINE) {
            return Err(CliError::Usage(format!(
                "ablation spec must include the baseline {BASELINE}"
            )));
        }
        Ok(AblationSpec { configs })
    }

    /// A0 with everything on, then A1..A5 each switching off one of PUNC,
    /// ITJ, UK-US, NSW and DAE.
    pub fn single_component(base: &ScoreConfig) -> Self {
        let mut configs = vec![NamedConfig::new(BASELINE, base.clone())];
        for (i, stage) in [Stage::Punc, Stage::Itj, Stage::UkUs, Stage::Nsw, Stage::Dae]
            .into_iter()
            .enumerate()
        {
            configs.push(NamedConfig::new(
                format!("A{}", i + 1),
                base.clone().with(stage, false),
            ));
        }
        AblationSpec { configs }
    }

    /// Keeps only the named configurations, in the order given.
    pub fn select(&self, names: &[String]) -> CliResult<Self> {
        let configs = names
            .iter()
            .map(|n| {
                self.configs
                    .iter()
                    .find(|c| &c.name == n)
                    .cloned()
                    .ok_or_else(|| CliError::Usage(format!("unknown configuration {n:?}")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        AblationSpec::new(configs)
    }

    pub fn configs(&self) -> &[NamedConfig] {
        &self.configs
    }
}

/// Stacked configurations from the naive pipeline (CASE and PUNC only) to
/// the full one, adding one component per step.
pub fn progression(base: &ScoreConfig) -> Vec<NamedConfig> {
    let mut cfg = base.clone();
    for stage in [Stage::Itj, Stage::UkUs, Stage::Nsw, Stage::Dae] {
        cfg.set(stage, false);
    }
    cfg.set(Stage::Case, true);
    cfg.set(Stage::Punc, true);
    let mut steps = vec![NamedConfig::new("CASE+PUNC", cfg.clone())];
    for (stage, name) in [
        (Stage::Itj, "+ITJ"),
        (Stage::UkUs, "+UKUS"),
        (Stage::Nsw, "+NSW"),
        (Stage::Dae, "+DAE"),
    ] {
        cfg.set(stage, true);
        steps.push(NamedConfig::new(name, cfg.clone()));
    }
    steps
}

/// One model's hypotheses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub name: String,
    pub hypotheses: Vec<HypothesisRecord>,
}

/// Corpus WER for every (model, configuration) cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AblationMatrix {
    pub models: Vec<String>,
    pub configs: Vec<String>,
    /// `wer[m][c]` for model `m` under configuration `c`.
    pub wer: Vec<Vec<Rate>>,
}

pub fn run_configs(
    refs: &[UtteranceRecord],
    models: &[Model],
    alts: &[AlternativeSet],
    configs: &[NamedConfig],
) -> CliResult<AblationMatrix> {
    if models.is_empty() {
        return Err(CliError::Usage(
            "ablation needs at least one hypothesis file".into(),
        ));
    }
    let mut names = HashSet::new();
    for m in models {
        if !names.insert(m.name.as_str()) {
            return Err(CliError::Usage(format!(
                "duplicate model name {:?}",
                m.name
            )));
        }
    }
    let mut wer = Vec::with_capacity(models.len());
    for m in models {
        let pairs = join_corpus(refs, &m.hypotheses)?.records;
        let row = configs
            .iter()
            .map(|c| {
                let scores = score_pairs(&pairs, alts, &c.config)?;
                Ok(corpus_aggregate(&scores)?.ter)
            })
            .collect::<CliResult<Vec<_>>>()?;
        wer.push(row);
    }
    Ok(AblationMatrix {
        models: models.iter().map(|m| m.name.clone()).collect(),
        configs: configs.iter().map(|c| c.name.clone()).collect(),
        wer,
    })
}

pub fn run_ablation(
    refs: &[UtteranceRecord],
    models: &[Model],
    alts: &[AlternativeSet],
    spec: &AblationSpec,
) -> CliResult<AblationMatrix> {
    run_configs(refs, models, alts, spec.configs())
}

impl AblationMatrix {
    /// Competition ranks of the models under configuration `c`.
    pub fn ranks(&self, c: usize) -> Vec<usize> {
        let column: Vec<Rate> = self.wer.iter().map(|row| row[c]).collect();
        rank_models(&column)
    }

    fn cells(&self) -> Vec<Vec<String>> {
        let ranks: Vec<Vec<usize>> = (0..self.configs.len()).map(|c| self.ranks(c)).collect();
        self.wer
            .iter()
            .enumerate()
            .map(|(m, row)| {
                row.iter()
                    .enumerate()
                    .map(|(c, r)| format!("{} ({})", r.percent(), ranks[c][m]))
                    .collect()
            })
            .collect()
    }

    /// Aligned plain-text table, one row per model, cells `WER (rank)`.
    pub fn to_text(&self) -> String {
        let cells = self.cells();
        let first = self
            .models
            .iter()
            .map(String::len)
            .chain(["model".len()])
            .max()
            .unwrap_or(0);
        let widths: Vec<usize> = (0..self.configs.len())
            .map(|c| {
                cells
                    .iter()
                    .map(|row| row[c].len())
                    .chain([self.configs[c].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        let mut line = format!("{:<first$}", "model");
        for (c, name) in self.configs.iter().enumerate() {
            let _ = write!(line, "  {:<w$}", name, w = widths[c]);
        }
        out.push_str(line.trim_end());
        out.push('\n');
        for (m, row) in cells.iter().enumerate() {
            let mut line = format!("{:<first$}", self.models[m]);
            for (c, cell) in row.iter().enumerate() {
                let _ = write!(line, "  {:<w$}", cell, w = widths[c]);
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }

    /// Long-form CSV: `config,model,wer,rank`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("config,model,wer,rank\n");
        for (c, name) in self.configs.iter().enumerate() {
            let ranks = self.ranks(c);
            for (m, model) in self.models.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{name},{model},{},{}",
                    self.wer[m][c].percent(),
                    ranks[m]
                );
            }
        }
        out
    }
}
