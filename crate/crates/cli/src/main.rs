use std::collections::HashSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use terkit_cli::ablate::{progression, run_ablation, run_configs, AblationSpec, Model};
use terkit_cli::error::{CliError, CliResult};
use terkit_cli::normalize_lines;
use terkit_cli::render::render_alignment;
use terkit_cli::score::{
    alignments_text, load_alternatives, load_hypotheses, load_references, percent_json, read_file,
    run_score, summary_json, summary_text, utterances_csv, utterances_jsonl, write_outputs,
    InputEcho, ScoreConfig,
};

#[derive(Parser)]
#[command(
    name = "terkit",
    version,
    about = "Score ASR transcripts with TER and mTER"
)]
struct Cli {
    /// Report failures as a JSON object on stderr.
    #[arg(long, global = true)]
    error_json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score one hypothesis file against the references.
    Score(ScoreArgs),
    /// Score several models under ablated pipeline configurations.
    Ablate(AblateArgs),
    /// Print normalized text, one line per input line.
    Normalize(NormalizeArgs),
    /// Print the alignment report for some or all utterances.
    Render(RenderArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Jsonl,
    Text,
    Csv,
}

#[derive(Args)]
struct Pipeline {
    /// Switch a stage on or off: case, punc, itj, ukus, nsw or dae.
    #[arg(long = "toggle", value_name = "STAGE=on|off")]
    toggles: Vec<String>,
}

impl Pipeline {
    fn config(&self) -> CliResult<ScoreConfig> {
        let mut cfg = ScoreConfig::from_env()?;
        for t in &self.toggles {
            cfg.apply_toggle(t)?;
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct Corpus {
    /// Reference metadata TSV (ID, AUDIO, DURATION, TEXT).
    #[arg(long = "ref", value_name = "TSV")]
    reference: PathBuf,

    /// Alternative sets, one `a = b = c` per line.
    #[arg(long, value_name = "FILE")]
    alts: Option<PathBuf>,
}

#[derive(Args)]
struct ScoreArgs {
    #[command(flatten)]
    corpus: Corpus,

    /// Hypothesis TSV (ID, TEXT).
    #[arg(long, value_name = "TSV")]
    hyp: PathBuf,

    #[command(flatten)]
    pipeline: Pipeline,

    /// Write utterances.jsonl, summary.json and alignments.txt here.
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    /// What to print on stdout.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct AblateArgs {
    #[command(flatten)]
    corpus: Corpus,

    /// Hypothesis TSV of one model; repeat for several models. The model
    /// name is the file stem.
    #[arg(long, value_name = "TSV", required = true)]
    hyp: Vec<PathBuf>,

    #[command(flatten)]
    pipeline: Pipeline,

    /// Configurations to run (default: A0 through A5).
    #[arg(long, value_delimiter = ',', value_name = "NAMES")]
    configs: Vec<String>,

    /// Print the stacked progression CSV instead of the matrix.
    #[arg(long)]
    progression: bool,

    /// Write ablation.txt, ablation.csv and progression.csv here.
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct NormalizeArgs {
    /// Input file; stdin when absent or `-`.
    input: Option<PathBuf>,

    #[command(flatten)]
    pipeline: Pipeline,

    /// Show the text after every stage on stderr.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct RenderArgs {
    #[command(flatten)]
    corpus: Corpus,

    #[arg(long, value_name = "TSV")]
    hyp: PathBuf,

    #[command(flatten)]
    pipeline: Pipeline,

    /// Only these utterances (repeatable).
    #[arg(long)]
    uid: Vec<String>,
}

fn alternatives(corpus: &Corpus) -> CliResult<Vec<terkit::AlternativeSet>> {
    corpus
        .alts
        .as_deref()
        .map(load_alternatives)
        .transpose()
        .map(Option::unwrap_or_default)
}

fn emit(text: &str) -> CliResult<()> {
    io::stdout()
        .lock()
        .write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

fn write_file(path: &Path, body: &str) -> CliResult<()> {
    fs::write(path, body).map_err(|e| CliError::io(path.display().to_string(), e))
}

fn score(args: &ScoreArgs) -> CliResult<()> {
    let cfg = args.pipeline.config()?;
    let refs = load_references(&args.corpus.reference)?;
    let hyps = load_hypotheses(&args.hyp)?;
    let alts = alternatives(&args.corpus)?;
    let run = run_score(&refs, &hyps, &alts, &cfg)?;
    let echo = InputEcho {
        reference: args.corpus.reference.display().to_string(),
        hypothesis: args.hyp.display().to_string(),
        alternatives: args.corpus.alts.as_ref().map(|p| p.display().to_string()),
        alternative_sets: alts.len(),
    };
    let summary = summary_json(&run, &cfg, &echo);
    if let Some(dir) = &args.out_dir {
        write_outputs(dir, &run, &summary)?;
    }
    match args.format {
        Format::Json => emit(&summary_text(&summary)),
        Format::Jsonl => emit(&utterances_jsonl(&run.scores)),
        Format::Csv => emit(&utterances_csv(&run.scores)),
        Format::Text => emit(&format!(
            "{}\nTER {}  mTER {}  ({} utterances)\n",
            alignments_text(&run.scores),
            run.corpus.ter,
            run.corpus.mter,
            run.corpus.utterances
        )),
    }
}

fn models(paths: &[PathBuf]) -> CliResult<Vec<Model>> {
    let mut seen = HashSet::new();
    paths
        .iter()
        .map(|p| {
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .ok_or_else(|| CliError::Usage(format!("{}: no file name", p.display())))?;
            if !seen.insert(name.clone()) {
                return Err(CliError::Usage(format!(
                    "two hypothesis files share the model name {name:?}"
                )));
            }
            Ok(Model {
                name,
                hypotheses: load_hypotheses(p)?,
            })
        })
        .collect()
}

fn ablate(args: &AblateArgs) -> CliResult<()> {
    let base = args.pipeline.config()?;
    let refs = load_references(&args.corpus.reference)?;
    let alts = alternatives(&args.corpus)?;
    let models = models(&args.hyp)?;
    let mut spec = AblationSpec::single_component(&base);
    if !args.configs.is_empty() {
        spec = spec.select(&args.configs)?;
    }
    let matrix = run_ablation(&refs, &models, &alts, &spec)?;
    let steps = run_configs(&refs, &models, &alts, &progression(&base))?;
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display().to_string(), e))?;
        write_file(&dir.join("ablation.txt"), &matrix.to_text())?;
        write_file(&dir.join("ablation.csv"), &matrix.to_csv())?;
        write_file(&dir.join("progression.csv"), &steps.to_csv())?;
    }
    let shown = if args.progression { &steps } else { &matrix };
    match args.format {
        Format::Text => emit(&shown.to_text()),
        Format::Csv => emit(&shown.to_csv()),
        Format::Json | Format::Jsonl => {
            let cells: Vec<_> = (0..shown.models.len())
                .map(|m| {
                    let row: serde_json::Map<_, _> = shown
                        .configs
                        .iter()
                        .enumerate()
                        .map(|(c, name)| {
                            let cell = json!({"WER": percent_json(shown.wer[m][c]), "rank": shown.ranks(c)[m]});
                            (name.clone(), cell)
                        })
                        .collect();
                    json!({"model": shown.models[m], "results": row})
                })
                .collect();
            let text = if args.format == Format::Json {
                summary_text(&json!(cells))
            } else {
                cells.iter().map(|c| format!("{c}\n")).collect()
            };
            emit(&text)
        }
    }
}

fn normalize(args: &NormalizeArgs) -> CliResult<()> {
    let cfg = args.pipeline.config()?;
    let text = match args.input.as_deref() {
        Some(p) if p != Path::new("-") => read_file(p)?,
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::io("<stdin>", e))?;
            s
        }
    };
    let (out, trace) = normalize_lines(&text, &cfg.norm, args.trace);
    if !trace.is_empty() {
        eprint!("{trace}");
    }
    emit(&out)
}

fn render(args: &RenderArgs) -> CliResult<()> {
    let cfg = args.pipeline.config()?;
    let refs = load_references(&args.corpus.reference)?;
    let hyps = load_hypotheses(&args.hyp)?;
    let alts = alternatives(&args.corpus)?;
    let run = run_score(&refs, &hyps, &alts, &cfg)?;
    let wanted: HashSet<&str> = args.uid.iter().map(String::as_str).collect();
    if let Some(missing) = args
        .uid
        .iter()
        .find(|u| !run.scores.iter().any(|s| &s.uid == *u))
    {
        return Err(CliError::Usage(format!("no utterance with id {missing:?}")));
    }
    let blocks: Vec<String> = run
        .scores
        .iter()
        .filter(|s| wanted.is_empty() || wanted.contains(s.uid.as_str()))
        .map(|s| render_alignment(&s.uid, &s.alignment, s.ter, s.mter))
        .collect();
    emit(&blocks.join("\n"))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Score(a) => score(a),
        Command::Ablate(a) => ablate(a),
        Command::Normalize(a) => normalize(a),
        Command::Render(a) => render(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if cli.error_json {
                eprintln!("{}", e.to_json());
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
