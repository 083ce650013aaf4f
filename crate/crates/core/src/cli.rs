//! The `transmi` command line: the merge pipeline plus tokenizer analyses.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use crate::canonical;
use crate::embed::{self, EmbedError, EmbeddingMatrix};
use crate::merge::{self, MergeError, MergeMode, MergeReport};
use crate::translit::{self, RuleError};
use crate::unigram::{self, ModelError, UnigramModel};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Rules(#[from] RuleError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Merge(#[from] MergeError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("tokenizer has {tokenizer} entries but embeddings have {embeddings} rows")]
    RowMismatch { tokenizer: usize, embeddings: usize },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Stable, machine-parsable error category.
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Model(ModelError::Io { .. })
            | CliError::Rules(RuleError::Io { .. })
            | CliError::Embed(EmbedError::Io { .. })
            | CliError::Io { .. } => "io",
            CliError::Model(_) => "tokenizer",
            CliError::Rules(_) => "rules",
            CliError::Embed(_) => "embeddings",
            CliError::Merge(_) => "merge",
            CliError::RowMismatch { .. } => "mismatch",
            CliError::Usage(_) => "usage",
        }
    }

    fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "transmi", version, about = "Adapt Unigram tokenizers to transliterated text")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Merge subword transliterations into a tokenizer (and its embeddings).
    Merge(MergeArgs),
    /// Tokenize text, one output line per input line.
    Tokenize(TokenizeArgs),
    /// Average sequence length of corpora under one or two tokenizers.
    Stats(StatsArgs),
    /// Transliterate text line by line.
    Transliterate(TransliterateArgs),
    /// Histogram of transliteration ambiguity for a tokenizer.
    Ambiguity(AmbiguityArgs),
}

#[derive(Debug, Args)]
pub struct MergeArgs {
    #[arg(long)]
    pub tokenizer: PathBuf,
    /// Binary embedding matrix; `.tsv` files are read as text.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    #[arg(long)]
    pub rules: PathBuf,
    #[arg(long, value_enum)]
    pub mode: MergeMode,
    #[arg(long)]
    pub out_tokenizer: PathBuf,
    #[arg(long)]
    pub out_embeddings: Option<PathBuf>,
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Debug, Args)]
#[group(id = "input", required = true, multiple = false, args = ["text", "file"])]
pub struct InputArgs {
    #[arg(long)]
    pub text: Option<String>,
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TokenizeArgs {
    #[arg(long)]
    pub tokenizer: PathBuf,
    #[command(flatten)]
    pub input: InputArgs,
    /// Print token ids instead of surfaces.
    #[arg(long)]
    pub ids: bool,
    #[arg(long, default_value = " ")]
    pub sep: String,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub tokenizer: PathBuf,
    #[arg(long = "tokenizer-b")]
    pub tokenizer_b: Option<PathBuf>,
    /// `<label>=<path>`, one sentence per line.
    #[arg(long, required = true, value_parser = parse_corpus)]
    pub corpus: Vec<(String, PathBuf)>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TransliterateArgs {
    #[arg(long)]
    pub rules: PathBuf,
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Args)]
pub struct AmbiguityArgs {
    #[arg(long)]
    pub tokenizer: PathBuf,
    #[arg(long)]
    pub rules: PathBuf,
}

fn parse_corpus(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((label, path)) if !label.is_empty() && !path.is_empty() => {
            Ok((label.to_string(), PathBuf::from(path)))
        }
        _ => Err(format!("expected <label>=<path>, got {s:?}")),
    }
}

impl InputArgs {
    fn lines(&self) -> Result<Vec<String>, CliError> {
        match (&self.text, &self.file) {
            (Some(text), _) => Ok(text
                .split('\n')
                .map(|l| l.strip_suffix('\r').unwrap_or(l).to_string())
                .collect()),
            (None, Some(path)) => {
                let text = read_text(path)?;
                Ok(text.lines().map(str::to_string).collect())
            }
            (None, None) => Err(CliError::Usage("one of --text or --file is required".into())),
        }
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn stdout_err(e: io::Error) -> CliError {
    CliError::io(Path::new("<stdout>"), e)
}

/// Inputs and outputs of one merge run.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub tokenizer_path: PathBuf,
    pub embeddings_path: Option<PathBuf>,
    pub rules_dir: PathBuf,
    pub mode: MergeMode,
    pub out_tokenizer: PathBuf,
    pub out_embeddings: Option<PathBuf>,
    pub report_path: PathBuf,
}

impl From<&MergeArgs> for PipelineConfig {
    fn from(a: &MergeArgs) -> Self {
        PipelineConfig {
            tokenizer_path: a.tokenizer.clone(),
            embeddings_path: a.embeddings.clone(),
            rules_dir: a.rules.clone(),
            mode: a.mode,
            out_tokenizer: a.out_tokenizer.clone(),
            out_embeddings: a.out_embeddings.clone(),
            report_path: a.report.clone(),
        }
    }
}

pub fn load_embeddings_any(path: &Path) -> Result<EmbeddingMatrix, EmbedError> {
    if path.extension().is_some_and(|e| e == "tsv") {
        embed::load_embeddings_tsv(path)
    } else {
        embed::load_embeddings(path)
    }
}

/// Runs transliteration, merge and embedding initialization, then writes
/// every artifact. Nothing is written unless all stages succeed.
pub fn run_merge_pipeline(config: &PipelineConfig) -> Result<MergeReport, CliError> {
    if config.embeddings_path.is_some() != config.out_embeddings.is_some() {
        return Err(CliError::Usage(
            "--embeddings and --out-embeddings must be given together".into(),
        ));
    }
    let model = unigram::load_model(&config.tokenizer_path)?;
    let table = translit::load_rules(&config.rules_dir)?;
    let original = match &config.embeddings_path {
        Some(path) => {
            let e = load_embeddings_any(path)?;
            if e.rows() != model.len() {
                return Err(CliError::RowMismatch {
                    tokenizer: model.len(),
                    embeddings: e.rows(),
                });
            }
            Some(e)
        }
        None => None,
    };

    let triplets = merge::build_triplets(&model, &table);
    let merged = merge::merge_vocabulary(&model, &triplets, config.mode)?;
    let extended = match &original {
        Some(e) => {
            let added = embed::initialize_new_rows(e, &merged.resolutions)?;
            let full = e.concat(&added)?;
            debug_assert_eq!(full.rows(), merged.model.len());
            Some(full)
        }
        None => None,
    };

    write_file(&config.out_tokenizer, merged.model.to_canonical_json().as_bytes())?;
    if let (Some(path), Some(e)) = (&config.out_embeddings, &extended) {
        write_file(path, &e.to_bytes())?;
    }
    write_file(&config.report_path, merged.report.to_canonical_json().as_bytes())?;
    Ok(merged.report)
}

pub fn cmd_tokenize(args: &TokenizeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let model = unigram::load_model(&args.tokenizer)?;
    for line in args.input.lines()? {
        let seg = model.tokenize(&line);
        let rendered = if args.ids {
            seg.ids()
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(&args.sep)
        } else {
            seg.surfaces().join(&args.sep)
        };
        writeln!(out, "{rendered}").map_err(stdout_err)?;
    }
    Ok(())
}

pub fn cmd_transliterate(args: &TransliterateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let table = translit::load_rules(&args.rules)?;
    for line in args.input.lines()? {
        writeln!(out, "{}", table.transliterate(&line)).map_err(stdout_err)?;
    }
    Ok(())
}

pub fn cmd_ambiguity(args: &AmbiguityArgs, out: &mut dyn Write) -> Result<merge::Histogram, CliError> {
    let model = unigram::load_model(&args.tokenizer)?;
    let table = translit::load_rules(&args.rules)?;
    let set = merge::build_triplets(&model, &table);
    let h = merge::ambiguity_histogram(&set.triplets, &model);
    let mut text = String::from("multiplicity\tcount\n");
    for (label, n) in h.rows() {
        text.push_str(&format!("{label}\t{n}\n"));
    }
    text.push_str(&format!("total\t{}\n", h.total()));
    out.write_all(text.as_bytes()).map_err(stdout_err)?;
    Ok(h)
}

/// Sequence-length statistics for one labelled corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusStats {
    pub label: String,
    pub sentences: usize,
    pub tokens_a: usize,
    pub tokens_b: Option<usize>,
}

impl CorpusStats {
    pub fn avg_a(&self) -> f64 {
        self.tokens_a as f64 / self.sentences as f64
    }

    pub fn avg_b(&self) -> Option<f64> {
        self.tokens_b.map(|t| t as f64 / self.sentences as f64)
    }

    /// Average under the second tokenizer minus the first.
    pub fn delta(&self) -> Option<f64> {
        self.avg_b().map(|b| b - self.avg_a())
    }
}

fn count_tokens(model: &UnigramModel, sentences: &[&str]) -> usize {
    sentences.par_iter().map(|s| model.tokenize(s).len()).sum()
}

/// Statistics for one corpus; `None` when it holds no sentences.
pub fn corpus_stats(
    label: &str,
    text: &str,
    a: &UnigramModel,
    b: Option<&UnigramModel>,
) -> Option<CorpusStats> {
    let sentences: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if sentences.is_empty() {
        return None;
    }
    Some(CorpusStats {
        label: label.to_string(),
        sentences: sentences.len(),
        tokens_a: count_tokens(a, &sentences),
        tokens_b: b.map(|m| count_tokens(m, &sentences)),
    })
}

fn stats_table(rows: &[CorpusStats]) -> String {
    let two = rows.iter().any(|r| r.tokens_b.is_some());
    let mut header = vec!["label", "sentences", "tokens_a", "avg_a"];
    if two {
        header.extend(["tokens_b", "avg_b", "delta"]);
    }
    let mut cells: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for r in rows {
        let mut line = vec![
            r.label.clone(),
            r.sentences.to_string(),
            r.tokens_a.to_string(),
            format!("{:.4}", r.avg_a()),
        ];
        if two {
            line.push(r.tokens_b.map(|t| t.to_string()).unwrap_or_default());
            line.push(r.avg_b().map(|v| format!("{v:.4}")).unwrap_or_default());
            line.push(r.delta().map(|v| format!("{v:+.4}")).unwrap_or_default());
        }
        cells.push(line);
    }
    let widths: Vec<usize> = (0..cells[0].len())
        .map(|c| cells.iter().map(|l| l[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for line in &cells {
        let padded: Vec<String> = line
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (s, w))| {
                if c == 0 {
                    format!("{s:<w$}")
                } else {
                    format!("{s:>w$}")
                }
            })
            .collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn stats_json(rows: &[CorpusStats]) -> String {
    let mut out = String::from("{");
    canonical::push_key(&mut out, "rows");
    out.push('[');
    for (i, r) in rows.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('{');
        canonical::push_key(&mut out, "avg_a");
        canonical::push_f64(&mut out, r.avg_a());
        if let (Some(avg_b), Some(delta), Some(tokens_b)) = (r.avg_b(), r.delta(), r.tokens_b) {
            out.push(',');
            canonical::push_key(&mut out, "avg_b");
            canonical::push_f64(&mut out, avg_b);
            out.push(',');
            canonical::push_key(&mut out, "delta");
            canonical::push_f64(&mut out, delta);
            out.push(',');
            canonical::push_key(&mut out, "label");
            canonical::push_str(&mut out, &r.label);
            out.push(',');
            canonical::push_key(&mut out, "sentences");
            canonical::push_u64(&mut out, r.sentences as u64);
            out.push(',');
            canonical::push_key(&mut out, "tokens_a");
            canonical::push_u64(&mut out, r.tokens_a as u64);
            out.push(',');
            canonical::push_key(&mut out, "tokens_b");
            canonical::push_u64(&mut out, tokens_b as u64);
        } else {
            out.push(',');
            canonical::push_key(&mut out, "label");
            canonical::push_str(&mut out, &r.label);
            out.push(',');
            canonical::push_key(&mut out, "sentences");
            canonical::push_u64(&mut out, r.sentences as u64);
            out.push(',');
            canonical::push_key(&mut out, "tokens_a");
            canonical::push_u64(&mut out, r.tokens_a as u64);
        }
        out.push('}');
    }
    out.push_str("]}");
    out
}

pub fn cmd_stats(
    args: &StatsArgs,
    out: &mut dyn Write,
    warn: &mut dyn Write,
) -> Result<Vec<CorpusStats>, CliError> {
    let a = unigram::load_model(&args.tokenizer)?;
    let b = args.tokenizer_b.as_ref().map(unigram::load_model).transpose()?;
    let mut rows = Vec::new();
    for (label, path) in &args.corpus {
        let text = read_text(path)?;
        match corpus_stats(label, &text, &a, b.as_ref()) {
            Some(row) => rows.push(row),
            None => writeln!(
                warn,
                "warning: corpus {label} ({}) has no sentences; row skipped",
                path.display()
            )
            .map_err(stdout_err)?,
        }
    }
    out.write_all(stats_table(&rows).as_bytes()).map_err(stdout_err)?;
    if let Some(path) = &args.json {
        write_file(path, stats_json(&rows).as_bytes())?;
    }
    Ok(rows)
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Merge(args) => {
            let report = run_merge_pipeline(&PipelineConfig::from(args))?;
            let c = report.counts;
            writeln!(
                out,
                "mode={} added={} (one_to_one={} ambiguous={}) existing={} skipped={}",
                report.mode,
                report.additions.len(),
                c.one_to_one_added,
                c.ambiguous_added,
                c.already_in_vocab,
                c.skipped_special + c.skipped_unusable,
            )
            .map_err(stdout_err)?;
        }
        Command::Tokenize(args) => cmd_tokenize(args, out)?,
        Command::Stats(args) => {
            cmd_stats(args, out, err)?;
        }
        Command::Transliterate(args) => cmd_transliterate(args, out)?,
        Command::Ambiguity(args) => {
            cmd_ambiguity(args, out)?;
        }
    }
    Ok(())
}
