//! Batch command-line front end: classify, extract, validate, stats,
//! split, augment-plan, augment-apply, score, baseline, kappa.
//!
//! Every run is deterministic given its inputs and flags; all randomness
//! flows from --seed (fixed default, never wall clock). The resolved
//! configuration is echoed to stderr on every run and embedded in JSON
//! reports. Exit codes: 0 success, 1 validation violations found, 2 usage
//! error, 3 I/O or data format error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use intentarg::augment::{generate_variants, label_for_head, plan_augmentation};
use intentarg::classifier::{classify, UtteranceLabel};
use intentarg::corpus::{
    fleiss_kappa, read_corpus_path, record_line, stats, strip_notation, validate, write_corpus,
    AgreementMatrix, CorpusError, Fraction, FormatFlags, LabelFormat, SplitSpec,
};
use intentarg::eval::{nn_baseline_predict, score_corpus, EmbeddingTable, EvalError};
use intentarg::extractor::{extract, parse_head, render, ExtractionConfig};
use intentarg::model::{CorpusRecord, HeadKind, HeadMarker, HeadPosition, SpeechActType, Topic};
use intentarg::rules::RuleSet;
use intentarg::textnorm::{normalize, tokenize_with, AnalyzerRegistry, AnalyzerSpec};
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const DEFAULT_SEED: u64 = 20200213;

#[derive(Parser)]
#[command(
    name = "intentarg",
    version,
    about = "Intent-argument extraction toolkit for non-canonical directives"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum LabelArg {
    Int,
    Str,
}

#[derive(Clone, Copy, ValueEnum)]
enum HeadArg {
    Initial,
    Final,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum FormatArg {
    /// Human-readable text.
    Table,
    /// Machine-readable JSON report.
    Report,
}

#[derive(Args)]
struct CommonRules {
    /// Rule set: "en-demo", "ko", or a path to a rule file.
    #[arg(long, default_value = "en-demo")]
    rules: String,
    /// Head marker position; defaults to the rule set's own convention.
    #[arg(long, value_enum)]
    head: Option<HeadArg>,
}

#[derive(Args)]
struct CommonIo {
    /// Label column format in corpus files.
    #[arg(long, value_enum, default_value_t = LabelArg::Int)]
    labels: LabelArg,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Label one raw utterance per input line.
    Classify {
        input: PathBuf,
        #[command(flatten)]
        rules: CommonRules,
        #[command(flatten)]
        io: CommonIo,
        #[arg(long, default_value = "whitespace")]
        analyzer: String,
    },
    /// Extract arguments from one raw utterance per input line, emitting
    /// label/sentence/argument corpus rows (non-directives are skipped).
    Extract {
        input: PathBuf,
        #[command(flatten)]
        rules: CommonRules,
        #[command(flatten)]
        io: CommonIo,
        #[arg(long, default_value = "whitespace")]
        analyzer: String,
        /// Drop the speaker/addressee notation column from the output.
        #[arg(long)]
        strip_notation: bool,
    },
    /// Check a corpus file against the format contract; exit 1 if any
    /// violation is found.
    Validate {
        corpus: PathBuf,
        #[command(flatten)]
        rules: CommonRules,
        #[command(flatten)]
        io: CommonIo,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
    },
    /// Per-type (and per-topic) composition of a corpus file.
    Stats {
        corpus: PathBuf,
        #[command(flatten)]
        io: CommonIo,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
    },
    /// Deterministic seeded shuffle-split into train and test files.
    Split {
        corpus: PathBuf,
        #[command(flatten)]
        io: CommonIo,
        /// Train fraction, e.g. "9/10" or "0.9".
        #[arg(long, default_value = "9/10")]
        fraction: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        train_out: PathBuf,
        #[arg(long)]
        test_out: PathBuf,
    },
    /// Topic-apportioned augmentation plan from per-type quotas.
    AugmentPlan {
        corpus: PathBuf,
        #[command(flatten)]
        io: CommonIo,
        /// Per-type argument quota, e.g. --quota alternative_question=400
        /// or --quota 1=400; repeatable.
        #[arg(long = "quota")]
        quotas: Vec<String>,
        /// Topic ratio weights (mail, schedule, smart home, weather, free).
        #[arg(long, default_value = "1,1,1,1,4")]
        weights: String,
        #[arg(long, default_value_t = 10)]
        variants: u64,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
    },
    /// Generate surface variants from one rendered argument per line,
    /// emitting corpus rows.
    AugmentApply {
        arguments: PathBuf,
        #[command(flatten)]
        rules: CommonRules,
        #[command(flatten)]
        io: CommonIo,
        /// Variants per argument.
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Score a predictions file against a gold corpus.
    Score {
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        embeddings: PathBuf,
        #[command(flatten)]
        io: CommonIo,
        #[arg(long, default_value = "whitespace")]
        analyzer: String,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
    },
    /// Nearest-neighbour retrieval baseline: predict an argument for each
    /// record of the input corpus from the training corpus.
    Baseline {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        io: CommonIo,
        #[arg(long, default_value = "whitespace")]
        analyzer: String,
    },
    /// Fleiss' kappa of an items-by-categories count matrix file.
    Kappa {
        matrix: PathBuf,
        #[command(flatten)]
        io: CommonIo,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
    },
}

// ---------------------------------------------------------------------------

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    /// Data violations found by validate.
    Violations,
}

impl From<CorpusError> for CliError {
    fn from(err: CorpusError) -> CliError {
        match err {
            CorpusError::InvalidFraction(_) => CliError::Usage(err.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(err: EvalError) -> CliError {
        CliError::Data(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> CliError {
        CliError::Data(err.to_string())
    }
}

fn label_flags(labels: LabelArg) -> FormatFlags {
    FormatFlags {
        labels: match labels {
            LabelArg::Int => LabelFormat::Integer,
            LabelArg::Str => LabelFormat::Name,
        },
        header: false,
    }
}

fn load_rules(spec: &str) -> Result<RuleSet, CliError> {
    match spec {
        "en-demo" => Ok(RuleSet::builtin_en_demo()),
        "ko" => Ok(RuleSet::builtin_ko()),
        path => RuleSet::from_path(path)
            .map_err(|e| CliError::Data(format!("cannot load rules from {path}: {e}"))),
    }
}

fn head_position(rules: &RuleSet, arg: Option<HeadArg>) -> HeadPosition {
    match arg {
        Some(HeadArg::Initial) => HeadPosition::Initial,
        Some(HeadArg::Final) => HeadPosition::Final,
        None => {
            if rules.final_markers.is_some() {
                HeadPosition::Final
            } else {
                HeadPosition::Initial
            }
        }
    }
}

fn analyzer_spec(name: &str) -> AnalyzerSpec {
    if name == "whitespace" {
        AnalyzerSpec::Whitespace
    } else {
        AnalyzerSpec::External(name.to_string())
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn echo_config(fields: &[(&str, String)]) {
    let rendered: Vec<String> = fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
    eprintln!("config: {}", rendered.join(" "));
}

fn config_json(fields: &[(&str, String)]) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = fields
        .iter()
        .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
        .collect();
    serde_json::Value::Object(map)
}

fn read_lines(path: &Path) -> Result<Vec<String>, CliError> {
    Ok(std::fs::read_to_string(path)?
        .lines()
        .map(str::to_string)
        .collect())
}

fn label_field(label: UtteranceLabel, labels: LabelArg) -> String {
    match label {
        UtteranceLabel::Directive(t) => match labels {
            LabelArg::Int => t.code().to_string(),
            LabelArg::Str => t.name().to_string(),
        },
        UtteranceLabel::NonDirective => "-".to_string(),
    }
}

fn parse_quota(spec: &str) -> Result<(SpeechActType, u64), CliError> {
    let (key, value) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("quota {spec:?} is not label=count")))?;
    let label = key
        .parse::<u8>()
        .ok()
        .and_then(|c| SpeechActType::from_code(c).ok())
        .or_else(|| SpeechActType::from_name(key).ok())
        .ok_or_else(|| CliError::Usage(format!("unknown label {key:?}")))?;
    let count: u64 = value
        .parse()
        .map_err(|_| CliError::Usage(format!("bad quota count {value:?}")))?;
    Ok((label, count))
}

fn parse_weights(spec: &str) -> Result<[u32; 5], CliError> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(CliError::Usage(format!(
            "weights {spec:?} must have 5 comma-separated entries"
        )));
    }
    let mut weights = [0u32; 5];
    for (slot, part) in weights.iter_mut().zip(parts) {
        *slot = part
            .parse()
            .map_err(|_| CliError::Usage(format!("bad weight {part:?}")))?;
    }
    Ok(weights)
}

/// Parse a rendered argument line back into an intent argument for the
/// variant generator. Nominal arguments keep their whole text as content
/// (the nominal phrase has no fixed length); marker-headed arguments drop
/// the marker.
fn argument_from_text(
    text: &str,
    rules: &RuleSet,
    position: HeadPosition,
) -> Option<(HeadKind, intentarg::model::IntentArgument)> {
    let normalized = normalize(text);
    let kind = parse_head(&normalized, position, rules)?;
    let words: Vec<String> = normalized.split_whitespace().map(str::to_string).collect();
    let content: Vec<String> = match position {
        HeadPosition::Initial => match kind {
            HeadKind::NotTo => words.into_iter().skip(2).collect(),
            HeadKind::To | HeadKind::If | HeadKind::WhetherOr => {
                words.into_iter().skip(1).collect()
            }
            HeadKind::Nominal => words,
        },
        HeadPosition::Final => {
            let markers = rules.final_markers.as_ref()?;
            let mut words = words;
            match kind {
                HeadKind::To => {
                    let last = words.last_mut()?;
                    let cut = last.len() - markers.to.len();
                    last.truncate(cut);
                }
                HeadKind::NotTo => {
                    // Marker may span the last two tokens ("가지 말기").
                    let joined = words.join(" ");
                    let trimmed = joined.trim_end_matches(markers.not_to.as_str()).to_string();
                    words = trimmed.split_whitespace().map(str::to_string).collect();
                }
                HeadKind::If | HeadKind::WhetherOr => {
                    let last = words.last_mut()?;
                    let cut = last.len() - markers.question.len();
                    last.truncate(cut);
                }
                HeadKind::Nominal => {}
            }
            words.retain(|w| !w.is_empty());
            words
        }
    };
    if content.is_empty() {
        return None;
    }
    let head = match kind {
        HeadKind::If => HeadMarker::If,
        HeadKind::WhetherOr => HeadMarker::WhetherOr,
        HeadKind::Nominal => HeadMarker::Nominal(String::new()),
        HeadKind::To => HeadMarker::To,
        HeadKind::NotTo => HeadMarker::NotTo,
    };
    Some((
        kind,
        intentarg::model::IntentArgument {
            head,
            content,
            head_position: position,
            referents: Default::default(),
        },
    ))
}

// ---------------------------------------------------------------------------
// Report rendering.

#[derive(Serialize)]
struct ViolationRow {
    record: usize,
    #[serde(flatten)]
    violation: intentarg::corpus::Violation,
}

fn stats_table(s: &intentarg::corpus::CorpusStats) -> String {
    let mut out = String::new();
    out.push_str("type                  count\n");
    for t in SpeechActType::ALL {
        out.push_str(&format!("{:<20}  {:>7}\n", t.name(), s.count(t)));
    }
    out.push_str(&format!("{:<20}  {:>7}\n", "total", s.total));
    if let Some(topics) = s.per_topic {
        out.push('\n');
        out.push_str("topic                 count\n");
        for (topic, count) in Topic::ALL.iter().zip(topics) {
            out.push_str(&format!("{:<20}  {:>7}\n", topic.tag(), count));
        }
    }
    out
}

// ---------------------------------------------------------------------------

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Classify { input, rules, io, analyzer } => {
            let rule_set = load_rules(&rules.rules)?;
            let spec = analyzer_spec(&analyzer);
            let registry = AnalyzerRegistry::new();
            echo_config(&[
                ("cmd", "classify".into()),
                ("rules", rules.rules.clone()),
                ("analyzer", analyzer.clone()),
                ("input", input.display().to_string()),
            ]);
            let mut out = String::new();
            for line in read_lines(&input)? {
                let normalized = normalize(&line);
                if normalized.is_empty() {
                    continue;
                }
                let tokens = tokenize_with(&normalized, &spec, &registry)
                    .map_err(|e| CliError::Data(e.to_string()))?;
                let result = classify(&tokens, &rule_set)
                    .map_err(|e| CliError::Data(e.to_string()))?;
                out.push_str(&format!(
                    "{}\t{}\n",
                    label_field(result.label, io.labels),
                    normalized
                ));
            }
            write_output(&io.out, &out)
        }
        Command::Extract { input, rules, io, analyzer, strip_notation: drop_notation } => {
            let rule_set = load_rules(&rules.rules)?;
            let position = head_position(&rule_set, rules.head);
            let cfg = ExtractionConfig {
                head_position: position,
                rules: &rule_set,
                keep_notation: !drop_notation,
            };
            let spec = analyzer_spec(&analyzer);
            let registry = AnalyzerRegistry::new();
            echo_config(&[
                ("cmd", "extract".into()),
                ("rules", rules.rules.clone()),
                ("head", format!("{position:?}").to_lowercase()),
                ("analyzer", analyzer.clone()),
                ("input", input.display().to_string()),
            ]);
            let flags = label_flags(io.labels);
            let mut records: Vec<CorpusRecord> = Vec::new();
            let mut skipped = 0usize;
            for line in read_lines(&input)? {
                let normalized = normalize(&line);
                if normalized.is_empty() {
                    continue;
                }
                let tokens = tokenize_with(&normalized, &spec, &registry)
                    .map_err(|e| CliError::Data(e.to_string()))?;
                let result = classify(&tokens, &rule_set)
                    .map_err(|e| CliError::Data(e.to_string()))?;
                let UtteranceLabel::Directive(label) = result.label else {
                    skipped += 1;
                    continue;
                };
                let arg = extract(&tokens, result.label, &cfg)
                    .map_err(|e| CliError::Data(e.to_string()))?;
                let mut record = CorpusRecord::new(label, normalized, render(&arg, &cfg));
                if cfg.keep_notation {
                    record.notation = Some(arg.notation());
                }
                records.push(record);
            }
            if skipped > 0 {
                eprintln!("skipped {skipped} non-directive line(s)");
            }
            let records = if drop_notation { strip_notation(&records) } else { records };
            let mut out = String::new();
            for record in &records {
                out.push_str(&record_line(record, flags));
                out.push('\n');
            }
            write_output(&io.out, &out)
        }
        Command::Validate { corpus, rules, io, format } => {
            let rule_set = load_rules(&rules.rules)?;
            let position = head_position(&rule_set, rules.head);
            echo_config(&[
                ("cmd", "validate".into()),
                ("rules", rules.rules.clone()),
                ("head", format!("{position:?}").to_lowercase()),
                ("corpus", corpus.display().to_string()),
            ]);
            let records = read_corpus_path(&corpus, label_flags(io.labels))?;
            let mut rows: Vec<ViolationRow> = Vec::new();
            for (i, record) in records.iter().enumerate() {
                for violation in validate(record, &rule_set, position) {
                    rows.push(ViolationRow { record: i + 1, violation });
                }
            }
            let content = match format {
                FormatArg::Table => {
                    let mut out = String::new();
                    for row in &rows {
                        out.push_str(&format!("record {}: {}\n", row.record, row.violation));
                    }
                    out.push_str(&format!(
                        "{} violation(s) in {} record(s)\n",
                        rows.len(),
                        records.len()
                    ));
                    out
                }
                FormatArg::Report => {
                    let report = json!({
                        "config": config_json(&[
                            ("cmd", "validate".into()),
                            ("rules", rules.rules.clone()),
                            ("corpus", corpus.display().to_string()),
                        ]),
                        "records": records.len(),
                        "count": rows.len(),
                        "violations": rows,
                    });
                    format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable"))
                }
            };
            write_output(&io.out, &content)?;
            if rows.is_empty() {
                Ok(())
            } else {
                Err(CliError::Violations)
            }
        }
        Command::Stats { corpus, io, format } => {
            echo_config(&[("cmd", "stats".into()), ("corpus", corpus.display().to_string())]);
            let records = read_corpus_path(&corpus, label_flags(io.labels))?;
            let s = stats(&records);
            let content = match format {
                FormatArg::Table => stats_table(&s),
                FormatArg::Report => {
                    let per_type: BTreeMap<&str, u64> = SpeechActType::ALL
                        .iter()
                        .map(|t| (t.name(), s.count(*t)))
                        .collect();
                    let report = json!({
                        "config": config_json(&[
                            ("cmd", "stats".into()),
                            ("corpus", corpus.display().to_string()),
                        ]),
                        "per_type": per_type,
                        "per_topic": s.per_topic.map(|topics| {
                            Topic::ALL
                                .iter()
                                .zip(topics)
                                .map(|(t, c)| (t.tag().to_string(), c))
                                .collect::<BTreeMap<String, u64>>()
                        }),
                        "total": s.total,
                    });
                    format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable"))
                }
            };
            write_output(&io.out, &content)
        }
        Command::Split { corpus, io, fraction, seed, train_out, test_out } => {
            let fraction = Fraction::parse(&fraction)?;
            echo_config(&[
                ("cmd", "split".into()),
                ("corpus", corpus.display().to_string()),
                ("fraction", fraction.to_string()),
                ("seed", seed.to_string()),
            ]);
            let flags = label_flags(io.labels);
            let records = read_corpus_path(&corpus, flags)?;
            let spec = SplitSpec { train_fraction: fraction, seed };
            let (train, test) = intentarg::corpus::split(&records, &spec)?;
            let mut train_bytes = Vec::new();
            write_corpus(&train, &mut train_bytes, flags)?;
            std::fs::write(&train_out, train_bytes)?;
            let mut test_bytes = Vec::new();
            write_corpus(&test, &mut test_bytes, flags)?;
            std::fs::write(&test_out, test_bytes)?;
            eprintln!("train: {} records, test: {} records", train.len(), test.len());
            Ok(())
        }
        Command::AugmentPlan { corpus, io, quotas, weights, variants, format } => {
            if quotas.is_empty() {
                return Err(CliError::Usage("at least one --quota is required".into()));
            }
            let weights = parse_weights(&weights)?;
            let mut quota_map: BTreeMap<SpeechActType, u64> = BTreeMap::new();
            for spec in &quotas {
                let (label, count) = parse_quota(spec)?;
                quota_map.insert(label, count);
            }
            echo_config(&[
                ("cmd", "augment-plan".into()),
                ("corpus", corpus.display().to_string()),
                ("variants", variants.to_string()),
            ]);
            let records = read_corpus_path(&corpus, label_flags(io.labels))?;
            let current = stats(&records);
            let plan = plan_augmentation(&current, &quota_map, weights, variants)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let content = match format {
                FormatArg::Table => {
                    let mut out = String::new();
                    out.push_str("type                  quota    mail schedule smart_home weather    free\n");
                    for (label, quota) in &plan.quotas {
                        let alloc = plan.allocation[label];
                        out.push_str(&format!(
                            "{:<20} {:>6}  {:>6} {:>8} {:>10} {:>7} {:>7}\n",
                            label.name(),
                            quota,
                            alloc[0],
                            alloc[1],
                            alloc[2],
                            alloc[3],
                            alloc[4]
                        ));
                    }
                    out.push_str(&format!(
                        "arguments: {}, variants per argument: {}, pairs: {}\n",
                        plan.total_arguments, plan.variants_per_argument, plan.total_pairs
                    ));
                    out
                }
                FormatArg::Report => {
                    let report = json!({
                        "config": config_json(&[
                            ("cmd", "augment-plan".into()),
                            ("corpus", corpus.display().to_string()),
                            ("variants", variants.to_string()),
                        ]),
                        "plan": plan,
                    });
                    format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable"))
                }
            };
            write_output(&io.out, &content)
        }
        Command::AugmentApply { arguments, rules, io, n, seed } => {
            let rule_set = load_rules(&rules.rules)?;
            let position = head_position(&rule_set, rules.head);
            echo_config(&[
                ("cmd", "augment-apply".into()),
                ("rules", rules.rules.clone()),
                ("n", n.to_string()),
                ("seed", seed.to_string()),
            ]);
            let flags = label_flags(io.labels);
            let mut out = String::new();
            for (i, line) in read_lines(&arguments)?.iter().enumerate() {
                let normalized = normalize(line);
                if normalized.is_empty() {
                    continue;
                }
                let Some((kind, argument)) = argument_from_text(&normalized, &rule_set, position)
                else {
                    return Err(CliError::Data(format!(
                        "argument line {}: cannot determine head marker of {normalized:?}",
                        i + 1
                    )));
                };
                let label = label_for_head(kind);
                // One seed stream per argument keeps lines independent.
                let variants = generate_variants(&argument, n, &rule_set, seed ^ (i as u64))
                    .map_err(|e| CliError::Data(format!("argument line {}: {e}", i + 1)))?;
                for variant in variants {
                    let record = CorpusRecord::new(label, variant.text, normalized.clone());
                    out.push_str(&record_line(&record, flags));
                    out.push('\n');
                }
            }
            write_output(&io.out, &out)
        }
        Command::Score { pred, gold, embeddings, io, analyzer, format } => {
            echo_config(&[
                ("cmd", "score".into()),
                ("pred", pred.display().to_string()),
                ("gold", gold.display().to_string()),
                ("embeddings", embeddings.display().to_string()),
                ("analyzer", analyzer.clone()),
            ]);
            let predictions = read_lines(&pred)?;
            let records = read_corpus_path(&gold, label_flags(io.labels))?;
            let table = EmbeddingTable::read_text_path(&embeddings)?;
            let spec = analyzer_spec(&analyzer);
            let registry = AnalyzerRegistry::new();
            let report = score_corpus(&predictions, &records, &table, &spec, &registry)?;
            let content = match format {
                FormatArg::Table => {
                    let mut out = String::new();
                    out.push_str(&format!("pairs: {}\n", report.count));
                    match &report.means {
                        Some(m) => {
                            out.push_str(&format!("rouge1    P {:.4}  R {:.4}  F1 {:.4}\n", m.rouge1_p, m.rouge1_r, m.rouge1_f));
                            out.push_str(&format!("semantic  P {:.4}  R {:.4}  F1 {:.4}\n", m.sem_p, m.sem_r, m.sem_f));
                            out.push_str(&format!("total     {:.4}\n", m.total));
                        }
                        None => out.push_str("means: (no pairs)\n"),
                    }
                    out
                }
                FormatArg::Report => {
                    let wrapped = json!({
                        "config": config_json(&[
                            ("cmd", "score".into()),
                            ("pred", pred.display().to_string()),
                            ("gold", gold.display().to_string()),
                            ("embeddings", embeddings.display().to_string()),
                            ("analyzer", analyzer.clone()),
                        ]),
                        "report": report,
                    });
                    format!("{}\n", serde_json::to_string_pretty(&wrapped).expect("serializable"))
                }
            };
            write_output(&io.out, &content)
        }
        Command::Baseline { train, input, io, analyzer } => {
            echo_config(&[
                ("cmd", "baseline".into()),
                ("train", train.display().to_string()),
                ("input", input.display().to_string()),
                ("analyzer", analyzer.clone()),
            ]);
            let flags = label_flags(io.labels);
            let train_records = read_corpus_path(&train, flags)?;
            let input_records = read_corpus_path(&input, flags)?;
            let spec = analyzer_spec(&analyzer);
            let registry = AnalyzerRegistry::new();
            let mut out = String::new();
            for record in &input_records {
                let prediction =
                    nn_baseline_predict(&train_records, &record.sentence, &spec, &registry)?;
                out.push_str(&prediction);
                out.push('\n');
            }
            write_output(&io.out, &out)
        }
        Command::Kappa { matrix, io, format } => {
            echo_config(&[("cmd", "kappa".into()), ("matrix", matrix.display().to_string())]);
            let mut counts: Vec<Vec<u64>> = Vec::new();
            for (i, line) in read_lines(&matrix)?.iter().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let row: Result<Vec<u64>, _> =
                    line.split_whitespace().map(str::parse::<u64>).collect();
                counts.push(row.map_err(|_| {
                    CliError::Data(format!("matrix line {}: expected integers", i + 1))
                })?);
            }
            let matrix_data =
                AgreementMatrix::from_counts(counts).map_err(|e| CliError::Data(e.to_string()))?;
            let kappa = fleiss_kappa(&matrix_data);
            let content = match format {
                FormatArg::Table => format!(
                    "items: {}  categories: {}  raters: {}\nkappa: {:.6}\n",
                    matrix_data.items(),
                    matrix_data.categories(),
                    matrix_data.raters(),
                    kappa
                ),
                FormatArg::Report => {
                    let report = json!({
                        "config": config_json(&[("cmd", "kappa".into()), ("matrix", matrix.display().to_string())]),
                        "items": matrix_data.items(),
                        "categories": matrix_data.categories(),
                        "raters": matrix_data.raters(),
                        "kappa": kappa,
                    });
                    format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable"))
                }
            };
            write_output(&io.out, &content)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Violations) => ExitCode::from(1),
        Err(CliError::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Data(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}
