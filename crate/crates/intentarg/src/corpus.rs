//! Corpus I/O, validation, statistics, deterministic splitting, notation
//! handling, and inter-annotator agreement.
//!
//! File format: tab-separated UTF-8, one record per line, no header by
//! default. Columns are label / sentence / argument, with optional fourth
//! (referent notation) and fifth (topic) columns. Labels are written as
//! integer codes or canonical names depending on the format flags. A "-"
//! in the notation column means "column present but value absent", which
//! keeps five-column rows byte-stable through a read/write round trip.

use crate::model::{
    CorpusRecord, HeadKind, HeadPosition, ReferentNotation, SpeechActType, Topic,
};
use crate::rng::SplitMix64;
use crate::rules::RuleSet;
use crate::textnorm::PUNCTUATION_STRIP_SET;
use serde::Serialize;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: invalid label {value:?}")]
    InvalidLabel { line: usize, value: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("corpus too small to split: {0} record(s)")]
    TooSmall(usize),
    #[error("malformed agreement matrix: {0}")]
    MalformedMatrix(String),
    #[error("invalid fraction: {0}")]
    InvalidFraction(String),
}

/// How labels appear in the file: integer codes 0..=5 or canonical names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LabelFormat {
    #[default]
    Integer,
    Name,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct FormatFlags {
    pub labels: LabelFormat,
    /// Skip (on read) or emit (on write) a header line.
    pub header: bool,
}

const HEADER_LINE: &str = "label\tsentence\targument";

fn parse_label(field: &str, flags: FormatFlags, line: usize) -> Result<SpeechActType, CorpusError> {
    let result = match flags.labels {
        LabelFormat::Integer => field
            .parse::<u8>()
            .map_err(|_| ())
            .and_then(|c| SpeechActType::from_code(c).map_err(|_| ())),
        LabelFormat::Name => SpeechActType::from_name(field).map_err(|_| ()),
    };
    result.map_err(|_| CorpusError::InvalidLabel { line, value: field.to_string() })
}

fn label_field(label: SpeechActType, flags: FormatFlags) -> String {
    match flags.labels {
        LabelFormat::Integer => label.code().to_string(),
        LabelFormat::Name => label.name().to_string(),
    }
}

/// Parse one corpus file. Empty lines are skipped; anything else must be a
/// well-formed 3-to-5-column record.
pub fn read_corpus<R: BufRead>(
    reader: R,
    flags: FormatFlags,
) -> Result<Vec<CorpusRecord>, CorpusError> {
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        if flags.header && idx == 0 {
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 3 || fields.len() > 5 {
            return Err(CorpusError::Parse {
                line: line_no,
                reason: format!("expected 3 to 5 tab-separated columns, found {}", fields.len()),
            });
        }
        let label = parse_label(fields[0], flags, line_no)?;
        let mut record = CorpusRecord::new(label, fields[1], fields[2]);
        if fields.len() >= 4 && fields[3] != "-" {
            record.notation = Some(ReferentNotation::from_tag(fields[3]).map_err(|_| {
                CorpusError::Parse {
                    line: line_no,
                    reason: format!("unknown notation tag {:?}", fields[3]),
                }
            })?);
        }
        if fields.len() == 5 {
            record.topic = Some(Topic::from_tag(fields[4]).map_err(|_| CorpusError::Parse {
                line: line_no,
                reason: format!("unknown topic tag {:?}", fields[4]),
            })?);
        }
        records.push(record);
    }
    Ok(records)
}

pub fn read_corpus_path(
    path: impl AsRef<Path>,
    flags: FormatFlags,
) -> Result<Vec<CorpusRecord>, CorpusError> {
    let file = std::fs::File::open(path)?;
    read_corpus(std::io::BufReader::new(file), flags)
}

/// Serialize one record as a corpus line (without newline).
pub fn record_line(record: &CorpusRecord, flags: FormatFlags) -> String {
    let mut line = format!(
        "{}\t{}\t{}",
        label_field(record.label, flags),
        record.sentence,
        record.argument
    );
    if let Some(topic) = record.topic {
        let notation = record.notation.map_or("-", |n| n.tag());
        line.push('\t');
        line.push_str(notation);
        line.push('\t');
        line.push_str(topic.tag());
    } else if let Some(notation) = record.notation {
        line.push('\t');
        line.push_str(notation.tag());
    }
    line
}

pub fn write_corpus<W: Write>(
    records: &[CorpusRecord],
    mut writer: W,
    flags: FormatFlags,
) -> Result<(), CorpusError> {
    if flags.header {
        writeln!(writer, "{HEADER_LINE}")?;
    }
    for record in records {
        writeln!(writer, "{}", record_line(record, flags))?;
    }
    Ok(())
}

pub fn write_corpus_path(
    records: &[CorpusRecord],
    path: impl AsRef<Path>,
    flags: FormatFlags,
) -> Result<(), CorpusError> {
    let file = std::fs::File::create(path)?;
    let mut writer = std::io::BufWriter::new(file);
    write_corpus(records, &mut writer, flags)?;
    Ok(writer.flush()?)
}

// ---------------------------------------------------------------------------
// Validation.

/// A data problem in one record. Violations are data, not errors; a
/// validation pass returns all of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    EmptyField { field: &'static str },
    PunctuationInSentence { character: char },
    /// The argument's positional head marker is inconsistent with the
    /// record's label.
    HeadMismatch { expected: Vec<HeadKind>, found: HeadKind },
    ResidualPronoun { surface: String },
    ResidualPoliteness { marker: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyField { field } => write!(f, "empty field: {field}"),
            Violation::PunctuationInSentence { character } => {
                write!(f, "punctuation in sentence: {character:?}")
            }
            Violation::HeadMismatch { expected, found } => {
                write!(f, "head mismatch: found {found:?}, label expects {expected:?}")
            }
            Violation::ResidualPronoun { surface } => {
                write!(f, "residual participant pronoun in argument: {surface:?}")
            }
            Violation::ResidualPoliteness { marker } => {
                write!(f, "residual politeness marker in argument: {marker:?}")
            }
        }
    }
}

/// Head kinds a label may legitimately render as. Alternative questions
/// allow a nominal head (wh-style alternatives); under head-final
/// rendering their marker is the same interrogative ending as yes/no.
pub fn allowed_heads(label: SpeechActType, position: HeadPosition) -> Vec<HeadKind> {
    match label {
        SpeechActType::YesNoQuestion => vec![HeadKind::If],
        SpeechActType::AlternativeQuestion => match position {
            HeadPosition::Initial => vec![HeadKind::WhetherOr, HeadKind::Nominal],
            HeadPosition::Final => vec![HeadKind::WhetherOr, HeadKind::Nominal, HeadKind::If],
        },
        SpeechActType::WhQuestion => vec![HeadKind::Nominal],
        SpeechActType::Prohibition => vec![HeadKind::NotTo],
        SpeechActType::Requirement | SpeechActType::StrongRequirement => vec![HeadKind::To],
    }
}

/// Check one record against the format contract.
pub fn validate(
    record: &CorpusRecord,
    rules: &RuleSet,
    head_position: HeadPosition,
) -> Vec<Violation> {
    let mut violations = Vec::new();
    if record.sentence.trim().is_empty() {
        violations.push(Violation::EmptyField { field: "sentence" });
    }
    if record.argument.trim().is_empty() {
        violations.push(Violation::EmptyField { field: "argument" });
    }
    if let Some(ch) = record
        .sentence
        .chars()
        .find(|c| PUNCTUATION_STRIP_SET.contains(c))
    {
        violations.push(Violation::PunctuationInSentence { character: ch });
    }
    if let Some(found) = crate::extractor::parse_head(&record.argument, head_position, rules) {
        let expected = allowed_heads(record.label, head_position);
        if !expected.contains(&found) {
            violations.push(Violation::HeadMismatch { expected, found });
        }
    }
    for word in record.argument.split_whitespace() {
        if rules.is_pronoun(word) {
            violations.push(Violation::ResidualPronoun { surface: word.to_string() });
        } else if rules.is_politeness(word) {
            violations.push(Violation::ResidualPoliteness { marker: word.to_string() });
        }
    }
    violations
}

// ---------------------------------------------------------------------------
// Statistics.

/// Per-type (and optionally per-topic) record counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct CorpusStats {
    /// Counts indexed by label code 0..=5.
    pub per_type: [u64; 6],
    /// Counts indexed by `Topic::ALL` order; present when any record
    /// carries a topic.
    pub per_topic: Option<[u64; 5]>,
    pub total: u64,
}

impl CorpusStats {
    pub fn count(&self, label: SpeechActType) -> u64 {
        self.per_type[label.code() as usize]
    }

    /// Componentwise sum; the per-topic side is present if either side has
    /// it.
    pub fn merge(&self, other: &CorpusStats) -> CorpusStats {
        let mut per_type = self.per_type;
        for (a, b) in per_type.iter_mut().zip(other.per_type) {
            *a += b;
        }
        let per_topic = match (self.per_topic, other.per_topic) {
            (None, None) => None,
            (a, b) => {
                let mut sum = a.unwrap_or_default();
                for (x, y) in sum.iter_mut().zip(b.unwrap_or_default()) {
                    *x += y;
                }
                Some(sum)
            }
        };
        CorpusStats { per_type, per_topic, total: self.total + other.total }
    }
}

pub fn stats(records: &[CorpusRecord]) -> CorpusStats {
    let mut per_type = [0u64; 6];
    let mut per_topic = [0u64; 5];
    let mut any_topic = false;
    for record in records {
        per_type[record.label.code() as usize] += 1;
        if let Some(topic) = record.topic {
            any_topic = true;
            let idx = Topic::ALL.iter().position(|t| *t == topic).expect("topic in ALL");
            per_topic[idx] += 1;
        }
    }
    CorpusStats {
        per_type,
        per_topic: any_topic.then_some(per_topic),
        total: records.len() as u64,
    }
}

// ---------------------------------------------------------------------------
// Splitting.

/// Exact train fraction. Parsed from "9/10" or a decimal like "0.9";
/// decimals convert exactly by digit expansion, so 0.9 is 9/10, not a
/// float approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Result<Fraction, CorpusError> {
        if den == 0 || num == 0 || num >= den {
            return Err(CorpusError::InvalidFraction(format!(
                "{num}/{den} is not inside (0, 1)"
            )));
        }
        Ok(Fraction { num, den })
    }

    pub fn parse(text: &str) -> Result<Fraction, CorpusError> {
        let bad = || CorpusError::InvalidFraction(text.to_string());
        if let Some((a, b)) = text.split_once('/') {
            let num: u64 = a.trim().parse().map_err(|_| bad())?;
            let den: u64 = b.trim().parse().map_err(|_| bad())?;
            return Fraction::new(num, den);
        }
        if let Some((int_part, frac_part)) = text.split_once('.') {
            if !frac_part.is_empty()
                && frac_part.len() <= 9
                && frac_part.chars().all(|c| c.is_ascii_digit())
                && (int_part.is_empty() || int_part == "0")
            {
                let num: u64 = frac_part.parse().map_err(|_| bad())?;
                let den = 10u64.pow(frac_part.len() as u32);
                return Fraction::new(num, den);
            }
        }
        Err(bad())
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Split parameters: exact train fraction plus the shuffle seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub train_fraction: Fraction,
    pub seed: u64,
}

/// Test-set size: round-half-up of (1 - train_fraction) * n, in exact
/// integer arithmetic.
pub fn test_size(n: usize, fraction: Fraction) -> usize {
    let n = n as u128;
    let num = (fraction.den - fraction.num) as u128;
    let den = fraction.den as u128;
    ((2 * num * n + den) / (2 * den)) as usize
}

/// Deterministic shuffle-split. The permutation is a Fisher-Yates shuffle
/// driven by SplitMix64 seeded with `spec.seed`; the first `test_size`
/// shuffled records form the test set.
pub fn split(
    records: &[CorpusRecord],
    spec: &SplitSpec,
) -> Result<(Vec<CorpusRecord>, Vec<CorpusRecord>), CorpusError> {
    if records.len() < 2 {
        return Err(CorpusError::TooSmall(records.len()));
    }
    let mut indices: Vec<usize> = (0..records.len()).collect();
    SplitMix64::new(spec.seed).shuffle(&mut indices);
    let n_test = test_size(records.len(), spec.train_fraction);
    let test: Vec<CorpusRecord> = indices[..n_test].iter().map(|&i| records[i].clone()).collect();
    let train: Vec<CorpusRecord> =
        indices[n_test..].iter().map(|&i| records[i].clone()).collect();
    Ok((train, test))
}

/// Clear the notation column, leaving every other field untouched.
pub fn strip_notation(records: &[CorpusRecord]) -> Vec<CorpusRecord> {
    records
        .iter()
        .map(|r| CorpusRecord { notation: None, ..r.clone() })
        .collect()
}

// ---------------------------------------------------------------------------
// Inter-annotator agreement.

/// Items-by-categories count matrix with a fixed number of raters per
/// item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementMatrix {
    counts: Vec<Vec<u64>>,
    raters: u64,
}

impl AgreementMatrix {
    pub fn new(counts: Vec<Vec<u64>>, raters: u64) -> Result<AgreementMatrix, CorpusError> {
        if raters < 2 {
            return Err(CorpusError::MalformedMatrix(format!(
                "need at least 2 raters, got {raters}"
            )));
        }
        if counts.is_empty() {
            return Err(CorpusError::MalformedMatrix("no items".to_string()));
        }
        let categories = counts[0].len();
        if categories == 0 {
            return Err(CorpusError::MalformedMatrix("no categories".to_string()));
        }
        for (i, row) in counts.iter().enumerate() {
            if row.len() != categories {
                return Err(CorpusError::MalformedMatrix(format!(
                    "row {i} has {} categories, expected {categories}",
                    row.len()
                )));
            }
            let sum: u64 = row.iter().sum();
            if sum != raters {
                return Err(CorpusError::MalformedMatrix(format!(
                    "row {i} sums to {sum}, expected {raters}"
                )));
            }
        }
        Ok(AgreementMatrix { counts, raters })
    }

    /// Infer the rater count from the first row's sum.
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Result<AgreementMatrix, CorpusError> {
        let raters = counts
            .first()
            .map(|row| row.iter().sum())
            .ok_or_else(|| CorpusError::MalformedMatrix("no items".to_string()))?;
        AgreementMatrix::new(counts, raters)
    }

    pub fn items(&self) -> usize {
        self.counts.len()
    }

    pub fn categories(&self) -> usize {
        self.counts[0].len()
    }

    pub fn raters(&self) -> u64 {
        self.raters
    }
}

/// Fleiss' kappa: (mean item agreement - chance agreement) / (1 - chance
/// agreement), with chance agreement the sum of squared category
/// proportions. Returns 1 for the degenerate all-one-category matrix.
pub fn fleiss_kappa(matrix: &AgreementMatrix) -> f64 {
    let n = matrix.raters as f64;
    let n_items = matrix.items() as f64;
    let total = n_items * n;

    let mut category_totals = vec![0u64; matrix.categories()];
    let mut p_bar = 0.0;
    for row in &matrix.counts {
        let mut agree = 0.0;
        for (j, &count) in row.iter().enumerate() {
            category_totals[j] += count;
            agree += (count * count) as f64;
        }
        p_bar += (agree - n) / (n * (n - 1.0));
    }
    p_bar /= n_items;

    let p_e: f64 = category_totals
        .iter()
        .map(|&t| {
            let p = t as f64 / total;
            p * p
        })
        .sum();

    if (1.0 - p_e).abs() < f64::EPSILON {
        // All ratings in one category: perfect agreement by construction.
        return 1.0;
    }
    (p_bar - p_e) / (1.0 - p_e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn rec(label: SpeechActType, sentence: &str, argument: &str) -> CorpusRecord {
        CorpusRecord::new(label, sentence, argument)
    }

    #[test]
    fn parses_three_column_lines() {
        let data = "4\ti suggest that you ask your wife\tto ask ones wife\n";
        let records = read_corpus(data.as_bytes(), FormatFlags::default()).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].label, SpeechActType::Requirement);
        assert_eq!(records[0].sentence, "i suggest that you ask your wife");
        assert_eq!(records[0].argument, "to ask ones wife");
        assert!(records[0].notation.is_none());
    }

    #[test]
    fn empty_file_yields_no_records() {
        let records = read_corpus("".as_bytes(), FormatFlags::default()).unwrap();
        assert!(records.is_empty());
    }

    #[test]
    fn two_columns_is_a_parse_error_with_line_number() {
        let data = "4\tonly a sentence\n";
        match read_corpus(data.as_bytes(), FormatFlags::default()) {
            Err(CorpusError::Parse { line: 1, .. }) => {}
            other => panic!("expected parse error, got {other:?}"),
        }
        let data = "0\ta\tb\n9\tc\td\n";
        match read_corpus(data.as_bytes(), FormatFlags::default()) {
            Err(CorpusError::InvalidLabel { line: 2, value }) => assert_eq!(value, "9"),
            other => panic!("expected invalid label, got {other:?}"),
        }
    }

    #[test]
    fn name_labels_and_header() {
        let data = "label\tsentence\targument\nprohibition\tdont shout\tnot to shout\n";
        let flags = FormatFlags { labels: LabelFormat::Name, header: true };
        let records = read_corpus(data.as_bytes(), flags).unwrap();
        assert_eq!(records[0].label, SpeechActType::Prohibition);
    }

    #[test]
    fn round_trip_is_byte_stable() {
        let records = vec![
            rec(SpeechActType::Requirement, "ask your wife", "to ask ones wife"),
            rec(SpeechActType::Prohibition, "dont shout", "not to shout")
                .with_notation(ReferentNotation::Unknown),
            rec(SpeechActType::WhQuestion, "몇 도 기준으로 열대야라고 해", "열대야 기준 온도")
                .with_topic(Topic::Weather),
        ];
        for flags in [
            FormatFlags::default(),
            FormatFlags { labels: LabelFormat::Name, header: false },
            FormatFlags { labels: LabelFormat::Integer, header: true },
        ] {
            let mut first = Vec::new();
            write_corpus(&records, &mut first, flags).unwrap();
            let reread = read_corpus(first.as_slice(), flags).unwrap();
            assert_eq!(reread, records);
            let mut second = Vec::new();
            write_corpus(&reread, &mut second, flags).unwrap();
            assert_eq!(first, second);
        }
    }

    fn random_words(rng: &mut SplitMix64, max: u64) -> String {
        let vocab = ["a", "b", "xyz", "세일", "가서", "tomorrow", "w-1"];
        let len = 1 + rng.next_below(max) as usize;
        (0..len)
            .map(|_| vocab[rng.next_below(vocab.len() as u64) as usize])
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn random_record(rng: &mut SplitMix64) -> CorpusRecord {
        let label = SpeechActType::from_code(rng.next_below(6) as u8).unwrap();
        let sentence = random_words(rng, 5);
        let argument = random_words(rng, 4);
        let mut record = rec(label, &sentence, &argument);
        if rng.next_below(2) == 1 {
            let n = ReferentNotation::ALL[rng.next_below(5) as usize];
            record.notation = Some(n);
        }
        if rng.next_below(3) == 1 {
            record.topic = Some(Topic::ALL[rng.next_below(5) as usize]);
        }
        record
    }

    #[test]
    fn fuzzed_round_trip_byte_stability() {
        let mut rng = SplitMix64::new(2024);
        for case in 0..200 {
            let n = rng.next_below(20) as usize;
            let records: Vec<CorpusRecord> = (0..n).map(|_| random_record(&mut rng)).collect();
            let flags = if rng.next_below(2) == 0 {
                FormatFlags::default()
            } else {
                FormatFlags { labels: LabelFormat::Name, header: false }
            };
            let mut bytes = Vec::new();
            write_corpus(&records, &mut bytes, flags).unwrap();
            let reread = read_corpus(bytes.as_slice(), flags).unwrap();
            assert_eq!(reread, records, "case {case}");
            let mut again = Vec::new();
            write_corpus(&reread, &mut again, flags).unwrap();
            assert_eq!(bytes, again, "case {case}");
        }
    }

    #[test]
    fn validation_flags_the_documented_problems() {
        let rules = RuleSet::builtin_en_demo();
        let pos = HeadPosition::Initial;

        // Well-formed record: no violations.
        let good = rec(
            SpeechActType::Prohibition,
            "please dont tell my daddy",
            "not to tell the speakers daddy",
        );
        assert!(validate(&good, &rules, pos).is_empty());

        // Head marker inconsistent with the label.
        let mismatch = rec(
            SpeechActType::Requirement,
            "dont pick me up",
            "not to pick the speaker up",
        );
        let violations = validate(&mismatch, &rules, pos);
        assert!(matches!(
            violations.as_slice(),
            [Violation::HeadMismatch { found: HeadKind::NotTo, .. }]
        ));

        // Punctuation in the sentence.
        let punct = rec(SpeechActType::YesNoQuestion, "did i win?", "if the speaker won");
        assert!(validate(&punct, &rules, pos)
            .iter()
            .any(|v| matches!(v, Violation::PunctuationInSentence { character: '?' })));

        // Empty fields.
        let empty = rec(SpeechActType::Requirement, "", "");
        let violations = validate(&empty, &rules, pos);
        assert!(violations.contains(&Violation::EmptyField { field: "sentence" }));
        assert!(violations.contains(&Violation::EmptyField { field: "argument" }));

        // Residual pronoun and politeness marker in the argument.
        let residual = rec(SpeechActType::Requirement, "ask your wife", "to please ask your wife");
        let violations = validate(&residual, &rules, pos);
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::ResidualPronoun { surface } if surface == "your")));
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::ResidualPoliteness { marker } if marker == "please")));
    }

    #[test]
    fn stats_counts_types_and_topics() {
        let records = vec![
            rec(SpeechActType::Requirement, "a", "to a"),
            rec(SpeechActType::Requirement, "b", "to b"),
            rec(SpeechActType::WhQuestion, "c", "the c").with_topic(Topic::Weather),
        ];
        let s = stats(&records);
        assert_eq!(s.count(SpeechActType::Requirement), 2);
        assert_eq!(s.count(SpeechActType::WhQuestion), 1);
        assert_eq!(s.total, 3);
        assert_eq!(s.per_topic.unwrap()[3], 1); // weather

        assert_eq!(stats(&[]), CorpusStats::default());
    }

    #[test]
    fn stats_merge_is_additive() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..100 {
            let a: Vec<CorpusRecord> =
                (0..rng.next_below(15)).map(|_| random_record(&mut rng)).collect();
            let b: Vec<CorpusRecord> =
                (0..rng.next_below(15)).map(|_| random_record(&mut rng)).collect();
            let combined: Vec<CorpusRecord> = a.iter().chain(b.iter()).cloned().collect();
            assert_eq!(stats(&combined), stats(&a).merge(&stats(&b)));
        }
    }

    #[test]
    fn fraction_parsing_is_exact() {
        assert_eq!(Fraction::parse("9/10").unwrap(), Fraction { num: 9, den: 10 });
        assert_eq!(Fraction::parse("0.9").unwrap(), Fraction { num: 9, den: 10 });
        assert_eq!(Fraction::parse(".7").unwrap(), Fraction { num: 7, den: 10 });
        assert_eq!(Fraction::parse("0.85").unwrap(), Fraction { num: 85, den: 100 });
        assert!(Fraction::parse("1.5").is_err());
        assert!(Fraction::parse("0").is_err());
        assert!(Fraction::parse("10/9").is_err());
    }

    #[test]
    fn split_sizes_follow_round_half_up() {
        assert_eq!(test_size(50837, Fraction { num: 9, den: 10 }), 5084);
        assert_eq!(test_size(10, Fraction { num: 7, den: 10 }), 3);
        assert_eq!(test_size(5, Fraction { num: 1, den: 2 }), 3); // 2.5 rounds up
    }

    #[test]
    fn split_is_a_deterministic_partition() {
        let records: Vec<CorpusRecord> = (0..10)
            .map(|i| rec(SpeechActType::Requirement, &format!("s {i}"), &format!("to s {i}")))
            .collect();
        let spec = SplitSpec { train_fraction: Fraction { num: 7, den: 10 }, seed: 99 };
        let (train, test) = split(&records, &spec).unwrap();
        assert_eq!(test.len(), 3);
        assert_eq!(train.len(), 7);
        let (train2, test2) = split(&records, &spec).unwrap();
        assert_eq!(train, train2);
        assert_eq!(test, test2);

        let single = vec![records[0].clone()];
        assert!(matches!(split(&single, &spec), Err(CorpusError::TooSmall(1))));
    }

    #[test]
    fn split_partition_property_fuzzed() {
        let mut rng = SplitMix64::new(31337);
        for case in 0..1000 {
            let n = 2 + rng.next_below(60) as usize;
            let records: Vec<CorpusRecord> = (0..n)
                .map(|i| rec(SpeechActType::Requirement, &format!("s{i}"), &format!("a{i}")))
                .collect();
            let den = 2 + rng.next_below(20);
            let num = 1 + rng.next_below(den - 1);
            let fraction = Fraction::new(num, den).unwrap();
            let spec = SplitSpec { train_fraction: fraction, seed: rng.next_u64() };
            let (train, test) = split(&records, &spec).unwrap();
            assert_eq!(test.len(), test_size(n, fraction), "case {case}");
            assert_eq!(train.len() + test.len(), n);
            let mut seen: Vec<&str> = train
                .iter()
                .chain(test.iter())
                .map(|r| r.sentence.as_str())
                .collect();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), n, "case {case}: not a partition");
        }
    }

    #[test]
    fn strip_notation_only_clears_notation() {
        let records = vec![
            rec(SpeechActType::Prohibition, "dont shout", "not to shout")
                .with_notation(ReferentNotation::AddresseeOnly)
                .with_topic(Topic::Free),
            rec(SpeechActType::Requirement, "ask", "to ask"),
            rec(SpeechActType::WhQuestion, "w", "the w").with_notation(ReferentNotation::Both),
        ];
        let stripped = strip_notation(&records);
        for (before, after) in records.iter().zip(&stripped) {
            assert!(after.notation.is_none());
            assert_eq!(after.label, before.label);
            assert_eq!(after.sentence, before.sentence);
            assert_eq!(after.argument, before.argument);
            assert_eq!(after.topic, before.topic);
        }
    }

    #[test]
    fn kappa_perfect_agreement_is_one() {
        let matrix = AgreementMatrix::new(vec![vec![3, 0], vec![0, 3], vec![3, 0]], 3).unwrap();
        assert_eq!(fleiss_kappa(&matrix), 1.0);
        // Degenerate single-category case.
        let matrix = AgreementMatrix::new(vec![vec![3, 0], vec![3, 0]], 3).unwrap();
        assert_eq!(fleiss_kappa(&matrix), 1.0);
    }

    #[test]
    fn kappa_two_item_hand_expansion() {
        // Items (A,A) and (A,B) with two raters: mean item agreement 1/2,
        // chance agreement (3/4)^2 + (1/4)^2 = 5/8, kappa = -1/3.
        let matrix = AgreementMatrix::new(vec![vec![2, 0], vec![1, 1]], 2).unwrap();
        let expected = (0.5 - 0.625) / (1.0 - 0.625);
        assert!((fleiss_kappa(&matrix) - expected).abs() < 1e-15);
        assert!((fleiss_kappa(&matrix) + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn kappa_chance_level_is_zero() {
        // Half the items split the raters, half agree, balanced marginals:
        // mean agreement 1/2 equals chance agreement 1/2.
        let matrix =
            AgreementMatrix::new(vec![vec![2, 0], vec![0, 2], vec![1, 1], vec![1, 1]], 2).unwrap();
        assert_eq!(fleiss_kappa(&matrix), 0.0);
    }

    #[test]
    fn malformed_matrices_are_rejected() {
        assert!(matches!(
            AgreementMatrix::new(vec![vec![2, 1]], 2),
            Err(CorpusError::MalformedMatrix(_))
        ));
        assert!(matches!(
            AgreementMatrix::new(vec![], 2),
            Err(CorpusError::MalformedMatrix(_))
        ));
        assert!(matches!(
            AgreementMatrix::new(vec![vec![1, 1], vec![1, 1, 0]], 2),
            Err(CorpusError::MalformedMatrix(_))
        ));
        assert!(matches!(
            AgreementMatrix::new(vec![vec![1]], 1),
            Err(CorpusError::MalformedMatrix(_))
        ));
    }

    #[test]
    fn kappa_stays_in_range_fuzzed() {
        let mut rng = SplitMix64::new(555);
        for case in 0..500 {
            let raters = 2 + rng.next_below(5);
            let categories = 2 + rng.next_below(4) as usize;
            let items = 1 + rng.next_below(12) as usize;
            let counts: Vec<Vec<u64>> = (0..items)
                .map(|_| {
                    let mut row = vec![0u64; categories];
                    for _ in 0..raters {
                        row[rng.next_below(categories as u64) as usize] += 1;
                    }
                    row
                })
                .collect();
            let matrix = AgreementMatrix::new(counts, raters).unwrap();
            let kappa = fleiss_kappa(&matrix);
            assert!(
                (-1.0 - 1e-12..=1.0 + 1e-12).contains(&kappa),
                "case {case}: kappa {kappa} out of range"
            );
        }
    }
}
