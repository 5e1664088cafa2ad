//! Evaluation harness: ROUGE-1, a greedy embedding-matching semantic
//! score, and their mean as the combined "total".
//!
//! The semantic score keeps the greedy max-similarity aggregation of
//! embedding-based scorers (per-candidate-token max for precision,
//! per-reference-token max for recall, harmonic mean for F1) but runs it
//! over a static embedding table instead of a contextual language model,
//! so the harness has no model dependency. Swapping in contextual vectors
//! later only changes where the table comes from. No baseline rescaling
//! and no importance weighting: raw cosines, negatives clamped to zero.
//! Scores are self-consistent within this harness, not comparable to
//! numbers produced with a pretrained contextual scorer.

use crate::model::CorpusRecord;
use crate::textnorm::{
    normalize, tokenize_with, AnalyzerRegistry, AnalyzerSpec, TokenizeError,
};
use serde::Serialize;
use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("malformed embeddings at line {line}: {reason}")]
    MalformedEmbeddings { line: usize, reason: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("prediction/gold length mismatch: {predictions} predictions, {gold} gold records")]
    AlignmentError { predictions: usize, gold: usize },
    #[error("baseline needs a non-empty training set")]
    NoTrainingData,
    #[error(transparent)]
    Tokenize(#[from] TokenizeError),
}

// ---------------------------------------------------------------------------
// Embeddings.

/// Static token-to-vector table. Unknown tokens score as zero vectors.
#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dimension: usize,
    vectors: HashMap<String, Vec<f32>>,
}

impl EmbeddingTable {
    pub fn new(dimension: usize) -> EmbeddingTable {
        EmbeddingTable { dimension, vectors: HashMap::new() }
    }

    pub fn insert(&mut self, token: impl Into<String>, vector: Vec<f32>) -> Result<(), EvalError> {
        if vector.len() != self.dimension {
            return Err(EvalError::MalformedEmbeddings {
                line: 0,
                reason: format!(
                    "vector of dimension {} in a table of dimension {}",
                    vector.len(),
                    self.dimension
                ),
            });
        }
        self.vectors.insert(token.into(), vector);
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<&[f32]> {
        self.vectors.get(token).map(Vec::as_slice)
    }

    /// Load the text format: one token per line followed by its
    /// components, optionally preceded by a "count dimension" header
    /// (auto-detected). The first vector line fixes the dimension.
    pub fn read_text<R: BufRead>(reader: R) -> Result<EmbeddingTable, EvalError> {
        let mut table: Option<EmbeddingTable> = None;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if idx == 0 && fields.len() == 2 {
                if let (Ok(_count), Ok(dim)) =
                    (fields[0].parse::<usize>(), fields[1].parse::<usize>())
                {
                    table = Some(EmbeddingTable::new(dim));
                    continue;
                }
            }
            if fields.len() < 2 {
                return Err(EvalError::MalformedEmbeddings {
                    line: line_no,
                    reason: "expected a token followed by vector components".to_string(),
                });
            }
            let token = fields[0];
            let mut vector = Vec::with_capacity(fields.len() - 1);
            for component in &fields[1..] {
                let value: f32 = component.parse().map_err(|_| EvalError::MalformedEmbeddings {
                    line: line_no,
                    reason: format!("bad component {component:?}"),
                })?;
                vector.push(value);
            }
            let table = table.get_or_insert_with(|| EmbeddingTable::new(vector.len()));
            if vector.len() != table.dimension {
                return Err(EvalError::MalformedEmbeddings {
                    line: line_no,
                    reason: format!(
                        "vector of dimension {}, expected {}",
                        vector.len(),
                        table.dimension
                    ),
                });
            }
            table.vectors.insert(token.to_string(), vector);
        }
        table.ok_or(EvalError::MalformedEmbeddings {
            line: 0,
            reason: "empty embeddings file".to_string(),
        })
    }

    pub fn read_text_path(path: impl AsRef<Path>) -> Result<EmbeddingTable, EvalError> {
        let file = std::fs::File::open(path)?;
        EmbeddingTable::read_text(std::io::BufReader::new(file))
    }
}

// ---------------------------------------------------------------------------
// Metrics.

/// Precision / recall / F1 triple in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    const ZERO: Prf = Prf { precision: 0.0, recall: 0.0, f1: 0.0 };
    const ONE: Prf = Prf { precision: 1.0, recall: 1.0, f1: 1.0 };

    fn from_pr(precision: f64, recall: f64) -> Prf {
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Prf { precision, recall, f1 }
    }
}

/// ROUGE-1: unigram overlap with clipped counts. Two empty sequences
/// score 1 by convention; one empty side scores 0.
pub fn rouge1<S: AsRef<str>>(candidate: &[S], reference: &[S]) -> Prf {
    if candidate.is_empty() && reference.is_empty() {
        return Prf::ONE;
    }
    if candidate.is_empty() || reference.is_empty() {
        return Prf::ZERO;
    }
    let mut ref_counts: HashMap<&str, u64> = HashMap::new();
    for token in reference {
        *ref_counts.entry(token.as_ref()).or_insert(0) += 1;
    }
    let mut cand_counts: HashMap<&str, u64> = HashMap::new();
    for token in candidate {
        *cand_counts.entry(token.as_ref()).or_insert(0) += 1;
    }
    let overlap: u64 = cand_counts
        .iter()
        .map(|(token, &count)| count.min(*ref_counts.get(token).unwrap_or(&0)))
        .sum();
    let precision = overlap as f64 / candidate.len() as f64;
    let recall = overlap as f64 / reference.len() as f64;
    Prf::from_pr(precision, recall)
}

fn cosine(a: &[f32], b: &[f32]) -> f64 {
    let mut dot = 0.0f64;
    let mut norm_a = 0.0f64;
    let mut norm_b = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        dot += *x as f64 * *y as f64;
        norm_a += *x as f64 * *x as f64;
        norm_b += *y as f64 * *y as f64;
    }
    if norm_a == 0.0 || norm_b == 0.0 {
        return 0.0;
    }
    // Clamp into [0, 1]: negative similarities carry no signal here and
    // rounding can push self-similarity a hair past 1.
    (dot / (norm_a.sqrt() * norm_b.sqrt())).clamp(0.0, 1.0)
}

/// Greedy embedding-matching score: every candidate token is matched to
/// its most similar reference token (precision side) and vice versa
/// (recall side). Unknown tokens have zero vectors and similarity 0.
pub fn semantic_score<S: AsRef<str>>(
    candidate: &[S],
    reference: &[S],
    embeddings: &EmbeddingTable,
) -> Prf {
    if candidate.is_empty() && reference.is_empty() {
        return Prf::ONE;
    }
    if candidate.is_empty() || reference.is_empty() {
        return Prf::ZERO;
    }
    let cand_vecs: Vec<Option<&[f32]>> =
        candidate.iter().map(|t| embeddings.get(t.as_ref())).collect();
    let ref_vecs: Vec<Option<&[f32]>> =
        reference.iter().map(|t| embeddings.get(t.as_ref())).collect();

    let best_against = |from: &[Option<&[f32]>], against: &[Option<&[f32]>]| -> f64 {
        let mut sum = 0.0;
        for vec in from {
            let mut best: f64 = 0.0;
            if let Some(v) = vec {
                for other in against.iter().flatten() {
                    best = best.max(cosine(v, other));
                }
            }
            sum += best;
        }
        sum / from.len() as f64
    };

    let precision = best_against(&cand_vecs, &ref_vecs);
    let recall = best_against(&ref_vecs, &cand_vecs);
    Prf::from_pr(precision, recall)
}

/// Both metrics for one candidate/reference pair, plus their mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairScore {
    pub rouge1_p: f64,
    pub rouge1_r: f64,
    pub rouge1_f: f64,
    pub sem_p: f64,
    pub sem_r: f64,
    pub sem_f: f64,
    /// Mean of the two F1 values.
    pub total: f64,
}

impl PairScore {
    fn from_parts(rouge: Prf, sem: Prf) -> PairScore {
        PairScore {
            rouge1_p: rouge.precision,
            rouge1_r: rouge.recall,
            rouge1_f: rouge.f1,
            sem_p: sem.precision,
            sem_r: sem.recall,
            sem_f: sem.f1,
            total: (rouge.f1 + sem.f1) / 2.0,
        }
    }
}

/// Normalize and tokenize both sides identically, then score.
pub fn score_pair(
    candidate: &str,
    reference: &str,
    embeddings: &EmbeddingTable,
    analyzer: &AnalyzerSpec,
    registry: &AnalyzerRegistry,
) -> Result<PairScore, EvalError> {
    let cand_tokens: Vec<String> = tokenize_with(&normalize(candidate), analyzer, registry)?
        .into_iter()
        .map(|t| t.surface)
        .collect();
    let ref_tokens: Vec<String> = tokenize_with(&normalize(reference), analyzer, registry)?
        .into_iter()
        .map(|t| t.surface)
        .collect();
    let rouge = rouge1(&cand_tokens, &ref_tokens);
    let sem = semantic_score(&cand_tokens, &ref_tokens, embeddings);
    Ok(PairScore::from_parts(rouge, sem))
}

/// Corpus-level report: per-pair scores plus arithmetic means of every
/// field. Means are absent for an empty corpus rather than reported as 0.
#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub count: usize,
    pub means: Option<PairScore>,
    pub pairs: Vec<PairScore>,
}

/// Score predictions against gold arguments, aligned by index.
pub fn score_corpus(
    predictions: &[String],
    gold: &[CorpusRecord],
    embeddings: &EmbeddingTable,
    analyzer: &AnalyzerSpec,
    registry: &AnalyzerRegistry,
) -> Result<EvalReport, EvalError> {
    if predictions.len() != gold.len() {
        return Err(EvalError::AlignmentError {
            predictions: predictions.len(),
            gold: gold.len(),
        });
    }
    let pairs: Vec<PairScore> = predictions
        .iter()
        .zip(gold)
        .map(|(pred, record)| score_pair(pred, &record.argument, embeddings, analyzer, registry))
        .collect::<Result<_, _>>()?;
    let means = if pairs.is_empty() {
        None
    } else {
        let n = pairs.len() as f64;
        let mut sum = [0.0f64; 7];
        for p in &pairs {
            for (slot, value) in sum.iter_mut().zip([
                p.rouge1_p, p.rouge1_r, p.rouge1_f, p.sem_p, p.sem_r, p.sem_f, p.total,
            ]) {
                *slot += value;
            }
        }
        Some(PairScore {
            rouge1_p: sum[0] / n,
            rouge1_r: sum[1] / n,
            rouge1_f: sum[2] / n,
            sem_p: sum[3] / n,
            sem_r: sum[4] / n,
            sem_f: sum[5] / n,
            total: sum[6] / n,
        })
    };
    Ok(EvalReport { count: pairs.len(), means, pairs })
}

/// Retrieval baseline: return the argument of the training record whose
/// sentence has the highest ROUGE-1 F1 with the query sentence. Ties go
/// to the lowest record index, so a query with no overlap anywhere
/// returns record 0's argument.
pub fn nn_baseline_predict(
    train: &[CorpusRecord],
    sentence: &str,
    analyzer: &AnalyzerSpec,
    registry: &AnalyzerRegistry,
) -> Result<String, EvalError> {
    if train.is_empty() {
        return Err(EvalError::NoTrainingData);
    }
    let query: Vec<String> = tokenize_with(&normalize(sentence), analyzer, registry)?
        .into_iter()
        .map(|t| t.surface)
        .collect();
    let mut best_index = 0usize;
    let mut best_score = f64::NEG_INFINITY;
    for (i, record) in train.iter().enumerate() {
        let sent: Vec<String> = tokenize_with(&normalize(&record.sentence), analyzer, registry)?
            .into_iter()
            .map(|t| t.surface)
            .collect();
        let score = rouge1(&query, &sent).f1;
        if score > best_score {
            best_score = score;
            best_index = i;
        }
    }
    Ok(train[best_index].argument.clone())
}
