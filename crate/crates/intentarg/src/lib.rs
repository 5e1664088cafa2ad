//! Toolkit for turning non-canonical directive utterances (questions and
//! commands whose surface form hides their intent) into structured
//! natural-language intent arguments.
//!
//! The pipeline is rule-driven and fully deterministic:
//!
//! 1. [`textnorm`] normalizes raw text and tokenizes it (whitespace by
//!    default, external morphological analyzers via an adapter registry).
//! 2. [`classifier`] assigns one of six directive subtypes (or
//!    non-directive) from cue lexicons in a [`rules::RuleSet`].
//! 3. [`extractor`] rewrites the utterance into an [`model::IntentArgument`]:
//!    a head marker (if / whether-or / nominal / to / not-to) plus content
//!    tokens with participant pronouns replaced by referent phrases.
//! 4. [`corpus`] reads, writes, validates, splits, and summarizes the
//!    label/sentence/argument corpus format, and computes Fleiss' kappa.
//! 5. [`augment`] plans class-imbalance augmentation and generates
//!    mechanical surface variants from arguments.
//! 6. [`eval`] scores predictions against gold arguments with ROUGE-1 and
//!    a greedy embedding-matching score, averaged into a single total.

pub mod augment;
pub mod classifier;
pub mod corpus;
pub mod eval;
pub mod extractor;
pub mod model;
pub mod rng;
pub mod rules;
pub mod textnorm;

pub use classifier::{classify, split_clauses, ClassificationResult, UtteranceLabel};
pub use extractor::{extract, render, ExtractionConfig};
pub use model::{CorpusRecord, IntentArgument, ReferentNotation, SpeechActType, Topic};
pub use rules::RuleSet;
