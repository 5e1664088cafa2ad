//! Language-specific cue lexicons driving classification, extraction, and
//! variant generation.
//!
//! A [`RuleSet`] is plain data loaded from a JSON file; nothing in the
//! classifier or extractor hard-codes a lexicon. Two rule files ship with
//! the crate: `rules.en-demo` (English demonstration rules) and `rules.ko`
//! (Korean rules using suffix cues, since Korean marks sentence type on
//! clause-final endings rather than fronted auxiliaries).

use crate::model::Referent;
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RuleSetError {
    #[error("failed to read rule file: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse rule file: {0}")]
    Parse(#[from] serde_json::Error),
}

/// How a wh-cue's remainder is assembled into the nominal argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum WhTemplate {
    /// Nominal head plus the remaining tokens unchanged.
    #[default]
    Plain,
    /// Counting cue: the token after the cue is the counted noun and the
    /// rest becomes a relative clause ("how many points you got" ->
    /// "the number of" + "points" + "that" + "you got").
    Count,
}

/// One wh-particle (or wh-phrase) and the nominal head it maps to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhRule {
    /// Space-separated cue phrase, e.g. "how many" or "어떤".
    pub cue: String,
    /// Nominal head phrase, e.g. "the number of".
    pub nominal: String,
    #[serde(default)]
    pub template: WhTemplate,
    /// Match tokens that merely start with the cue (for agglutinated
    /// particles like "어떤게").
    #[serde(default)]
    pub prefix: bool,
}

/// Inquiry phrases with no surface wh-particle that still open a wh-style
/// question ("i want to know about treadstone").
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NominalPattern {
    /// Space-separated pattern matched at the front of the utterance.
    pub pattern: String,
    /// Nominal head it maps to, e.g. "the information".
    pub nominal: String,
    /// Tokens re-emitted in front of the remainder (usually the trailing
    /// preposition of the pattern), space-separated; may be empty.
    #[serde(default)]
    pub glue: String,
}

/// Alternative-question handling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct AltRules {
    /// The disjunction token, e.g. "or".
    #[serde(default)]
    pub cue: String,
    /// Single-token tails dropped after a trailing cue ("or both").
    #[serde(default)]
    pub drop_tails: Vec<String>,
    /// Locative prepositions that turn a wh-style alternative into a
    /// place nominal ("which is hotter in hawaii or guam").
    #[serde(default)]
    pub locative_preps: Vec<String>,
    #[serde(default)]
    pub locative_nominal: String,
    /// Replacement pair for wh-style alternatives: "in A or B" becomes
    /// "between A and B".
    #[serde(default)]
    pub between_word: String,
    #[serde(default)]
    pub and_word: String,
}

/// First/second-person pronoun replacement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PronounRule {
    pub surface: String,
    /// Space-separated replacement phrase, e.g. "the speaker".
    pub replacement: String,
    pub referent: Referent,
}

/// Content-phrase rewrite applied before coreference replacement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rewrite {
    pub from: String,
    pub to: String,
}

/// Head markers rendered clause-finally for head-final languages.
/// Markers are appended directly to the (ending-stripped) final content
/// token, so "대기하" plus "기" fuses into "대기하기".
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinalMarkers {
    pub to: String,
    pub not_to: String,
    pub question: String,
}

/// Surface frames the variant generator may wrap around an argument,
/// keyed by head kind. Frames listed here must be cues the classifier
/// recognizes, so generated variants round-trip.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct VariantFrames {
    #[serde(rename = "if", default)]
    pub if_: Vec<String>,
    #[serde(default)]
    pub whether: Vec<String>,
    #[serde(default)]
    pub nominal: Vec<String>,
    #[serde(default)]
    pub to: Vec<String>,
    #[serde(default)]
    pub not_to: Vec<String>,
}

/// Synonym alternatives for cue/frame words, used by the variant
/// generator's word-replacement operator. Content words are deliberately
/// absent: replacing them would change the argument being expressed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynonymRule {
    pub token: String,
    pub alternatives: Vec<String>,
}

/// The full cue inventory for one language.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RuleSet {
    pub language: String,

    /// Discourse fillers and emphasis words skipped by cue matching and
    /// dropped from extracted content ("yeah", "just").
    #[serde(default)]
    pub fillers: Vec<String>,
    #[serde(default)]
    pub politeness_markers: Vec<String>,

    /// Dummy do-support auxiliaries, dropped in question extraction.
    #[serde(default)]
    pub aux_drop: Vec<String>,
    /// Meaningful auxiliaries/modals, moved after the subject instead.
    #[serde(default)]
    pub aux_reorder: Vec<String>,

    /// Subjects that can open an embedded question ("i", "you").
    #[serde(default)]
    pub embedded_subjects: Vec<String>,
    /// Embedded-question predicates ("know", "wonder").
    #[serde(default)]
    pub question_predicates: Vec<String>,
    /// Clause-initial subjects that signal a declarative question when no
    /// other cue fires ("you hungry or thirsty or both").
    #[serde(default)]
    pub declq_subjects: Vec<String>,

    #[serde(default)]
    pub nominal_question_patterns: Vec<NominalPattern>,
    #[serde(default)]
    pub wh_rules: Vec<WhRule>,
    /// Nominal used when a wh-style argument has no specific mapping.
    #[serde(default)]
    pub wh_fallback_nominal: String,
    /// Relative marker inserted by counting wh-templates ("the number of
    /// points THAT you got"); empty disables insertion.
    #[serde(default)]
    pub relativizer: String,
    /// Search for wh cues anywhere in the utterance (wh-in-situ
    /// languages) instead of only at the front.
    #[serde(default)]
    pub wh_in_situ: bool,
    /// Tokens dropped from wh-question content (light support verbs such
    /// as Korean "해").
    #[serde(default)]
    pub wh_drop_tokens: Vec<String>,

    #[serde(default)]
    pub alternative: AltRules,

    /// Requirement frames matched at clause start, longest first
    /// ("i suggest that you", "why dont you", "can you").
    #[serde(default)]
    pub req_frames: Vec<String>,
    /// Prohibition frames matched at clause start ("dont", "never").
    #[serde(default)]
    pub ph_frames: Vec<String>,
    /// Bare verbs that open an imperative clause.
    #[serde(default)]
    pub imperative_verbs: Vec<String>,

    /// Suffix cues for head-final languages.
    #[serde(default)]
    pub question_enders: Vec<String>,
    #[serde(default)]
    pub imperative_enders: Vec<String>,
    /// Clause-final prohibitive connectives that close a PH clause with a
    /// following clause expected ("말고").
    #[serde(default)]
    pub ph_trailing: Vec<String>,
    /// Sentence-final prohibitive endings ("지마").
    #[serde(default)]
    pub ph_enders: Vec<String>,
    /// Postposition suffixes stripped from nominalized wh-arguments.
    #[serde(default)]
    pub particle_strip: Vec<String>,

    #[serde(default)]
    pub pronouns: Vec<PronounRule>,
    #[serde(default)]
    pub deictics: Vec<String>,
    #[serde(default)]
    pub rewrites: Vec<Rewrite>,
    #[serde(default)]
    pub final_markers: Option<FinalMarkers>,

    #[serde(default)]
    pub variant_frames: VariantFrames,
    #[serde(default)]
    pub synonyms: Vec<SynonymRule>,
}

impl RuleSet {
    pub fn from_json(json: &str) -> Result<RuleSet, RuleSetError> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<RuleSet, RuleSetError> {
        let text = std::fs::read_to_string(path)?;
        RuleSet::from_json(&text)
    }

    /// English demonstration rules shipped with the crate.
    pub fn builtin_en_demo() -> RuleSet {
        RuleSet::from_json(include_str!("../data/rules.en-demo"))
            .expect("bundled en-demo rules parse")
    }

    /// Korean rules shipped with the crate.
    pub fn builtin_ko() -> RuleSet {
        RuleSet::from_json(include_str!("../data/rules.ko")).expect("bundled ko rules parse")
    }

    /// Rule set with every lexicon empty; classifies everything as
    /// non-directive.
    pub fn empty() -> RuleSet {
        RuleSet::default()
    }

    pub fn is_filler(&self, token: &str) -> bool {
        self.fillers.iter().any(|f| f == token)
    }

    pub fn is_politeness(&self, token: &str) -> bool {
        self.politeness_markers.iter().any(|m| m == token)
    }

    pub fn is_deictic(&self, token: &str) -> bool {
        self.deictics.iter().any(|d| d == token)
    }

    pub fn is_imperative_verb(&self, token: &str) -> bool {
        self.imperative_verbs.iter().any(|v| v == token)
    }

    pub fn pronoun(&self, token: &str) -> Option<&PronounRule> {
        self.pronouns.iter().find(|p| p.surface == token)
    }

    pub fn is_pronoun(&self, token: &str) -> bool {
        self.pronoun(token).is_some()
    }

    /// Longest suffix from `suffixes` that `token` ends with.
    pub fn match_suffix<'a>(token: &str, suffixes: &'a [String]) -> Option<&'a str> {
        suffixes
            .iter()
            .filter(|s| !s.is_empty() && token.ends_with(s.as_str()))
            .max_by_key(|s| s.len())
            .map(|s| s.as_str())
    }

    /// Every cue string in the rule set, for the trace-coverage check.
    pub fn cue_inventory(&self) -> std::collections::BTreeSet<String> {
        let mut cues = std::collections::BTreeSet::new();
        let mut add_all = |items: &[String]| {
            for item in items {
                cues.insert(item.clone());
            }
        };
        add_all(&self.fillers);
        add_all(&self.politeness_markers);
        add_all(&self.aux_drop);
        add_all(&self.aux_reorder);
        add_all(&self.embedded_subjects);
        add_all(&self.question_predicates);
        add_all(&self.declq_subjects);
        add_all(&self.req_frames);
        add_all(&self.ph_frames);
        add_all(&self.imperative_verbs);
        add_all(&self.question_enders);
        add_all(&self.imperative_enders);
        add_all(&self.ph_trailing);
        add_all(&self.ph_enders);
        add_all(&self.wh_drop_tokens);
        for rule in &self.wh_rules {
            cues.insert(rule.cue.clone());
        }
        for pat in &self.nominal_question_patterns {
            cues.insert(pat.pattern.clone());
        }
        if !self.alternative.cue.is_empty() {
            cues.insert(self.alternative.cue.clone());
        }
        cues
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_rule_files_parse() {
        let en = RuleSet::builtin_en_demo();
        assert_eq!(en.language, "en");
        assert!(en.pronoun("me").is_some());
        assert!(en.pronoun("they").is_none());
        let ko = RuleSet::builtin_ko();
        assert_eq!(ko.language, "ko");
        assert!(ko.wh_in_situ);
        assert!(ko.final_markers.is_some());
    }

    #[test]
    fn builtin_cues_are_normalized() {
        for rules in [RuleSet::builtin_en_demo(), RuleSet::builtin_ko()] {
            for cue in rules.cue_inventory() {
                assert_eq!(cue, crate::textnorm::normalize(&cue), "cue not normalized: {cue:?}");
            }
        }
    }

    #[test]
    fn pronoun_map_covers_first_and_second_person() {
        let en = RuleSet::builtin_en_demo();
        for surface in ["i", "me", "my", "we", "you", "your"] {
            assert!(en.pronoun(surface).is_some(), "missing pronoun {surface}");
        }
    }

    #[test]
    fn suffix_matching_prefers_longest() {
        let suffixes = vec!["기".to_string(), "말기".to_string()];
        assert_eq!(RuleSet::match_suffix("가지말기", &suffixes), Some("말기"));
        assert_eq!(RuleSet::match_suffix("대기하기", &suffixes), Some("기"));
        assert_eq!(RuleSet::match_suffix("집", &suffixes), None);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = RuleSet::from_json(r#"{"language":"en","no_such_field":1}"#);
        assert!(err.is_err());
    }
}
