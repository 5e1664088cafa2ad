//! Shared domain types: the six directive subtypes, referent notation,
//! topics, corpus records, and extracted intent arguments.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// The six directive subtypes. Codes 0..=2 are question types, 3..=5 are
/// command types; the numeric order follows the categorization diagram
/// top to bottom (yes/no, alternative, wh-, prohibition, requirement,
/// strong requirement).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeechActType {
    YesNoQuestion,
    AlternativeQuestion,
    WhQuestion,
    Prohibition,
    Requirement,
    StrongRequirement,
}

/// Coarse intent of a directive: every subtype is either a question or a
/// command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BroadIntent {
    Question,
    Command,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid label: {0}")]
pub struct InvalidLabel(pub String);

impl SpeechActType {
    pub const ALL: [SpeechActType; 6] = [
        SpeechActType::YesNoQuestion,
        SpeechActType::AlternativeQuestion,
        SpeechActType::WhQuestion,
        SpeechActType::Prohibition,
        SpeechActType::Requirement,
        SpeechActType::StrongRequirement,
    ];

    /// Stable integer code, 0..=5.
    pub fn code(self) -> u8 {
        match self {
            SpeechActType::YesNoQuestion => 0,
            SpeechActType::AlternativeQuestion => 1,
            SpeechActType::WhQuestion => 2,
            SpeechActType::Prohibition => 3,
            SpeechActType::Requirement => 4,
            SpeechActType::StrongRequirement => 5,
        }
    }

    pub fn from_code(code: u8) -> Result<SpeechActType, InvalidLabel> {
        match code {
            0 => Ok(SpeechActType::YesNoQuestion),
            1 => Ok(SpeechActType::AlternativeQuestion),
            2 => Ok(SpeechActType::WhQuestion),
            3 => Ok(SpeechActType::Prohibition),
            4 => Ok(SpeechActType::Requirement),
            5 => Ok(SpeechActType::StrongRequirement),
            other => Err(InvalidLabel(other.to_string())),
        }
    }

    /// Canonical string name, used by the string label format.
    pub fn name(self) -> &'static str {
        match self {
            SpeechActType::YesNoQuestion => "yes_no_question",
            SpeechActType::AlternativeQuestion => "alternative_question",
            SpeechActType::WhQuestion => "wh_question",
            SpeechActType::Prohibition => "prohibition",
            SpeechActType::Requirement => "requirement",
            SpeechActType::StrongRequirement => "strong_requirement",
        }
    }

    pub fn from_name(name: &str) -> Result<SpeechActType, InvalidLabel> {
        SpeechActType::ALL
            .into_iter()
            .find(|t| t.name() == name)
            .ok_or_else(|| InvalidLabel(name.to_string()))
    }

    pub fn broad_intent(self) -> BroadIntent {
        if self.code() <= 2 {
            BroadIntent::Question
        } else {
            BroadIntent::Command
        }
    }
}

impl fmt::Display for SpeechActType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which dialogue participants an utterance's dropped or pronominal
/// subject refers to, as annotated in the notation-bearing corpus variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferentNotation {
    SpeakerOnly,
    AddresseeOnly,
    Both,
    None,
    Unknown,
}

impl ReferentNotation {
    pub const ALL: [ReferentNotation; 5] = [
        ReferentNotation::SpeakerOnly,
        ReferentNotation::AddresseeOnly,
        ReferentNotation::Both,
        ReferentNotation::None,
        ReferentNotation::Unknown,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ReferentNotation::SpeakerOnly => "speaker",
            ReferentNotation::AddresseeOnly => "addressee",
            ReferentNotation::Both => "both",
            ReferentNotation::None => "none",
            ReferentNotation::Unknown => "unknown",
        }
    }

    pub fn from_tag(tag: &str) -> Result<ReferentNotation, InvalidLabel> {
        ReferentNotation::ALL
            .into_iter()
            .find(|n| n.tag() == tag)
            .ok_or_else(|| InvalidLabel(tag.to_string()))
    }

    /// Notation for a set of observed referents. An empty set maps to
    /// `Unknown`: with no pronoun on the surface, a single utterance gives
    /// no evidence either way (subject drop).
    pub fn from_referents(referents: &BTreeSet<Referent>) -> ReferentNotation {
        let speaker = referents.contains(&Referent::Speaker);
        let addressee = referents.contains(&Referent::Addressee);
        match (speaker, addressee) {
            (true, true) => ReferentNotation::Both,
            (true, false) => ReferentNotation::SpeakerOnly,
            (false, true) => ReferentNotation::AddresseeOnly,
            (false, false) => ReferentNotation::Unknown,
        }
    }
}

impl fmt::Display for ReferentNotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Topic buckets used by the augmentation plan. The augmentation ratio
/// weights are (1, 1, 1, 1, 4) in this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topic {
    Mail,
    Schedule,
    SmartHome,
    Weather,
    Free,
}

impl Topic {
    pub const ALL: [Topic; 5] = [
        Topic::Mail,
        Topic::Schedule,
        Topic::SmartHome,
        Topic::Weather,
        Topic::Free,
    ];

    /// Default augmentation ratio weights, aligned with `Topic::ALL`.
    pub const DEFAULT_WEIGHTS: [u32; 5] = [1, 1, 1, 1, 4];

    pub fn tag(self) -> &'static str {
        match self {
            Topic::Mail => "mail",
            Topic::Schedule => "schedule",
            Topic::SmartHome => "smart_home",
            Topic::Weather => "weather",
            Topic::Free => "free",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Topic, InvalidLabel> {
        Topic::ALL
            .into_iter()
            .find(|t| t.tag() == tag)
            .ok_or_else(|| InvalidLabel(tag.to_string()))
    }
}

impl fmt::Display for Topic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One row of the parallel corpus: label, sentence, argument, and the two
/// optional columns (referent notation and topic) carried by some corpus
/// variants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub label: SpeechActType,
    pub sentence: String,
    pub argument: String,
    pub notation: Option<ReferentNotation>,
    pub topic: Option<Topic>,
}

impl CorpusRecord {
    pub fn new(
        label: SpeechActType,
        sentence: impl Into<String>,
        argument: impl Into<String>,
    ) -> CorpusRecord {
        CorpusRecord {
            label,
            sentence: sentence.into(),
            argument: argument.into(),
            notation: None,
            topic: None,
        }
    }

    pub fn with_notation(mut self, notation: ReferentNotation) -> CorpusRecord {
        self.notation = Some(notation);
        self
    }

    pub fn with_topic(mut self, topic: Topic) -> CorpusRecord {
        self.topic = Some(topic);
        self
    }
}

/// A dialogue participant referenced by a first- or second-person pronoun.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Referent {
    Speaker,
    Addressee,
}

/// The structural element that fixes an argument's phrase form.
///
/// Question labels yield `If` (yes/no), `WhetherOr` (alternative) or
/// `Nominal` (wh-, and wh-style alternatives); command labels yield `To`
/// (requirement, strong requirement) or `NotTo` (prohibition).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "nominal")]
pub enum HeadMarker {
    If,
    WhetherOr,
    /// Nominalized head phrase, e.g. "the number of" or "the place".
    Nominal(String),
    To,
    NotTo,
}

impl HeadMarker {
    /// Head kind without the nominal payload, for comparisons.
    pub fn kind(&self) -> HeadKind {
        match self {
            HeadMarker::If => HeadKind::If,
            HeadMarker::WhetherOr => HeadKind::WhetherOr,
            HeadMarker::Nominal(_) => HeadKind::Nominal,
            HeadMarker::To => HeadKind::To,
            HeadMarker::NotTo => HeadKind::NotTo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeadKind {
    If,
    WhetherOr,
    Nominal,
    To,
    NotTo,
}

impl HeadKind {
    /// The broad intent a head implies: question heads vs command heads.
    pub fn broad_intent(self) -> BroadIntent {
        match self {
            HeadKind::If | HeadKind::WhetherOr | HeadKind::Nominal => BroadIntent::Question,
            HeadKind::To | HeadKind::NotTo => BroadIntent::Command,
        }
    }
}

/// Where the head marker is rendered: sentence-initial (English-style) or
/// sentence-final (head-final languages).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeadPosition {
    Initial,
    Final,
}

/// The structured core content extracted from a directive: head marker,
/// content tokens (participant pronouns already replaced), and the set of
/// participants those pronouns referred to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntentArgument {
    pub head: HeadMarker,
    pub content: Vec<String>,
    pub head_position: HeadPosition,
    pub referents: BTreeSet<Referent>,
}

impl IntentArgument {
    pub fn notation(&self) -> ReferentNotation {
        ReferentNotation::from_referents(&self.referents)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_codec_round_trips() {
        for t in SpeechActType::ALL {
            assert_eq!(SpeechActType::from_code(t.code()).unwrap(), t);
            assert_eq!(SpeechActType::from_name(t.name()).unwrap(), t);
        }
    }

    #[test]
    fn fixed_codes() {
        assert_eq!(SpeechActType::YesNoQuestion.code(), 0);
        assert_eq!(
            SpeechActType::from_code(0).unwrap(),
            SpeechActType::YesNoQuestion
        );
        assert_eq!(SpeechActType::StrongRequirement.code(), 5);
    }

    #[test]
    fn out_of_range_code_is_rejected_and_named() {
        let err = SpeechActType::from_code(7).unwrap_err();
        assert_eq!(err, InvalidLabel("7".to_string()));
        assert!(err.to_string().contains('7'));
    }

    #[test]
    fn broad_intent_split_by_code() {
        for t in SpeechActType::ALL {
            let expected = if t.code() <= 2 {
                BroadIntent::Question
            } else {
                BroadIntent::Command
            };
            assert_eq!(t.broad_intent(), expected);
        }
    }

    #[test]
    fn notation_tags_round_trip() {
        for n in ReferentNotation::ALL {
            assert_eq!(ReferentNotation::from_tag(n.tag()).unwrap(), n);
        }
        assert!(ReferentNotation::from_tag("nobody").is_err());
    }

    #[test]
    fn notation_from_referent_sets() {
        let mut set = BTreeSet::new();
        assert_eq!(
            ReferentNotation::from_referents(&set),
            ReferentNotation::Unknown
        );
        set.insert(Referent::Speaker);
        assert_eq!(
            ReferentNotation::from_referents(&set),
            ReferentNotation::SpeakerOnly
        );
        set.insert(Referent::Addressee);
        assert_eq!(ReferentNotation::from_referents(&set), ReferentNotation::Both);
    }

    #[test]
    fn topic_tags_round_trip() {
        for t in Topic::ALL {
            assert_eq!(Topic::from_tag(t.tag()).unwrap(), t);
        }
        assert_eq!(Topic::DEFAULT_WEIGHTS, [1, 1, 1, 1, 4]);
    }

    #[test]
    fn head_kinds_imply_broad_intent() {
        assert_eq!(HeadKind::If.broad_intent(), BroadIntent::Question);
        assert_eq!(HeadKind::Nominal.broad_intent(), BroadIntent::Question);
        assert_eq!(HeadKind::To.broad_intent(), BroadIntent::Command);
        assert_eq!(HeadKind::NotTo.broad_intent(), BroadIntent::Command);
    }
}
