//! Class-imbalance augmentation planning and a mechanical variant
//! generator.
//!
//! The planner apportions per-type argument quotas over topics by the
//! largest-remainder rule, using the (1, 1, 1, 1, 4) weights for mail,
//! schedule, smart home, weather, and free topics.
//!
//! The generator is a testing/bootstrap stand-in for human sentence
//! writers: it composes four operators over an intent argument - frame
//! wrapping matched to the head, politeness insertion, word replacement
//! over cue/frame synonyms, and scrambling of a trailing deictic. Synonym
//! replacement deliberately touches only cue words, never content tokens,
//! so every variant re-extracts to the source content (minus the inserted
//! frame and politeness tokens).

use crate::corpus::CorpusStats;
use crate::model::{HeadKind, IntentArgument, SpeechActType};
use crate::rng::SplitMix64;
use crate::rules::RuleSet;
use serde::Serialize;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AugmentError {
    #[error("nothing to plan: empty quota map")]
    NothingToPlan,
    #[error("variants per argument must be at least 1")]
    NoVariantsRequested,
    #[error("only {max} distinct variants are composable, {requested} requested")]
    VariantExhausted { max: usize, requested: usize },
}

// ---------------------------------------------------------------------------
// Planning.

/// Per-type, per-topic augmentation plan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AugmentationPlan {
    /// New arguments to write per speech-act type.
    pub quotas: BTreeMap<SpeechActType, u64>,
    /// Topic allocation per type, indexed in `Topic::ALL` order.
    pub allocation: BTreeMap<SpeechActType, [u64; 5]>,
    pub variants_per_argument: u64,
    /// Corpus counts before augmentation, per label code.
    pub current: [u64; 6],
    /// Projected counts once every planned pair lands in the corpus.
    pub projected: [u64; 6],
    pub total_arguments: u64,
    pub total_pairs: u64,
}

/// Largest-remainder apportionment of `quota` over `weights`. Allocations
/// sum exactly to the quota and each differs from its real-valued share
/// by less than one.
pub fn apportion(quota: u64, weights: [u32; 5]) -> [u64; 5] {
    let weight_sum: u64 = weights.iter().map(|&w| w as u64).sum();
    if weight_sum == 0 || quota == 0 {
        return [0; 5];
    }
    let mut alloc = [0u64; 5];
    let mut remainders: Vec<(usize, u64)> = Vec::with_capacity(5);
    let mut assigned = 0u64;
    for (i, &w) in weights.iter().enumerate() {
        let exact_num = quota as u128 * w as u128;
        alloc[i] = (exact_num / weight_sum as u128) as u64;
        assigned += alloc[i];
        remainders.push((i, (exact_num % weight_sum as u128) as u64));
    }
    // Distribute what flooring left over, largest remainder first; ties go
    // to the earlier topic for determinism.
    remainders.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut leftover = quota - assigned;
    for (i, _) in remainders {
        if leftover == 0 {
            break;
        }
        alloc[i] += 1;
        leftover -= 1;
    }
    alloc
}

/// Build an augmentation plan from the current corpus composition, the
/// per-type quotas of new arguments, the topic ratio weights, and the
/// number of surface variants written per argument.
pub fn plan_augmentation(
    current: &CorpusStats,
    quotas: &BTreeMap<SpeechActType, u64>,
    weights: [u32; 5],
    variants_per_argument: u64,
) -> Result<AugmentationPlan, AugmentError> {
    if quotas.is_empty() {
        return Err(AugmentError::NothingToPlan);
    }
    if variants_per_argument == 0 {
        return Err(AugmentError::NoVariantsRequested);
    }
    let mut allocation = BTreeMap::new();
    let mut total_arguments = 0u64;
    for (&label, &quota) in quotas {
        allocation.insert(label, apportion(quota, weights));
        total_arguments += quota;
    }
    let mut projected = current.per_type;
    for (&label, &quota) in quotas {
        projected[label.code() as usize] += quota * variants_per_argument;
    }
    Ok(AugmentationPlan {
        quotas: quotas.clone(),
        allocation,
        variants_per_argument,
        current: current.per_type,
        projected,
        total_arguments,
        total_pairs: total_arguments * variants_per_argument,
    })
}

// ---------------------------------------------------------------------------
// Variant generation.

/// One generated surface sentence, with the tokens the operators inserted
/// (frame and politeness words). Removing `inserted` from a re-extracted
/// content multiset recovers the source argument's content.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratedVariant {
    pub text: String,
    pub inserted: Vec<String>,
}

/// The directive label a generated sentence should classify as, per head.
/// Strong requirements are never generated; a to-argument surfaces as a
/// plain requirement.
pub fn label_for_head(head: HeadKind) -> SpeechActType {
    match head {
        HeadKind::If => SpeechActType::YesNoQuestion,
        HeadKind::WhetherOr => SpeechActType::AlternativeQuestion,
        HeadKind::Nominal => SpeechActType::WhQuestion,
        HeadKind::To => SpeechActType::Requirement,
        HeadKind::NotTo => SpeechActType::Prohibition,
    }
}

fn frames_for(head: HeadKind, rules: &RuleSet) -> Vec<&str> {
    let list = match head {
        HeadKind::If => &rules.variant_frames.if_,
        HeadKind::WhetherOr => &rules.variant_frames.whether,
        HeadKind::Nominal => &rules.variant_frames.nominal,
        HeadKind::To => &rules.variant_frames.to,
        HeadKind::NotTo => &rules.variant_frames.not_to,
    };
    if list.is_empty() {
        vec![""]
    } else {
        list.iter().map(String::as_str).collect()
    }
}

/// Expand one frame through the synonym table: every cue word with
/// alternatives multiplies the frame variants.
fn expand_frame(frame: &str, rules: &RuleSet) -> Vec<String> {
    let mut variants: Vec<Vec<String>> = vec![Vec::new()];
    for word in frame.split_whitespace() {
        let mut options: Vec<&str> = vec![word];
        if let Some(rule) = rules.synonyms.iter().find(|s| s.token == word) {
            options.extend(rule.alternatives.iter().map(String::as_str));
        }
        let mut next = Vec::with_capacity(variants.len() * options.len());
        for prefix in &variants {
            for option in &options {
                let mut v = prefix.clone();
                v.extend(option.split_whitespace().map(str::to_string));
                next.push(v);
            }
        }
        variants = next;
    }
    variants.into_iter().map(|words| words.join(" ")).collect()
}

/// For nominal-head frames the re-extraction prepends the wh rule's
/// nominal; those tokens count as inserted.
fn nominal_insertions(frame: &str, rules: &RuleSet) -> Vec<String> {
    let first = frame.split_whitespace().next().unwrap_or("");
    rules
        .wh_rules
        .iter()
        .filter(|r| {
            let cue_head = r.cue.split_whitespace().next().unwrap_or("");
            cue_head == first || (r.prefix && first.starts_with(cue_head) && !cue_head.is_empty())
        })
        .max_by_key(|r| r.cue.len())
        .map(|r| r.nominal.split_whitespace().map(str::to_string).collect())
        .unwrap_or_default()
}

fn assemble(
    head: HeadKind,
    frame: &str,
    politeness: Option<&str>,
    scramble: bool,
    content: &[String],
    frame_is_ender: bool,
) -> (String, Vec<String>) {
    let mut content: Vec<String> = content.to_vec();
    let mut lead: Vec<String> = Vec::new();
    if scramble && content.len() >= 2 {
        let last = content.pop().expect("len checked");
        lead.push(last);
    }
    if frame_is_ender {
        // Head-final command: the frame is a sentence ender fused onto the
        // content stem ("대기하" + "세요"). Nothing token-shaped is
        // inserted; re-extraction strips the ending again.
        let mut words = lead;
        words.extend(content);
        let mut inserted = Vec::new();
        if let Some(last) = words.last_mut() {
            last.push_str(frame);
        }
        if let Some(p) = politeness {
            words.insert(0, p.to_string());
            inserted.push(p.to_string());
        }
        return (words.join(" "), inserted);
    }
    let mut words: Vec<String> = lead;
    let mut inserted: Vec<String> = Vec::new();
    match head {
        // Commands: politeness goes before a prohibitive frame, after a
        // requirement frame ("please dont ..." vs "can you please ...").
        HeadKind::NotTo => {
            if let Some(p) = politeness {
                words.push(p.to_string());
                inserted.push(p.to_string());
            }
            for w in frame.split_whitespace() {
                words.push(w.to_string());
                inserted.push(w.to_string());
            }
        }
        _ => {
            for w in frame.split_whitespace() {
                words.push(w.to_string());
                inserted.push(w.to_string());
            }
            if let Some(p) = politeness {
                words.push(p.to_string());
                inserted.push(p.to_string());
            }
        }
    }
    words.extend(content);
    (words.join(" "), inserted)
}

/// Deterministically generate `n` distinct surface sentences expressing
/// `argument`. The full operator product is enumerated, deduplicated, and
/// sampled with the seeded generator; asking for more variants than the
/// operator product can compose fails with the composable maximum.
pub fn generate_variants(
    argument: &IntentArgument,
    n: usize,
    rules: &RuleSet,
    seed: u64,
) -> Result<Vec<GeneratedVariant>, AugmentError> {
    if n == 0 {
        return Err(AugmentError::NoVariantsRequested);
    }
    let head = argument.head.kind();
    let commands = matches!(head, HeadKind::To | HeadKind::NotTo);
    let frame_is_ender = commands && rules.final_markers.is_some();

    let politeness_options: Vec<Option<&str>> = if commands {
        let mut opts: Vec<Option<&str>> = vec![None];
        opts.extend(rules.politeness_markers.iter().map(|m| Some(m.as_str())));
        opts
    } else {
        vec![None]
    };
    let scramble_options: &[bool] = if argument.content.len() >= 2
        && argument
            .content
            .last()
            .is_some_and(|w| rules.is_deictic(w))
    {
        &[false, true]
    } else {
        &[false]
    };

    let mut variants: Vec<GeneratedVariant> = Vec::new();
    let mut seen: std::collections::BTreeSet<String> = std::collections::BTreeSet::new();
    for frame in frames_for(head, rules) {
        let nominal_extra = if head == HeadKind::Nominal {
            nominal_insertions(frame, rules)
        } else {
            Vec::new()
        };
        for expanded in expand_frame(frame, rules) {
            for politeness in &politeness_options {
                for &scramble in scramble_options {
                    let (text, mut inserted) = assemble(
                        head,
                        &expanded,
                        *politeness,
                        scramble,
                        &argument.content,
                        frame_is_ender,
                    );
                    if text.is_empty() {
                        continue;
                    }
                    inserted.extend(nominal_extra.iter().cloned());
                    if seen.insert(text.clone()) {
                        variants.push(GeneratedVariant { text, inserted });
                    }
                }
            }
        }
    }

    if n > variants.len() {
        return Err(AugmentError::VariantExhausted { max: variants.len(), requested: n });
    }
    let mut order: Vec<usize> = (0..variants.len()).collect();
    SplitMix64::new(seed).shuffle(&mut order);
    Ok(order.into_iter().take(n).map(|i| variants[i].clone()).collect())
}
