//! Transforms a classified directive into its intent argument.
//!
//! The extractor performs marker, replacement, and deletion operations
//! only; it never conjugates. Verb inflection in hand-written gold
//! arguments ("did i ever tell" / "the speaker told") is therefore out of
//! reach by design, and closeness to gold is measured by content-token
//! overlap rather than exact string match.
//!
//! Per-label pipelines:
//! - yes/no question: drop dummy do-support, reorder a modal after its
//!   subject, head "if".
//! - alternative question: same auxiliary handling, drop "or both"-style
//!   tails, head "whether"; wh-style alternatives take a nominal head and
//!   the "in A or B" -> "between A and B" rewrite.
//! - wh- question: nominal head from the wh-cue table (fallback "the
//!   thing"), counting cues insert the relativizer.
//! - requirement: leading requirement frame removed, bare imperative
//!   verbs kept, head "to".
//! - prohibition: leading prohibitive frame removed, head "not to".
//! - strong requirement: only the requirement clause is core content; the
//!   prohibitive clause is discarded entirely.
//!
//! After the label-specific step: phrase rewrites, then coreference
//! replacement (first/second person only; third-person anaphora and
//! deictics pass through untouched).

use crate::classifier::{clause_views, ClauseKind, ClauseSpan, UtteranceLabel};
use crate::model::{
    HeadKind, HeadMarker, HeadPosition, IntentArgument, Referent, SpeechActType,
};
use crate::rules::{RuleSet, WhTemplate};
use crate::textnorm::Token;
use std::collections::BTreeSet;
use thiserror::Error;

/// Extraction settings. `head_position` defaults to `Final` for rule sets
/// that define clause-final markers (head-final languages) and `Initial`
/// otherwise.
#[derive(Debug, Clone)]
pub struct ExtractionConfig<'r> {
    pub head_position: HeadPosition,
    pub rules: &'r RuleSet,
    /// Record which participants were referenced. When off, the referent
    /// metadata is dropped (the replacement phrases stay in the content
    /// either way).
    pub keep_notation: bool,
}

impl<'r> ExtractionConfig<'r> {
    pub fn for_rules(rules: &'r RuleSet) -> ExtractionConfig<'r> {
        let head_position = if rules.final_markers.is_some() {
            HeadPosition::Final
        } else {
            HeadPosition::Initial
        };
        ExtractionConfig { head_position, rules, keep_notation: true }
    }

    pub fn with_head_position(mut self, pos: HeadPosition) -> Self {
        self.head_position = pos;
        self
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("cannot extract an argument from a non-directive utterance")]
    NotADirective,
    #[error("strong requirement without a requirement clause")]
    MalformedStrongRequirement,
}

// ---------------------------------------------------------------------------
// Public component operations.

/// Remove politeness markers, preserving the order of the rest.
pub fn strip_politeness(tokens: &[Token], rules: &RuleSet) -> Vec<Token> {
    tokens
        .iter()
        .filter(|t| !rules.is_politeness(&t.surface))
        .enumerate()
        .map(|(i, t)| Token::new(t.surface.clone(), i))
        .collect()
}

/// Replace first/second-person pronouns with their referent phrases and
/// report which participants occurred. Everything else passes through.
pub fn normalize_coreference(
    tokens: &[Token],
    rules: &RuleSet,
) -> (Vec<Token>, BTreeSet<Referent>) {
    let mut referents = BTreeSet::new();
    let mut out: Vec<Token> = Vec::with_capacity(tokens.len());
    for token in tokens {
        match rules.pronoun(&token.surface) {
            Some(rule) => {
                referents.insert(rule.referent);
                for part in rule.replacement.split_whitespace() {
                    out.push(Token::new(part, out.len()));
                }
            }
            None => out.push(Token::new(token.surface.clone(), out.len())),
        }
    }
    (out, referents)
}

/// From the clause spans of a strong requirement, keep only the
/// requirement clause's tokens; the forbidding clause is not core content.
pub fn resolve_strong_requirement(
    spans: &[ClauseSpan],
    tokens: &[Token],
) -> Result<Vec<Token>, ExtractError> {
    let req = spans
        .iter()
        .find(|s| s.kind == ClauseKind::Requirement)
        .ok_or(ExtractError::MalformedStrongRequirement)?;
    Ok(tokens[req.start..req.end.min(tokens.len())]
        .iter()
        .enumerate()
        .map(|(i, t)| Token::new(t.surface.clone(), i))
        .collect())
}

// ---------------------------------------------------------------------------
// Internal pipeline over plain surfaces.

fn surfaces(tokens: &[Token]) -> Vec<String> {
    tokens.iter().map(|t| t.surface.clone()).collect()
}

/// Drop fillers and politeness markers; collapse an immediately repeated
/// filler or pronoun (speech disfluency).
fn clean(words: &[String], rules: &RuleSet) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(words.len());
    for (i, w) in words.iter().enumerate() {
        if rules.is_filler(w) || rules.is_politeness(w) {
            continue;
        }
        if i + 1 < words.len() && words[i + 1] == *w && rules.is_pronoun(w) {
            continue;
        }
        out.push(w.clone());
    }
    out
}

fn in_list(list: &[String], w: &str) -> bool {
    list.iter().any(|x| x == w)
}

/// Match a space-separated phrase at the front of `words`.
fn phrase_at_front(words: &[String], phrase: &str) -> Option<usize> {
    let parts: Vec<&str> = phrase.split_whitespace().collect();
    if parts.is_empty() || parts.len() > words.len() {
        return None;
    }
    parts
        .iter()
        .zip(words.iter())
        .all(|(p, w)| *p == w.as_str())
        .then_some(parts.len())
}

/// Strip leading embedded-question frames ("you know", "i wonder that").
fn strip_embedded_frames(words: &mut Vec<String>, rules: &RuleSet) {
    loop {
        if words.len() < 2 {
            return;
        }
        if in_list(&rules.embedded_subjects, &words[0])
            && in_list(&rules.question_predicates, &words[1])
        {
            words.drain(0..2);
            if words.first().map(String::as_str) == Some("that") {
                words.remove(0);
            }
        } else {
            return;
        }
    }
}

/// Dummy auxiliaries disappear; meaningful ones move after the subject.
fn handle_front_aux(words: &mut Vec<String>, rules: &RuleSet) {
    if words.is_empty() {
        return;
    }
    if in_list(&rules.aux_drop, &words[0]) {
        words.remove(0);
    } else if in_list(&rules.aux_reorder, &words[0]) && words.len() >= 2 {
        words.swap(0, 1);
    }
}

/// Apply phrase rewrites left to right, longest match first.
fn apply_rewrites(words: &[String], rules: &RuleSet) -> Vec<String> {
    if rules.rewrites.is_empty() {
        return words.to_vec();
    }
    let mut out: Vec<String> = Vec::with_capacity(words.len());
    let mut i = 0;
    while i < words.len() {
        let mut matched = false;
        let mut best: Option<(usize, &str)> = None;
        for rw in &rules.rewrites {
            let parts: Vec<&str> = rw.from.split_whitespace().collect();
            if parts.is_empty() || i + parts.len() > words.len() {
                continue;
            }
            if parts.iter().zip(&words[i..]).all(|(p, w)| *p == w.as_str()) {
                let better = best.is_none_or(|(len, _)| parts.len() > len);
                if better {
                    best = Some((parts.len(), rw.to.as_str()));
                }
            }
        }
        if let Some((len, to)) = best {
            out.extend(to.split_whitespace().map(str::to_string));
            i += len;
            matched = true;
        }
        if !matched {
            out.push(words[i].clone());
            i += 1;
        }
    }
    out
}

fn replace_pronouns(words: &[String], rules: &RuleSet) -> (Vec<String>, BTreeSet<Referent>) {
    let mut referents = BTreeSet::new();
    let mut out = Vec::with_capacity(words.len());
    for w in words {
        match rules.pronoun(w) {
            Some(rule) => {
                referents.insert(rule.referent);
                out.extend(rule.replacement.split_whitespace().map(str::to_string));
            }
            None => out.push(w.clone()),
        }
    }
    (out, referents)
}

/// Strip a clause-final ending (imperative, prohibitive, or interrogative)
/// from the last token, leaving the stem for the final marker to attach to.
fn strip_final_ending(words: &mut [String], suffix_lists: &[&[String]]) {
    if let Some(last) = words.last_mut() {
        for list in suffix_lists {
            if let Some(suffix) = RuleSet::match_suffix(last, list) {
                if last.len() > suffix.len() {
                    let cut = last.len() - suffix.len();
                    last.truncate(cut);
                }
                return;
            }
        }
    }
}

/// Drop light support tokens and strip postposition particles; used for
/// nominalized wh-arguments.
fn nominalize_ko(words: Vec<String>, rules: &RuleSet) -> Vec<String> {
    words
        .into_iter()
        .filter(|w| !in_list(&rules.wh_drop_tokens, w))
        .map(|w| {
            if let Some(suffix) = RuleSet::match_suffix(&w, &rules.particle_strip) {
                if w.len() > suffix.len() {
                    return w[..w.len() - suffix.len()].to_string();
                }
            }
            w
        })
        .filter(|w| !w.is_empty())
        .collect()
}

struct QuestionExtraction {
    head: HeadMarker,
    content: Vec<String>,
}

fn extract_alternative(mut words: Vec<String>, rules: &RuleSet) -> QuestionExtraction {
    strip_embedded_frames(&mut words, rules);

    let alt = &rules.alternative;
    // "or both" / "or not" tails carry no candidate answer.
    if words.len() >= 2 && !alt.cue.is_empty() {
        let n = words.len();
        if in_list(&alt.drop_tails, &words[n - 1]) && words[n - 2] == alt.cue {
            words.truncate(n - 2);
        }
    }

    // Wh-style alternative: nominal head, candidates joined by
    // between/and rather than whether/or.
    if let Some(wh) = find_wh_in(&words, rules) {
        let rule = &rules.wh_rules[wh.0];
        let mut rest: Vec<String> = Vec::new();
        rest.extend_from_slice(&words[..wh.1]);
        rest.extend_from_slice(&words[wh.2..]);
        if rest.first().is_some_and(|w| in_list(&rules.aux_reorder, w)) {
            rest.remove(0);
        }
        let mut nominal = rule.nominal.clone();
        if !alt.cue.is_empty() {
            if let Some(k) = rest.iter().position(|w| *w == alt.cue) {
                if k >= 1 && k + 1 < rest.len() {
                    if !alt.and_word.is_empty() {
                        rest[k] = alt.and_word.clone();
                    }
                    if k >= 2 && in_list(&alt.locative_preps, &rest[k - 2]) {
                        rest[k - 2] = alt.between_word.clone();
                        if !alt.locative_nominal.is_empty() {
                            nominal = alt.locative_nominal.clone();
                        }
                    } else if !alt.between_word.is_empty() {
                        rest.insert(k - 1, alt.between_word.clone());
                    }
                }
            }
        }
        return QuestionExtraction { head: HeadMarker::Nominal(nominal), content: rest };
    }

    handle_front_aux(&mut words, rules);
    QuestionExtraction { head: HeadMarker::WhetherOr, content: words }
}

/// Wh-cue search over owned surfaces; returns (rule index, start, end).
fn find_wh_in(words: &[String], rules: &RuleSet) -> Option<(usize, usize, usize)> {
    let refs: Vec<&str> = words.iter().map(String::as_str).collect();
    let probe = 0;
    crate::classifier::find_wh(&refs, probe, rules).map(|m| (m.rule_index, m.start, m.end))
}

fn extract_wh(mut words: Vec<String>, rules: &RuleSet) -> QuestionExtraction {
    // Inquiry phrases without a surface wh-particle.
    {
        let mut best: Option<(usize, &crate::rules::NominalPattern)> = None;
        for pat in &rules.nominal_question_patterns {
            if let Some(end) = phrase_at_front(&words, &pat.pattern) {
                if best.is_none_or(|(len, _)| end > len) {
                    best = Some((end, pat));
                }
            }
        }
        if let Some((end, pat)) = best {
            let mut content: Vec<String> =
                pat.glue.split_whitespace().map(str::to_string).collect();
            content.extend_from_slice(&words[end..]);
            return QuestionExtraction {
                head: HeadMarker::Nominal(pat.nominal.clone()),
                content,
            };
        }
    }

    strip_embedded_frames(&mut words, rules);

    if let Some((rule_index, start, end)) = find_wh_in(&words, rules) {
        let rule = &rules.wh_rules[rule_index];
        let mut rest: Vec<String> = Vec::new();
        rest.extend_from_slice(&words[..start]);
        rest.extend_from_slice(&words[end..]);
        match rule.template {
            WhTemplate::Count => {
                // Counted noun, then the rest as a relative clause.
                if rest.len() > 1 && !rules.relativizer.is_empty() {
                    rest.insert(1, rules.relativizer.clone());
                }
            }
            WhTemplate::Plain => {
                if start == 0 && rest.first().is_some_and(|w| in_list(&rules.aux_reorder, w)) {
                    rest.remove(0);
                }
            }
        }
        let content = if rules.wh_in_situ { nominalize_ko(rest, rules) } else { rest };
        return QuestionExtraction {
            head: HeadMarker::Nominal(rule.nominal.clone()),
            content,
        };
    }

    // Classified wh- without a matching cue: generic nominal over the
    // whole content.
    let content = if rules.wh_in_situ { nominalize_ko(words, rules) } else { words };
    QuestionExtraction {
        head: HeadMarker::Nominal(rules.wh_fallback_nominal.clone()),
        content,
    }
}

/// Content of one command clause: the clause minus its leading cue frame
/// and any clause-final prohibitive connective.
fn clause_content(
    view: &crate::classifier::ClauseView,
    words: &[String],
    rules: &RuleSet,
) -> Vec<String> {
    let end = view.span.end.min(words.len());
    let mut out = Vec::new();
    for (i, word) in words.iter().enumerate().take(end).skip(view.span.start) {
        if let Some((fs, fe)) = view.frame {
            if i >= fs && i < fe {
                continue;
            }
        }
        if view.trailing == Some(i) {
            continue;
        }
        out.push(word.clone());
    }
    clean(&out, rules)
}

/// Extract the intent argument for a labeled utterance.
pub fn extract(
    tokens: &[Token],
    label: UtteranceLabel,
    cfg: &ExtractionConfig<'_>,
) -> Result<IntentArgument, ExtractError> {
    let act = label.directive().ok_or(ExtractError::NotADirective)?;
    let rules = cfg.rules;
    let words = surfaces(tokens);

    let (head, mut content) = match act {
        SpeechActType::Requirement
        | SpeechActType::Prohibition
        | SpeechActType::StrongRequirement => {
            let views = clause_views(tokens, rules);
            let relevant: Vec<&crate::classifier::ClauseView> = match act {
                SpeechActType::StrongRequirement => {
                    let req: Vec<_> = views
                        .iter()
                        .filter(|v| v.span.kind == ClauseKind::Requirement)
                        .collect();
                    if req.is_empty() {
                        return Err(ExtractError::MalformedStrongRequirement);
                    }
                    req
                }
                _ => views.iter().collect(),
            };
            let mut content = Vec::new();
            for view in relevant {
                content.extend(clause_content(view, &words, rules));
            }
            let head = match act {
                SpeechActType::Prohibition => HeadMarker::NotTo,
                _ => HeadMarker::To,
            };
            // Head-final command stems lose their sentence ending; the
            // final marker replaces it.
            if cfg.head_position == HeadPosition::Final {
                strip_final_ending(
                    &mut content,
                    &[&rules.imperative_enders, &rules.ph_enders],
                );
            }
            (head, content)
        }
        SpeechActType::YesNoQuestion => {
            let mut w = clean(&words, rules);
            strip_embedded_frames(&mut w, rules);
            handle_front_aux(&mut w, rules);
            if cfg.head_position == HeadPosition::Final {
                strip_final_ending(&mut w, &[&rules.question_enders]);
            }
            (HeadMarker::If, w)
        }
        SpeechActType::AlternativeQuestion => {
            let w = clean(&words, rules);
            let q = extract_alternative(w, rules);
            let mut content = q.content;
            if cfg.head_position == HeadPosition::Final && q.head == HeadMarker::WhetherOr {
                strip_final_ending(&mut content, &[&rules.question_enders]);
            }
            (q.head, content)
        }
        SpeechActType::WhQuestion => {
            let w = clean(&words, rules);
            let q = extract_wh(w, rules);
            (q.head, q.content)
        }
    };

    content = apply_rewrites(&content, rules);
    let (content, referents) = replace_pronouns(&content, rules);

    Ok(IntentArgument {
        head,
        content,
        head_position: cfg.head_position,
        referents: if cfg.keep_notation { referents } else { BTreeSet::new() },
    })
}

/// Render an argument as text: marker prefixed for head-initial order,
/// marker morph attached clause-finally for head-final order.
pub fn render(arg: &IntentArgument, cfg: &ExtractionConfig<'_>) -> String {
    let joined = arg.content.join(" ");
    match arg.head_position {
        HeadPosition::Initial => {
            let prefix = match &arg.head {
                HeadMarker::If => "if".to_string(),
                HeadMarker::WhetherOr => "whether".to_string(),
                HeadMarker::Nominal(n) => n.clone(),
                HeadMarker::To => "to".to_string(),
                HeadMarker::NotTo => "not to".to_string(),
            };
            if joined.is_empty() {
                prefix
            } else {
                format!("{prefix} {joined}")
            }
        }
        HeadPosition::Final => {
            let markers = match cfg.rules.final_markers.as_ref() {
                Some(m) => m,
                // No clause-final morphology defined: fall back to a
                // detached trailing marker.
                None => {
                    return match &arg.head {
                        HeadMarker::Nominal(n) => {
                            if joined.is_empty() {
                                n.clone()
                            } else {
                                format!("{joined} {n}")
                            }
                        }
                        _ => joined,
                    };
                }
            };
            match &arg.head {
                HeadMarker::Nominal(n) => {
                    if joined.is_empty() {
                        n.clone()
                    } else {
                        format!("{joined} {n}")
                    }
                }
                HeadMarker::To => format!("{joined}{}", markers.to),
                HeadMarker::NotTo => format!("{joined}{}", markers.not_to),
                HeadMarker::If | HeadMarker::WhetherOr => {
                    format!("{joined}{}", markers.question)
                }
            }
        }
    }
}

/// Recover the head kind from a rendered argument, by position: prefix
/// for head-initial text, suffix for head-final text.
pub fn parse_head(argument: &str, position: HeadPosition, rules: &RuleSet) -> Option<HeadKind> {
    let words: Vec<&str> = argument.split_whitespace().collect();
    if words.is_empty() {
        return None;
    }
    match position {
        HeadPosition::Initial => Some(match words[0] {
            "not" if words.get(1) == Some(&"to") => HeadKind::NotTo,
            "to" => HeadKind::To,
            "if" => HeadKind::If,
            "whether" => HeadKind::WhetherOr,
            _ => HeadKind::Nominal,
        }),
        HeadPosition::Final => {
            let markers = rules.final_markers.as_ref()?;
            let last = *words.last().expect("non-empty");
            let tail2 = if words.len() >= 2 {
                format!("{} {}", words[words.len() - 2], last)
            } else {
                last.to_string()
            };
            Some(if tail2.ends_with(&markers.not_to) {
                HeadKind::NotTo
            } else if last.ends_with(&markers.question) {
                HeadKind::If
            } else if last.ends_with(&markers.to) {
                HeadKind::To
            } else {
                HeadKind::Nominal
            })
        }
    }
}
