//! Rule-based identification of the six directive subtypes.
//!
//! Priority order (fixed): strong requirement (a prohibitive clause next
//! to a requirement clause) > prohibition > requirement > alternative
//! question > wh- question > yes/no question > non-directive. Commands
//! are checked first because obligation frames ("you ought to ...") beat
//! embedded question cues in the annotation convention this follows.
//!
//! Everything matches against a [`RuleSet`]; with an empty rule set every
//! utterance is non-directive. Known over-acceptances of a text-only rule
//! system: rhetorical questions/commands are not filtered (they need
//! prosody), and intonation-only declarative questions are matched only
//! through the lexical cues in the rule set.

use crate::model::SpeechActType;
use crate::rules::RuleSet;
use crate::textnorm::Token;
use thiserror::Error;

/// Classifier output label: a directive subtype or non-directive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UtteranceLabel {
    Directive(SpeechActType),
    NonDirective,
}

impl UtteranceLabel {
    pub fn directive(self) -> Option<SpeechActType> {
        match self {
            UtteranceLabel::Directive(t) => Some(t),
            UtteranceLabel::NonDirective => None,
        }
    }
}

/// One rule firing, for validation and debugging. `cue` is the rule-set
/// entry that matched, exactly as written in the rule file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiredRule {
    pub rule: &'static str,
    pub cue: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseKind {
    Prohibition,
    Requirement,
}

/// Half-open token range `[start, end)` covering one command clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseSpan {
    pub start: usize,
    pub end: usize,
    pub kind: ClauseKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationResult {
    pub label: UtteranceLabel,
    /// Fired rules in firing order; non-empty whenever label is directive.
    pub trace: Vec<FiredRule>,
    /// Command clause spans; empty for questions and non-directives.
    pub clause_spans: Vec<ClauseSpan>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("cannot classify an empty utterance")]
    EmptyUtterance,
}

// ---------------------------------------------------------------------------
// Token-level matching helpers. All matching is data-driven; the only
// hard-wired behavior is disfluency tolerance (a token repeated twice in a
// row, common in speech transcripts, is treated as one).

fn surfaces(tokens: &[Token]) -> Vec<&str> {
    tokens.iter().map(|t| t.surface.as_str()).collect()
}

fn is_skippable(rules: &RuleSet, token: &str) -> bool {
    rules.is_filler(token) || rules.is_politeness(token)
}

/// Match a space-separated phrase at `start`, tolerating immediate token
/// repetition ("i i dont want to"). Returns the index one past the match.
fn match_phrase_at(words: &[&str], start: usize, phrase: &str) -> Option<usize> {
    let parts: Vec<&str> = phrase.split_whitespace().collect();
    if parts.is_empty() {
        return None;
    }
    let mut p = start;
    for (k, want) in parts.iter().enumerate() {
        loop {
            if p >= words.len() {
                return None;
            }
            if words[p] == *want {
                p += 1;
                break;
            }
            // Disfluency: skip a duplicate of the previous token.
            if k > 0 && p > 0 && words[p] == words[p - 1] {
                p += 1;
                continue;
            }
            return None;
        }
    }
    Some(p)
}

/// Longest phrase from `phrases` matching at `start`.
fn match_longest_at<'a>(words: &[&str], start: usize, phrases: &'a [String]) -> Option<(&'a str, usize)> {
    let mut best: Option<(&'a str, usize)> = None;
    for phrase in phrases {
        if let Some(end) = match_phrase_at(words, start, phrase) {
            let better = match best {
                Some((_, best_end)) => end > best_end,
                None => true,
            };
            if better {
                best = Some((phrase.as_str(), end));
            }
        }
    }
    best
}

fn skip_leading(words: &[&str], mut pos: usize, rules: &RuleSet) -> usize {
    while pos < words.len() && is_skippable(rules, words[pos]) {
        pos += 1;
    }
    pos
}

/// Skip any mix of fillers, politeness markers, and fronted deictics;
/// cue matching starts after them (deictics stay in the clause content).
fn skip_prefix(words: &[&str], mut pos: usize, rules: &RuleSet) -> usize {
    while pos < words.len() && (is_skippable(rules, words[pos]) || rules.is_deictic(words[pos])) {
        pos += 1;
    }
    pos
}

// ---------------------------------------------------------------------------
// Clause analysis.

struct Clause {
    start: usize,
    end: usize,
    kind: Option<ClauseKind>,
    fired: Vec<FiredRule>,
    /// Token range of the leading cue frame, when one matched. Frames are
    /// removed from extracted content; bare imperative verbs stay.
    frame: Option<(usize, usize)>,
    /// Position of a clause-final prohibitive connective, when present.
    trailing: Option<usize>,
}

struct LeadingCue {
    kind: ClauseKind,
    end: usize,
    fired: FiredRule,
    is_frame: bool,
}

fn leading_cue_at(words: &[&str], pos: usize, rules: &RuleSet) -> Option<LeadingCue> {
    if pos >= words.len() {
        return None;
    }
    if let Some((cue, end)) = match_longest_at(words, pos, &rules.ph_frames) {
        return Some(LeadingCue {
            kind: ClauseKind::Prohibition,
            end,
            fired: FiredRule { rule: "ph_frame", cue: cue.to_string() },
            is_frame: true,
        });
    }
    if let Some((cue, end)) = match_longest_at(words, pos, &rules.req_frames) {
        return Some(LeadingCue {
            kind: ClauseKind::Requirement,
            end,
            fired: FiredRule { rule: "req_frame", cue: cue.to_string() },
            is_frame: true,
        });
    }
    if rules.is_imperative_verb(words[pos]) {
        return Some(LeadingCue {
            kind: ClauseKind::Requirement,
            end: pos + 1,
            fired: FiredRule { rule: "imperative_verb", cue: words[pos].to_string() },
            is_frame: false,
        });
    }
    None
}

/// Splits a token sequence into command clauses. Works for both
/// clause-initial cue languages (a prohibition or requirement frame opens
/// each clause) and clause-final cue languages (a prohibitive connective
/// closes a clause, a sentence ender closes the last one).
fn analyze_clauses(words: &[&str], rules: &RuleSet) -> Vec<Clause> {
    let n = words.len();
    let mut clauses: Vec<Clause> = Vec::new();
    if n == 0 {
        return clauses;
    }

    let mut start = skip_leading(words, 0, rules);
    if start >= n {
        start = 0; // all fillers: one clause covering everything
    }

    let open_clause = |start: usize| -> Clause {
        Clause { start, end: n, kind: None, fired: Vec::new(), frame: None, trailing: None }
    };

    let mut cur = open_clause(start);
    // Deictics may front a clause ("tomorrow dont pick the speaker up");
    // they stay in the clause but the cue is matched after them.
    let probe = skip_prefix(words, start, rules);
    let mut content_seen = 0usize;
    let mut p = probe;
    if let Some(cue) = leading_cue_at(words, probe, rules) {
        cur.kind = Some(cue.kind);
        cur.fired.push(cue.fired);
        cur.frame = cue.is_frame.then_some((probe, cue.end));
        p = cue.end;
    }

    while p < n {
        let word = words[p];
        if let Some(suffix) = RuleSet::match_suffix(word, &rules.ph_trailing) {
            // Clause-final prohibitive connective: close as prohibition.
            cur.end = p + 1;
            cur.kind = Some(ClauseKind::Prohibition);
            cur.trailing = Some(p);
            cur.fired.push(FiredRule { rule: "ph_trailing", cue: suffix.to_string() });
            clauses.push(cur);
            let next_start = skip_leading(words, p + 1, rules);
            if next_start >= n {
                return clauses;
            }
            cur = open_clause(next_start);
            let next_probe = skip_prefix(words, next_start, rules);
            content_seen = 0;
            p = next_probe;
            if let Some(cue) = leading_cue_at(words, next_probe, rules) {
                cur.kind = Some(cue.kind);
                cur.fired.push(cue.fired);
                cur.frame = cue.is_frame.then_some((next_probe, cue.end));
                p = cue.end;
            }
            continue;
        }
        if content_seen >= 1 {
            if let Some(cue) = leading_cue_at(words, p, rules) {
                // New clause; pull contiguous fillers in front of the cue
                // into it ("... just stay in the house").
                let mut back = p;
                while back > cur.start && is_skippable(rules, words[back - 1]) {
                    back -= 1;
                }
                cur.end = back;
                clauses.push(cur);
                cur = open_clause(back);
                cur.kind = Some(cue.kind);
                cur.fired.push(cue.fired);
                cur.frame = cue.is_frame.then_some((p, cue.end));
                content_seen = 0;
                p = cue.end;
                continue;
            }
        }
        if !is_skippable(rules, word) {
            content_seen += 1;
        }
        p += 1;
    }
    cur.end = n;
    // A clause with no cue yet may still be closed by a sentence ender.
    if cur.kind.is_none() {
        let last = words[n - 1];
        if let Some(suffix) = RuleSet::match_suffix(last, &rules.imperative_enders) {
            cur.kind = Some(ClauseKind::Requirement);
            cur.fired.push(FiredRule { rule: "imperative_ender", cue: suffix.to_string() });
        } else if let Some(suffix) = RuleSet::match_suffix(last, &rules.ph_enders) {
            cur.kind = Some(ClauseKind::Prohibition);
            cur.fired.push(FiredRule { rule: "ph_ender", cue: suffix.to_string() });
        }
    }
    clauses.push(cur);
    clauses
}

pub(crate) struct ClauseView {
    pub span: ClauseSpan,
    /// Token range of the leading cue frame to drop from content.
    pub frame: Option<(usize, usize)>,
    /// Position of a clause-final prohibitive connective to drop.
    pub trailing: Option<usize>,
}

/// Clause analysis used by the extractor: tagged spans plus the cue
/// positions that do not belong to the core content.
pub(crate) fn clause_views(tokens: &[Token], rules: &RuleSet) -> Vec<ClauseView> {
    let words = surfaces(tokens);
    analyze_clauses(&words, rules)
        .into_iter()
        .map(|c| ClauseView {
            span: ClauseSpan {
                start: c.start,
                end: c.end,
                // Untagged clauses only arise outside command inputs;
                // treat them as requirement clauses.
                kind: c.kind.unwrap_or(ClauseKind::Requirement),
            },
            frame: c.frame,
            trailing: c.trailing,
        })
        .collect()
}

/// Split a command utterance into ordered, disjoint PH/REQ clause spans.
pub fn split_clauses(tokens: &[Token], rules: &RuleSet) -> Vec<ClauseSpan> {
    clause_views(tokens, rules).into_iter().map(|v| v.span).collect()
}

// ---------------------------------------------------------------------------
// Question analysis.

struct QuestionFront {
    /// Index after fillers, auxiliaries, and embedded-question frames.
    probe: usize,
    aux: Option<FiredRule>,
    embedded: Vec<FiredRule>,
    declq: Option<FiredRule>,
}

fn question_front(words: &[&str], rules: &RuleSet) -> QuestionFront {
    let mut pos = skip_prefix(words, 0, rules);
    let mut front = QuestionFront { probe: pos, aux: None, embedded: Vec::new(), declq: None };
    if pos >= words.len() {
        return front;
    }
    let in_list = |list: &[String], w: &str| list.iter().any(|x| x == w);
    if in_list(&rules.aux_drop, words[pos]) || in_list(&rules.aux_reorder, words[pos]) {
        front.aux = Some(FiredRule { rule: "question_aux", cue: words[pos].to_string() });
        pos += 1;
    }
    // Embedded question frames: subject + predicate (+ optional "that").
    loop {
        if pos + 1 >= words.len() {
            break;
        }
        if in_list(&rules.embedded_subjects, words[pos])
            && in_list(&rules.question_predicates, words[pos + 1])
        {
            front.embedded.push(FiredRule {
                rule: "embedded_subject",
                cue: words[pos].to_string(),
            });
            front.embedded.push(FiredRule {
                rule: "question_predicate",
                cue: words[pos + 1].to_string(),
            });
            pos += 2;
            if pos < words.len() && words[pos] == "that" {
                pos += 1;
            }
        } else {
            break;
        }
    }
    if front.aux.is_none()
        && front.embedded.is_empty()
        && in_list(&rules.declq_subjects, words[pos])
    {
        front.declq = Some(FiredRule { rule: "declq_subject", cue: words[pos].to_string() });
    }
    front.probe = pos;
    front
}

pub(crate) struct WhMatch {
    pub rule_index: usize,
    pub start: usize,
    pub end: usize,
    pub cue: String,
}

/// Find a wh cue: at the probe position for wh-fronting languages, at any
/// position for wh-in-situ rule sets. Longest cue wins at a position.
pub(crate) fn find_wh(words: &[&str], probe: usize, rules: &RuleSet) -> Option<WhMatch> {
    let try_at = |pos: usize| -> Option<WhMatch> {
        let mut best: Option<WhMatch> = None;
        for (idx, rule) in rules.wh_rules.iter().enumerate() {
            let hit = if rule.prefix && !rule.cue.contains(' ') {
                (pos < words.len() && words[pos].starts_with(rule.cue.as_str()))
                    .then_some(pos + 1)
            } else {
                match_phrase_at(words, pos, &rule.cue)
            };
            if let Some(end) = hit {
                let better = match &best {
                    Some(b) => end > b.end,
                    None => true,
                };
                if better {
                    best = Some(WhMatch { rule_index: idx, start: pos, end, cue: rule.cue.clone() });
                }
            }
        }
        best
    };
    if rules.wh_in_situ {
        (0..words.len()).find_map(try_at)
    } else {
        try_at(probe)
    }
}

fn find_nominal_pattern<'a>(
    words: &[&str],
    start: usize,
    rules: &'a RuleSet,
) -> Option<(usize, usize, &'a crate::rules::NominalPattern)> {
    let mut best: Option<(usize, usize, &crate::rules::NominalPattern)> = None;
    for pat in &rules.nominal_question_patterns {
        if let Some(end) = match_phrase_at(words, start, &pat.pattern) {
            let better = match best {
                Some((_, best_end, _)) => end > best_end,
                None => true,
            };
            if better {
                best = Some((start, end, pat));
            }
        }
    }
    best
}

fn last_token_question_ender<'a>(words: &[&str], rules: &'a RuleSet) -> Option<&'a str> {
    words
        .last()
        .and_then(|w| RuleSet::match_suffix(w, &rules.question_enders))
}

// ---------------------------------------------------------------------------

/// Classify a normalized token sequence under the fixed priority order.
pub fn classify(tokens: &[Token], rules: &RuleSet) -> Result<ClassificationResult, ClassifyError> {
    if tokens.is_empty() {
        return Err(ClassifyError::EmptyUtterance);
    }
    let words = surfaces(tokens);

    // Command path: only when the first clause itself carries a command
    // cue. A mid-sentence imperative verb alone ("did i ever TELL you")
    // does not make a command.
    let clauses = analyze_clauses(&words, rules);
    if clauses.first().is_some_and(|c| c.kind.is_some()) {
        let mut trace = Vec::new();
        let mut spans = Vec::new();
        let mut has_ph = false;
        let mut has_req = false;
        for clause in &clauses {
            let kind = clause.kind.unwrap_or(ClauseKind::Requirement);
            match kind {
                ClauseKind::Prohibition => has_ph = true,
                ClauseKind::Requirement => has_req = true,
            }
            trace.extend(clause.fired.iter().cloned());
            spans.push(ClauseSpan { start: clause.start, end: clause.end, kind });
        }
        let label = if has_ph && has_req {
            SpeechActType::StrongRequirement
        } else if has_ph {
            SpeechActType::Prohibition
        } else {
            SpeechActType::Requirement
        };
        return Ok(ClassificationResult {
            label: UtteranceLabel::Directive(label),
            trace,
            clause_spans: spans,
        });
    }

    // Question path.
    let front = question_front(&words, rules);
    let wh = find_wh(&words, front.probe, rules);
    let nominal = find_nominal_pattern(&words, skip_leading(&words, 0, rules), rules);
    let ko_ender = last_token_question_ender(&words, rules);

    let mut evidence: Vec<FiredRule> = Vec::new();
    if let Some(aux) = &front.aux {
        evidence.push(aux.clone());
    }
    evidence.extend(front.embedded.iter().cloned());
    if let Some(declq) = &front.declq {
        evidence.push(declq.clone());
    }
    if let Some(suffix) = ko_ender {
        evidence.push(FiredRule { rule: "question_ender", cue: suffix.to_string() });
    }

    // Alternative question: the disjunction cue flanked by candidates,
    // plus any question evidence.
    let alt_cue = &rules.alternative.cue;
    if !alt_cue.is_empty() {
        let alt_pos = words
            .iter()
            .position(|w| w == alt_cue)
            .filter(|&k| k >= 1 && k + 1 < words.len());
        if let Some(_k) = alt_pos {
            let questionish =
                !evidence.is_empty() || wh.is_some() || nominal.is_some();
            if questionish {
                let mut trace = evidence;
                if let Some(wh) = &wh {
                    trace.push(FiredRule { rule: "wh_cue", cue: wh.cue.clone() });
                }
                trace.push(FiredRule { rule: "alternative_cue", cue: alt_cue.clone() });
                return Ok(ClassificationResult {
                    label: UtteranceLabel::Directive(SpeechActType::AlternativeQuestion),
                    trace,
                    clause_spans: Vec::new(),
                });
            }
        }
    }

    if let Some((_, _, pat)) = nominal {
        let mut trace = evidence;
        trace.push(FiredRule { rule: "nominal_question_pattern", cue: pat.pattern.clone() });
        return Ok(ClassificationResult {
            label: UtteranceLabel::Directive(SpeechActType::WhQuestion),
            trace,
            clause_spans: Vec::new(),
        });
    }
    if let Some(wh) = wh {
        let mut trace = evidence;
        trace.push(FiredRule { rule: "wh_cue", cue: wh.cue });
        return Ok(ClassificationResult {
            label: UtteranceLabel::Directive(SpeechActType::WhQuestion),
            trace,
            clause_spans: Vec::new(),
        });
    }
    if !evidence.is_empty() {
        return Ok(ClassificationResult {
            label: UtteranceLabel::Directive(SpeechActType::YesNoQuestion),
            trace: evidence,
            clause_spans: Vec::new(),
        });
    }

    Ok(ClassificationResult {
        label: UtteranceLabel::NonDirective,
        trace: Vec::new(),
        clause_spans: Vec::new(),
    })
}
