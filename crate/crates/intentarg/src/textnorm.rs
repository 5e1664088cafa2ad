//! Text normalization and tokenization.
//!
//! Normalization lowercases (a no-op for scripts without case), strips a
//! fixed punctuation set, and collapses whitespace. Tokenization defaults
//! to whitespace splitting; morpheme-level analyzers plug in through an
//! adapter registry so the toolkit stays independent of any particular
//! morphological analyzer.

use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

/// Exact set of characters removed by [`normalize`]. The corpus format is
/// punctuation-free, so these never survive into sentences or arguments.
/// The curly quote variants are included because transcribed text uses
/// them interchangeably with the ASCII forms.
pub const PUNCTUATION_STRIP_SET: &[char] = &[
    '.', ',', '?', '!', ';', ':', '"', '\'', '(', ')', '[', ']', '\u{2026}', // …
    '\u{2019}', '\u{2018}', '\u{201c}', '\u{201d}',
];

/// One token of a normalized utterance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    /// 0-based position in the token sequence.
    pub index: usize,
}

impl Token {
    pub fn new(surface: impl Into<String>, index: usize) -> Token {
        Token {
            surface: surface.into(),
            index,
        }
    }
}

/// Which tokenizer to run on normalized text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnalyzerSpec {
    /// Always available; splits on whitespace.
    Whitespace,
    /// A registered adapter, e.g. a morphological analyzer.
    External(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TokenizeError {
    #[error("analyzer not registered: {0}")]
    AnalyzerUnavailable(String),
}

/// Lowercase, strip the fixed punctuation set, collapse whitespace runs to
/// single spaces, and trim. Total function; idempotent.
pub fn normalize(text: &str) -> String {
    let lowered = text.to_lowercase();
    let stripped: String = lowered
        .chars()
        .filter(|c| !PUNCTUATION_STRIP_SET.contains(c))
        .collect();
    stripped.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// A pluggable tokenizer. Implementations receive normalized text and
/// return token surfaces in order.
pub trait AnalyzerAdapter: Send + Sync {
    fn split(&self, text: &str) -> Vec<String>;
    /// Adapters that wrap non-reentrant native libraries should return
    /// false so batch drivers know to serialize calls.
    fn thread_safe(&self) -> bool {
        true
    }
}

impl<F> AnalyzerAdapter for F
where
    F: Fn(&str) -> Vec<String> + Send + Sync,
{
    fn split(&self, text: &str) -> Vec<String> {
        self(text)
    }
}

/// Registry mapping adapter names to tokenizer implementations.
#[derive(Default, Clone)]
pub struct AnalyzerRegistry {
    adapters: HashMap<String, Arc<dyn AnalyzerAdapter>>,
}

impl AnalyzerRegistry {
    pub fn new() -> AnalyzerRegistry {
        AnalyzerRegistry::default()
    }

    pub fn register(&mut self, name: impl Into<String>, adapter: Arc<dyn AnalyzerAdapter>) {
        self.adapters.insert(name.into(), adapter);
    }

    pub fn get(&self, name: &str) -> Option<&Arc<dyn AnalyzerAdapter>> {
        self.adapters.get(name)
    }
}

impl std::fmt::Debug for AnalyzerRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnalyzerRegistry")
            .field("adapters", &self.adapters.keys().collect::<Vec<_>>())
            .finish()
    }
}

/// Tokenize normalized text. The whitespace analyzer needs no registry;
/// external analyzers are looked up by name.
pub fn tokenize_with(
    text: &str,
    analyzer: &AnalyzerSpec,
    registry: &AnalyzerRegistry,
) -> Result<Vec<Token>, TokenizeError> {
    let surfaces: Vec<String> = match analyzer {
        AnalyzerSpec::Whitespace => text.split_whitespace().map(str::to_string).collect(),
        AnalyzerSpec::External(name) => {
            let adapter = registry
                .get(name)
                .ok_or_else(|| TokenizeError::AnalyzerUnavailable(name.clone()))?;
            adapter.split(text)
        }
    };
    Ok(surfaces
        .into_iter()
        .enumerate()
        .map(|(index, surface)| Token { surface, index })
        .collect())
}

/// Whitespace tokenization of normalized text.
pub fn tokenize(text: &str) -> Vec<Token> {
    tokenize_with(text, &AnalyzerSpec::Whitespace, &AnalyzerRegistry::new())
        .expect("whitespace analyzer is always available")
}

/// Convenience: normalize then whitespace-tokenize, returning surfaces.
pub fn normalized_surfaces(text: &str) -> Vec<String> {
    normalize(text)
        .split_whitespace()
        .map(str::to_string)
        .collect()
}

/// Reassemble token surfaces with single spaces.
pub fn join_tokens(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(|t| t.surface.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    #[test]
    fn strips_punctuation_and_lowercases() {
        assert_eq!(
            normalize("Why don't you just call the police?"),
            "why dont you just call the police"
        );
    }

    #[test]
    fn empty_input_stays_empty() {
        assert_eq!(normalize(""), "");
        assert!(tokenize("").is_empty());
    }

    #[test]
    fn already_clean_text_passes_through() {
        assert_eq!(normalize("put your right foot there"), "put your right foot there");
    }

    #[test]
    fn korean_text_is_untouched_by_case_folding() {
        let s = "백화점 세일은 미리 가서 대기하기";
        assert_eq!(normalize(s), s);
        assert_eq!(tokenize(s).len(), 5);
    }

    #[test]
    fn whitespace_tokens_carry_consecutive_indices() {
        let tokens = tokenize("not to pick the speaker up");
        let surfaces: Vec<&str> = tokens.iter().map(|t| t.surface.as_str()).collect();
        assert_eq!(surfaces, ["not", "to", "pick", "the", "speaker", "up"]);
        for (i, t) in tokens.iter().enumerate() {
            assert_eq!(t.index, i);
        }
    }

    #[test]
    fn external_analyzer_must_be_registered() {
        let registry = AnalyzerRegistry::new();
        let err = tokenize_with("a b", &AnalyzerSpec::External("mecab".into()), &registry)
            .unwrap_err();
        assert_eq!(err, TokenizeError::AnalyzerUnavailable("mecab".into()));
    }

    #[test]
    fn registered_adapter_is_used() {
        let mut registry = AnalyzerRegistry::new();
        // Toy morpheme stand-in: splits each whitespace token into chars.
        registry.register(
            "chars",
            Arc::new(|text: &str| {
                text.split_whitespace()
                    .flat_map(|w| w.chars().map(|c| c.to_string()))
                    .collect::<Vec<_>>()
            }),
        );
        let tokens =
            tokenize_with("ab c", &AnalyzerSpec::External("chars".into()), &registry).unwrap();
        let surfaces: Vec<&str> = tokens.iter().map(|t| t.surface.as_str()).collect();
        assert_eq!(surfaces, ["a", "b", "c"]);
    }

    fn random_raw_text(rng: &mut SplitMix64) -> String {
        let pool = [
            "Hello,", "world!", "don't", "go;", "OUT", "(there)", "why?", "지금",
            "가지", "말고", "…", "a", "\"b\"", "c's", "[x]", "y:z",
        ];
        let len = rng.next_below(12) as usize;
        (0..len)
            .map(|_| pool[rng.next_below(pool.len() as u64) as usize])
            .collect::<Vec<_>>()
            .join(" ")
    }

    #[test]
    fn normalize_is_idempotent_and_tokens_round_trip() {
        let mut rng = SplitMix64::new(99);
        for _ in 0..500 {
            let raw = random_raw_text(&mut rng);
            let once = normalize(&raw);
            assert_eq!(normalize(&once), once, "idempotence failed on {raw:?}");
            let tokens = tokenize(&once);
            assert_eq!(join_tokens(&tokens), once, "round trip failed on {raw:?}");
            for t in &tokens {
                assert!(!t.surface.is_empty());
                assert!(!t.surface.chars().any(char::is_whitespace));
                assert!(!t.surface.chars().any(|c| PUNCTUATION_STRIP_SET.contains(&c)));
            }
        }
    }
}
