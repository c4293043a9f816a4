//! Tokenization, stopword removal and stemming.

mod porter;

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use porter::stem_word;

use crate::error::{Error, Result};

const EMBEDDED_STOPWORDS: &str = include_str!("../../resources/stopwords_en.txt");

/// Which preprocessing steps run before indexing. Applied identically to
/// documents and queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PreprocessConfig {
    pub stemming: bool,
    pub stopping: bool,
}

impl PreprocessConfig {
    pub const NONE: Self = Self::new(false, false);
    pub const STEM: Self = Self::new(true, false);
    pub const STOP: Self = Self::new(false, true);
    pub const STEM_STOP: Self = Self::new(true, true);

    pub const fn new(stemming: bool, stopping: bool) -> Self {
        Self { stemming, stopping }
    }

    /// The four configurations in canonical order: none, stem, stop, both.
    pub const fn all() -> [Self; 4] {
        [Self::NONE, Self::STEM, Self::STOP, Self::STEM_STOP]
    }

    /// Position in [`PreprocessConfig::all`].
    pub fn ordinal(self) -> usize {
        match (self.stemming, self.stopping) {
            (false, false) => 0,
            (true, false) => 1,
            (false, true) => 2,
            (true, true) => 3,
        }
    }

    pub fn name(self) -> &'static str {
        ["none", "stem", "stop", "stemstop"][self.ordinal()]
    }
}

impl Ord for PreprocessConfig {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.ordinal().cmp(&other.ordinal())
    }
}

impl PartialOrd for PreprocessConfig {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PreprocessConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PreprocessConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::all()
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown preprocessing `{s}`")))
    }
}

/// Lowercase terms, none empty, none containing whitespace.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TokenStream(Vec<String>);

impl TokenStream {
    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn into_tokens(self) -> Vec<String> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }
}

impl<S: Into<String>> FromIterator<S> for TokenStream {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        TokenStream(
            iter.into_iter()
                .map(Into::into)
                .filter(|t: &String| !t.is_empty() && !t.chars().any(char::is_whitespace))
                .collect(),
        )
    }
}

/// Lowercases and splits on every non-alphanumeric character, dropping
/// single-character and purely numeric tokens.
pub fn tokenize(text: &str) -> TokenStream {
    TokenStream(
        text.to_lowercase()
            .split(|c: char| !c.is_alphanumeric())
            .filter(|t| t.chars().count() >= 2 && !t.chars().all(char::is_numeric))
            .map(str::to_string)
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stopwords {
    words: HashSet<String>,
}

impl Stopwords {
    /// Parses one word per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_lowercase)
            .collect();
        Stopwords { words }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    /// The list shipped with the crate.
    pub fn embedded() -> &'static Stopwords {
        static LIST: OnceLock<Stopwords> = OnceLock::new();
        LIST.get_or_init(|| Stopwords::parse(EMBEDDED_STOPWORDS))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Sorted word list, for fingerprinting.
    pub fn sorted(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.words.iter().map(String::as_str).collect();
        v.sort_unstable();
        v
    }
}

impl Default for Stopwords {
    fn default() -> Self {
        Self::embedded().clone()
    }
}

pub fn remove_stopwords(stream: TokenStream) -> TokenStream {
    remove_stopwords_with(stream, Stopwords::embedded())
}

pub fn remove_stopwords_with(stream: TokenStream, stopwords: &Stopwords) -> TokenStream {
    TokenStream(
        stream
            .0
            .into_iter()
            .filter(|t| !stopwords.contains(t))
            .collect(),
    )
}

pub fn stem(stream: TokenStream) -> TokenStream {
    TokenStream(stream.0.iter().map(|t| stem_word(t)).collect())
}

/// Tokenize, then drop stopwords if enabled, then stem if enabled.
/// Stopwords are matched against surface forms.
pub fn preprocess(text: &str, config: PreprocessConfig) -> TokenStream {
    preprocess_with(text, config, Stopwords::embedded())
}

pub fn preprocess_with(text: &str, config: PreprocessConfig, stopwords: &Stopwords) -> TokenStream {
    let mut stream = tokenize(text);
    if config.stopping {
        stream = remove_stopwords_with(stream, stopwords);
    }
    if config.stemming {
        stream = stem(stream);
    }
    stream
}
