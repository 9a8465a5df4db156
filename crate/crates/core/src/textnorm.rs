//! Tokenization, stopword removal, suffix stemming and synonym variants.
//!
//! Everything here is pure and operates on already-loaded text, so the
//! similarity functions can prepare a sentence once and compare it many
//! times.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

const EN_STOPWORDS: &str = include_str!("../data/stopwords/en.txt");
const PL_STOPWORDS: &str = include_str!("../data/stopwords/pl.txt");

/// A tokenized sentence together with the raw text it came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TokenSeq {
    pub tokens: Vec<String>,
    pub original: String,
}

impl TokenSeq {
    pub fn from_tokens<I, S>(tokens: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        let original = tokens.join(" ");
        TokenSeq { tokens, original }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Tokens joined by single spaces.
    pub fn joined(&self) -> String {
        self.tokens.join(" ")
    }

    fn with_tokens(&self, tokens: Vec<String>) -> Self {
        TokenSeq {
            tokens,
            original: self.original.clone(),
        }
    }
}

pub fn is_punct_char(c: char) -> bool {
    !c.is_alphanumeric()
}

/// A token made only of non-alphanumeric characters.
pub fn is_punctuation(token: &str) -> bool {
    token.chars().all(is_punct_char)
}

pub fn fold(s: &str) -> String {
    s.to_lowercase()
}

/// Splits on Unicode whitespace and peels leading and trailing
/// punctuation off every chunk, one token per punctuation character.
/// Inner punctuation (`don't`, `1-55164`) stays attached.
pub fn tokenize(sentence: &str, fold_case: bool) -> TokenSeq {
    let mut tokens = Vec::new();
    for chunk in sentence.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let lead = chars.iter().take_while(|c| is_punct_char(**c)).count();
        if lead == chars.len() {
            tokens.extend(chars.iter().map(|c| c.to_string()));
            continue;
        }
        let trail = chars.iter().rev().take_while(|c| is_punct_char(**c)).count();
        tokens.extend(chars[..lead].iter().map(|c| c.to_string()));
        let core: String = chars[lead..chars.len() - trail].iter().collect();
        tokens.push(if fold_case { fold(&core) } else { core });
        tokens.extend(chars[chars.len() - trail..].iter().map(|c| c.to_string()));
    }
    TokenSeq {
        tokens,
        original: sentence.to_string(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopList {
    words: HashSet<String>,
    pub lang: String,
}

impl StopList {
    pub fn new<I, S>(lang: &str, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopList {
            words: words.into_iter().map(|w| fold(w.as_ref().trim())).collect(),
            lang: lang.to_string(),
        }
    }

    pub fn empty() -> Self {
        StopList::default()
    }

    pub fn english() -> Self {
        StopList::parse("en", EN_STOPWORDS)
    }

    pub fn polish() -> Self {
        StopList::parse("pl", PL_STOPWORDS)
    }

    /// Shipped default for a language tag, or an empty list.
    pub fn for_lang(lang: &str) -> Self {
        match lang {
            "en" => StopList::english(),
            "pl" => StopList::polish(),
            _ => StopList::new(lang, std::iter::empty::<&str>()),
        }
    }

    /// One word per line, `#` starts a comment line.
    pub fn parse(lang: &str, text: &str) -> Self {
        let words = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        StopList::new(lang, words)
    }

    pub fn load(path: impl AsRef<Path>, lang: &str) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(StopList::parse(lang, &text))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word) || self.words.contains(&fold(word))
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Drops stopwords and punctuation tokens, keeping order.
pub fn remove_stopwords(seq: &TokenSeq, stoplist: &StopList) -> TokenSeq {
    let kept = seq
        .tokens
        .iter()
        .filter(|t| !is_punctuation(t) && !stoplist.contains(t))
        .cloned()
        .collect();
    seq.with_tokens(kept)
}

/// Case-folded head word to an ordered, duplicate-free synonym list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynonymLexicon {
    entries: HashMap<String, Vec<String>>,
}

impl SynonymLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds synonyms for `word`, merging with any existing entry. Self
    /// references are dropped.
    pub fn insert<I, S>(&mut self, word: &str, synonyms: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let head = fold(word.trim());
        let list = self.entries.entry(head.clone()).or_default();
        for syn in synonyms {
            let syn = fold(syn.as_ref().trim());
            if syn.is_empty() || syn == head || list.contains(&syn) {
                continue;
            }
            list.push(syn);
        }
        if list.is_empty() {
            self.entries.remove(&head);
        }
    }

    pub fn synonyms(&self, word: &str) -> &[String] {
        self.entries.get(word).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn are_synonyms(&self, a: &str, b: &str) -> bool {
        self.synonyms(a).iter().any(|s| s == b) || self.synonyms(b).iter().any(|s| s == a)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `word<TAB>syn1,syn2,...` per line. Blank lines and `#` comments are
    /// skipped; repeated head words merge.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut lexicon = SynonymLexicon::new();
        for (idx, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (head, rest) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(path, idx + 1, "expected `word<TAB>syn1,syn2,...`"))?;
            if head.trim().is_empty() || head.trim().contains(char::is_whitespace) {
                return Err(Error::parse(path, idx + 1, "head word must be a single token"));
            }
            let syns: Vec<&str> = rest.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            if let Some(bad) = syns.iter().find(|s| s.contains(char::is_whitespace)) {
                return Err(Error::parse(
                    path,
                    idx + 1,
                    format!("synonym `{bad}` contains whitespace"),
                ));
            }
            lexicon.insert(head, syns);
        }
        Ok(lexicon)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SynonymLexicon::parse(&text, path)
    }
}

/// The original sequence followed by every single-token synonym
/// substitution, position-major, truncated to `cap` entries (`cap` of 0 is
/// treated as 1).
pub fn expand_variants(sentence: &TokenSeq, lexicon: &SynonymLexicon, cap: usize) -> Vec<TokenSeq> {
    let cap = cap.max(1);
    let mut out = vec![sentence.clone()];
    'positions: for (pos, token) in sentence.tokens.iter().enumerate() {
        for syn in lexicon.synonyms(token) {
            if out.len() >= cap {
                break 'positions;
            }
            let mut tokens = sentence.tokens.clone();
            tokens[pos] = syn.clone();
            out.push(sentence.with_tokens(tokens));
        }
    }
    out
}

/// Suffix-stripping stemmer. The longest listed suffix whose removal leaves
/// at least `min_stem` characters is stripped, repeatedly, until none applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stemmer {
    suffixes: Vec<String>,
    min_stem: usize,
}

impl Stemmer {
    pub fn new<I, S>(suffixes: I, min_stem: usize) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut suffixes: Vec<String> = suffixes.into_iter().map(Into::into).filter(|s| !s.is_empty()).collect();
        // longest first, ties alphabetical
        suffixes.sort_by(|a, b| b.chars().count().cmp(&a.chars().count()).then_with(|| a.cmp(b)));
        suffixes.dedup();
        Stemmer { suffixes, min_stem }
    }

    pub fn english() -> Self {
        Stemmer::new(["s", "es", "ed", "ing"], 3)
    }

    pub fn stem(&self, token: &str) -> String {
        let mut current = token.to_string();
        loop {
            match self.strip_once(&current) {
                Some(next) => current = next,
                None => return current,
            }
        }
    }

    fn strip_once(&self, token: &str) -> Option<String> {
        let len = token.chars().count();
        self.suffixes.iter().find_map(|suffix| {
            let slen = suffix.chars().count();
            if token.ends_with(suffix.as_str()) && len >= slen + self.min_stem {
                Some(token[..token.len() - suffix.len()].to_string())
            } else {
                None
            }
        })
    }
}

impl Default for Stemmer {
    fn default() -> Self {
        Stemmer::english()
    }
}

/// Stems with the default English table.
pub fn stem(token: &str) -> String {
    Stemmer::english().stem(token)
}
