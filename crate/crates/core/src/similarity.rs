//! Sentence-pair similarity functions and the tiered comparator chain.
//!
//! All scores live in `[0, 1]`. The chain evaluates its tiers fast-first and
//! stops at the first tier whose score clears that tier's threshold.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::hash::Hash;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::textnorm::{expand_variants, remove_stopwords, tokenize, StopList, SynonymLexicon, TokenSeq};

/// A common contiguous run: `a[a_start..a_start+len] == b[b_start..b_start+len]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MatchingBlock {
    pub a_start: usize,
    pub b_start: usize,
    pub len: usize,
}

impl MatchingBlock {
    pub fn new(a_start: usize, b_start: usize, len: usize) -> Self {
        MatchingBlock { a_start, b_start, len }
    }
}

/// Longest common block inside `a[alo..ahi]` and `b[blo..bhi]`. Among
/// equally long blocks the one starting earliest in `a`, then earliest in
/// `b`, wins.
fn find_longest_match<T: Eq + Hash>(
    a: &[T],
    b2j: &HashMap<&T, Vec<usize>>,
    (alo, ahi): (usize, usize),
    (blo, bhi): (usize, usize),
    scratch: &mut LongestMatchScratch,
) -> MatchingBlock {
    let mut best = MatchingBlock::new(alo, blo, 0);
    let LongestMatchScratch { prev, cur, prev_touched, cur_touched } = scratch;
    for (i, item) in a.iter().enumerate().take(ahi).skip(alo) {
        if let Some(positions) = b2j.get(item) {
            for &j in positions {
                if j < blo {
                    continue;
                }
                if j >= bhi {
                    break;
                }
                // run length ending at (i, j), stored at j + 1
                let k = prev[j] + 1;
                cur[j + 1] = k;
                cur_touched.push(j + 1);
                if k > best.len {
                    best = MatchingBlock::new(i + 1 - k, j + 1 - k, k);
                }
            }
        }
        for &t in prev_touched.iter() {
            prev[t] = 0;
        }
        prev_touched.clear();
        std::mem::swap(prev, cur);
        std::mem::swap(prev_touched, cur_touched);
    }
    for &t in prev_touched.iter() {
        prev[t] = 0;
    }
    prev_touched.clear();
    best
}

struct LongestMatchScratch {
    prev: Vec<usize>,
    cur: Vec<usize>,
    prev_touched: Vec<usize>,
    cur_touched: Vec<usize>,
}

/// Recursive longest-block decomposition of `a` against `b`, returned in
/// increasing position order with adjacent blocks merged.
pub fn matching_blocks<T: Eq + Hash>(a: &[T], b: &[T]) -> Vec<MatchingBlock> {
    let mut b2j: HashMap<&T, Vec<usize>> = HashMap::new();
    for (j, item) in b.iter().enumerate() {
        b2j.entry(item).or_default().push(j);
    }
    let mut scratch = LongestMatchScratch {
        prev: vec![0; b.len() + 1],
        cur: vec![0; b.len() + 1],
        prev_touched: Vec::new(),
        cur_touched: Vec::new(),
    };

    let mut queue = vec![(0, a.len(), 0, b.len())];
    let mut blocks = Vec::new();
    while let Some((alo, ahi, blo, bhi)) = queue.pop() {
        let m = find_longest_match(a, &b2j, (alo, ahi), (blo, bhi), &mut scratch);
        if m.len == 0 {
            continue;
        }
        blocks.push(m);
        if alo < m.a_start && blo < m.b_start {
            queue.push((alo, m.a_start, blo, m.b_start));
        }
        if m.a_start + m.len < ahi && m.b_start + m.len < bhi {
            queue.push((m.a_start + m.len, ahi, m.b_start + m.len, bhi));
        }
    }
    blocks.sort_unstable();

    let mut merged: Vec<MatchingBlock> = Vec::with_capacity(blocks.len());
    for block in blocks {
        match merged.last_mut() {
            Some(last) if last.a_start + last.len == block.a_start && last.b_start + last.len == block.b_start => {
                last.len += block.len;
            }
            _ => merged.push(block),
        }
    }
    merged
}

/// `score = 2·matches / total`, where `total = |a| + |b|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioBreakdown {
    pub matches: usize,
    pub total: usize,
    pub score: f64,
}

impl RatioBreakdown {
    fn from_counts(matches: usize, total: usize) -> Self {
        let score = if total == 0 { 1.0 } else { 2.0 * matches as f64 / total as f64 };
        RatioBreakdown { matches, total, score }
    }
}

/// Matching-block ratio. Arguments are put in lexicographic order before
/// block-finding so the result does not depend on which side is which.
pub fn ratio<T: Ord + Hash>(a: &[T], b: &[T]) -> RatioBreakdown {
    let (first, second) = if a <= b { (a, b) } else { (b, a) };
    let matches = matching_blocks(first, second).iter().map(|m| m.len).sum();
    RatioBreakdown::from_counts(matches, a.len() + b.len())
}

/// Cheap upper bound on [`ratio`]: the multiset intersection size bounds the
/// number of matched elements.
fn quick_ratio_bound<T: Eq + Hash>(a: &[T], b_counts: &HashMap<&T, usize>, total: usize) -> f64 {
    if total == 0 {
        return 1.0;
    }
    let mut avail: HashMap<&T, usize> = HashMap::with_capacity(b_counts.len());
    let mut matches = 0usize;
    for x in a {
        let left = avail.entry(x).or_insert_with(|| b_counts.get(x).copied().unwrap_or(0));
        if *left > 0 {
            *left -= 1;
            matches += 1;
        }
    }
    2.0 * matches as f64 / total as f64
}

fn counts<T: Eq + Hash>(items: &[T]) -> HashMap<&T, usize> {
    let mut map = HashMap::new();
    for x in items {
        *map.entry(x).or_insert(0) += 1;
    }
    map
}

/// Element kind used by the ratio-based comparators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Granularity {
    /// Characters of the space-joined (filtered) token sequence.
    #[default]
    Chars,
    Tokens,
}

impl FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chars" => Ok(Granularity::Chars),
            "tokens" => Ok(Granularity::Tokens),
            other => Err(Error::Config(format!("unknown granularity `{other}` (expected chars|tokens)"))),
        }
    }
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Granularity::Chars => "chars",
            Granularity::Tokens => "tokens",
        })
    }
}

/// Ratio of two token sequences at the given granularity.
pub fn seq_ratio(a: &TokenSeq, b: &TokenSeq, granularity: Granularity) -> RatioBreakdown {
    match granularity {
        Granularity::Chars => {
            let a: Vec<char> = a.joined().chars().collect();
            let b: Vec<char> = b.joined().chars().collect();
            ratio(&a, &b)
        }
        Granularity::Tokens => ratio(&a.tokens, &b.tokens),
    }
}

pub(crate) fn multiset_overlap(a: &[String], b: &[String]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 1.0,
        (true, false) | (false, true) => return 0.0,
        _ => {}
    }
    let mut avail = counts(b);
    let mut common = 0usize;
    for x in a {
        if let Some(n) = avail.get_mut(x) {
            if *n > 0 {
                *n -= 1;
                common += 1;
            }
        }
    }
    2.0 * common as f64 / (a.len() + b.len()) as f64
}

/// `2·|A ∩ B| / (|A| + |B|)` over the multisets of content words left after
/// stopword and punctuation removal.
pub fn token_overlap(a: &TokenSeq, b: &TokenSeq, stoplist: &StopList) -> f64 {
    let a = remove_stopwords(a, stoplist);
    let b = remove_stopwords(b, stoplist);
    multiset_overlap(&a.tokens, &b.tokens)
}

/// Best [`seq_ratio`] of any synonym variant of `a` against `b`.
pub fn synonym_ratio(
    a: &TokenSeq,
    b: &TokenSeq,
    lexicon: &SynonymLexicon,
    cap: usize,
    granularity: Granularity,
) -> f64 {
    let variants = expand_variants(a, lexicon, cap);
    match granularity {
        Granularity::Chars => {
            let b: Vec<char> = b.joined().chars().collect();
            best_variant_ratio(variants.iter().map(|v| v.joined().chars().collect::<Vec<char>>()), &b)
        }
        Granularity::Tokens => best_variant_ratio(variants.into_iter().map(|v| v.tokens), &b.tokens),
    }
}

fn best_variant_ratio<T, I>(variants: I, b: &[T]) -> f64
where
    T: Ord + Hash,
    I: IntoIterator<Item = Vec<T>>,
{
    let b_counts = counts(b);
    let mut best = f64::NEG_INFINITY;
    for v in variants {
        let total = v.len() + b.len();
        if best >= 1.0 || (best.is_finite() && quick_ratio_bound(&v, &b_counts, total) <= best) {
            continue;
        }
        best = best.max(ratio(&v, b).score);
    }
    best.max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComparatorId {
    Overlap,
    Ratio,
    SynonymRatio,
}

impl ComparatorId {
    pub const ALL: [ComparatorId; 3] = [ComparatorId::Overlap, ComparatorId::Ratio, ComparatorId::SynonymRatio];

    pub fn name(self) -> &'static str {
        match self {
            ComparatorId::Overlap => "overlap",
            ComparatorId::Ratio => "ratio",
            ComparatorId::SynonymRatio => "synonym_ratio",
        }
    }
}

impl FromStr for ComparatorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ComparatorId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown comparator `{s}` (expected overlap|ratio|synonym_ratio)")))
    }
}

impl fmt::Display for ComparatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tier {
    pub comparator: ComparatorId,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparatorChain {
    tiers: Vec<Tier>,
    final_threshold: f64,
    granularity: Granularity,
}

fn check_unit(what: &str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Config(format!("{what} {x} is outside [0, 1]")))
    }
}

impl ComparatorChain {
    pub fn new(tiers: Vec<Tier>, final_threshold: f64, granularity: Granularity) -> Result<Self> {
        if tiers.is_empty() {
            return Err(Error::Config("comparator chain needs at least one tier".into()));
        }
        for tier in &tiers {
            check_unit(&format!("threshold of tier `{}`", tier.comparator), tier.threshold)?;
        }
        check_unit("final_threshold", final_threshold)?;
        Ok(ComparatorChain { tiers, final_threshold, granularity })
    }

    pub fn tiers(&self) -> &[Tier] {
        &self.tiers
    }

    pub fn final_threshold(&self) -> f64 {
        self.final_threshold
    }

    pub fn granularity(&self) -> Granularity {
        self.granularity
    }

    pub fn with_final_threshold(mut self, final_threshold: f64) -> Result<Self> {
        check_unit("final_threshold", final_threshold)?;
        self.final_threshold = final_threshold;
        Ok(self)
    }

    /// Parses `tier <comparator> <threshold>` lines (in order),
    /// `final_threshold <x>` and `granularity chars|tokens`. Settings not
    /// given keep the default chain's values; any `tier` line replaces the
    /// default tier list.
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let default = ComparatorChain::default();
        let mut tiers = Vec::new();
        let mut final_threshold = default.final_threshold;
        let mut granularity = default.granularity;
        for (idx, line) in text.lines().enumerate() {
            let at = |msg: String| Error::parse(path, idx + 1, msg);
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["tier", comparator, threshold] => {
                    let comparator = comparator.parse().map_err(|e: Error| at(e.to_string()))?;
                    let threshold = parse_unit(threshold).map_err(at)?;
                    tiers.push(Tier { comparator, threshold });
                }
                ["final_threshold", x] => final_threshold = parse_unit(x).map_err(at)?,
                ["granularity", g] => granularity = g.parse().map_err(|e: Error| at(e.to_string()))?,
                _ => return Err(at(format!("unrecognised chain setting `{line}`"))),
            }
        }
        if tiers.is_empty() {
            tiers = default.tiers;
        }
        ComparatorChain::new(tiers, final_threshold, granularity).map_err(|e| Error::parse(path, 0, e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ComparatorChain::parse(&text, path)
    }

    /// Serialises back into the config-file format.
    pub fn to_config(&self) -> String {
        let mut out = String::new();
        for t in &self.tiers {
            out.push_str(&format!("tier {} {}\n", t.comparator, t.threshold));
        }
        out.push_str(&format!("final_threshold {}\n", self.final_threshold));
        out.push_str(&format!("granularity {}\n", self.granularity));
        out
    }
}

fn parse_unit(s: &str) -> std::result::Result<f64, String> {
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(format!("threshold {x} is outside [0, 1]"))
    }
}

impl Default for ComparatorChain {
    fn default() -> Self {
        ComparatorChain {
            tiers: vec![
                Tier { comparator: ComparatorId::Overlap, threshold: 0.99 },
                Tier { comparator: ComparatorId::Ratio, threshold: 0.90 },
                Tier { comparator: ComparatorId::SynonymRatio, threshold: 0.75 },
            ],
            final_threshold: 0.55,
            granularity: Granularity::Chars,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainDecision {
    pub accepted: bool,
    pub score: f64,
    pub tier: usize,
    pub comparator: ComparatorId,
}

/// A sentence preprocessed once for repeated comparison: case-folded
/// tokens, and the content tokens left after stopword and punctuation
/// removal.
#[derive(Debug, Clone, PartialEq)]
pub struct Sentence {
    pub raw: String,
    pub tokens: TokenSeq,
    pub content: TokenSeq,
}

impl Sentence {
    pub fn new(raw: &str, stoplist: &StopList) -> Self {
        let tokens = tokenize(raw, true);
        let content = remove_stopwords(&tokens, stoplist);
        Sentence { raw: raw.to_string(), tokens, content }
    }
}

/// Source of comparator scores for the chain.
pub trait Comparators: Sync {
    fn prepare(&self, raw: &str) -> Sentence;

    fn score(&self, id: ComparatorId, granularity: Granularity, a: &Sentence, b: &Sentence) -> f64;
}

/// The built-in comparators over stopword-filtered sentences.
#[derive(Debug, Clone)]
pub struct TextComparators {
    pub stoplist: StopList,
    pub lexicon: SynonymLexicon,
    pub variant_cap: usize,
    /// Expand synonyms on both sides instead of only the first argument.
    pub expand_both: bool,
}

impl TextComparators {
    pub const DEFAULT_VARIANT_CAP: usize = 64;

    pub fn new(stoplist: StopList, lexicon: SynonymLexicon) -> Self {
        TextComparators {
            stoplist,
            lexicon,
            variant_cap: Self::DEFAULT_VARIANT_CAP,
            expand_both: false,
        }
    }
}

impl Comparators for TextComparators {
    fn prepare(&self, raw: &str) -> Sentence {
        Sentence::new(raw, &self.stoplist)
    }

    fn score(&self, id: ComparatorId, granularity: Granularity, a: &Sentence, b: &Sentence) -> f64 {
        match id {
            ComparatorId::Overlap => multiset_overlap(&a.content.tokens, &b.content.tokens),
            ComparatorId::Ratio => seq_ratio(&a.content, &b.content, granularity).score,
            ComparatorId::SynonymRatio => {
                let forward = synonym_ratio(&a.content, &b.content, &self.lexicon, self.variant_cap, granularity);
                if self.expand_both && forward < 1.0 {
                    forward.max(synonym_ratio(&b.content, &a.content, &self.lexicon, self.variant_cap, granularity))
                } else {
                    forward
                }
            }
        }
    }
}

/// Runs the tiers in order and accepts at the first tier whose score reaches
/// its threshold. Otherwise the last tier's score is held against the
/// chain's final threshold.
pub fn chain_evaluate<C: Comparators + ?Sized>(
    a: &Sentence,
    b: &Sentence,
    chain: &ComparatorChain,
    comparators: &C,
) -> ChainDecision {
    let mut last = None;
    for (idx, tier) in chain.tiers.iter().enumerate() {
        let score = comparators.score(tier.comparator, chain.granularity, a, b);
        debug_assert!((0.0..=1.0).contains(&score), "{} returned {score}", tier.comparator);
        if score >= tier.threshold {
            return ChainDecision { accepted: true, score, tier: idx, comparator: tier.comparator };
        }
        last = Some((idx, tier.comparator, score));
    }
    let (tier, comparator, score) = last.expect("chain has at least one tier");
    ChainDecision { accepted: score >= chain.final_threshold, score, tier, comparator }
}
