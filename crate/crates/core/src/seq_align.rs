//! Monotone sentence alignment of two comparable documents.
//!
//! Alignments maximise `Σ likelihood(pair) − gap_penalty · #gaps` over
//! non-crossing one-to-one pairings. Two engines produce the same
//! alignment: a full dynamic program, and an A* search that only asks the
//! scorer about cells it actually explores.
//!
//! Objective arithmetic is done in fixed point (`SCALE` units per 1.0) so
//! both engines see bit-identical path values and break ties the same way.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::similarity::{chain_evaluate, ComparatorChain, Comparators, TextComparators};
use crate::textnorm::{remove_stopwords, tokenize, StopList};

const SCALE: f64 = 1e12;

fn fixed(x: f64) -> i64 {
    (x * SCALE).round() as i64
}

/// Likelihood in `[0, 1]` that two sentences translate each other.
pub trait PairScorer: Sync {
    fn score(&self, a: &str, b: &str) -> f64;
}

impl<F> PairScorer for F
where
    F: Fn(&str, &str) -> f64 + Sync,
{
    fn score(&self, a: &str, b: &str) -> f64 {
        self(a, b)
    }
}

/// Dictionary-driven scorer: every content word of `a` contributes its best
/// translation probability into the words of `b`; the sum is divided by the
/// number of content words in `a`.
///
/// Content words of every sentence seen are cached, since an alignment
/// scores each sentence against many others.
#[derive(Debug, Default)]
pub struct LexiconScorer {
    dictionary: HashMap<String, HashMap<String, f64>>,
    src_stop: StopList,
    tgt_stop: StopList,
    src_cache: RwLock<HashMap<String, Arc<[String]>>>,
    tgt_cache: RwLock<HashMap<String, Arc<[String]>>>,
}

fn content_words(cache: &RwLock<HashMap<String, Arc<[String]>>>, stop: &StopList, sentence: &str) -> Arc<[String]> {
    if let Some(hit) = cache.read().expect("cache lock").get(sentence) {
        return Arc::clone(hit);
    }
    let words: Arc<[String]> = remove_stopwords(&tokenize(sentence, true), stop).tokens.into();
    cache
        .write()
        .expect("cache lock")
        .entry(sentence.to_string())
        .or_insert(words)
        .clone()
}

impl LexiconScorer {
    pub fn new(src_stop: StopList, tgt_stop: StopList) -> Self {
        LexiconScorer {
            src_stop,
            tgt_stop,
            ..Default::default()
        }
    }

    /// Adds a translation; repeated pairs keep the higher probability.
    pub fn insert(&mut self, src: &str, tgt: &str, prob: f64) {
        let slot = self
            .dictionary
            .entry(src.to_lowercase())
            .or_default()
            .entry(tgt.to_lowercase())
            .or_insert(prob);
        *slot = slot.max(prob);
    }

    /// Reads `src_word<TAB>tgt_word<TAB>prob` rows.
    pub fn parse_dictionary(&mut self, text: &str, path: &Path) -> Result<()> {
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::parse(path, idx + 1, msg);
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            let [src, tgt, prob] = fields.as_slice() else {
                return Err(err("expected `src_word<TAB>tgt_word<TAB>prob`".into()));
            };
            if src.is_empty() || tgt.is_empty() {
                return Err(err("empty dictionary word".into()));
            }
            let prob: f64 = prob.parse().map_err(|_| err(format!("`{prob}` is not a number")))?;
            if !(0.0..=1.0).contains(&prob) {
                return Err(err(format!("probability {prob} is outside [0, 1]")));
            }
            self.insert(src, tgt, prob);
        }
        Ok(())
    }

    pub fn load_dictionary(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.parse_dictionary(&text, path)
    }
}

impl PairScorer for LexiconScorer {
    fn score(&self, a: &str, b: &str) -> f64 {
        let a = content_words(&self.src_cache, &self.src_stop, a);
        if a.is_empty() {
            return 0.0;
        }
        let b = content_words(&self.tgt_cache, &self.tgt_stop, b);
        let total: f64 = a
            .iter()
            .map(|w| {
                self.dictionary.get(w).map_or(0.0, |row| {
                    b.iter()
                        .filter_map(|t| row.get(t))
                        .fold(0.0, |acc: f64, p| acc.max(*p))
                })
            })
            .sum();
        (total / a.len() as f64).clamp(0.0, 1.0)
    }
}

/// Scores pairs with a comparator chain; useful when one document has been
/// translated into the other's language.
pub struct ChainScorer {
    pub chain: ComparatorChain,
    pub comparators: TextComparators,
}

impl PairScorer for ChainScorer {
    fn score(&self, a: &str, b: &str) -> f64 {
        let (a, b) = (self.comparators.prepare(a), self.comparators.prepare(b));
        chain_evaluate(&a, &b, &self.chain, &self.comparators).score
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlignedPair {
    pub i: usize,
    pub j: usize,
    pub likelihood: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Alignment {
    pub pairs: Vec<AlignedPair>,
    pub gaps_a: Vec<usize>,
    pub gaps_b: Vec<usize>,
}

impl Alignment {
    pub fn objective(&self, gap_penalty: f64) -> f64 {
        self.pairs.iter().map(|p| p.likelihood).sum::<f64>()
            - gap_penalty * (self.gaps_a.len() + self.gaps_b.len()) as f64
    }

    /// Checks monotonicity and that pairs and gaps partition both index sets.
    pub fn is_consistent(&self, n: usize, m: usize) -> bool {
        let monotone = self.pairs.windows(2).all(|w| w[0].i < w[1].i && w[0].j < w[1].j);
        let mut seen_a = vec![0u8; n];
        let mut seen_b = vec![0u8; m];
        for p in &self.pairs {
            if p.i >= n || p.j >= m {
                return false;
            }
            seen_a[p.i] += 1;
            seen_b[p.j] += 1;
        }
        for &i in &self.gaps_a {
            if i >= n {
                return false;
            }
            seen_a[i] += 1;
        }
        for &j in &self.gaps_b {
            if j >= m {
                return false;
            }
            seen_b[j] += 1;
        }
        monotone && seen_a.iter().chain(&seen_b).all(|c| *c == 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    Dp,
    #[default]
    Astar,
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dp" => Ok(Engine::Dp),
            "astar" => Ok(Engine::Astar),
            other => Err(Error::Config(format!("unknown engine `{other}` (expected dp|astar)"))),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Dp => "dp",
            Engine::Astar => "astar",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignConfig {
    pub gap_penalty: f64,
    pub threshold: f64,
    pub engine: Engine,
}

impl AlignConfig {
    pub fn new(gap_penalty: f64, threshold: f64, engine: Engine) -> Result<Self> {
        if !(gap_penalty.is_finite() && gap_penalty >= 0.0) {
            return Err(Error::Config(format!("gap penalty must be a non-negative number, got {gap_penalty}")));
        }
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::Config(format!("threshold {threshold} is outside [0, 1]")));
        }
        Ok(AlignConfig { gap_penalty, threshold, engine })
    }
}

impl Default for AlignConfig {
    fn default() -> Self {
        AlignConfig {
            gap_penalty: 0.2,
            threshold: 0.5,
            engine: Engine::Astar,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SearchStats {
    pub scorer_calls: usize,
    pub expanded: usize,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Step {
    Match,
    GapA,
    GapB,
}

/// Walks back from `(n, m)`, preferring match, then leaving an A sentence
/// unaligned, then leaving a B sentence unaligned. `value` must give the
/// optimal prefix value of every cell on an optimal path.
fn traceback(
    n: usize,
    m: usize,
    gap: i64,
    value: impl Fn(usize, usize) -> Option<i64>,
    cell: impl Fn(usize, usize) -> Option<(i64, f64)>,
) -> Alignment {
    let mut steps = Vec::with_capacity(n + m);
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = value(i, j).expect("traceback reached an unexplored cell");
        let step = if i > 0 && j > 0 && matches!((value(i - 1, j - 1), cell(i - 1, j - 1)), (Some(v), Some((q, _))) if q > 0 && v + q == here) {
            Step::Match
        } else if i > 0 && value(i - 1, j).is_some_and(|v| v - gap == here) {
            Step::GapA
        } else {
            debug_assert!(j > 0 && value(i, j - 1).is_some_and(|v| v - gap == here));
            Step::GapB
        };
        steps.push((step, i, j));
        match step {
            Step::Match => {
                i -= 1;
                j -= 1;
            }
            Step::GapA => i -= 1,
            Step::GapB => j -= 1,
        }
    }

    let mut out = Alignment::default();
    for (step, i, j) in steps.into_iter().rev() {
        match step {
            Step::Match => out.pairs.push(AlignedPair {
                i: i - 1,
                j: j - 1,
                likelihood: cell(i - 1, j - 1).expect("matched cell was scored").1,
            }),
            Step::GapA => out.gaps_a.push(i - 1),
            Step::GapB => out.gaps_b.push(j - 1),
        }
    }
    out
}

fn clamp_likelihood(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x.clamp(0.0, 1.0)
    }
}

/// Dynamic-programming alignment; calls the scorer once per cell. Rows of
/// the likelihood matrix are scored in parallel on the current rayon pool.
pub fn nw_align<S, P>(doc_a: &[S], doc_b: &[S], scorer: &P, cfg: &AlignConfig) -> Alignment
where
    S: AsRef<str> + Sync,
    P: PairScorer + ?Sized,
{
    let (n, m) = (doc_a.len(), doc_b.len());
    let gap = fixed(cfg.gap_penalty);
    let likelihood: Vec<Vec<f64>> = doc_a
        .par_iter()
        .map(|a| doc_b.iter().map(|b| clamp_likelihood(scorer.score(a.as_ref(), b.as_ref()))).collect())
        .collect();
    let q: Vec<Vec<i64>> = likelihood.iter().map(|row| row.iter().map(|x| fixed(*x)).collect()).collect();

    let w = m + 1;
    let mut f = vec![0i64; (n + 1) * w];
    for i in 0..=n {
        for j in 0..=m {
            if i == 0 && j == 0 {
                continue;
            }
            let mut best = i64::MIN;
            if i > 0 && j > 0 && q[i - 1][j - 1] > 0 {
                best = best.max(f[(i - 1) * w + j - 1] + q[i - 1][j - 1]);
            }
            if i > 0 {
                best = best.max(f[(i - 1) * w + j] - gap);
            }
            if j > 0 {
                best = best.max(f[i * w + j - 1] - gap);
            }
            f[i * w + j] = best;
        }
    }
    traceback(
        n,
        m,
        gap,
        |i, j| Some(f[i * w + j]),
        |i, j| Some((q[i][j], likelihood[i][j])),
    )
}

#[derive(PartialEq, Eq)]
struct Frontier {
    f: i64,
    g: i64,
    i: usize,
    j: usize,
}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        self.f
            .cmp(&other.f)
            .then(self.g.cmp(&other.g))
            .then((self.i + self.j).cmp(&(other.i + other.j)))
            .then(other.i.cmp(&self.i))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A* alignment with the same objective and tie-breaking as [`nw_align`].
///
/// The heuristic bounds what is left from `(i, j)`: at most
/// `min(n - i, m - j)` further pairs worth 1.0 each, and at least
/// `|(n - i) - (m - j)|` further gaps. The scorer is only called for
/// expanded cells. After the goal is reached the search keeps expanding
/// every node whose bound still ties the optimum, so every optimal path is
/// known and the traceback picks the same one as the dynamic program.
pub fn astar_align<S, P>(doc_a: &[S], doc_b: &[S], scorer: &P, cfg: &AlignConfig) -> (Alignment, SearchStats)
where
    S: AsRef<str>,
    P: PairScorer + ?Sized,
{
    let (n, m) = (doc_a.len(), doc_b.len());
    let gap = fixed(cfg.gap_penalty);
    let unit = fixed(1.0);
    let h = |i: usize, j: usize| {
        let (ra, rb) = ((n - i) as i64, (m - j) as i64);
        ra.min(rb) * unit - (ra - rb).abs() * gap
    };

    let mut best: HashMap<(usize, usize), i64> = HashMap::new();
    let mut expanded: HashMap<(usize, usize), ()> = HashMap::new();
    let mut scored: HashMap<(usize, usize), (i64, f64)> = HashMap::new();
    let mut stats = SearchStats::default();
    let mut heap = BinaryHeap::new();
    let mut optimum: Option<i64> = None;

    best.insert((0, 0), 0);
    heap.push(Frontier { f: h(0, 0), g: 0, i: 0, j: 0 });

    while let Some(node) = heap.pop() {
        if optimum.is_some_and(|opt| node.f < opt) {
            break;
        }
        let key = (node.i, node.j);
        if best.get(&key) != Some(&node.g) || expanded.contains_key(&key) {
            continue;
        }
        expanded.insert(key, ());
        stats.expanded += 1;
        if key == (n, m) {
            optimum.get_or_insert(node.g);
            continue;
        }

        let mut relax = |i: usize, j: usize, g: i64, heap: &mut BinaryHeap<Frontier>| {
            if best.get(&(i, j)).is_none_or(|old| g > *old) {
                best.insert((i, j), g);
                heap.push(Frontier { f: g + h(i, j), g, i, j });
            }
        };
        let (i, j) = key;
        if i < n && j < m {
            let likelihood = clamp_likelihood(scorer.score(doc_a[i].as_ref(), doc_b[j].as_ref()));
            stats.scorer_calls += 1;
            let q = fixed(likelihood);
            scored.insert(key, (q, likelihood));
            if q > 0 {
                relax(i + 1, j + 1, node.g + q, &mut heap);
            }
        }
        if i < n {
            relax(i + 1, j, node.g - gap, &mut heap);
        }
        if j < m {
            relax(i, j + 1, node.g - gap, &mut heap);
        }
    }

    let alignment = traceback(
        n,
        m,
        gap,
        |i, j| expanded.contains_key(&(i, j)).then(|| best[&(i, j)]),
        |i, j| scored.get(&(i, j)).copied(),
    );
    (alignment, stats)
}

/// Aligns with the engine chosen in `cfg`.
pub fn align<S, P>(doc_a: &[S], doc_b: &[S], scorer: &P, cfg: &AlignConfig) -> Alignment
where
    S: AsRef<str> + Sync,
    P: PairScorer + ?Sized,
{
    match cfg.engine {
        Engine::Dp => nw_align(doc_a, doc_b, scorer, cfg),
        Engine::Astar => astar_align(doc_a, doc_b, scorer, cfg).0,
    }
}

/// Pairs whose likelihood reaches `threshold`, in alignment order.
pub fn threshold_filter(alignment: &Alignment, threshold: f64) -> Vec<AlignedPair> {
    alignment
        .pairs
        .iter()
        .filter(|p| p.likelihood >= threshold)
        .copied()
        .collect()
}

pub const PAIRS_HEADER: &str = "i\tj\tlikelihood";

pub fn format_pairs(pairs: &[AlignedPair]) -> String {
    let mut out = String::from(PAIRS_HEADER);
    out.push('\n');
    for p in pairs {
        out.push_str(&format!("{}\t{}\t{:.4}\n", p.i, p.j, p.likelihood));
    }
    out
}
