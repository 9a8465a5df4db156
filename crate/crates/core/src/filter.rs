//! The bi-sentence filter: match every intermediate-translation line
//! against nearby target lines, settle contested targets with the lookahead
//! rule, and report what was kept and what was dropped.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus_io::{load_corpus, Bitext, Corpus};
use crate::error::{Error, Result};
use crate::similarity::{chain_evaluate, ChainDecision, ComparatorChain, Comparators, Sentence};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcceptedPair {
    pub src: usize,
    pub tgt: usize,
    pub score: f64,
    pub tier: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DroppedSource {
    pub src: usize,
    pub best_score: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FilterResult {
    pub accepted: Vec<AcceptedPair>,
    pub dropped_src: Vec<DroppedSource>,
    pub dropped_tgt: Vec<usize>,
}

impl FilterResult {
    /// The cleaned bitext: accepted pairs in source order, no translation layer.
    pub fn project(&self, bitext: &Bitext) -> Bitext {
        let mut pairs: Vec<&AcceptedPair> = self.accepted.iter().collect();
        pairs.sort_by_key(|p| (p.src, p.tgt));
        let pick = |c: &Corpus, idx: &dyn Fn(&AcceptedPair) -> usize| {
            Corpus::new(&c.lang, pairs.iter().map(|p| c.lines[idx(p)].clone()))
        };
        Bitext {
            source: pick(&bitext.source, &|p| p.src),
            target: pick(&bitext.target, &|p| p.tgt),
            trans: None,
        }
    }
}

/// Half-width of the candidate band around the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    Lines(usize),
    Unbounded,
}

impl FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "unbounded" => Ok(Window::Unbounded),
            _ => s
                .parse()
                .map(Window::Lines)
                .map_err(|_| Error::Config(format!("window must be a non-negative integer or `inf`, got `{s}`"))),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Window::Lines(n) => write!(f, "{n}"),
            Window::Unbounded => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterConfig {
    pub chain: ComparatorChain,
    pub window: Window,
    /// How many following translation lines may contest a candidate target.
    pub lookahead: usize,
    /// Let one target line pair with several source lines.
    pub allow_reuse: bool,
    /// Deferrals allowed per source line before contested targets go
    /// first-come.
    pub max_displacements: usize,
}

impl FilterConfig {
    pub const DEFAULT_WINDOW: usize = 30;
    pub const DEFAULT_LOOKAHEAD: usize = 1;
    pub const DEFAULT_MAX_DISPLACEMENTS: usize = 3;
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            chain: ComparatorChain::default(),
            window: Window::Lines(Self::DEFAULT_WINDOW),
            lookahead: Self::DEFAULT_LOOKAHEAD,
            allow_reuse: false,
            max_displacements: Self::DEFAULT_MAX_DISPLACEMENTS,
        }
    }
}

/// Winner of target `j` among translation lines `i ..= i + lookahead`: the
/// highest score, earliest line on ties. `score` returns `None` past the end
/// of the corpus.
pub fn resolve_conflict<F>(i: usize, j: usize, mut score: F, lookahead: usize) -> usize
where
    F: FnMut(usize, usize) -> Option<f64>,
{
    let mut winner = i;
    let mut best = score(i, j).unwrap_or(f64::NEG_INFINITY);
    for k in i + 1..=i.saturating_add(lookahead) {
        match score(k, j) {
            Some(s) if s > best => {
                best = s;
                winner = k;
            }
            Some(_) => {}
            None => break,
        }
    }
    winner
}

const ROW_CHUNK: usize = 64;

/// Lazily computed chain decisions, row by row. Rows are scored a chunk at a
/// time with the window candidates of every row in the chunk evaluated in
/// parallel; anything outside a window is computed on demand.
struct ScoreTable<'a, C: Comparators + ?Sized> {
    trans: Vec<Sentence>,
    target: Vec<Sentence>,
    chain: &'a ComparatorChain,
    comparators: &'a C,
    window: Window,
    rows: Vec<Option<HashMap<usize, ChainDecision>>>,
    computed_rows: usize,
}

impl<'a, C: Comparators + ?Sized> ScoreTable<'a, C> {
    fn center(&self, i: usize) -> usize {
        let (n, m) = (self.trans.len(), self.target.len());
        let c = (i as f64 * m as f64 / n as f64).round() as usize;
        c.min(m.saturating_sub(1))
    }

    fn window_of(&self, i: usize) -> std::ops::RangeInclusive<usize> {
        let m = self.target.len();
        match self.window {
            Window::Unbounded => 0..=m - 1,
            Window::Lines(w) => {
                let c = self.center(i);
                c.saturating_sub(w)..=c.saturating_add(w).min(m - 1)
            }
        }
    }

    fn ensure_rows(&mut self, upto: usize) {
        let n = self.trans.len();
        if self.target.is_empty() || upto < self.computed_rows || self.computed_rows >= n {
            return;
        }
        let end = (upto + ROW_CHUNK).min(n);
        let cells: Vec<(usize, usize)> = (self.computed_rows..end)
            .flat_map(|i| self.window_of(i).map(move |j| (i, j)))
            .collect();
        let (trans, target, chain, comparators) = (&self.trans, &self.target, self.chain, self.comparators);
        let decisions: Vec<ChainDecision> = cells
            .par_iter()
            .map(|&(i, j)| chain_evaluate(&trans[i], &target[j], chain, comparators))
            .collect();
        for ((i, j), d) in cells.into_iter().zip(decisions) {
            self.rows[i].get_or_insert_with(HashMap::new).insert(j, d);
        }
        for row in &mut self.rows[self.computed_rows..end] {
            row.get_or_insert_with(HashMap::new);
        }
        self.computed_rows = end;
    }

    fn get(&mut self, i: usize, j: usize) -> ChainDecision {
        self.ensure_rows(i);
        let row = self.rows[i].get_or_insert_with(HashMap::new);
        if let Some(d) = row.get(&j) {
            return *d;
        }
        let d = chain_evaluate(&self.trans[i], &self.target[j], self.chain, self.comparators);
        row.insert(j, d);
        d
    }

    fn release(&mut self, i: usize) {
        self.rows[i] = None;
    }
}

/// Filters a bitext whose translation layer is complete.
///
/// Source lines are processed in order. Each line's candidates are the
/// unconsumed target lines within the window around its diagonal position
/// (plus any targets deferred to it); the accepted candidate with the best
/// chain score is tried first. Before it is committed, the next `lookahead`
/// translation lines may claim it by scoring strictly higher, in which case
/// the target is deferred to that line and the next-best candidate is tried.
pub fn align_filter<C: Comparators + ?Sized>(bitext: &Bitext, cfg: &FilterConfig, comparators: &C) -> Result<FilterResult> {
    let trans = bitext.trans.as_ref().ok_or(Error::MissingTranslations)?;
    if !bitext.missing_translations().is_empty() {
        return Err(Error::MissingTranslations);
    }
    let n = bitext.source.len();
    let m = bitext.target.len();

    let prepare = |c: &Corpus| -> Vec<Sentence> { c.lines.par_iter().map(|l| comparators.prepare(l)).collect() };
    let mut table = ScoreTable {
        trans: prepare(trans),
        target: prepare(&bitext.target),
        chain: &cfg.chain,
        comparators,
        window: cfg.window,
        rows: vec![None; n],
        computed_rows: 0,
    };

    let mut consumed = vec![false; m];
    let mut deferred: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut result = FilterResult::default();

    for i in 0..n {
        if m == 0 {
            result.dropped_src.push(DroppedSource { src: i, best_score: 0.0 });
            continue;
        }
        table.ensure_rows(i + cfg.lookahead);
        let mut cands: BTreeSet<usize> = table.window_of(i).collect();
        cands.extend(deferred[i].iter().copied());

        let decisions: Vec<(usize, ChainDecision)> = cands.into_iter().map(|j| (j, table.get(i, j))).collect();
        let best_score = decisions.iter().map(|(_, d)| d.score).fold(0.0, f64::max);
        let mut ranked: Vec<(usize, ChainDecision)> = decisions
            .into_iter()
            .filter(|(j, d)| d.accepted && (cfg.allow_reuse || !consumed[*j]))
            .collect();
        ranked.sort_by(|(ja, a), (jb, b)| b.score.total_cmp(&a.score).then(ja.cmp(jb)));

        let mut displacements = 0;
        let mut committed = None;
        for (j, d) in ranked {
            if cfg.lookahead > 0 && displacements < cfg.max_displacements {
                let winner = resolve_conflict(
                    i,
                    j,
                    |k, j| (k < n).then(|| if k == i { d.score } else { table.get(k, j).score }),
                    cfg.lookahead,
                );
                if winner != i {
                    deferred[winner].push(j);
                    displacements += 1;
                    continue;
                }
            }
            committed = Some((j, d));
            break;
        }

        match committed {
            Some((j, d)) => {
                consumed[j] = true;
                result.accepted.push(AcceptedPair { src: i, tgt: j, score: d.score, tier: d.tier });
            }
            None => result.dropped_src.push(DroppedSource { src: i, best_score }),
        }
        table.release(i);
    }

    let used: HashSet<usize> = result.accepted.iter().map(|p| p.tgt).collect();
    result.dropped_tgt = (0..m).filter(|j| !used.contains(j)).collect();
    Ok(result)
}

/// Gold annotation of one sentence pair in a test corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GoldLabel {
    pub src: usize,
    pub tgt: usize,
    pub poor: bool,
}

/// Parses `src_idx<TAB>tgt_idx<TAB>poor|good` lines; a leading header line
/// starting with `src_idx` is skipped.
pub fn load_gold(path: impl AsRef<Path>) -> Result<Vec<GoldLabel>> {
    let path = path.as_ref();
    let corpus = load_corpus(path, "")?;
    let mut labels = Vec::new();
    for (idx, line) in corpus.lines.iter().enumerate() {
        if line.trim().is_empty() || (idx == 0 && line.starts_with("src_idx")) {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let err = |msg: &str| Error::parse(path, idx + 1, msg.to_string());
        let [src, tgt, label] = fields.as_slice() else {
            return Err(err("expected `src_idx<TAB>tgt_idx<TAB>poor|good`"));
        };
        labels.push(GoldLabel {
            src: src.parse().map_err(|_| err("bad src_idx"))?,
            tgt: tgt.parse().map_err(|_| err("bad tgt_idx"))?,
            poor: match *label {
                "poor" => true,
                "good" => false,
                _ => return Err(err("label must be `poor` or `good`")),
            },
        });
    }
    Ok(labels)
}

/// How a filter run treated the gold-labelled pairs of a test corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct FilterQuality {
    pub total: usize,
    pub poor_in_test: usize,
    pub poor_filtered: usize,
    pub good_filtered: usize,
}

impl fmt::Display for FilterQuality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Number of sentences in base corpus\t{}", self.total)?;
        writeln!(f, "Number of poor sentences in test corpus\t{}", self.poor_in_test)?;
        writeln!(f, "Number of poor filtered sentences\t{}", self.poor_filtered)?;
        writeln!(f, "Number of good filtered sentences\t{}", self.good_filtered)
    }
}

/// Counts gold pairs missing from the accepted set. Every source index the
/// result mentions (accepted or dropped) must carry exactly one label.
pub fn evaluate_filtering(result: &FilterResult, gold: &[GoldLabel]) -> Result<FilterQuality> {
    let mut labelled = HashSet::new();
    for g in gold {
        if !labelled.insert(g.src) {
            return Err(Error::Invalid(format!("source index {} is labelled twice", g.src)));
        }
    }
    let mentioned = result
        .accepted
        .iter()
        .map(|p| p.src)
        .chain(result.dropped_src.iter().map(|d| d.src));
    for src in mentioned {
        if !labelled.contains(&src) {
            return Err(Error::Invalid(format!(
                "gold labels ({} pairs) do not cover source index {src}",
                gold.len()
            )));
        }
    }
    let accepted: HashSet<(usize, usize)> = result.accepted.iter().map(|p| (p.src, p.tgt)).collect();
    let mut q = FilterQuality { total: gold.len(), ..Default::default() };
    for g in gold {
        let filtered = !accepted.contains(&(g.src, g.tgt));
        if g.poor {
            q.poor_in_test += 1;
            q.poor_filtered += usize::from(filtered);
        } else {
            q.good_filtered += usize::from(filtered);
        }
    }
    Ok(q)
}
