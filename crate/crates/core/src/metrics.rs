//! Corpus-level MT evaluation: BLEU, NIST, TER and METEOR.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::textnorm::{fold, stem, SynonymLexicon, TokenSeq};

/// All contiguous `n`-token windows with their multiplicities.
pub fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    assert!(n >= 1, "n-gram order must be at least 1");
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

fn check_corpus(cands: &[TokenSeq], refs: &[Vec<TokenSeq>]) -> Result<()> {
    if cands.is_empty() {
        return Err(Error::Invalid("candidate corpus is empty".into()));
    }
    if cands.len() != refs.len() {
        return Err(Error::LengthMismatch {
            what: "reference segments".into(),
            expected: cands.len(),
            found: refs.len(),
        });
    }
    if let Some(i) = refs.iter().position(Vec::is_empty) {
        return Err(Error::Invalid(format!("segment {i} has no reference")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BleuParams {
    weights: Vec<f64>,
}

impl BleuParams {
    pub const DEFAULT_ORDER: usize = 4;

    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Config("BLEU needs at least one n-gram order".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Config("BLEU weights must be positive".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("BLEU weights sum to {sum}, expected 1")));
        }
        Ok(BleuParams { weights })
    }

    pub fn uniform(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::Config("BLEU needs at least one n-gram order".into()));
        }
        Self::new(vec![1.0 / order as f64; order])
    }

    pub fn order(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl Default for BleuParams {
    fn default() -> Self {
        Self::uniform(Self::DEFAULT_ORDER).expect("default order is positive")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BleuBreakdown {
    pub p_n: Vec<f64>,
    pub matches: Vec<usize>,
    pub totals: Vec<usize>,
    pub c: usize,
    pub r: usize,
    pub brevity_penalty: f64,
    pub score: f64,
}

pub fn brevity_penalty(c: usize, r: usize) -> f64 {
    if c > r {
        1.0
    } else if c == 0 {
        0.0
    } else {
        (1.0 - r as f64 / c as f64).exp()
    }
}

/// Reference length closest to `c`; ties go to the shorter reference.
fn closest_ref_len(c: usize, refs: &[TokenSeq]) -> usize {
    refs.iter()
        .map(TokenSeq::len)
        .min_by_key(|r| (r.abs_diff(c), *r))
        .unwrap_or(0)
}

struct BleuStats {
    matches: Vec<usize>,
    totals: Vec<usize>,
    c: usize,
    r: usize,
}

fn bleu_segment(cand: &TokenSeq, refs: &[TokenSeq], order: usize) -> BleuStats {
    let mut matches = vec![0; order];
    let mut totals = vec![0; order];
    for n in 1..=order {
        let counts = ngram_counts(&cand.tokens, n);
        let mut max_ref: HashMap<&[String], usize> = HashMap::new();
        for r in refs {
            for (gram, k) in ngram_counts(&r.tokens, n) {
                let slot = max_ref.entry(gram).or_insert(0);
                *slot = (*slot).max(k);
            }
        }
        totals[n - 1] = cand.len().saturating_sub(n - 1);
        matches[n - 1] = counts
            .iter()
            .map(|(gram, k)| (*k).min(max_ref.get(gram).copied().unwrap_or(0)))
            .sum();
    }
    BleuStats {
        matches,
        totals,
        c: cand.len(),
        r: closest_ref_len(cand.len(), refs),
    }
}

/// Corpus BLEU: clipped matches and n-gram totals are pooled over all
/// segments before the precisions are taken.
pub fn bleu(cands: &[TokenSeq], refs: &[Vec<TokenSeq>], params: &BleuParams) -> Result<BleuBreakdown> {
    check_corpus(cands, refs)?;
    let order = params.order();
    let stats: Vec<BleuStats> = cands
        .par_iter()
        .zip(refs.par_iter())
        .map(|(c, r)| bleu_segment(c, r, order))
        .collect();
    let mut matches = vec![0usize; order];
    let mut totals = vec![0usize; order];
    let (mut c, mut r) = (0, 0);
    for s in &stats {
        for n in 0..order {
            matches[n] += s.matches[n];
            totals[n] += s.totals[n];
        }
        c += s.c;
        r += s.r;
    }
    let p_n: Vec<f64> = matches
        .iter()
        .zip(&totals)
        .map(|(m, t)| if *t == 0 { 0.0 } else { *m as f64 / *t as f64 })
        .collect();
    let brevity_penalty = brevity_penalty(c, r);
    let score = if p_n.iter().all(|p| *p > 0.0) {
        let log_sum: f64 = params.weights().iter().zip(&p_n).map(|(w, p)| w * p.ln()).sum();
        brevity_penalty * log_sum.exp()
    } else {
        0.0
    };
    Ok(BleuBreakdown {
        p_n,
        matches,
        totals,
        c,
        r,
        brevity_penalty,
        score,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NistBreakdown {
    /// Information gained per candidate n-gram, one entry per order.
    pub per_order: Vec<f64>,
    pub c: usize,
    pub r_mean: f64,
    pub brevity_factor: f64,
    pub score: f64,
}

pub const NIST_DEFAULT_ORDER: usize = 5;

/// Brevity factor `exp(β · ln²(min(c / r̄, 1)))`, with β chosen so the
/// factor is 0.5 when the candidate is two thirds of the reference length.
pub fn nist_brevity(c: usize, r_mean: f64) -> f64 {
    if r_mean <= 0.0 {
        return 1.0;
    }
    let beta = 0.5f64.ln() / (2.0f64 / 3.0).ln().powi(2);
    let ratio = (c as f64 / r_mean).min(1.0);
    if ratio <= 0.0 {
        return 0.0;
    }
    (beta * ratio.ln().powi(2)).exp()
}

pub fn nist(cands: &[TokenSeq], refs: &[Vec<TokenSeq>], order: usize) -> Result<NistBreakdown> {
    check_corpus(cands, refs)?;
    if order == 0 {
        return Err(Error::Config("NIST needs at least one n-gram order".into()));
    }

    // Reference-corpus counts of every n-gram up to `order`; the empty
    // prefix counts every reference token.
    let mut ref_counts: HashMap<&[String], usize> = HashMap::new();
    let mut ref_tokens = 0usize;
    for seg in refs {
        for r in seg {
            ref_tokens += r.len();
            for n in 1..=order {
                for (gram, k) in ngram_counts(&r.tokens, n) {
                    *ref_counts.entry(gram).or_insert(0) += k;
                }
            }
        }
    }
    let info = |gram: &[String]| -> f64 {
        let count = ref_counts[gram] as f64;
        let prefix = if gram.len() == 1 {
            ref_tokens as f64
        } else {
            ref_counts[&gram[..gram.len() - 1]] as f64
        };
        (prefix / count).log2()
    };

    let per_segment: Vec<(Vec<f64>, Vec<usize>)> = cands
        .par_iter()
        .zip(refs.par_iter())
        .map(|(cand, seg_refs)| {
            let mut gained = vec![0.0; order];
            let mut totals = vec![0; order];
            for n in 1..=order {
                let mut max_ref: HashMap<&[String], usize> = HashMap::new();
                for r in seg_refs {
                    for (gram, k) in ngram_counts(&r.tokens, n) {
                        let slot = max_ref.entry(gram).or_insert(0);
                        *slot = (*slot).max(k);
                    }
                }
                let mut grams: Vec<(&[String], usize)> = ngram_counts(&cand.tokens, n).into_iter().collect();
                grams.sort_unstable();
                gained[n - 1] = grams
                    .iter()
                    .filter_map(|(g, k)| max_ref.get(g).map(|rk| (*k).min(*rk) as f64 * info(g)))
                    .sum();
                totals[n - 1] = cand.len().saturating_sub(n - 1);
            }
            (gained, totals)
        })
        .collect();

    let mut gained = vec![0.0; order];
    let mut totals = vec![0usize; order];
    for (g, t) in &per_segment {
        for n in 0..order {
            gained[n] += g[n];
            totals[n] += t[n];
        }
    }
    let per_order: Vec<f64> = gained
        .iter()
        .zip(&totals)
        .map(|(g, t)| if *t == 0 { 0.0 } else { g / *t as f64 })
        .collect();
    let c: usize = cands.iter().map(TokenSeq::len).sum();
    let r_mean: f64 = refs
        .iter()
        .map(|seg| seg.iter().map(TokenSeq::len).sum::<usize>() as f64 / seg.len() as f64)
        .sum();
    let brevity_factor = nist_brevity(c, r_mean);
    Ok(NistBreakdown {
        score: per_order.iter().sum::<f64>() * brevity_factor,
        per_order,
        c,
        r_mean,
        brevity_factor,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TerBreakdown {
    pub edits: usize,
    pub shifts: usize,
    pub ref_len: f64,
    pub score: f64,
}

const TER_MAX_SHIFT_ITERATIONS: usize = 50;
const TER_MAX_SHIFT_LEN: usize = 10;

pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x != y);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Positions of `a` that some optimal edit script pairs with an equal token.
fn exact_matches<T: PartialEq>(a: &[T], b: &[T]) -> Vec<bool> {
    let w = b.len() + 1;
    let mut d = vec![0usize; (a.len() + 1) * w];
    for i in 0..=a.len() {
        for j in 0..=b.len() {
            d[i * w + j] = if i == 0 {
                j
            } else if j == 0 {
                i
            } else {
                (d[(i - 1) * w + j - 1] + usize::from(a[i - 1] != b[j - 1]))
                    .min(d[(i - 1) * w + j] + 1)
                    .min(d[i * w + j - 1] + 1)
            };
        }
    }
    let mut matched = vec![false; a.len()];
    let (mut i, mut j) = (a.len(), b.len());
    while i > 0 && j > 0 {
        let here = d[i * w + j];
        if a[i - 1] == b[j - 1] && d[(i - 1) * w + j - 1] == here {
            matched[i - 1] = true;
            i -= 1;
            j -= 1;
        } else if d[(i - 1) * w + j - 1] + 1 == here {
            i -= 1;
            j -= 1;
        } else if d[(i - 1) * w + j] + 1 == here {
            i -= 1;
        } else {
            j -= 1;
        }
    }
    matched
}

/// Moves `a[start..start + len]` so that it begins at `dest` in the result.
pub fn apply_shift<T: Clone>(a: &[T], start: usize, len: usize, dest: usize) -> Vec<T> {
    let mut rest: Vec<T> = Vec::with_capacity(a.len());
    rest.extend_from_slice(&a[..start]);
    rest.extend_from_slice(&a[start + len..]);
    let mut out = Vec::with_capacity(a.len());
    out.extend_from_slice(&rest[..dest]);
    out.extend_from_slice(&a[start..start + len]);
    out.extend_from_slice(&rest[dest..]);
    out
}

/// Greedy block-shift search followed by Levenshtein distance; returns
/// `(shifts, total edits)`.
fn ter_edits(cand: &[String], reference: &[String]) -> (usize, usize) {
    let mut cur = cand.to_vec();
    let mut dist = levenshtein(&cur, reference);
    let mut shifts = 0;
    for _ in 0..TER_MAX_SHIFT_ITERATIONS {
        if dist == 0 {
            break;
        }
        let matched = exact_matches(&cur, reference);
        let mut best: Option<(usize, Vec<String>)> = None;
        for start in 0..cur.len() {
            for len in 1..=TER_MAX_SHIFT_LEN.min(cur.len() - start) {
                let block = &cur[start..start + len];
                if matched[start..start + len].iter().all(|m| *m) {
                    continue;
                }
                if !reference.windows(len).any(|w| w == block) {
                    // Longer blocks starting here cannot occur either.
                    break;
                }
                for dest in 0..=cur.len() - len {
                    if dest == start {
                        continue;
                    }
                    let shifted = apply_shift(&cur, start, len, dest);
                    let d = levenshtein(&shifted, reference);
                    if d + 1 < dist && best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                        best = Some((d, shifted));
                    }
                }
            }
        }
        match best {
            Some((d, shifted)) => {
                cur = shifted;
                dist = d;
                shifts += 1;
            }
            None => break,
        }
    }
    (shifts, shifts + dist)
}

struct TerStats {
    edits: usize,
    shifts: usize,
    ref_len: f64,
}

fn ter_segment(cand: &TokenSeq, refs: &[TokenSeq]) -> TerStats {
    let (shifts, edits) = refs
        .iter()
        .map(|r| ter_edits(&cand.tokens, &r.tokens))
        .min_by_key(|(_, e)| *e)
        .unwrap_or((0, cand.len()));
    let ref_len = refs.iter().map(TokenSeq::len).sum::<usize>() as f64 / refs.len().max(1) as f64;
    TerStats { edits, shifts, ref_len }
}

fn ter_score(edits: usize, ref_len: f64) -> f64 {
    // An empty reference has no length to normalise by; the raw edit count
    // is reported instead.
    if ref_len > 0.0 {
        edits as f64 / ref_len
    } else {
        edits as f64
    }
}

pub fn ter(cand: &TokenSeq, refs: &[TokenSeq]) -> Result<TerBreakdown> {
    if refs.is_empty() {
        return Err(Error::Invalid("TER needs at least one reference".into()));
    }
    let s = ter_segment(cand, refs);
    Ok(TerBreakdown {
        edits: s.edits,
        shifts: s.shifts,
        ref_len: s.ref_len,
        score: ter_score(s.edits, s.ref_len),
    })
}

/// Corpus TER: total edits over total average reference length.
pub fn ter_corpus(cands: &[TokenSeq], refs: &[Vec<TokenSeq>]) -> Result<TerBreakdown> {
    check_corpus(cands, refs)?;
    let stats: Vec<TerStats> = cands
        .par_iter()
        .zip(refs.par_iter())
        .map(|(c, r)| ter_segment(c, r))
        .collect();
    let edits = stats.iter().map(|s| s.edits).sum();
    let shifts = stats.iter().map(|s| s.shifts).sum();
    let ref_len = stats.iter().map(|s| s.ref_len).sum();
    Ok(TerBreakdown {
        edits,
        shifts,
        ref_len,
        score: ter_score(edits, ref_len),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeteorBreakdown {
    pub precision: f64,
    pub recall: f64,
    pub matches: usize,
    pub chunks: usize,
    pub cand_len: usize,
    pub ref_len: usize,
    pub penalty: f64,
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeteorParams {
    pub penalty_exponent: f64,
}

impl Default for MeteorParams {
    fn default() -> Self {
        MeteorParams { penalty_exponent: 1.0 }
    }
}

/// Number of maximal runs in which both candidate and reference positions
/// advance by one. `pairs` must be sorted by candidate position.
fn count_chunks(pairs: &[(usize, usize)]) -> usize {
    if pairs.is_empty() {
        return 0;
    }
    1 + pairs
        .windows(2)
        .filter(|w| !(w[1].0 == w[0].0 + 1 && w[1].1 == w[0].1 + 1))
        .count()
}

const METEOR_SEARCH_BUDGET: usize = 200_000;

struct PassSearch<'a> {
    positions: Vec<usize>,
    options: Vec<Vec<usize>>,
    fixed: &'a [(usize, usize)],
    ref_used: Vec<bool>,
    chosen: Vec<(usize, usize)>,
    best: Option<(usize, usize, Vec<(usize, usize)>)>,
    /// For each suffix of `positions`, how many of them have any option.
    reachable: Vec<usize>,
    budget: usize,
}

impl PassSearch<'_> {
    fn chunks_with(&self, extra: &[(usize, usize)]) -> usize {
        let mut all: Vec<(usize, usize)> = self.fixed.iter().chain(extra).copied().collect();
        all.sort_unstable();
        count_chunks(&all)
    }

    fn better(&self, matches: usize, chunks: usize) -> bool {
        match &self.best {
            None => true,
            Some((m, c, _)) => matches > *m || (matches == *m && chunks < *c),
        }
    }

    fn run(&mut self, k: usize) {
        if self.budget == 0 {
            return;
        }
        self.budget -= 1;
        let matches = self.chosen.len();
        if let Some((m, _, _)) = &self.best {
            if matches + self.reachable[k] < *m {
                return;
            }
        }
        if k == self.positions.len() {
            let chunks = self.chunks_with(&self.chosen);
            if self.better(matches, chunks) {
                self.best = Some((matches, chunks, self.chosen.clone()));
            }
            return;
        }
        let i = self.positions[k];
        for idx in 0..self.options[k].len() {
            let j = self.options[k][idx];
            if self.ref_used[j] {
                continue;
            }
            self.ref_used[j] = true;
            self.chosen.push((i, j));
            self.run(k + 1);
            self.chosen.pop();
            self.ref_used[j] = false;
        }
        self.run(k + 1);
    }
}

/// One matching pass: pairs still-unmatched tokens accepted by `same`,
/// maximising the number of new matches and then minimising the chunk
/// count of the whole alignment. Ties keep the earliest-found alignment,
/// which prefers the lowest reference position for each candidate token.
fn meteor_pass(
    cand: &[String],
    reference: &[String],
    matched: &mut Vec<(usize, usize)>,
    same: impl Fn(&str, &str) -> bool,
) {
    let mut cand_used = vec![false; cand.len()];
    let mut ref_used = vec![false; reference.len()];
    for (i, j) in matched.iter() {
        cand_used[*i] = true;
        ref_used[*j] = true;
    }
    let mut positions = Vec::new();
    let mut options = Vec::new();
    for (i, c) in cand.iter().enumerate() {
        if cand_used[i] {
            continue;
        }
        let opts: Vec<usize> = (0..reference.len())
            .filter(|j| !ref_used[*j] && same(c, &reference[*j]))
            .collect();
        if !opts.is_empty() {
            positions.push(i);
            options.push(opts);
        }
    }
    if positions.is_empty() {
        return;
    }
    let mut reachable = vec![0; positions.len() + 1];
    for k in (0..positions.len()).rev() {
        reachable[k] = reachable[k + 1] + 1;
    }
    let fixed = matched.clone();
    let mut search = PassSearch {
        positions,
        options,
        fixed: &fixed,
        ref_used,
        chosen: Vec::new(),
        best: None,
        reachable,
        budget: METEOR_SEARCH_BUDGET,
    };
    search.run(0);
    if let Some((_, _, chosen)) = search.best {
        matched.extend(chosen);
    }
    matched.sort_unstable();
}

/// Unigram alignment built from exact, then stem, then synonym matches.
pub fn meteor_alignment(cand: &[String], reference: &[String], lexicon: &SynonymLexicon) -> Vec<(usize, usize)> {
    let mut matched = Vec::new();
    meteor_pass(cand, reference, &mut matched, |a, b| a == b);
    meteor_pass(cand, reference, &mut matched, |a, b| stem(&fold(a)) == stem(&fold(b)));
    if !lexicon.is_empty() {
        meteor_pass(cand, reference, &mut matched, |a, b| lexicon.are_synonyms(a, b));
    }
    matched
}

fn meteor_from_counts(matches: usize, chunks: usize, cand_len: usize, ref_len: usize, params: &MeteorParams) -> MeteorBreakdown {
    let precision = if cand_len == 0 { 0.0 } else { matches as f64 / cand_len as f64 };
    let recall = if ref_len == 0 { 0.0 } else { matches as f64 / ref_len as f64 };
    let (penalty, score) = if matches == 0 {
        (0.0, 0.0)
    } else {
        let penalty = 0.5 * (chunks as f64 / matches as f64).powf(params.penalty_exponent);
        let fmean = 10.0 * precision * recall / (recall + 9.0 * precision);
        (penalty, fmean * (1.0 - penalty))
    };
    MeteorBreakdown {
        precision,
        recall,
        matches,
        chunks,
        cand_len,
        ref_len,
        penalty,
        score,
    }
}

pub fn meteor(cand: &TokenSeq, reference: &TokenSeq, lexicon: &SynonymLexicon, params: &MeteorParams) -> MeteorBreakdown {
    let pairs = meteor_alignment(&cand.tokens, &reference.tokens, lexicon);
    meteor_from_counts(pairs.len(), count_chunks(&pairs), cand.len(), reference.len(), params)
}

/// Corpus METEOR: matches, chunks and lengths are pooled before scoring.
/// Each segment is scored against its first reference.
pub fn meteor_corpus(
    cands: &[TokenSeq],
    refs: &[Vec<TokenSeq>],
    lexicon: &SynonymLexicon,
    params: &MeteorParams,
) -> Result<MeteorBreakdown> {
    check_corpus(cands, refs)?;
    let per: Vec<MeteorBreakdown> = cands
        .par_iter()
        .zip(refs.par_iter())
        .map(|(c, r)| meteor(c, &r[0], lexicon, params))
        .collect();
    let sum = |f: fn(&MeteorBreakdown) -> usize| per.iter().map(f).sum::<usize>();
    Ok(meteor_from_counts(
        sum(|b| b.matches),
        sum(|b| b.chunks),
        sum(|b| b.cand_len),
        sum(|b| b.ref_len),
        params,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricId {
    Bleu,
    Nist,
    Ter,
    Meteor,
}

impl MetricId {
    pub const ALL: [MetricId; 4] = [MetricId::Bleu, MetricId::Nist, MetricId::Ter, MetricId::Meteor];

    pub fn name(self) -> &'static str {
        match self {
            MetricId::Bleu => "bleu",
            MetricId::Nist => "nist",
            MetricId::Ter => "ter",
            MetricId::Meteor => "meteor",
        }
    }

    /// Parses a comma-separated list, keeping first-seen order.
    pub fn parse_list(s: &str) -> Result<Vec<MetricId>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let id: MetricId = part.parse()?;
            if !out.contains(&id) {
                out.push(id);
            }
        }
        if out.is_empty() {
            return Err(Error::Config("no metrics selected".into()));
        }
        Ok(out)
    }
}

impl FromStr for MetricId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MetricId::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown metric `{s}` (expected bleu, nist, ter or meteor)")))
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scored<B> {
    pub score: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub percent: Option<f64>,
    #[serde(flatten)]
    pub breakdown: B,
}

impl<B> Scored<B> {
    fn new(score: f64, percent: bool, breakdown: B) -> Self {
        Scored {
            score,
            percent: percent.then_some(100.0 * score),
            breakdown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub segments: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bleu: Option<Scored<BleuBreakdown>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nist: Option<Scored<NistBreakdown>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ter: Option<Scored<TerBreakdown>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meteor: Option<Scored<MeteorBreakdown>>,
}

#[derive(Debug, Clone, Default)]
pub struct EvalOptions {
    pub bleu: BleuParams,
    pub nist_order: usize,
    pub meteor: MeteorParams,
    pub lexicon: SynonymLexicon,
}

impl EvalOptions {
    pub fn new() -> Self {
        EvalOptions {
            nist_order: NIST_DEFAULT_ORDER,
            ..Default::default()
        }
    }
}

pub fn evaluate(cands: &[TokenSeq], refs: &[Vec<TokenSeq>], metrics: &[MetricId], opts: &EvalOptions) -> Result<MetricReport> {
    check_corpus(cands, refs)?;
    let mut report = MetricReport {
        segments: cands.len(),
        bleu: None,
        nist: None,
        ter: None,
        meteor: None,
    };
    for m in metrics {
        match m {
            MetricId::Bleu => {
                let b = bleu(cands, refs, &opts.bleu)?;
                report.bleu = Some(Scored::new(b.score, true, b));
            }
            MetricId::Nist => {
                let b = nist(cands, refs, opts.nist_order)?;
                report.nist = Some(Scored::new(b.score, false, b));
            }
            MetricId::Ter => {
                let b = ter_corpus(cands, refs)?;
                report.ter = Some(Scored::new(b.score, true, b));
            }
            MetricId::Meteor => {
                let b = meteor_corpus(cands, refs, &opts.lexicon, &opts.meteor)?;
                report.meteor = Some(Scored::new(b.score, true, b));
            }
        }
    }
    Ok(report)
}
