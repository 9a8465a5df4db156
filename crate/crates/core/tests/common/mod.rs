//! Fixtures shared by the integration tests: a seeded synthetic noisy
//! bitext and brute-force reference implementations.

#![allow(dead_code)]

pub mod oracle;

use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EN_SYLLABLES: &[&str] = &[
    "ba", "be", "bo", "ca", "co", "da", "de", "di", "fa", "fe", "ga", "go", "ha", "he", "ka", "ke", "la", "le", "li", "lo",
    "ma", "me", "mi", "mo", "na", "ne", "no", "pa", "pe", "po", "ra", "re", "ri", "ro", "sa", "se", "si", "so", "ta", "te",
    "ti", "to", "va", "ve", "wa", "we", "ya", "za", "ton", "ber", "son", "ley", "ing", "ment", "ard", "win", "ful", "ver",
];
const PL_SYLLABLES: &[&str] = &[
    "ką", "rze", "szy", "cie", "dzi", "łó", "wą", "prz", "ść", "żu", "mie", "nią", "chy", "grę", "ków", "sła", "tój", "źdź",
    "wię", "czą", "oł", "brz", "ęk", "dła",
];
const EN_FUNCTION: &[&str] = &["the", "of", "and", "to", "in", "a", "is", "that", "for", "it", "with", "was", "on", "as"];
const PL_FUNCTION: &[&str] = &["i", "w", "się", "na", "z", "do", "że", "nie", "to", "jest"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Noise {
    None,
    Junk,
    Shuffled,
    WrongLanguage,
}

pub struct Synthetic {
    pub src: Vec<String>,
    pub tgt: Vec<String>,
    pub trans: Vec<String>,
    pub noise: Vec<Noise>,
    /// `(source word, target word)` pairs of the word-for-word translation.
    pub dictionary: Vec<(String, String)>,
}

pub struct CorpusFiles {
    pub src: PathBuf,
    pub tgt: PathBuf,
    pub trans: PathBuf,
    pub gold: PathBuf,
    pub dict: PathBuf,
}

fn word(rng: &mut ChaCha8Rng, syllables: &[&str], min: usize, max: usize) -> String {
    (0..rng.gen_range(min..=max))
        .map(|_| *syllables.choose(rng).unwrap())
        .collect()
}

fn capitalise(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn sentence(words: &[String]) -> String {
    format!("{}.", capitalise(&words.join(" ")))
}

fn isbn(rng: &mut ChaCha8Rng) -> String {
    match rng.gen_range(0..3) {
        0 => format!("ISBN {}.", (0..10).map(|_| rng.gen_range(0..10).to_string()).collect::<String>()),
        1 => format!(
            "ISBN {}-{}-{}-{}.",
            rng.gen_range(0..10),
            rng.gen_range(10000..99999),
            rng.gen_range(100..999),
            rng.gen_range(0..10)
        ),
        _ => format!("ISBN 978{}.", (0..10).map(|_| rng.gen_range(0..10).to_string()).collect::<String>()),
    }
}

fn junk(rng: &mut ChaCha8Rng) -> String {
    match rng.gen_range(0..5) {
        0 => isbn(rng),
        1 => "* * *".to_string(),
        2 => format!("| {} | {}.{} | {} |", rng.gen_range(1900..2020), rng.gen_range(0..99), rng.gen_range(0..9), rng.gen_range(1..500)),
        3 => format!("[{}] [{}]", rng.gen_range(1..60), rng.gen_range(1..60)),
        _ => format!("http://www.{}.org/{}", rng.gen_range(1000..9999), rng.gen_range(10..99)),
    }
}

/// Rough machine-translation noise: other word choices, inflection
/// changes, dropped or inserted function words and local reordering.
fn mt_noise(rng: &mut ChaCha8Rng, words: &[String], vocab: &[String]) -> Vec<String> {
    let mut out = words.to_vec();
    let edits = *[0usize, 1, 1, 2, 2, 2, 3].choose(rng).unwrap();
    for _ in 0..edits {
        let k = rng.gen_range(0..out.len());
        match rng.gen_range(0..4) {
            0 => out[k] = vocab.choose(rng).unwrap().clone(),
            1 => out[k].push_str(["s", "ed", "ing"].choose(rng).unwrap()),
            2 => {
                if out.len() > 3 && EN_FUNCTION.contains(&out[k].as_str()) {
                    out.remove(k);
                } else {
                    out.insert(k, "the".to_string());
                }
            }
            _ => {
                if k + 1 < out.len() {
                    out.swap(k, k + 1);
                }
            }
        }
    }
    out
}

/// `n` sentence pairs of which `noisy` are corrupted: junk symbol lines,
/// targets shuffled from far-away lines, and untranslated target lines.
pub fn synthetic_corpus(seed: u64, n: usize, noisy: usize) -> Synthetic {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut en_vocab: Vec<String> = Vec::new();
    let mut pl_vocab: Vec<String> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    while en_vocab.len() < 1500 {
        let w = word(&mut rng, EN_SYLLABLES, 2, 4);
        if seen.insert(w.clone()) {
            en_vocab.push(w);
            pl_vocab.push(format!("{}{}", word(&mut rng, PL_SYLLABLES, 1, 2), word(&mut rng, EN_SYLLABLES, 1, 2)));
        }
    }
    let mut src = Vec::with_capacity(n);
    let mut tgt = Vec::with_capacity(n);
    let mut trans = Vec::with_capacity(n);
    for _ in 0..n {
        let len = rng.gen_range(5..=12);
        let mut en_words = Vec::new();
        let mut pl_words = Vec::new();
        for _ in 0..len {
            if rng.gen_bool(0.35) {
                en_words.push(EN_FUNCTION.choose(&mut rng).unwrap().to_string());
            }
            let k = rng.gen_range(0..en_vocab.len());
            en_words.push(en_vocab[k].clone());
            pl_words.push(pl_vocab[k].clone());
            if rng.gen_bool(0.25) {
                pl_words.push(PL_FUNCTION.choose(&mut rng).unwrap().to_string());
            }
        }
        tgt.push(sentence(&en_words));
        src.push(sentence(&pl_words));
        trans.push(sentence(&mt_noise(&mut rng, &en_words, &en_vocab)));
    }

    let mut noise = vec![Noise::None; n];
    let mut picked: Vec<usize> = (0..n).collect();
    picked.shuffle(&mut rng);
    picked.truncate(noisy);
    let third = noisy / 3;
    let (junk_idx, rest) = picked.split_at(third + noisy % 3);
    let (shuffled_idx, wrong_idx) = rest.split_at(third);

    for (k, &i) in junk_idx.iter().enumerate() {
        noise[i] = Noise::Junk;
        if k % 3 == 0 {
            // Bibliographic line on both sides, left untranslated.
            src[i] = isbn(&mut rng);
            trans[i] = src[i].clone();
            tgt[i] = isbn(&mut rng);
        } else {
            tgt[i] = junk(&mut rng);
        }
    }
    let mut shuffled: Vec<usize> = shuffled_idx.to_vec();
    shuffled.sort_unstable();
    let original: Vec<String> = shuffled.iter().map(|&i| tgt[i].clone()).collect();
    let half = shuffled.len() / 2;
    for (k, &i) in shuffled.iter().enumerate() {
        noise[i] = Noise::Shuffled;
        tgt[i] = original[(k + half.max(1)) % shuffled.len()].clone();
    }
    for &i in wrong_idx {
        noise[i] = Noise::WrongLanguage;
        tgt[i] = src[i].clone();
    }

    let mut dictionary: Vec<(String, String)> = en_vocab
        .iter()
        .zip(&pl_vocab)
        .map(|(e, p)| (p.clone(), e.clone()))
        .collect();
    dictionary.sort();
    Synthetic {
        src,
        tgt,
        trans,
        noise,
        dictionary,
    }
}

impl Synthetic {
    pub fn len(&self) -> usize {
        self.src.len()
    }

    pub fn poor(&self, i: usize) -> bool {
        self.noise[i] != Noise::None
    }

    pub fn gold_tsv(&self) -> String {
        let mut out = String::from("src_idx\ttgt_idx\tlabel\n");
        for i in 0..self.len() {
            out.push_str(&format!("{i}\t{i}\t{}\n", if self.poor(i) { "poor" } else { "good" }));
        }
        out
    }

    pub fn dictionary_tsv(&self) -> String {
        self.dictionary
            .iter()
            .map(|(s, t)| format!("{s}\t{t}\t1.0\n"))
            .collect()
    }

    pub fn write(&self, dir: &Path) -> CorpusFiles {
        let lines = |v: &[String]| v.iter().map(|l| format!("{l}\n")).collect::<String>();
        let files = CorpusFiles {
            src: dir.join("corpus.pl"),
            tgt: dir.join("corpus.en"),
            trans: dir.join("corpus.trans"),
            gold: dir.join("gold.tsv"),
            dict: dir.join("dict.tsv"),
        };
        fs::write(&files.src, lines(&self.src)).unwrap();
        fs::write(&files.tgt, lines(&self.tgt)).unwrap();
        fs::write(&files.trans, lines(&self.trans)).unwrap();
        fs::write(&files.gold, self.gold_tsv()).unwrap();
        fs::write(&files.dict, self.dictionary_tsv()).unwrap();
        files
    }
}

/// Random likelihood table for aligner tests; about a third of the cells
/// are exactly zero.
pub fn random_table(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            (0..m)
                .map(|_| {
                    if rng.gen_bool(0.35) {
                        0.0
                    } else {
                        f64::from(rng.gen_range(1..=100u32)) / 100.0
                    }
                })
                .collect()
        })
        .collect()
}

/// Documents whose sentences are their own indices, so a table scorer can
/// look the pair up.
pub fn index_docs(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

pub fn table_scorer(table: &[Vec<f64>]) -> impl Fn(&str, &str) -> f64 + Sync + '_ {
    move |a: &str, b: &str| table[a.parse::<usize>().unwrap()][b.parse::<usize>().unwrap()]
}
