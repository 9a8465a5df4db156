//! Line-oriented corpora, bitexts and the intermediate translation layer.

use std::collections::HashSet;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filter::{AcceptedPair, FilterResult};
use crate::textnorm::{is_punctuation, tokenize};

/// One sentence per line; `lines[i]` is line `i + 1` of the file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    pub lines: Vec<String>,
    pub lang: String,
}

impl Corpus {
    pub fn new<I, S>(lang: &str, lines: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Corpus {
            lines: lines.into_iter().map(Into::into).collect(),
            lang: lang.to_string(),
        }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Splits UTF-8 bytes into lines. A final newline does not start an
    /// extra empty line; a trailing `\r` is dropped from each line.
    pub fn from_bytes(bytes: &[u8], lang: &str, path: &Path) -> Result<Self> {
        let text = std::str::from_utf8(bytes).map_err(|e| {
            let offset = e.valid_up_to();
            let line = bytes[..offset].iter().filter(|b| **b == b'\n').count() + 1;
            Error::Utf8 {
                path: path.to_path_buf(),
                line,
                byte_offset: offset,
            }
        })?;
        let body = text.strip_suffix('\n').unwrap_or(text);
        let lines = if text.is_empty() {
            Vec::new()
        } else {
            body.split('\n')
                .map(|l| l.strip_suffix('\r').unwrap_or(l).to_string())
                .collect()
        };
        Ok(Corpus {
            lines,
            lang: lang.to_string(),
        })
    }
}

pub fn load_corpus(path: impl AsRef<Path>, lang: &str) -> Result<Corpus> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Corpus::from_bytes(&bytes, lang, path)
}

/// Writes one line per entry, each terminated by `\n`.
pub fn write_lines<S: AsRef<str>>(path: impl AsRef<Path>, lines: &[S]) -> Result<()> {
    let path = path.as_ref();
    let io = |e| Error::io(path, e);
    let file = fs::File::create(path).map_err(io)?;
    let mut out = BufWriter::new(file);
    for line in lines {
        let line = line.as_ref();
        if line.contains('\n') {
            return Err(Error::Invalid(format!(
                "{}: line contains an embedded newline",
                path.display()
            )));
        }
        out.write_all(line.as_bytes()).map_err(io)?;
        out.write_all(b"\n").map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn write_corpus(path: impl AsRef<Path>, corpus: &Corpus) -> Result<()> {
    write_lines(path, &corpus.lines)
}

/// Language tag taken from a file extension (`src.pl` -> `pl`).
pub fn lang_from_path(path: &Path) -> String {
    path.extension()
        .and_then(|e| e.to_str())
        .filter(|e| !e.is_empty() && *e != "txt" && *e != "trans")
        .unwrap_or("und")
        .to_string()
}

/// Source and target corpora plus an optional translation of the source
/// into the target language, aligned line-for-line with the source. An
/// empty translation line marks a missing translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitext {
    pub source: Corpus,
    pub target: Corpus,
    pub trans: Option<Corpus>,
}

impl Bitext {
    pub fn new(source: Corpus, target: Corpus, trans: Option<Corpus>) -> Result<Self> {
        if let Some(t) = &trans {
            if t.len() != source.len() {
                return Err(Error::LengthMismatch {
                    what: "translation layer vs source".into(),
                    expected: source.len(),
                    found: t.len(),
                });
            }
        }
        Ok(Bitext { source, target, trans })
    }

    /// Source indices whose translation is absent or empty. Empty source
    /// lines never need translating.
    pub fn missing_translations(&self) -> Vec<usize> {
        self.source
            .lines
            .iter()
            .enumerate()
            .filter(|(i, src)| {
                !src.trim().is_empty()
                    && self
                        .trans
                        .as_ref()
                        .is_none_or(|t| t.lines[*i].trim().is_empty())
            })
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn load_bitext(src: impl AsRef<Path>, tgt: impl AsRef<Path>, trans: Option<&Path>) -> Result<Bitext> {
    let (src, tgt) = (src.as_ref(), tgt.as_ref());
    let source = load_corpus(src, &lang_from_path(src))?;
    let target = load_corpus(tgt, &lang_from_path(tgt))?;
    let trans = match trans {
        Some(path) => {
            let t = load_corpus(path, &target.lang)?;
            if t.len() != source.len() {
                return Err(Error::LengthMismatch {
                    what: format!("translation file {} vs source file {}", path.display(), src.display()),
                    expected: source.len(),
                    found: t.len(),
                });
            }
            Some(t)
        }
        None => None,
    };
    Bitext::new(source, target, trans)
}

/// Where missing translations come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TranslationProvider {
    /// A pre-translated corpus, line-aligned with the source.
    File(PathBuf),
    /// A shell command run once per batch: source lines on stdin, exactly one
    /// translated line per input line on stdout. `{src_lang}` and
    /// `{tgt_lang}` in the template are substituted.
    Command { template: String, batch_size: usize },
}

impl TranslationProvider {
    pub const DEFAULT_BATCH_SIZE: usize = 100;

    pub fn command(template: impl Into<String>) -> Self {
        TranslationProvider::Command {
            template: template.into(),
            batch_size: Self::DEFAULT_BATCH_SIZE,
        }
    }
}

/// Fills every missing translation from `provider`. Batches of a command
/// provider run in parallel on the current rayon pool; results are put
/// back in source order.
pub fn ensure_translations(bitext: Bitext, provider: &TranslationProvider) -> Result<Bitext> {
    let missing = bitext.missing_translations();
    if missing.is_empty() {
        return Ok(bitext);
    }
    let filled: Vec<String> = match provider {
        TranslationProvider::File(path) => {
            let file = load_corpus(path, &bitext.target.lang)?;
            if file.len() != bitext.source.len() {
                return Err(Error::LengthMismatch {
                    what: format!("translation file {} vs source", path.display()),
                    expected: bitext.source.len(),
                    found: file.len(),
                });
            }
            missing.iter().map(|&i| file.lines[i].clone()).collect()
        }
        TranslationProvider::Command { template, batch_size } => {
            let cmd = template
                .replace("{src_lang}", &bitext.source.lang)
                .replace("{tgt_lang}", &bitext.target.lang);
            let inputs: Vec<&str> = missing.iter().map(|&i| bitext.source.lines[i].as_str()).collect();
            let batches: Vec<Vec<String>> = inputs
                .par_chunks((*batch_size).max(1))
                .map(|batch| run_translator(&cmd, batch))
                .collect::<Result<_>>()?;
            batches.into_iter().flatten().collect()
        }
    };

    let mut trans = bitext
        .trans
        .clone()
        .unwrap_or_else(|| Corpus::new(&bitext.target.lang, vec![String::new(); bitext.source.len()]));
    for (&i, line) in missing.iter().zip(filled) {
        if line.trim().is_empty() {
            return Err(Error::Provider(format!(
                "no translation produced for source line {}",
                i + 1
            )));
        }
        trans.lines[i] = line;
    }
    Bitext::new(bitext.source, bitext.target, Some(trans))
}

fn run_translator(cmd: &str, batch: &[&str]) -> Result<Vec<String>> {
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(cmd)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| Error::Provider(format!("cannot start `{cmd}`: {e}")))?;
    let mut input = batch.join("\n");
    input.push('\n');
    let mut stdin = child.stdin.take().expect("stdin is piped");
    let writer = std::thread::spawn(move || stdin.write_all(input.as_bytes()));
    let output = child
        .wait_with_output()
        .map_err(|e| Error::Provider(format!("`{cmd}`: {e}")))?;
    let _ = writer.join();
    if !output.status.success() {
        return Err(Error::Provider(format!(
            "`{cmd}` exited with {}: {}",
            output.status,
            String::from_utf8_lossy(&output.stderr).trim()
        )));
    }
    let out = Corpus::from_bytes(&output.stdout, "", Path::new(cmd))?;
    if out.len() != batch.len() {
        return Err(Error::LengthMismatch {
            what: format!("output of `{cmd}`"),
            expected: batch.len(),
            found: out.len(),
        });
    }
    Ok(out.lines)
}

/// Sentence-pair count and per-side vocabulary sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct VocabStats {
    pub sentence_pairs: usize,
    pub source_vocab: usize,
    pub target_vocab: usize,
}

fn vocabulary(corpus: &Corpus) -> usize {
    let mut seen = HashSet::new();
    for line in &corpus.lines {
        for tok in tokenize(line, true).tokens {
            if !is_punctuation(&tok) {
                seen.insert(tok);
            }
        }
    }
    seen.len()
}

/// Distinct case-folded word tokens per side (punctuation tokens are not
/// vocabulary). Pairs are `min(|source|, |target|)`; on a bitext projected
/// from a filter result both sides have the accepted-pair count.
pub fn vocab_stats(bitext: &Bitext) -> VocabStats {
    VocabStats {
        sentence_pairs: bitext.source.len().min(bitext.target.len()),
        source_vocab: vocabulary(&bitext.source),
        target_vocab: vocabulary(&bitext.target),
    }
}

pub const REPORT_HEADER: &str = "src_idx\ttgt_idx\tscore\ttier";

pub fn format_report(accepted: &[AcceptedPair]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for p in accepted {
        out.push_str(&format!("{}\t{}\t{:.4}\t{}\n", p.src, p.tgt, p.score, p.tier));
    }
    out
}

/// Reads a pair report written by [`write_bitext`].
pub fn read_report(path: impl AsRef<Path>) -> Result<Vec<AcceptedPair>> {
    let path = path.as_ref();
    let corpus = load_corpus(path, "")?;
    let mut pairs = Vec::new();
    for (idx, line) in corpus.lines.iter().enumerate() {
        if idx == 0 && line.trim() == REPORT_HEADER {
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let bad = |what: &str| Error::parse(path, idx + 1, format!("bad {what} in `{line}`"));
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Error::parse(path, idx + 1, "expected 4 tab-separated fields"));
        }
        pairs.push(AcceptedPair {
            src: fields[0].trim().parse().map_err(|_| bad("src_idx"))?,
            tgt: fields[1].trim().parse().map_err(|_| bad("tgt_idx"))?,
            score: fields[2].trim().parse().map_err(|_| bad("score"))?,
            tier: fields[3].trim().parse().map_err(|_| bad("tier"))?,
        });
    }
    Ok(pairs)
}

/// Writes the accepted pairs in source order plus the TSV report.
pub fn write_bitext(
    result: &FilterResult,
    bitext: &Bitext,
    out_src: impl AsRef<Path>,
    out_tgt: impl AsRef<Path>,
    report: impl AsRef<Path>,
) -> Result<()> {
    let mut accepted = result.accepted.clone();
    accepted.sort_by_key(|p| (p.src, p.tgt));
    for p in &accepted {
        if p.src >= bitext.source.len() || p.tgt >= bitext.target.len() {
            return Err(Error::Invalid(format!(
                "pair ({}, {}) is out of range for a {}x{} bitext",
                p.src,
                p.tgt,
                bitext.source.len(),
                bitext.target.len()
            )));
        }
    }
    let src: Vec<&str> = accepted.iter().map(|p| bitext.source.lines[p.src].as_str()).collect();
    let tgt: Vec<&str> = accepted.iter().map(|p| bitext.target.lines[p.tgt].as_str()).collect();
    write_lines(out_src, &src)?;
    write_lines(out_tgt, &tgt)?;
    let report = report.as_ref();
    fs::write(report, format_report(&accepted)).map_err(|e| Error::io(report, e))
}
