//! Command-line front end.
//!
//! Every subcommand that writes a report also writes
//! `<report>.manifest.json` recording the resolved configuration, SHA-256
//! digests of the inputs, the tool version and the wall time.
//!
//! If `BIFILTER_CONFIG` names a file, its `key value` lines supply default
//! flag values (`window 10`, `allow-reuse true`, ...); flags given on the
//! command line win.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{CommandFactory, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::corpus_io::{
    ensure_translations, lang_from_path, load_bitext, load_corpus, read_report, vocab_stats, write_bitext, write_corpus,
    Bitext, TranslationProvider,
};
use crate::error::{Error, Result};
use crate::filter::{align_filter, evaluate_filtering, load_gold, FilterConfig, FilterResult, Window};
use crate::metrics::{evaluate, BleuParams, EvalOptions, MeteorParams, MetricId, NIST_DEFAULT_ORDER};
use crate::seq_align::{align, format_pairs, threshold_filter, AlignConfig, ChainScorer, Engine, LexiconScorer};
use crate::similarity::{ComparatorChain, Granularity, TextComparators};
use crate::textnorm::{tokenize, StopList, SynonymLexicon};

pub const CONFIG_ENV: &str = "BIFILTER_CONFIG";

#[derive(Debug, Parser)]
#[command(name = "bifilter", version, about = "Filter noisy bilingual corpora, align comparable documents and score MT output")]
#[command(args_override_self = true)]
pub struct Cli {
    /// Worker threads for pair scoring and segment metrics; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Keep the sentence pairs whose translated source matches a target line.
    Filter(FilterArgs),
    /// Align the sentences of two comparable documents.
    Align(AlignArgs),
    /// Score candidate translations against references.
    Evaluate(EvaluateArgs),
    /// Count sentence pairs and per-side vocabulary.
    Stats(StatsArgs),
    /// Compare a filter report with gold poor/good labels.
    EvalFilter(EvalFilterArgs),
}

#[derive(Debug, clap::Args)]
pub struct FilterArgs {
    /// Source-language corpus.
    #[arg(long)]
    pub src: PathBuf,
    /// Target-language corpus.
    #[arg(long)]
    pub tgt: PathBuf,
    /// Source corpus machine-translated into the target language.
    #[arg(long)]
    pub trans: Option<PathBuf>,
    /// Shell command that translates stdin lines to stdout lines; fills
    /// translations missing from --trans. `{src_lang}`/`{tgt_lang}` are substituted.
    #[arg(long)]
    pub translate_cmd: Option<String>,
    /// Lines per translation command invocation.
    #[arg(long, default_value_t = TranslationProvider::DEFAULT_BATCH_SIZE)]
    pub batch_size: usize,
    /// Save the completed translation layer here.
    #[arg(long)]
    pub save_trans: Option<PathBuf>,
    /// Source language tag [default: extension of --src].
    #[arg(long)]
    pub src_lang: Option<String>,
    /// Target language tag [default: extension of --tgt].
    #[arg(long)]
    pub tgt_lang: Option<String>,
    /// Comparator chain file [default: overlap 0.99, ratio 0.90, synonym_ratio 0.75, final 0.55].
    #[arg(long)]
    pub chain: Option<PathBuf>,
    /// Override the chain's final threshold.
    #[arg(long)]
    pub final_threshold: Option<f64>,
    /// Override the chain's comparison granularity (chars|tokens).
    #[arg(long)]
    pub granularity: Option<Granularity>,
    /// Candidate half-width around the diagonal, or `inf`.
    #[arg(long, default_value_t = Window::Lines(FilterConfig::DEFAULT_WINDOW))]
    pub window: Window,
    /// Following translation lines that may contest a candidate.
    #[arg(long, default_value_t = FilterConfig::DEFAULT_LOOKAHEAD)]
    pub lookahead: usize,
    /// Let one target line pair with several source lines.
    #[arg(long)]
    pub allow_reuse: bool,
    /// Deferrals per source line before contested targets go first-come.
    #[arg(long, default_value_t = FilterConfig::DEFAULT_MAX_DISPLACEMENTS)]
    pub max_displacements: usize,
    /// Stopword file for the target language [default: shipped list for --tgt-lang].
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Synonym lexicon (`word<TAB>syn1,syn2`).
    #[arg(long)]
    pub synonyms: Option<PathBuf>,
    /// Maximum synonym variants per sentence.
    #[arg(long, default_value_t = TextComparators::DEFAULT_VARIANT_CAP)]
    pub variant_cap: usize,
    /// Expand synonyms on the target side as well.
    #[arg(long)]
    pub expand_both: bool,
    /// Filtered source corpus.
    #[arg(long)]
    pub out_src: PathBuf,
    /// Filtered target corpus.
    #[arg(long)]
    pub out_tgt: PathBuf,
    /// Accepted-pair report (TSV).
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ScorerKind {
    Lexicon,
    Chain,
}

#[derive(Debug, clap::Args)]
pub struct AlignArgs {
    /// First document, one sentence per line.
    #[arg(long)]
    pub doc_a: PathBuf,
    /// Second document, one sentence per line.
    #[arg(long)]
    pub doc_b: PathBuf,
    /// Pair scorer.
    #[arg(long, value_enum, default_value_t = ScorerKind::Lexicon)]
    pub scorer: ScorerKind,
    /// Translation dictionary (`src_word<TAB>tgt_word<TAB>prob`); required by the lexicon scorer.
    #[arg(long)]
    pub dict: Option<PathBuf>,
    /// Stopword file for --doc-a [default: shipped list for its extension].
    #[arg(long)]
    pub stopwords_a: Option<PathBuf>,
    /// Stopword file for --doc-b [default: shipped list for its extension].
    #[arg(long)]
    pub stopwords_b: Option<PathBuf>,
    /// Comparator chain file for the chain scorer [default: built-in chain].
    #[arg(long)]
    pub chain: Option<PathBuf>,
    /// Cost of leaving one sentence unaligned.
    #[arg(long, default_value_t = AlignConfig::default().gap_penalty)]
    pub gap: f64,
    /// Minimum likelihood of a reported pair.
    #[arg(long, default_value_t = AlignConfig::default().threshold)]
    pub threshold: f64,
    /// Search engine (dp|astar).
    #[arg(long, default_value_t = Engine::Astar)]
    pub engine: Engine,
    /// Output pairs (TSV `i<TAB>j<TAB>likelihood`).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct EvaluateArgs {
    /// Candidate translations, one segment per line.
    #[arg(long)]
    pub cand: PathBuf,
    /// Reference translations; repeat for multiple references.
    #[arg(long = "ref", required = true)]
    pub refs: Vec<PathBuf>,
    /// Comma-separated metrics.
    #[arg(long, default_value = "bleu,nist,ter,meteor")]
    pub metrics: String,
    /// Maximum BLEU n-gram order (uniform weights).
    #[arg(long, default_value_t = BleuParams::DEFAULT_ORDER)]
    pub bleu_order: usize,
    /// Maximum NIST n-gram order.
    #[arg(long, default_value_t = NIST_DEFAULT_ORDER)]
    pub nist_order: usize,
    /// Exponent of the METEOR fragmentation penalty.
    #[arg(long, default_value_t = MeteorParams::default().penalty_exponent)]
    pub meteor_penalty_exponent: f64,
    /// Synonym lexicon for METEOR.
    #[arg(long)]
    pub synonyms: Option<PathBuf>,
    /// Lowercase tokens before scoring.
    #[arg(long)]
    pub lowercase: bool,
    /// JSON report.
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct StatsArgs {
    /// Source-language corpus.
    #[arg(long)]
    pub src: PathBuf,
    /// Target-language corpus.
    #[arg(long)]
    pub tgt: PathBuf,
    /// Also write the counts as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct EvalFilterArgs {
    /// Accepted-pair report written by `filter`.
    #[arg(long)]
    pub report: PathBuf,
    /// Gold labels (TSV `src_idx<TAB>tgt_idx<TAB>poor|good`).
    #[arg(long)]
    pub gold: PathBuf,
    /// Also write the counters as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct RunManifest {
    subcommand: &'static str,
    version: &'static str,
    config: Value,
    inputs: BTreeMap<String, String>,
    wall_time_secs: f64,
}

fn digest(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(format!("{:x}", Sha256::digest(&bytes)))
}

pub fn manifest_path(report: &Path) -> PathBuf {
    let mut name = report.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn write_manifest(
    report: &Path,
    subcommand: &'static str,
    config: Value,
    inputs: &[&Path],
    started: Instant,
) -> Result<()> {
    let mut digests = BTreeMap::new();
    for p in inputs {
        digests.insert(p.display().to_string(), digest(p)?);
    }
    let manifest = RunManifest {
        subcommand,
        version: env!("CARGO_PKG_VERSION"),
        config,
        inputs: digests,
        wall_time_secs: started.elapsed().as_secs_f64(),
    };
    let path = manifest_path(report);
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serialises");
    fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn opt_display(p: &Option<PathBuf>) -> Value {
    p.as_ref().map_or(Value::Null, |p| json!(p.display().to_string()))
}

fn load_stoplist(file: Option<&Path>, lang: &str) -> Result<StopList> {
    match file {
        Some(p) => StopList::load(p, lang),
        None => Ok(StopList::for_lang(lang)),
    }
}

fn load_lexicon(file: Option<&Path>) -> Result<SynonymLexicon> {
    file.map_or_else(|| Ok(SynonymLexicon::new()), SynonymLexicon::load)
}

fn load_chain(file: Option<&Path>, final_threshold: Option<f64>, granularity: Option<Granularity>) -> Result<ComparatorChain> {
    let mut chain = file.map_or_else(|| Ok(ComparatorChain::default()), ComparatorChain::load)?;
    if let Some(t) = final_threshold {
        chain = chain.with_final_threshold(t)?;
    }
    if let Some(g) = granularity {
        chain = ComparatorChain::new(chain.tiers().to_vec(), chain.final_threshold(), g)?;
    }
    Ok(chain)
}

fn cmd_filter(a: &FilterArgs, jobs: usize) -> Result<()> {
    let started = Instant::now();
    let chain = load_chain(a.chain.as_deref(), a.final_threshold, a.granularity)?;
    let src_lang = a.src_lang.clone().unwrap_or_else(|| lang_from_path(&a.src));
    let tgt_lang = a.tgt_lang.clone().unwrap_or_else(|| lang_from_path(&a.tgt));
    let stoplist = load_stoplist(a.stopwords.as_deref(), &tgt_lang)?;
    let mut comparators = TextComparators::new(stoplist, load_lexicon(a.synonyms.as_deref())?);
    comparators.variant_cap = a.variant_cap;
    comparators.expand_both = a.expand_both;

    let mut bitext = load_bitext(&a.src, &a.tgt, a.trans.as_deref())?;
    bitext.source.lang = src_lang.clone();
    bitext.target.lang = tgt_lang.clone();
    if let Some(cmd) = &a.translate_cmd {
        if a.batch_size == 0 {
            return Err(Error::Config("--batch-size must be positive".into()));
        }
        let provider = TranslationProvider::Command {
            template: cmd.clone(),
            batch_size: a.batch_size,
        };
        bitext = ensure_translations(bitext, &provider)?;
    }
    if let (Some(path), Some(trans)) = (&a.save_trans, &bitext.trans) {
        write_corpus(path, trans)?;
    }

    let cfg = FilterConfig {
        chain,
        window: a.window,
        lookahead: a.lookahead,
        allow_reuse: a.allow_reuse,
        max_displacements: a.max_displacements,
    };
    let result = align_filter(&bitext, &cfg, &comparators)?;
    write_bitext(&result, &bitext, &a.out_src, &a.out_tgt, &a.report)?;
    eprintln!(
        "accepted {} of {} pairs; dropped {} source and {} target lines",
        result.accepted.len(),
        bitext.source.len(),
        result.dropped_src.len(),
        result.dropped_tgt.len()
    );

    let config = json!({
        "src": a.src.display().to_string(),
        "tgt": a.tgt.display().to_string(),
        "trans": opt_display(&a.trans),
        "translate_cmd": a.translate_cmd,
        "batch_size": a.batch_size,
        "src_lang": src_lang,
        "tgt_lang": tgt_lang,
        "chain": cfg.chain.to_config(),
        "window": cfg.window.to_string(),
        "lookahead": cfg.lookahead,
        "allow_reuse": cfg.allow_reuse,
        "max_displacements": cfg.max_displacements,
        "stopwords": opt_display(&a.stopwords),
        "synonyms": opt_display(&a.synonyms),
        "variant_cap": a.variant_cap,
        "expand_both": a.expand_both,
        "jobs": jobs,
    });
    let mut inputs: Vec<&Path> = vec![&a.src, &a.tgt];
    inputs.extend(a.trans.as_deref());
    inputs.extend(a.chain.as_deref());
    inputs.extend(a.stopwords.as_deref());
    inputs.extend(a.synonyms.as_deref());
    write_manifest(&a.report, "filter", config, &inputs, started)
}

fn cmd_align(a: &AlignArgs, jobs: usize) -> Result<()> {
    let started = Instant::now();
    let cfg = AlignConfig::new(a.gap, a.threshold, a.engine)?;
    let doc_a = load_corpus(&a.doc_a, &lang_from_path(&a.doc_a))?;
    let doc_b = load_corpus(&a.doc_b, &lang_from_path(&a.doc_b))?;

    let alignment = match a.scorer {
        ScorerKind::Lexicon => {
            let dict = a
                .dict
                .as_deref()
                .ok_or_else(|| Error::Config("the lexicon scorer needs --dict".into()))?;
            let mut scorer = LexiconScorer::new(
                load_stoplist(a.stopwords_a.as_deref(), &doc_a.lang)?,
                load_stoplist(a.stopwords_b.as_deref(), &doc_b.lang)?,
            );
            scorer.load_dictionary(dict)?;
            align(&doc_a.lines, &doc_b.lines, &scorer, &cfg)
        }
        ScorerKind::Chain => {
            let scorer = ChainScorer {
                chain: load_chain(a.chain.as_deref(), None, None)?,
                comparators: TextComparators::new(
                    load_stoplist(a.stopwords_b.as_deref(), &doc_b.lang)?,
                    SynonymLexicon::new(),
                ),
            };
            align(&doc_a.lines, &doc_b.lines, &scorer, &cfg)
        }
    };
    let kept = threshold_filter(&alignment, cfg.threshold);
    write_text(&a.out, &format_pairs(&kept))?;
    eprintln!(
        "{} aligned pairs, {} at or above threshold; {} + {} gaps",
        alignment.pairs.len(),
        kept.len(),
        alignment.gaps_a.len(),
        alignment.gaps_b.len()
    );

    let config = json!({
        "doc_a": a.doc_a.display().to_string(),
        "doc_b": a.doc_b.display().to_string(),
        "scorer": format!("{:?}", a.scorer).to_lowercase(),
        "dict": opt_display(&a.dict),
        "stopwords_a": opt_display(&a.stopwords_a),
        "stopwords_b": opt_display(&a.stopwords_b),
        "chain": opt_display(&a.chain),
        "gap": cfg.gap_penalty,
        "threshold": cfg.threshold,
        "engine": cfg.engine.to_string(),
        "jobs": jobs,
    });
    let mut inputs: Vec<&Path> = vec![&a.doc_a, &a.doc_b];
    inputs.extend(a.dict.as_deref());
    inputs.extend(a.stopwords_a.as_deref());
    inputs.extend(a.stopwords_b.as_deref());
    inputs.extend(a.chain.as_deref());
    write_manifest(&a.out, "align", config, &inputs, started)
}

fn cmd_evaluate(a: &EvaluateArgs, jobs: usize) -> Result<()> {
    let started = Instant::now();
    let metrics = MetricId::parse_list(&a.metrics)?;
    let opts = EvalOptions {
        bleu: BleuParams::uniform(a.bleu_order)?,
        nist_order: a.nist_order,
        meteor: MeteorParams {
            penalty_exponent: a.meteor_penalty_exponent,
        },
        lexicon: load_lexicon(a.synonyms.as_deref())?,
    };
    if !(a.meteor_penalty_exponent.is_finite() && a.meteor_penalty_exponent > 0.0) {
        return Err(Error::Config("--meteor-penalty-exponent must be positive".into()));
    }
    let cand = load_corpus(&a.cand, &lang_from_path(&a.cand))?;
    let mut refs: Vec<Vec<_>> = vec![Vec::with_capacity(a.refs.len()); cand.len()];
    for path in &a.refs {
        let r = load_corpus(path, &lang_from_path(path))?;
        if r.len() != cand.len() {
            return Err(Error::LengthMismatch {
                what: path.display().to_string(),
                expected: cand.len(),
                found: r.len(),
            });
        }
        for (slot, line) in refs.iter_mut().zip(&r.lines) {
            slot.push(tokenize(line, a.lowercase));
        }
    }
    let cands: Vec<_> = cand.lines.iter().map(|l| tokenize(l, a.lowercase)).collect();
    let report = evaluate(&cands, &refs, &metrics, &opts)?;
    let text = serde_json::to_string_pretty(&report).expect("report serialises");
    write_text(&a.report, &(text + "\n"))?;

    println!("metric\tscore\tpercent");
    let row = |name: &str, score: f64, percent: Option<f64>| {
        let pct = percent.map_or_else(|| "-".to_string(), |p| format!("{p:.2}"));
        println!("{name}\t{score:.4}\t{pct}");
    };
    if let Some(s) = &report.bleu {
        row("BLEU", s.score, s.percent);
    }
    if let Some(s) = &report.nist {
        row("NIST", s.score, s.percent);
    }
    if let Some(s) = &report.ter {
        row("TER", s.score, s.percent);
    }
    if let Some(s) = &report.meteor {
        row("METEOR", s.score, s.percent);
    }

    let config = json!({
        "cand": a.cand.display().to_string(),
        "refs": a.refs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "metrics": metrics.iter().map(|m| m.name()).collect::<Vec<_>>(),
        "bleu_order": a.bleu_order,
        "nist_order": a.nist_order,
        "meteor_penalty_exponent": a.meteor_penalty_exponent,
        "synonyms": opt_display(&a.synonyms),
        "lowercase": a.lowercase,
        "jobs": jobs,
    });
    let mut inputs: Vec<&Path> = vec![&a.cand];
    inputs.extend(a.refs.iter().map(PathBuf::as_path));
    inputs.extend(a.synonyms.as_deref());
    write_manifest(&a.report, "evaluate", config, &inputs, started)
}

fn vocab_label(lang: &str, fallback: &str) -> String {
    if lang == "und" || lang.is_empty() {
        fallback.to_string()
    } else {
        lang.to_uppercase()
    }
}

fn cmd_stats(a: &StatsArgs, jobs: usize) -> Result<()> {
    let started = Instant::now();
    let source = load_corpus(&a.src, &lang_from_path(&a.src))?;
    let target = load_corpus(&a.tgt, &lang_from_path(&a.tgt))?;
    let (src_label, tgt_label) = (vocab_label(&source.lang, "SRC"), vocab_label(&target.lang, "TGT"));
    let stats = vocab_stats(&Bitext::new(source, target, None)?);
    println!("Sentence Pairs\t{src_label} Vocabulary\t{tgt_label} Vocabulary");
    println!("{}\t{}\t{}", stats.sentence_pairs, stats.source_vocab, stats.target_vocab);
    if let Some(report) = &a.report {
        let text = serde_json::to_string_pretty(&stats).expect("stats serialise");
        write_text(report, &(text + "\n"))?;
        let config = json!({
            "src": a.src.display().to_string(),
            "tgt": a.tgt.display().to_string(),
            "jobs": jobs,
        });
        write_manifest(report, "stats", config, &[&a.src, &a.tgt], started)?;
    }
    Ok(())
}

fn cmd_eval_filter(a: &EvalFilterArgs, jobs: usize) -> Result<()> {
    let started = Instant::now();
    let result = FilterResult {
        accepted: read_report(&a.report)?,
        ..Default::default()
    };
    let gold = load_gold(&a.gold)?;
    let quality = evaluate_filtering(&result, &gold)?;
    print!("{quality}");
    if let Some(out) = &a.out {
        let text = serde_json::to_string_pretty(&quality).expect("counters serialise");
        write_text(out, &(text + "\n"))?;
        let config = json!({
            "report": a.report.display().to_string(),
            "gold": a.gold.display().to_string(),
            "jobs": jobs,
        });
        write_manifest(out, "eval-filter", config, &[&a.report, &a.gold], started)?;
    }
    Ok(())
}

/// Turns `key value` lines into flags for `subcommand`. Keys belonging only
/// to other subcommands are skipped; keys known to none are an error.
fn config_args(text: &str, path: &Path, subcommand: &str) -> Result<Vec<OsString>> {
    let cmd = Cli::command();
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let key = key.trim_start_matches("--");
        let value = value.trim();
        let known = cmd
            .get_subcommands()
            .any(|s| s.get_arguments().any(|a| a.get_long() == Some(key)))
            || cmd.get_arguments().any(|a| a.get_long() == Some(key));
        if !known {
            return Err(Error::parse(path, idx + 1, format!("unknown option `{key}`")));
        }
        let Some(arg) = cmd
            .find_subcommand(subcommand)
            .and_then(|s| s.get_arguments().find(|a| a.get_long() == Some(key)))
            .or_else(|| cmd.get_arguments().find(|a| a.get_long() == Some(key)))
        else {
            continue;
        };
        if arg.get_action().takes_values() {
            if value.is_empty() {
                return Err(Error::parse(path, idx + 1, format!("`{key}` needs a value")));
            }
            out.push(format!("--{key}").into());
            out.push(value.into());
        } else {
            match value {
                "" | "true" => out.push(format!("--{key}").into()),
                "false" => {}
                other => return Err(Error::parse(path, idx + 1, format!("`{key}` expects true or false, got `{other}`"))),
            }
        }
    }
    Ok(out)
}

/// Inserts defaults from the `BIFILTER_CONFIG` file right after the
/// subcommand name so that later command-line flags override them.
fn with_config_defaults(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(config) = std::env::var_os(CONFIG_ENV).filter(|v| !v.is_empty()) else {
        return Ok(args);
    };
    let cmd = Cli::command();
    let position = args.iter().skip(1).position(|a| {
        a.to_str()
            .is_some_and(|s| cmd.get_subcommands().any(|c| c.get_name() == s))
    });
    let Some(position) = position.map(|p| p + 1) else {
        return Ok(args);
    };
    let path = PathBuf::from(config);
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let sub = args[position].to_string_lossy().into_owned();
    let extra = config_args(&text, &path, &sub)?;
    let mut out = args;
    out.splice(position + 1..position + 1, extra);
    Ok(out)
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match with_config_defaults(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return 1;
        }
    };
    let outcome = pool.install(|| match &cli.command {
        Command::Filter(a) => cmd_filter(a, cli.jobs),
        Command::Align(a) => cmd_align(a, cli.jobs),
        Command::Evaluate(a) => cmd_evaluate(a, cli.jobs),
        Command::Stats(a) => cmd_stats(a, cli.jobs),
        Command::EvalFilter(a) => cmd_eval_filter(a, cli.jobs),
    });
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
