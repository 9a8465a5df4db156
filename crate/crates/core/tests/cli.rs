use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bifilter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bifilter"))
        .args(args)
        .env_remove("BIFILTER_CONFIG")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

struct Fixture {
    dir: tempfile::TempDir,
    src: String,
    tgt: String,
    trans: String,
}

fn tiny() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let src = write(dir.path(), "s.pl", "Idę do szkoły.\nISBN 8389795299.\nKot śpi na macie.\n");
    let tgt = write(dir.path(), "s.en", "I go to school.\nISBN 1-55164-250-6.\nThe cat sleeps on the mat.\n");
    let trans = write(dir.path(), "s.trans", "I go to school.\nThe book number.\nThe cat is sleeping on the mat.\n");
    Fixture { dir, src, tgt, trans }
}

fn filter_args<'a>(f: &'a Fixture, out: &'a [String; 3]) -> Vec<&'a str> {
    vec![
        "filter", "--src", &f.src, "--tgt", &f.tgt, "--trans", &f.trans, "--out-src", &out[0], "--out-tgt", &out[1], "--report", &out[2],
    ]
}

fn outputs(f: &Fixture) -> [String; 3] {
    ["clean.pl", "clean.en", "report.tsv"].map(|n| path(f.dir.path(), n))
}

#[test]
fn filter_writes_clean_bitext_report_and_manifest() {
    let f = tiny();
    let out = outputs(&f);
    let o = bifilter(&filter_args(&f, &out));
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(&out[0]).unwrap(), "Idę do szkoły.\nKot śpi na macie.\n");
    assert_eq!(fs::read_to_string(&out[1]).unwrap(), "I go to school.\nThe cat sleeps on the mat.\n");
    let report = fs::read_to_string(&out[2]).unwrap();
    assert!(report.starts_with("src_idx\ttgt_idx\tscore\ttier\n0\t0\t1.0000\t0\n2\t2\t"), "{report}");

    let manifest: Value = serde_json::from_str(&fs::read_to_string(format!("{}.manifest.json", out[2])).unwrap()).unwrap();
    assert_eq!(manifest["subcommand"], "filter");
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(manifest["config"]["window"], "30");
    assert_eq!(manifest["config"]["lookahead"], 1);
    assert_eq!(manifest["inputs"].as_object().unwrap().len(), 3);
    assert_eq!(manifest["inputs"][&f.src].as_str().unwrap().len(), 64);
}

#[test]
fn filter_is_repeatable() {
    let f = tiny();
    let out = outputs(&f);
    assert!(bifilter(&filter_args(&f, &out)).status.success());
    let first: Vec<Vec<u8>> = out.iter().map(|p| fs::read(p).unwrap()).collect();
    assert!(bifilter(&filter_args(&f, &out)).status.success());
    let second: Vec<Vec<u8>> = out.iter().map(|p| fs::read(p).unwrap()).collect();
    assert_eq!(first, second);
}

#[test]
fn filter_without_translations_is_a_config_error() {
    let f = tiny();
    let out = outputs(&f);
    let o = bifilter(&[
        "filter", "--src", &f.src, "--tgt", &f.tgt, "--out-src", &out[0], "--out-tgt", &out[1], "--report", &out[2],
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--translate-cmd"), "{}", stderr(&o));
}

#[test]
fn negative_window_is_rejected() {
    let f = tiny();
    let out = outputs(&f);
    let mut args = filter_args(&f, &out);
    args.extend(["--window", "-3"]);
    assert_eq!(bifilter(&args).status.code(), Some(2));
    let mut args = filter_args(&f, &out);
    args.extend(["--window=-3"]);
    assert_eq!(bifilter(&args).status.code(), Some(2));
}

#[test]
fn unbounded_window_is_accepted() {
    let f = tiny();
    let out = outputs(&f);
    let mut args = filter_args(&f, &out);
    args.extend(["--window", "inf"]);
    assert!(bifilter(&args).status.success());
}

#[test]
fn missing_input_is_an_io_error_naming_the_file() {
    let f = tiny();
    let out = outputs(&f);
    let missing = path(f.dir.path(), "nope.pl");
    let o = bifilter(&[
        "filter", "--src", &missing, "--tgt", &f.tgt, "--trans", &f.trans, "--out-src", &out[0], "--out-tgt", &out[1], "--report", &out[2],
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("nope.pl"));
}

#[test]
fn bad_chain_file_names_the_line() {
    let f = tiny();
    let out = outputs(&f);
    let chain = write(f.dir.path(), "chain.cfg", "tier ratio 0.9\ntier cosine 0.5\n");
    let mut args = filter_args(&f, &out);
    args.extend(["--chain", &chain]);
    let o = bifilter(&args);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("chain.cfg:2"), "{}", stderr(&o));
}

#[test]
fn translation_command_fills_missing_lines() {
    let dir = tempfile::tempdir().unwrap();
    let src = write(dir.path(), "a.xx", "the cat sat\nhello world\n");
    let tgt = write(dir.path(), "b.en", "THE CAT SAT\nHELLO WORLD\n");
    let out = ["o.xx", "o.en", "r.tsv", "t.txt"].map(|n| path(dir.path(), n));
    let o = bifilter(&[
        "filter", "--src", &src, "--tgt", &tgt, "--translate-cmd", "tr a-z A-Z", "--save-trans", &out[3], "--out-src", &out[0],
        "--out-tgt", &out[1], "--report", &out[2],
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(&out[3]).unwrap(), "THE CAT SAT\nHELLO WORLD\n");
    assert_eq!(fs::read_to_string(&out[0]).unwrap(), "the cat sat\nhello world\n");
}

#[test]
fn failing_translation_command_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let src = write(dir.path(), "a.xx", "one\n");
    let tgt = write(dir.path(), "b.en", "one\n");
    let out = ["o.xx", "o.en", "r.tsv"].map(|n| path(dir.path(), n));
    let o = bifilter(&[
        "filter", "--src", &src, "--tgt", &tgt, "--translate-cmd", "exit 3", "--out-src", &out[0], "--out-tgt", &out[1], "--report",
        &out[2],
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_supplies_defaults_and_flags_override_it() {
    let f = tiny();
    let out = outputs(&f);
    let cfg = write(f.dir.path(), "defaults.cfg", "# shared defaults\nwindow 5\nlookahead 2\ngap 0.4\n");
    let run = |extra: &[&str]| {
        let mut args = filter_args(&f, &out);
        args.extend(extra);
        let o = Command::new(env!("CARGO_BIN_EXE_bifilter"))
            .args(&args)
            .env("BIFILTER_CONFIG", &cfg)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        let m: Value = serde_json::from_str(&fs::read_to_string(format!("{}.manifest.json", out[2])).unwrap()).unwrap();
        (m["config"]["window"].clone(), m["config"]["lookahead"].clone())
    };
    assert_eq!(run(&[]), (Value::from("5"), Value::from(2)));
    assert_eq!(run(&["--window", "7"]), (Value::from("7"), Value::from(2)));

    let bad = write(f.dir.path(), "bad.cfg", "windw 5\n");
    let o = Command::new(env!("CARGO_BIN_EXE_bifilter"))
        .args(filter_args(&f, &out))
        .env("BIFILTER_CONFIG", &bad)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.cfg:1"));
}

#[test]
fn help_lists_defaults() {
    let o = bifilter(&["filter", "--help"]);
    let text = stdout(&o);
    for needle in [
        "--window <WINDOW>",
        "[default: 30]",
        "--lookahead <LOOKAHEAD>",
        "[default: 1]",
        "--max-displacements",
        "[default: 3]",
        "--variant-cap",
        "[default: 64]",
        "--batch-size",
        "[default: 100]",
        "--allow-reuse",
        "--jobs",
    ] {
        assert!(text.contains(needle), "missing {needle} in\n{text}");
    }
    let text = stdout(&bifilter(&["align", "--help"]));
    for needle in ["[default: 0.2]", "[default: 0.5]", "[default: astar]", "[default: lexicon]"] {
        assert!(text.contains(needle), "missing {needle} in\n{text}");
    }
    let text = stdout(&bifilter(&["evaluate", "--help"]));
    for needle in ["[default: bleu,nist,ter,meteor]", "[default: 4]", "[default: 5]", "[default: 1]"] {
        assert!(text.contains(needle), "missing {needle} in\n{text}");
    }
}

struct AlignFixture {
    dir: tempfile::TempDir,
    a: String,
    b: String,
    dict: String,
}

fn align_fixture() -> AlignFixture {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.pl", "kot śpi\npies biega\nptak śpiewa\n");
    let b = write(dir.path(), "b.en", "the cat sleeps\nthe dog runs\nthe bird sings\n");
    let dict = write(
        dir.path(),
        "dict.tsv",
        "kot\tcat\t1.0\nśpi\tsleeps\t0.8\npies\tdog\t1.0\nbiega\truns\t0.7\nptak\tbird\t1.0\nśpiewa\tsings\t0.9\n",
    );
    AlignFixture { dir, a, b, dict }
}

fn run_align(f: &AlignFixture, out: &str, extra: &[&str]) -> Output {
    let mut args = vec!["align", "--doc-a", &f.a, "--doc-b", &f.b, "--dict", &f.dict, "--out", out];
    args.extend(extra);
    bifilter(&args)
}

#[test]
fn align_identity_documents_gives_diagonal() {
    let f = align_fixture();
    let out = path(f.dir.path(), "pairs.tsv");
    let o = run_align(&f, &out, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(&out).unwrap(), "i\tj\tlikelihood\n0\t0\t0.9000\n1\t1\t0.8500\n2\t2\t0.9500\n");
    assert!(Path::new(&format!("{out}.manifest.json")).exists());
}

#[test]
fn align_threshold_one_keeps_only_header() {
    let f = align_fixture();
    let out = path(f.dir.path(), "pairs.tsv");
    assert!(run_align(&f, &out, &["--threshold", "1.0"]).status.success());
    assert_eq!(fs::read_to_string(&out).unwrap(), "i\tj\tlikelihood\n");
}

#[test]
fn align_engines_write_identical_pairs() {
    let f = align_fixture();
    let (dp, astar) = (path(f.dir.path(), "dp.tsv"), path(f.dir.path(), "astar.tsv"));
    assert!(run_align(&f, &dp, &["--engine", "dp"]).status.success());
    assert!(run_align(&f, &astar, &["--engine", "astar"]).status.success());
    assert_eq!(fs::read(dp).unwrap(), fs::read(astar).unwrap());
}

#[test]
fn align_config_errors() {
    let f = align_fixture();
    let out = path(f.dir.path(), "pairs.tsv");
    assert_eq!(run_align(&f, &out, &["--gap", "-1"]).status.code(), Some(2));
    assert_eq!(run_align(&f, &out, &["--engine", "beam"]).status.code(), Some(2));
    let o = bifilter(&["align", "--doc-a", &f.a, "--doc-b", &f.b, "--out", &out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--dict"));
}

#[test]
fn evaluate_identity_and_metric_selection() {
    let dir = tempfile::tempdir().unwrap();
    let cand = write(dir.path(), "cand.en", "the cat sat on the mat\nthere is a dog here\n");
    let report = path(dir.path(), "m.json");
    let o = bifilter(&["evaluate", "--cand", &cand, "--ref", &cand, "--report", &report]);
    assert!(o.status.success(), "{}", stderr(&o));
    let m: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(m["bleu"]["score"], 1.0);
    assert_eq!(m["bleu"]["percent"], 100.0);
    assert_eq!(m["ter"]["score"], 0.0);
    assert!(m["nist"]["score"].as_f64().unwrap() > 0.0);
    assert!(m["nist"].get("percent").is_none());
    assert!(stdout(&o).starts_with("metric\tscore\tpercent\nBLEU\t1.0000\t100.00\n"));
    assert!(Path::new(&format!("{report}.manifest.json")).exists());

    let o = bifilter(&["evaluate", "--cand", &cand, "--ref", &cand, "--metrics", "ter", "--report", &report]);
    assert!(o.status.success());
    let m: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(m.get("bleu").is_none() && m.get("ter").is_some());

    let o = bifilter(&["evaluate", "--cand", &cand, "--ref", &cand, "--metrics", "bleu,rouge", "--report", &report]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn evaluate_matches_library_values() {
    use bifilter::metrics::{bleu, ter_corpus, BleuParams};
    use bifilter::textnorm::tokenize;

    let dir = tempfile::tempdir().unwrap();
    let cand_lines = ["the cat sat", "a c b d e"];
    let ref_lines = ["the cat sat down", "a b c d e"];
    let cand = write(dir.path(), "cand.en", &(cand_lines.join("\n") + "\n"));
    let refs = write(dir.path(), "ref.en", &(ref_lines.join("\n") + "\n"));
    let report = path(dir.path(), "m.json");
    let o = bifilter(&["evaluate", "--cand", &cand, "--ref", &refs, "--bleu-order", "2", "--report", &report]);
    assert!(o.status.success(), "{}", stderr(&o));
    let m: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();

    let c: Vec<_> = cand_lines.iter().map(|l| tokenize(l, false)).collect();
    let r: Vec<_> = ref_lines.iter().map(|l| vec![tokenize(l, false)]).collect();
    let b = bleu(&c, &r, &BleuParams::uniform(2).unwrap()).unwrap();
    let t = ter_corpus(&c, &r).unwrap();
    assert_eq!(m["bleu"]["score"].as_f64().unwrap(), b.score);
    assert_eq!(m["ter"]["score"].as_f64().unwrap(), t.score);
    assert_eq!(m["ter"]["edits"], 2);
}

#[test]
fn evaluate_reference_length_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let cand = write(dir.path(), "cand.en", "a\nb\n");
    let refs = write(dir.path(), "ref.en", "a\n");
    let report = path(dir.path(), "m.json");
    let o = bifilter(&["evaluate", "--cand", &cand, "--ref", &refs, "--report", &report]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ref.en"));
}

#[test]
fn stats_counts_pairs_and_vocabulary() {
    let f = tiny();
    let o = bifilter(&["stats", "--src", &f.src, "--tgt", &f.tgt]);
    assert!(o.status.success(), "{}", stderr(&o));
    // pl: idę do szkoły isbn 8389795299 kot śpi na macie
    // en: i go to school isbn 1-55164-250-6 the cat sleeps on mat
    assert_eq!(stdout(&o), "Sentence Pairs\tPL Vocabulary\tEN Vocabulary\n3\t9\t11\n");
}

#[test]
fn stats_on_empty_inputs_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let src = write(dir.path(), "e.pl", "");
    let tgt = write(dir.path(), "e.en", "");
    let report = path(dir.path(), "stats.json");
    let o = bifilter(&["stats", "--src", &src, "--tgt", &tgt, "--report", &report]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("\n0\t0\t0\n"));
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["sentence_pairs"], 0);
    assert!(Path::new(&format!("{report}.manifest.json")).exists());
}

#[test]
fn filtering_never_increases_pair_count() {
    let f = tiny();
    let out = outputs(&f);
    assert!(bifilter(&filter_args(&f, &out)).status.success());
    let count = |src: &str, tgt: &str| -> usize {
        let o = bifilter(&["stats", "--src", src, "--tgt", tgt]);
        stdout(&o).lines().nth(1).unwrap().split('\t').next().unwrap().parse().unwrap()
    };
    assert!(count(&out[0], &out[1]) <= count(&f.src, &f.tgt));
}

fn report_and_gold(dir: &Path, accepted: &[(usize, usize)], gold: &[(usize, usize, bool)]) -> (String, String) {
    let mut report = String::from("src_idx\ttgt_idx\tscore\ttier\n");
    for (s, t) in accepted {
        report.push_str(&format!("{s}\t{t}\t0.9000\t1\n"));
    }
    let mut labels = String::from("src_idx\ttgt_idx\tlabel\n");
    for (s, t, poor) in gold {
        labels.push_str(&format!("{s}\t{t}\t{}\n", if *poor { "poor" } else { "good" }));
    }
    (write(dir, "report.tsv", &report), write(dir, "gold.tsv", &labels))
}

#[test]
fn eval_filter_prints_four_counters() {
    // 1000 labelled pairs, 182 poor; the filter drops 154 poor and 12 good.
    let dir = tempfile::tempdir().unwrap();
    let gold: Vec<(usize, usize, bool)> = (0..1000).map(|i| (i, i, i < 182)).collect();
    let accepted: Vec<(usize, usize)> = (154..1000 - 12).map(|i| (i, i)).collect();
    let (report, labels) = report_and_gold(dir.path(), &accepted, &gold);
    let out = path(dir.path(), "quality.json");
    let o = bifilter(&["eval-filter", "--report", &report, "--gold", &labels, "--out", &out]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "Number of sentences in base corpus\t1000\n\
         Number of poor sentences in test corpus\t182\n\
         Number of poor filtered sentences\t154\n\
         Number of good filtered sentences\t12\n"
    );
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["poor_filtered"], 154);
}

#[test]
fn eval_filter_perfect_filter_and_missing_labels() {
    let dir = tempfile::tempdir().unwrap();
    let gold = [(0, 0, false), (1, 1, true), (2, 2, false)];
    let (report, labels) = report_and_gold(dir.path(), &[(0, 0), (2, 2)], &gold);
    let o = bifilter(&["eval-filter", "--report", &report, "--gold", &labels]);
    assert!(stdout(&o).ends_with("filtered sentences\t1\nNumber of good filtered sentences\t0\n"));

    let (report, labels) = report_and_gold(dir.path(), &[(0, 0), (2, 2)], &gold[..2]);
    let o = bifilter(&["eval-filter", "--report", &report, "--gold", &labels]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn no_arguments_prints_usage_with_config_exit_code() {
    let o = bifilter(&[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
    let o = bifilter(&["--version"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains(env!("CARGO_PKG_VERSION")));
}
