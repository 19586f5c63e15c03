mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use silabi::corpus::{compute_report, render_words, segment_line};
use silabi::{normalize, train_bpe, MergeTable, SyllableTokenizer};
use tempfile::TempDir;

fn silabi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_silabi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = path(dir, name);
    fs::write(&p, text).unwrap();
    p
}

fn read(p: impl AsRef<Path>) -> String {
    fs::read_to_string(p).unwrap()
}

#[test]
fn tokenize_kula() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.txt", "kula\nAnakula mkate\n\n");
    let out = path(&dir, "out.txt");
    let o = silabi(&["tokenize", "--scheme", "syllable", "--input", &input, "--output", &out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(read(&out), "ku la\na na ku la | m ka te\n\n");
}

#[test]
fn tokenize_ids_and_separator() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.txt", "a a\n");
    let o = silabi(&["tokenize", "--ids", "--separator", " / ", "--input", &input]);
    assert!(o.status.success());
    let tok = SyllableTokenizer::default();
    let a = tok.vocabulary().id("a").unwrap();
    assert_eq!(String::from_utf8(o.stdout).unwrap(), format!("{a} / {a}\n"));
}

#[test]
fn tokenize_empty_file() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.txt", "");
    let o = silabi(&["tokenize", "--input", &input]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn tokenize_threads_preserve_order() {
    let dir = TempDir::new().unwrap();
    let mut gen = common::SyntheticText::new(9);
    let lines = gen.sentences(20_000);
    let input = write(&dir, "in.txt", &(lines.join("\n") + "\n"));
    let one = silabi(&["tokenize", "--input", &input]);
    let four = silabi(&["--threads", "4", "tokenize", "--input", &input]);
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);

    let tok = SyllableTokenizer::default();
    let expected: String = lines
        .iter()
        .map(|l| render_words(&segment_line(&tok, l), " | ") + "\n")
        .collect();
    assert_eq!(String::from_utf8(one.stdout).unwrap(), expected);
}

#[test]
fn keep_unknown_flag() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.txt", "mwaka 16 bk\n");
    let o = silabi(&["tokenize", "--keep-unknown", "--input", &input]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "mwa ka | [UNK] [UNK] | b k\n");
    let o = silabi(&["tokenize", "--input", &input]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "mwa ka | b k\n");
}

#[test]
fn split_full_corpus() {
    let dir = TempDir::new().unwrap();
    let lines: String = (0..303_260).map(|i| format!("sentensi {i}\n")).collect();
    let input = write(&dir, "all.txt", &lines);
    let (train, test) = (path(&dir, "train.txt"), path(&dir, "test.txt"));
    let o = silabi(&[
        "split", "--fraction", "0.9", "--seed", "42", "--input", &input, "--train-out", &train,
        "--test-out", &test,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let train = read(&train);
    let test = read(&test);
    assert_eq!(train.lines().count(), 272_934);
    assert_eq!(test.lines().count(), 30_326);

    // same partition as the library call
    let all: Vec<&str> = lines.lines().collect();
    let (lib_train, lib_test) = silabi::split_corpus(&all, &silabi::SplitSpec::default()).unwrap();
    assert_eq!(train.lines().collect::<Vec<_>>(), lib_train);
    assert_eq!(test.lines().collect::<Vec<_>>(), lib_test);
}

#[test]
fn train_then_tokenize_bpe() {
    let dir = TempDir::new().unwrap();
    let mut gen = common::SyntheticText::new(1);
    let lines = gen.sentences(300);
    let corpus = write(&dir, "corpus.txt", &lines.join("\n"));
    let model = path(&dir, "merges.txt");
    let o = silabi(&["train-bpe", "--input", &corpus, "--output", &model, "--vocab-size", "120"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let normalized: Vec<String> = lines.iter().map(|l| normalize(l)).collect();
    let direct = train_bpe(&normalized, 120).unwrap();
    let loaded = MergeTable::read(read(&model).as_bytes()).unwrap();
    assert_eq!(loaded, direct);

    let o = silabi(&["tokenize", "--scheme", "bpe", "--model", &model, "--input", &corpus]);
    assert!(o.status.success());
    let first = String::from_utf8(o.stdout).unwrap().lines().next().unwrap().to_owned();
    assert_eq!(first, render_words(&segment_line(&direct, &lines[0]), " | "));
}

#[test]
fn stats_and_compare() {
    let dir = TempDir::new().unwrap();
    let mut gen = common::SyntheticText::new(2);
    let lines = gen.sentences(200);
    let corpus = write(&dir, "corpus.txt", &lines.join("\n"));
    let bpe = path(&dir, "bpe.txt");
    let wp = path(&dir, "wp.txt");
    assert!(silabi(&["train-bpe", "-i", &corpus, "-o", &bpe, "--vocab-size", "100"]).status.success());
    assert!(silabi(&["train-wordpiece", "-i", &corpus, "-o", &wp, "--vocab-size", "100"]).status.success());

    let o = silabi(&["stats", "--input", &corpus]);
    assert!(o.status.success());
    let expected = silabi::corpus::reports_to_tsv(&[compute_report(&SyllableTokenizer::default(), &lines)]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), expected);

    let o = silabi(&["compare", "--input", &corpus, "--bpe", &bpe, "--wordpiece", &wp, "--format", "tsv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.starts_with("metric\tsyllable\tbpe\twordpiece\n"));
    assert!(out.lines().any(|l| l.starts_with("fertility\t")));
}

#[test]
fn inspect_vocab_writes_serialized_vocabulary() {
    let dir = TempDir::new().unwrap();
    let out = path(&dir, "vocab.txt");
    assert!(silabi(&["inspect-vocab", "--output", &out]).status.success());
    let text = read(&out);
    assert_eq!(text.lines().count(), silabi::INVENTORY_SIZE + 4);
    let vocab = silabi::Vocabulary::read(text.as_bytes()).unwrap();
    assert_eq!(&vocab, SyllableTokenizer::default().vocabulary());
}

#[test]
fn inventory_override() {
    let dir = TempDir::new().unwrap();
    let inv = write(&dir, "inv.txt", "# toy\nku\nla\n");
    let input = write(&dir, "in.txt", "kula\n");
    let o = silabi(&["--inventory", &inv, "tokenize", "--input", &input]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "ku la\n");
    let bad = write(&dir, "bad.txt", "ku\n-\n");
    let o = silabi(&["--inventory", &bad, "tokenize", "--input", &input]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "in.txt", "kula\n");

    // invalid arguments
    assert_eq!(silabi(&["tokenize", "--scheme", "bogus"]).status.code(), Some(2));
    assert_eq!(silabi(&["tokenize", "--scheme", "bpe", "--input", &input]).status.code(), Some(2));
    assert_eq!(silabi(&["--threads", "0", "tokenize"]).status.code(), Some(2));
    let o = silabi(&["split", "--fraction", "1.5", "-i", &input, "--train-out", "a", "--test-out", "b"]);
    assert_eq!(o.status.code(), Some(2));

    // io
    let missing = path(&dir, "missing.txt");
    let o = silabi(&["tokenize", "--input", &missing]);
    assert_eq!(o.status.code(), Some(3));
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    let nowhere = path(&dir, "no/such/dir/out.txt");
    assert_eq!(silabi(&["tokenize", "--input", &input, "--output", &nowhere]).status.code(), Some(3));

    // data
    let empty = write(&dir, "empty.txt", "");
    let model = path(&dir, "m.txt");
    assert_eq!(
        silabi(&["train-bpe", "-i", &empty, "-o", &model, "--vocab-size", "10"]).status.code(),
        Some(4)
    );
    let bad_model = write(&dir, "bad.txt", "a b c\n");
    assert_eq!(
        silabi(&["tokenize", "--scheme", "bpe", "--model", &bad_model, "--input", &input]).status.code(),
        Some(4)
    );
    fs::write(path(&dir, "latin1.txt"), [0x6b, 0xff, 0x0a]).unwrap();
    assert_eq!(silabi(&["tokenize", "--input", &path(&dir, "latin1.txt")]).status.code(), Some(4));
}

#[test]
fn help_documents_flags() {
    let o = silabi(&["tokenize", "--help"]);
    let help = String::from_utf8(o.stdout).unwrap();
    for flag in ["--scheme", "--model", "--keep-unknown", "--separator", "--ids", "--input", "--output", "--threads"] {
        assert!(help.contains(flag), "{flag}");
    }
}
