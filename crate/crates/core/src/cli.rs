//! Command-line front end. Each subcommand is a thin wrapper over the
//! library; input is streamed line by line where the command allows it.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 I/O failure, 4 bad data.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::baseline::{train_bpe, train_wordpiece, MergeTable, WordPieceVocab};
use crate::corpus::{
    compare, reports_to_tsv, render_words, segment_line, CorpusReport, ReportBuilder, Segmenter,
    SplitSpec,
};
use crate::inventory::SyllableInventory;
use crate::syllable::SyllableTokenizer;
use crate::text::{normalize, UnknownMode};

const BATCH_LINES: usize = 8192;

#[derive(Debug, Parser)]
#[command(name = "silabi", version, about = "Swahili syllable tokenizer with BPE and WordPiece baselines")]
pub struct Cli {
    /// Syllable inventory override: one syllable per line, `#` comments.
    #[arg(long, global = true, value_name = "PATH")]
    pub inventory: Option<PathBuf>,

    /// Worker threads for per-line tokenization. Output order is preserved.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: u16,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tokenize text, one output line per input line.
    Tokenize(TokenizeArgs),
    /// Learn a BPE merge table.
    TrainBpe(TrainArgs),
    /// Learn a WordPiece vocabulary.
    TrainWordpiece(TrainArgs),
    /// Split a corpus into train and test files.
    Split(SplitArgs),
    /// Token statistics of one scheme.
    Stats(StatsArgs),
    /// Side-by-side statistics of the syllable tokenizer and the baselines.
    Compare(CompareArgs),
    /// Print the syllable vocabulary, one token per line (line number = id).
    InspectVocab(InspectArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    Syllable,
    Bpe,
    Wordpiece,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Table,
}

#[derive(Debug, Args)]
pub struct SchemeArgs {
    #[arg(long, value_enum, default_value_t = Scheme::Syllable)]
    pub scheme: Scheme,

    /// Merge table (bpe) or piece list (wordpiece).
    #[arg(long, value_name = "PATH")]
    pub model: Option<PathBuf>,

    /// Keep unknown characters as UNK tokens instead of dropping them
    /// (syllable scheme only).
    #[arg(long)]
    pub keep_unknown: bool,
}

#[derive(Debug, Args)]
pub struct TokenizeArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,

    /// Input text; stdin when absent.
    #[arg(long, short)]
    pub input: Option<PathBuf>,

    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    /// Printed between words.
    #[arg(long, default_value = " | ")]
    pub separator: String,

    /// Print token ids instead of texts (syllable scheme only).
    #[arg(long)]
    pub ids: bool,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long, short)]
    pub input: PathBuf,

    #[arg(long, short)]
    pub output: PathBuf,

    /// Target vocabulary size, base characters included.
    #[arg(long)]
    pub vocab_size: usize,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[arg(long, short)]
    pub input: PathBuf,

    #[arg(long)]
    pub train_out: PathBuf,

    #[arg(long)]
    pub test_out: PathBuf,

    /// Fraction of lines that go to the training file, in (0, 1).
    #[arg(long, default_value_t = 0.9)]
    pub fraction: f64,

    #[arg(long, default_value_t = 42)]
    pub seed: u64,

    /// Take the first lines for training instead of a seeded random subset.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,

    #[arg(long, short)]
    pub input: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, short)]
    pub input: Option<PathBuf>,

    /// BPE merge table to include.
    #[arg(long, value_name = "PATH")]
    pub bpe: Option<PathBuf>,

    /// WordPiece piece list to include.
    #[arg(long, value_name = "PATH")]
    pub wordpiece: Option<PathBuf>,

    #[arg(long)]
    pub keep_unknown: bool,

    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    /// Prefix each token with its id and a tab.
    #[arg(long)]
    pub with_ids: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    InvalidArgs(String),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::InvalidArgs(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Data(_) => 4,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        match e {
            crate::Error::Io(source) => io_error(Path::new("<io>"), source),
            other => CliError::Data(other.to_string()),
        }
    }
}

fn io_error(path: &Path, source: io::Error) -> CliError {
    if source.kind() == io::ErrorKind::InvalidData {
        CliError::Data(format!("{}: {source}", path.display()))
    } else {
        CliError::Io {
            path: path.to_owned(),
            source,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Runs a parsed command line and returns the process exit code. Errors are
/// reported on stderr as a single line.
pub fn run(cli: Cli) -> i32 {
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("silabi: error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> CliResult<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads as usize)
        .build()
        .map_err(|e| CliError::InvalidArgs(e.to_string()))?;
    let inventory = match &cli.inventory {
        Some(path) => {
            check_input(path)?;
            SyllableInventory::from_path(path).map_err(|e| with_path(path, e))?
        }
        None => SyllableInventory::embedded().clone(),
    };
    pool.install(|| match cli.command {
        Command::Tokenize(args) => tokenize(inventory, args),
        Command::TrainBpe(args) => train(args, Scheme::Bpe),
        Command::TrainWordpiece(args) => train(args, Scheme::Wordpiece),
        Command::Split(args) => split(args),
        Command::Stats(args) => stats(inventory, args),
        Command::Compare(args) => compare_cmd(inventory, args),
        Command::InspectVocab(args) => inspect(inventory, args),
    })
}

fn with_path(path: &Path, e: crate::Error) -> CliError {
    match e {
        crate::Error::Io(source) => io_error(path, source),
        other => CliError::Data(format!("{}: {other}", path.display())),
    }
}

fn check_input(path: &Path) -> CliResult<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(io_error(
            path,
            io::Error::new(io::ErrorKind::NotFound, "no such input file"),
        ))
    }
}

fn check_output(path: &Path) -> CliResult<()> {
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty());
    match parent {
        Some(dir) if !dir.is_dir() => Err(io_error(
            path,
            io::Error::new(io::ErrorKind::NotFound, "output directory does not exist"),
        )),
        _ => Ok(()),
    }
}

struct Source {
    name: PathBuf,
    reader: Box<dyn BufRead>,
}

impl Source {
    fn open(path: Option<&Path>) -> CliResult<Self> {
        match path {
            Some(p) => {
                check_input(p)?;
                let file = File::open(p).map_err(|e| io_error(p, e))?;
                Ok(Source {
                    name: p.to_owned(),
                    reader: Box::new(BufReader::new(file)),
                })
            }
            None => Ok(Source {
                name: PathBuf::from("<stdin>"),
                reader: Box::new(BufReader::new(io::stdin())),
            }),
        }
    }

    /// Next batch of at most `BATCH_LINES` lines; empty at end of input.
    fn batch(&mut self) -> CliResult<Vec<String>> {
        let mut lines = Vec::new();
        while lines.len() < BATCH_LINES {
            let mut line = String::new();
            let n = self
                .reader
                .read_line(&mut line)
                .map_err(|e| io_error(&self.name, e))?;
            if n == 0 {
                break;
            }
            if line.ends_with('\n') {
                line.pop();
                if line.ends_with('\r') {
                    line.pop();
                }
            }
            lines.push(line);
        }
        Ok(lines)
    }
}

struct Sink {
    name: PathBuf,
    writer: Box<dyn Write>,
}

impl Sink {
    fn create(path: Option<&Path>) -> CliResult<Self> {
        match path {
            Some(p) => {
                let file = File::create(p).map_err(|e| io_error(p, e))?;
                Ok(Sink {
                    name: p.to_owned(),
                    writer: Box::new(BufWriter::new(file)),
                })
            }
            None => Ok(Sink {
                name: PathBuf::from("<stdout>"),
                writer: Box::new(BufWriter::new(io::stdout())),
            }),
        }
    }

    fn write_str(&mut self, s: &str) -> CliResult<()> {
        self.writer
            .write_all(s.as_bytes())
            .map_err(|e| io_error(&self.name, e))
    }

    fn finish(mut self) -> CliResult<()> {
        self.writer.flush().map_err(|e| io_error(&self.name, e))
    }
}

fn load_segmenter(
    inventory: SyllableInventory,
    args: &SchemeArgs,
) -> CliResult<Box<dyn Segmenter + Send>> {
    let model = |kind: &str| {
        args.model
            .as_deref()
            .ok_or_else(|| CliError::InvalidArgs(format!("--scheme {kind} needs --model")))
    };
    if args.scheme != Scheme::Syllable && args.keep_unknown {
        return Err(CliError::InvalidArgs(
            "--keep-unknown applies to the syllable scheme only".into(),
        ));
    }
    Ok(match args.scheme {
        Scheme::Syllable => {
            if args.model.is_some() {
                return Err(CliError::InvalidArgs(
                    "--model is for the bpe and wordpiece schemes".into(),
                ));
            }
            Box::new(syllable_tokenizer(inventory, args.keep_unknown))
        }
        Scheme::Bpe => Box::new(load_bpe(model("bpe")?)?),
        Scheme::Wordpiece => Box::new(load_wordpiece(model("wordpiece")?)?),
    })
}

fn syllable_tokenizer(inventory: SyllableInventory, keep_unknown: bool) -> SyllableTokenizer {
    let mode = if keep_unknown {
        UnknownMode::Flag
    } else {
        UnknownMode::Remove
    };
    SyllableTokenizer::new(inventory).with_unknown_mode(mode)
}

fn load_bpe(path: &Path) -> CliResult<MergeTable> {
    check_input(path)?;
    let file = File::open(path).map_err(|e| io_error(path, e))?;
    MergeTable::read(BufReader::new(file)).map_err(|e| with_path(path, e))
}

fn load_wordpiece(path: &Path) -> CliResult<WordPieceVocab> {
    check_input(path)?;
    let file = File::open(path).map_err(|e| io_error(path, e))?;
    WordPieceVocab::read(BufReader::new(file)).map_err(|e| with_path(path, e))
}

fn tokenize(inventory: SyllableInventory, args: TokenizeArgs) -> CliResult<()> {
    if args.ids && args.scheme.scheme != Scheme::Syllable {
        return Err(CliError::InvalidArgs("--ids needs --scheme syllable".into()));
    }
    if let Some(out) = &args.output {
        check_output(out)?;
    }
    let mut source = Source::open(args.input.as_deref())?;
    let separator = args.separator.as_str();
    let render: Box<dyn Fn(&str) -> String + Sync> = if args.ids {
        let tok = syllable_tokenizer(inventory, args.scheme.keep_unknown);
        Box::new(move |line| tok.tokenize(line).render_ids(separator))
    } else {
        let seg = load_segmenter(inventory, &args.scheme)?;
        Box::new(move |line| render_words(&segment_line(seg.as_ref(), line), separator))
    };
    let mut sink = Sink::create(args.output.as_deref())?;
    loop {
        let batch = source.batch()?;
        if batch.is_empty() {
            break;
        }
        let rendered: Vec<String> = batch.par_iter().map(|l| render(l)).collect();
        for line in rendered {
            sink.write_str(&line)?;
            sink.write_str("\n")?;
        }
    }
    sink.finish()
}

fn read_normalized(path: &Path) -> CliResult<Vec<String>> {
    let mut source = Source::open(Some(path))?;
    let mut lines = Vec::new();
    loop {
        let batch = source.batch()?;
        if batch.is_empty() {
            return Ok(lines);
        }
        lines.extend(batch.iter().map(|l| normalize(l)));
    }
}

fn train(args: TrainArgs, scheme: Scheme) -> CliResult<()> {
    check_input(&args.input)?;
    check_output(&args.output)?;
    let corpus = read_normalized(&args.input)?;
    let mut sink = Sink::create(Some(&args.output))?;
    let mut buf = Vec::new();
    match scheme {
        Scheme::Bpe => train_bpe(&corpus, args.vocab_size)?.write(&mut buf),
        Scheme::Wordpiece => train_wordpiece(&corpus, args.vocab_size)?.write(&mut buf),
        Scheme::Syllable => unreachable!("syllable inventory is fixed"),
    }
    .map_err(|e| io_error(&args.output, e))?;
    sink.writer
        .write_all(&buf)
        .map_err(|e| io_error(&args.output, e))?;
    sink.finish()
}

fn split(args: SplitArgs) -> CliResult<()> {
    check_input(&args.input)?;
    check_output(&args.train_out)?;
    check_output(&args.test_out)?;
    let spec = SplitSpec {
        train_fraction: args.fraction,
        seed: args.seed,
        shuffle: !args.sequential,
    };
    spec.train_count(0)
        .map_err(|e| CliError::InvalidArgs(e.to_string()))?;

    let mut total = 0usize;
    let mut counting = Source::open(Some(&args.input))?;
    loop {
        let n = counting.batch()?.len();
        if n == 0 {
            break;
        }
        total += n;
    }
    let assignment = crate::corpus::split_assignment(total, &spec)?;

    let mut source = Source::open(Some(&args.input))?;
    let mut train = Sink::create(Some(&args.train_out))?;
    let mut test = Sink::create(Some(&args.test_out))?;
    let mut index = 0;
    loop {
        let batch = source.batch()?;
        if batch.is_empty() {
            break;
        }
        for line in batch {
            let sink = if assignment[index] { &mut train } else { &mut test };
            sink.write_str(&line)?;
            sink.write_str("\n")?;
            index += 1;
        }
    }
    train.finish()?;
    test.finish()
}

fn stream_reports(
    input: Option<&Path>,
    segmenters: &[&(dyn Segmenter + Send)],
) -> CliResult<Vec<CorpusReport>> {
    let mut source = Source::open(input)?;
    let mut builders: Vec<_> = segmenters.iter().map(|s| ReportBuilder::new(*s)).collect();
    loop {
        let batch = source.batch()?;
        if batch.is_empty() {
            break;
        }
        for b in &mut builders {
            b.add_lines(&batch);
        }
    }
    Ok(builders.into_iter().map(ReportBuilder::finish).collect())
}

fn print_reports(reports: &[CorpusReport], format: Format) -> CliResult<String> {
    Ok(match format {
        Format::Tsv => reports_to_tsv(reports),
        Format::Table => {
            let mut out = String::new();
            for r in reports {
                out.push_str(&format!(
                    "scheme               {}\nsentences            {}\nwords                {}\ntokens               {}\nunknown_tokens       {}\ncharacters           {}\nvocab_used           {}\nfertility            {:.6}\nmean_sequence_length {:.6}\noov_rate             {:.6}\nchars_per_token      {:.6}\n",
                    r.scheme, r.sentences, r.words, r.tokens, r.unknown_tokens, r.characters,
                    r.vocab_used, r.fertility, r.mean_sequence_length, r.oov_rate, r.chars_per_token
                ));
            }
            out
        }
    })
}

fn stats(inventory: SyllableInventory, args: StatsArgs) -> CliResult<()> {
    let seg = load_segmenter(inventory, &args.scheme)?;
    let reports = stream_reports(args.input.as_deref(), &[seg.as_ref()])?;
    let mut sink = Sink::create(None)?;
    sink.write_str(&print_reports(&reports, args.format)?)?;
    sink.finish()
}

fn compare_cmd(inventory: SyllableInventory, args: CompareArgs) -> CliResult<()> {
    if args.bpe.is_none() && args.wordpiece.is_none() {
        return Err(CliError::InvalidArgs(
            "compare needs --bpe and/or --wordpiece".into(),
        ));
    }
    let syllable = syllable_tokenizer(inventory, args.keep_unknown);
    let bpe = args.bpe.as_deref().map(load_bpe).transpose()?;
    let wordpiece = args.wordpiece.as_deref().map(load_wordpiece).transpose()?;
    let mut segmenters: Vec<&(dyn Segmenter + Send)> = vec![&syllable];
    if let Some(b) = &bpe {
        segmenters.push(b);
    }
    if let Some(w) = &wordpiece {
        segmenters.push(w);
    }
    let reports = stream_reports(args.input.as_deref(), &segmenters)?;
    let table = compare(&reports)?;
    let mut sink = Sink::create(None)?;
    match args.format {
        Format::Tsv => sink.write_str(&table.to_tsv())?,
        Format::Table => sink.write_str(&table.to_string())?,
    }
    sink.finish()
}

fn inspect(inventory: SyllableInventory, args: InspectArgs) -> CliResult<()> {
    if let Some(out) = &args.output {
        check_output(out)?;
    }
    let vocab = crate::vocab::Vocabulary::from_inventory(&inventory);
    let mut sink = Sink::create(args.output.as_deref())?;
    if args.with_ids {
        for (id, token) in vocab.iter() {
            sink.write_str(&format!("{id}\t{token}\n"))?;
        }
    } else {
        let mut buf = Vec::new();
        vocab.write(&mut buf).map_err(|e| io_error(&sink.name, e))?;
        sink.writer
            .write_all(&buf)
            .map_err(|e| io_error(&sink.name, e))?;
    }
    sink.finish()
}
