//! The `gidx` command-line front end.
//!
//! All positions printed or accepted here are 1-based. Exit codes are listed
//! in [`exit_code`].

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::attractor::{attractor_from_lz77, lz77_parse, validate_attractor, Attractor, VALIDATOR_MAX_LEN};
use crate::corpus::CorpusSpec;
use crate::error::{Error, Result};
use crate::index::{Index, IndexBuilder};
use crate::pattern_index::OccurrenceKind;
use crate::text::Text;

pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BAD_TEXT: i32 = 3;
pub const EXIT_BAD_ATTRACTOR: i32 = 4;
pub const EXIT_OUT_OF_RANGE: i32 = 5;
pub const EXIT_BAD_PATTERN: i32 = 6;
pub const EXIT_CORRUPT_INDEX: i32 = 7;
pub const EXIT_VERSION: i32 = 8;
pub const EXIT_TOO_LARGE: i32 = 9;
pub const EXIT_BAD_PARAMETERS: i32 = 10;
pub const EXIT_FINGERPRINT: i32 = 11;

/// Process exit status for each error class.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        Error::InputContainsZeroByte { .. } | Error::EmptyText => EXIT_BAD_TEXT,
        Error::InvalidAttractor(_) | Error::SourceNotFound { .. } => EXIT_BAD_ATTRACTOR,
        Error::PositionOutOfRange { .. } => EXIT_OUT_OF_RANGE,
        Error::PatternContainsReservedSymbol { .. } | Error::EmptyPattern => EXIT_BAD_PATTERN,
        Error::BadMagic | Error::ChecksumMismatch { .. } | Error::Corrupt(_) => EXIT_CORRUPT_INDEX,
        Error::VersionMismatch { .. } => EXIT_VERSION,
        Error::TooLargeForValidator { .. } => EXIT_TOO_LARGE,
        Error::BadParameters(_) => EXIT_BAD_PARAMETERS,
        Error::FingerprintSelectionFailed { .. } => EXIT_FINGERPRINT,
    }
}

#[derive(Debug, Parser)]
#[command(name = "gidx", version, about = "Compressed self-index over string attractors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an index file from a raw text file.
    Build(BuildArgs),
    /// Print the occurrences of a pattern.
    Locate(LocateArgs),
    /// Write a substring of the indexed text to standard output.
    Extract(ExtractArgs),
    /// Check exhaustively whether a position set is an attractor.
    Validate(ValidateArgs),
    /// Generate a benchmark corpus.
    Gen(GenArgs),
    /// Print size statistics of an index as JSON.
    Stats(StatsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Positions,
    Count,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Fibonacci,
    ThueMorse,
    Random,
    MutatedCopies,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// `lz77`, or a file of 1-based positions separated by whitespace or commas.
    #[arg(long, default_value = "lz77")]
    pub attractor: String,
    #[arg(long, value_enum, default_value = "on")]
    pub verify: Switch,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Security exponent `c`; larger values lower the collision probability.
    #[arg(long, default_value_t = 2)]
    pub security: u32,
    /// Print the summary as one JSON object.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true))]
pub struct LocateArgs {
    #[arg(long)]
    pub index: PathBuf,
    #[arg(long, group = "source")]
    pub pattern: Option<String>,
    /// Pattern bytes in hexadecimal.
    #[arg(long, group = "source")]
    pub pattern_hex: Option<String>,
    /// File holding the raw pattern bytes.
    #[arg(long, group = "source")]
    pub pattern_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "positions")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    #[arg(long)]
    pub index: PathBuf,
    /// 1-based first position.
    #[arg(long)]
    pub start: usize,
    #[arg(long)]
    pub len: usize,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// `lz77`, or a file of 1-based positions.
    #[arg(long)]
    pub attractor: String,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub out: PathBuf,
    /// Word order for `fibonacci` and `thue-morse`.
    #[arg(long)]
    pub order: Option<u32>,
    /// Length of the text (`random`) or of one copy (`mutated-copies`).
    #[arg(long)]
    pub len: Option<usize>,
    #[arg(long, default_value_t = 4)]
    pub sigma: usize,
    #[arg(long, default_value_t = 100)]
    pub copies: usize,
    #[arg(long, default_value_t = 0.001)]
    pub rate: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub index: PathBuf,
}

/// Parses `args` (program name first) and runs the command, writing normal
/// output to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Error(e)) => {
            let _ = writeln!(err, "gidx: {e}");
            exit_code(&e)
        }
        Err(Failure::Status(code)) => code,
    }
}

enum Failure {
    Error(Error),
    /// Output already written; just exit with this status.
    Status(i32),
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Error(e.into())
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Build(a) => build(a, out),
        Command::Locate(a) => locate(a, out),
        Command::Extract(a) => extract(a, out),
        Command::Validate(a) => validate(a, out),
        Command::Gen(a) => gen(a, out),
        Command::Stats(a) => stats(a, out),
    }
}

fn read_text(path: &Path) -> Result<Text> {
    Text::new(std::fs::read(path)?)
}

fn load_attractor(spec: &str, text: &Text) -> Result<Attractor> {
    if spec == "lz77" {
        return Ok(attractor_from_lz77(&lz77_parse(text), text));
    }
    parse_positions(&std::fs::read_to_string(spec)?, text.len())
}

/// Parses 1-based positions separated by whitespace or commas.
pub fn parse_positions(s: &str, n: usize) -> Result<Attractor> {
    let positions = s
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(p) if p >= 1 => Ok(p - 1),
            _ => Err(Error::InvalidAttractor(format!("not a 1-based position: {t:?}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    Attractor::new(positions, n)
}

fn build(a: &BuildArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let text = read_text(&a.input)?;
    let clock = Instant::now();
    let attractor = load_attractor(&a.attractor, &text)?;
    let (index, report) = IndexBuilder::new()
        .seed(a.seed)
        .security_exponent(a.security)
        .verify(a.verify == Switch::On)
        .build_with_report(&text, &attractor)?;
    let build_ms = clock.elapsed().as_secs_f64() * 1e3;
    let bytes = index.to_bytes();
    std::fs::write(&a.output, &bytes)?;
    let s = index.stats();
    if a.json {
        let record = json!({
            "n": s.tree.n,
            "gamma": attractor.gamma(),
            "w": s.tree.leaves,
            "levels": s.tree.levels,
            "bytes": bytes.len(),
            "build_ms": build_ms,
            "attempts": report.attempts,
            "verified": index.is_verified(),
        });
        writeln!(out, "{record}")?;
    } else {
        writeln!(
            out,
            "n={} gamma={} w={} levels={} bytes={} build_ms={:.3} attempts={}",
            s.tree.n,
            attractor.gamma(),
            s.tree.leaves,
            s.tree.levels,
            bytes.len(),
            build_ms,
            report.attempts
        )?;
    }
    Ok(())
}

fn pattern_bytes(a: &LocateArgs) -> Result<Vec<u8>> {
    if let Some(p) = &a.pattern {
        Ok(p.as_bytes().to_vec())
    } else if let Some(h) = &a.pattern_hex {
        hex::decode(h.trim()).map_err(|e| Error::BadParameters(format!("bad hex pattern: {e}")))
    } else if let Some(f) = &a.pattern_file {
        Ok(std::fs::read(f)?)
    } else {
        Err(Error::BadParameters("no pattern given".into()))
    }
}

fn locate(a: &LocateArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let clock = Instant::now();
    let index = Index::load(&a.index)?;
    let load_ms = clock.elapsed().as_secs_f64() * 1e3;
    let pattern = pattern_bytes(a)?;
    let clock = Instant::now();
    let mut occ = index.locate_detailed(&pattern)?;
    let query_ms = clock.elapsed().as_secs_f64() * 1e3;
    occ.sort_unstable_by_key(|o| o.pos);
    let mut w = std::io::BufWriter::new(out);
    match a.format {
        OutputFormat::Positions => {
            for o in &occ {
                writeln!(w, "{}", o.pos + 1)?;
            }
        }
        OutputFormat::Count => writeln!(w, "{}", occ.len())?,
        OutputFormat::Json => {
            let primary = occ.iter().filter(|o| o.kind == OccurrenceKind::Primary).count();
            let record = json!({
                "pattern_len": pattern.len(),
                "count": occ.len(),
                "primary": primary,
                "secondary": occ.len() - primary,
                "positions": occ.iter().map(|o| o.pos + 1).collect::<Vec<_>>(),
                "load_ms": load_ms,
                "query_ms": query_ms,
            });
            writeln!(w, "{record}")?;
        }
    }
    w.flush()?;
    Ok(())
}

fn extract(a: &ExtractArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let index = Index::load(&a.index)?;
    let n = index.len();
    if a.start == 0 || a.start - 1 > n || a.len > n + 1 - a.start {
        return Err(Error::PositionOutOfRange {
            start: a.start,
            end: a.start.saturating_add(a.len),
            len: n,
        }
        .into());
    }
    out.write_all(&index.extract(a.start - 1, a.len)?)?;
    Ok(())
}

fn validate(a: &ValidateArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let text = read_text(&a.input)?;
    if text.len() > VALIDATOR_MAX_LEN {
        return Err(Error::TooLargeForValidator {
            n: text.len(),
            max: VALIDATOR_MAX_LEN,
        }
        .into());
    }
    let attractor = load_attractor(&a.attractor, &text)?;
    let v = validate_attractor(&text, &attractor);
    match v.witness {
        None => {
            writeln!(out, "valid gamma={}", attractor.gamma())?;
            Ok(())
        }
        Some(r) => {
            writeln!(
                out,
                "invalid witness={}..{} substring={:?}",
                r.start + 1,
                r.end,
                String::from_utf8_lossy(&text[r.clone()])
            )?;
            Err(Failure::Status(EXIT_BAD_ATTRACTOR))
        }
    }
}

fn corpus_spec(a: &GenArgs) -> Result<CorpusSpec> {
    let need = |v: Option<usize>, what: &str| v.ok_or_else(|| Error::BadParameters(format!("--{what} is required")));
    let order = || a.order.ok_or_else(|| Error::BadParameters("--order is required".into()));
    Ok(match a.family {
        Family::Fibonacci => CorpusSpec::Fibonacci { order: order()? },
        Family::ThueMorse => CorpusSpec::ThueMorse { order: order()? },
        Family::Random => CorpusSpec::Random {
            len: need(a.len, "len")?,
            sigma: a.sigma,
            seed: a.seed,
        },
        Family::MutatedCopies => CorpusSpec::MutatedCopies {
            copies: a.copies,
            len: need(a.len, "len")?,
            rate: a.rate,
            sigma: a.sigma,
            seed: a.seed,
        },
    })
}

fn gen(a: &GenArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let spec = corpus_spec(a)?;
    let bytes = spec.generate()?;
    std::fs::write(&a.out, &bytes)?;
    writeln!(out, "{}", json!({ "spec": spec, "bytes": bytes.len() }))?;
    Ok(())
}

fn stats(a: &StatsArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let file_bytes = std::fs::metadata(&a.index)?.len();
    let index = Index::load(&a.index)?;
    let mut record = serde_json::to_value(index.stats()).expect("stats serialize");
    record["file_bytes"] = json!(file_bytes);
    record["security_exponent"] = json!(index.security_exponent());
    writeln!(out, "{}", serde_json::to_string_pretty(&record).expect("json"))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, Vec<u8>, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("gidx").chain(args.iter().copied()), &mut out, &mut err);
        (code, out, String::from_utf8_lossy(&err).into_owned())
    }

    #[test]
    fn positions_are_one_based() {
        let a = parse_positions("1, 3\n5", 5).unwrap();
        assert_eq!(a.positions(), &[0, 2, 4]);
        assert!(parse_positions("0", 5).is_err());
        assert!(parse_positions("6", 5).is_err());
        assert!(parse_positions("x", 5).is_err());
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&[]).0, EXIT_USAGE);
        assert_eq!(run_args(&["locate", "--index", "x"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn every_error_class_has_its_own_code() {
        use std::collections::HashSet;
        let errors = [
            Error::Io(std::io::Error::other("x")),
            Error::EmptyText,
            Error::InvalidAttractor(String::new()),
            Error::PositionOutOfRange { start: 0, end: 0, len: 0 },
            Error::EmptyPattern,
            Error::BadMagic,
            Error::VersionMismatch { found: 0, expected: 1 },
            Error::TooLargeForValidator { n: 0, max: 0 },
            Error::BadParameters(String::new()),
            Error::FingerprintSelectionFailed { attempts: 0 },
        ];
        let codes: HashSet<i32> = errors.iter().map(exit_code).collect();
        assert_eq!(codes.len(), errors.len());
        assert!(!codes.contains(&0) && !codes.contains(&EXIT_USAGE));
    }

    #[test]
    fn end_to_end() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("t.txt");
        let idx = dir.path().join("t.gidx");
        std::fs::write(&input, "abaababa").unwrap();
        let (input, idx) = (input.to_str().unwrap(), idx.to_str().unwrap());
        let (code, out, _) = run_args(&["build", "--input", input, "--output", idx]);
        assert_eq!(code, 0);
        assert!(String::from_utf8(out).unwrap().contains("gamma=5"));
        let (code, out, _) = run_args(&["locate", "--index", idx, "--pattern", "a"]);
        assert_eq!(code, 0);
        assert_eq!(out, b"1\n3\n4\n6\n8\n");
        let (_, out, _) = run_args(&["locate", "--index", idx, "--pattern-hex", "6261", "--format", "count"]);
        assert_eq!(out, b"3\n");
        let (_, out, _) = run_args(&["extract", "--index", idx, "--start", "3", "--len", "4"]);
        assert_eq!(out, b"aaba");
        assert_eq!(run_args(&["extract", "--index", idx, "--start", "6", "--len", "4"]).0, EXIT_OUT_OF_RANGE);
        assert_eq!(run_args(&["locate", "--index", idx, "--pattern-hex", "00"]).0, EXIT_BAD_PATTERN);
    }
}
