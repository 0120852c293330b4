//! Command-line front end: key generation, evaluation and decoding on files,
//! the key-size benchmark, and a local private-histogram demo.

pub mod bench;
pub mod histogram;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mpfss::ddhfss::{
    combine_shares, dcf_gen_with, dpf_gen_with, read_key_file, write_key_file, AnyKey, FssParams,
    KeyHeader, ShareFile,
};
use mpfss::encoding::{EncodingKind, ExponentCodec, PointCodec, DEFAULT_BOUND, DEFAULT_PADDING};
use mpfss::group::{CurveGroup, Group, GroupId, TestCurve, P256};
use mpfss::keysize::to_csv;
use mpfss::sharing::Threshold;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::bench::{BenchConfig, Sweep};

#[derive(Debug, Parser)]
#[command(name = "mpfss", version, about = "Multi-party DDH-based DPF/DCF toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate one key file per party.
    Keygen(KeygenArgs),
    /// Evaluate a key at one point, a range, or the whole domain.
    Eval(EvalArgs),
    /// Combine all parties' share files and decode the outputs.
    Decode(DecodeArgs),
    /// Emit the key-size benchmark as CSV.
    Bench(BenchArgs),
    /// Run the private-histogram demo locally.
    DemoHistogram(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    P256,
    /// Small insecure curve for fast experiments.
    TestCurve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Dpf,
    Dcf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncodingArg {
    Exponent,
    Point,
}

impl From<EncodingArg> for EncodingKind {
    fn from(e: EncodingArg) -> Self {
        match e {
            EncodingArg::Exponent => EncodingKind::Exponent,
            EncodingArg::Point => EncodingKind::Point,
        }
    }
}

#[derive(Debug, Args)]
pub struct KeygenArgs {
    #[arg(long, value_enum, default_value = "dpf")]
    pub scheme: SchemeArg,
    /// Domain size.
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long)]
    pub alpha: u64,
    #[arg(long, default_value_t = 1)]
    pub beta: u64,
    #[arg(long, default_value_t = 3)]
    pub parties: usize,
    /// Corruption bound m; defaults to ⌊(p−1)/2⌋.
    #[arg(long)]
    pub corrupt: Option<usize>,
    #[arg(long, value_enum, default_value = "exponent")]
    pub encoding: EncodingArg,
    /// Exponent-codec decoding bound B.
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    pub bound: u64,
    /// Compress keys with pseudo-random secret sharing.
    #[arg(long)]
    pub prss: bool,
    /// Seed for deterministic key generation; random if omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "p256")]
    pub group: GroupArg,
    /// Output directory; keys are written as key-<party>.mpfss.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub key: PathBuf,
    /// Single point.
    #[arg(long, conflicts_with_all = ["range", "all"])]
    pub x: Option<u64>,
    /// Inclusive range `start..end` (`start..=end` is also accepted).
    #[arg(long, conflicts_with = "all")]
    pub range: Option<String>,
    /// The whole domain.
    #[arg(long)]
    pub all: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    /// One share file per party.
    #[arg(required = true)]
    pub shares: Vec<PathBuf>,
    /// Write `x,value` lines here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub sweep: Sweep,
    /// Largest domain for which keys are generated and measured.
    #[arg(long, default_value_t = 1_000_000_000)]
    pub max_measured_n: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long, default_value_t = 100)]
    pub clients: usize,
    #[arg(long, default_value_t = 32)]
    pub bins: u64,
    #[arg(long, default_value_t = 3)]
    pub parties: usize,
    #[arg(long)]
    pub corrupt: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    pub bound: u64,
    #[arg(long)]
    pub prss: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "p256")]
    pub group: GroupArg,
}

/// Failure of a command, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad parameters; exit code 2.
    Validation(String),
    /// Anything else (I/O, malformed files, decoding); exit code 1.
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid arguments: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<mpfss::Error> for CliError {
    fn from(e: mpfss::Error) -> Self {
        use mpfss::Error::*;
        match e {
            InvalidParameters(_) | MajorityViolation { .. } | Domain { .. } | Range { .. } => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Runtime(format!("{}: {e}", path.display()))
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn make_rng(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    }
}

fn threshold(parties: usize, corrupt: Option<usize>) -> CliResult<Threshold> {
    Ok(match corrupt {
        Some(m) => Threshold::new(parties, m)?,
        None => Threshold::honest_majority(parties)?,
    })
}

pub fn key_file_name(party: usize) -> String {
    format!("key-{party}.mpfss")
}

/// Runs a parsed command, writing human-readable output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Keygen(a) => match a.group {
            GroupArg::P256 => cmd_keygen::<P256>(&a, out),
            GroupArg::TestCurve => cmd_keygen::<TestCurve>(&a, out),
        },
        Command::Eval(a) => {
            let bytes = fs::read(&a.key).map_err(|e| io_err(&a.key, e))?;
            match KeyHeader::peek(&bytes)?.group {
                GroupId::P256 => cmd_eval::<P256>(&a, &bytes, out),
                GroupId::TestCurve => cmd_eval::<TestCurve>(&a, &bytes, out),
            }
        }
        Command::Decode(a) => {
            let files = a
                .shares
                .iter()
                .map(|p| fs::read(p).map_err(|e| io_err(p, e)))
                .collect::<CliResult<Vec<_>>>()?;
            match ShareFile::<P256>::peek_group(&files[0])? {
                GroupId::P256 => cmd_decode::<P256>(&a, &files, out),
                GroupId::TestCurve => cmd_decode::<TestCurve>(&a, &files, out),
            }
        }
        Command::Bench(a) => cmd_bench(&a, out),
        Command::DemoHistogram(a) => match a.group {
            GroupArg::P256 => cmd_demo_histogram::<P256>(&a, out),
            GroupArg::TestCurve => cmd_demo_histogram::<TestCurve>(&a, out),
        },
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Runtime(e.to_string()))
}

/// Encodes `β` with the chosen codec; returns the element and the codec
/// parameter recorded in the key header.
fn encode_beta<G: CurveGroup>(encoding: EncodingKind, beta: u64, bound: u64) -> CliResult<(G::Element, u64)> {
    Ok(match encoding {
        EncodingKind::Exponent => {
            if beta >= bound {
                return Err(mpfss::Error::Range { value: beta, bound }.into());
            }
            (G::exp_generator(&mpfss::field::PrimeField::from_u64(beta)), bound)
        }
        EncodingKind::Point => {
            (PointCodec::<G>::new(DEFAULT_PADDING).encode(beta)?, DEFAULT_PADDING as u64)
        }
    })
}

pub fn cmd_keygen<G: CurveGroup>(a: &KeygenArgs, out: &mut dyn Write) -> CliResult<()> {
    let t = threshold(a.parties, a.corrupt)?;
    let params = FssParams::new(a.n, t.parties, t.corrupt)?.with_prss(a.prss);
    if a.alpha >= a.n {
        return Err(mpfss::Error::Domain { value: a.alpha as i64, low: 0, high: a.n as i64 }.into());
    }
    if a.encoding == EncodingArg::Exponent && a.bound == 0 {
        return Err(CliError::Validation("bound must be positive".into()));
    }
    let encoding = EncodingKind::from(a.encoding);
    let (g_beta, codec_param) = encode_beta::<G>(encoding, a.beta, a.bound)?;
    let mut rng = make_rng(a.seed);
    let keys: Vec<AnyKey<G>> = match a.scheme {
        SchemeArg::Dpf => dpf_gen_with(&params, a.alpha, &g_beta, &mut rng)?.into_iter().map(AnyKey::Dpf).collect(),
        SchemeArg::Dcf => dcf_gen_with(&params, a.alpha, &g_beta, &mut rng)?.into_iter().map(AnyKey::Dcf).collect(),
    };
    fs::create_dir_all(&a.out).map_err(|e| io_err(&a.out, e))?;
    let mut total = 0usize;
    let mut report = String::new();
    for key in &keys {
        let bytes = write_key_file(key, encoding, codec_param);
        let path = a.out.join(key_file_name(key.party()));
        fs::write(&path, &bytes).map_err(|e| io_err(&path, e))?;
        total += bytes.len();
        report.push_str(&format!("party {}: {} bytes -> {}\n", key.party(), bytes.len(), path.display()));
    }
    report.push_str(&format!("total: {total} bytes ({} bits)\n", 8 * total));
    write_out(out, &report)
}

/// Parses an inclusive `start..end` into a half-open range.
fn parse_range(s: &str) -> CliResult<std::ops::Range<u64>> {
    let bad = || CliError::Validation(format!("range must look like start..end, got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..b.checked_add(1).ok_or_else(bad)?)
}

pub fn cmd_eval<G: Group>(a: &EvalArgs, bytes: &[u8], out: &mut dyn Write) -> CliResult<()> {
    let (header, key) = read_key_file::<G>(bytes)?;
    let xs = match (&a.x, &a.range, a.all) {
        (Some(x), None, false) => *x..x.saturating_add(1),
        (None, Some(r), false) => parse_range(r)?,
        (None, None, true) => 0..header.domain,
        _ => return Err(CliError::Validation("give exactly one of --x, --range, --all".into())),
    };
    if xs.end > header.domain {
        return Err(mpfss::Error::Domain { value: xs.end as i64 - 1, low: 0, high: header.domain as i64 }.into());
    }
    let values = key.eval_range(xs.clone())?;
    let file = ShareFile::from_key(&header, &key, xs.zip(values).collect());
    let bytes = file.to_bytes();
    fs::write(&a.out, &bytes).map_err(|e| io_err(&a.out, e))?;
    write_out(
        out,
        &format!("party {}: {} shares -> {}\n", header.party, file.points.len(), a.out.display()),
    )
}

pub fn cmd_decode<G: CurveGroup>(a: &DecodeArgs, files: &[Vec<u8>], out: &mut dyn Write) -> CliResult<()> {
    let files = files
        .iter()
        .map(|b| ShareFile::<G>::from_bytes(b))
        .collect::<mpfss::Result<Vec<_>>>()?;
    let combined = combine_shares(&files)?;
    let first = &files[0];
    let mut text = String::new();
    match first.encoding {
        EncodingKind::Exponent => {
            let codec = ExponentCodec::<G>::new(first.codec_param)?;
            for (x, e) in &combined {
                let v = codec
                    .decode(e)
                    .map_err(|err| CliError::Runtime(format!("point {x}: {err}")))?;
                text.push_str(&format!("{x},{v}\n"));
            }
        }
        EncodingKind::Point => {
            let padding = u32::try_from(first.codec_param)
                .ok()
                .filter(|&p| p > 0)
                .ok_or_else(|| CliError::Runtime("bad point-codec padding in share file".into()))?;
            let codec = PointCodec::<G>::new(padding);
            for (x, e) in &combined {
                text.push_str(&format!("{x},{}\n", codec.decode(e)));
            }
        }
    }
    match &a.out {
        Some(path) => fs::write(path, text).map_err(|e| io_err(path, e)),
        None => write_out(out, &text),
    }
}

pub fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> CliResult<()> {
    let cfg = BenchConfig { sweep: a.sweep, max_measured_n: a.max_measured_n, ..Default::default() };
    let mut rng = make_rng(Some(a.seed.unwrap_or(0)));
    let csv = to_csv(&bench::bench_rows(&cfg, &mut rng)?);
    match &a.out {
        Some(path) => fs::write(path, csv).map_err(|e| io_err(path, e)),
        None => write_out(out, &csv),
    }
}

pub fn cmd_demo_histogram<G: Group>(a: &DemoArgs, out: &mut dyn Write) -> CliResult<()> {
    let t = threshold(a.parties, a.corrupt)?;
    let params = FssParams::new(a.bins, t.parties, t.corrupt)?.with_prss(a.prss);
    let mut rng = make_rng(a.seed);
    let values: Vec<u64> = (0..a.clients).map(|_| rng.next_u64() % a.bins).collect();
    let codec = ExponentCodec::<G>::new(a.bound)?;
    let counts = histogram::private_histogram(&values, a.bins, &params, &codec, &mut rng)?;
    let expected = histogram::plaintext_histogram(&values, a.bins);
    let mut text = String::from("bin,count\n");
    for (bin, c) in counts.iter().enumerate() {
        text.push_str(&format!("{bin},{c}\n"));
    }
    text.push_str(&format!("matches plaintext: {}\n", counts == expected));
    write_out(out, &text)?;
    if counts != expected {
        return Err(CliError::Runtime("decoded histogram differs from plaintext".into()));
    }
    Ok(())
}
