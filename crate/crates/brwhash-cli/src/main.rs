//! Command-line driver for the brwhash library: one-shot hashing, KAT file
//! generation and verification, a benchmark harness emitting CSV, and the
//! small-prime differential-bound analyzer.
//!
//! Exit codes: 0 success, 1 runtime failure (verification mismatch, bound
//! violation, I/O), 2 usage error, 3 key length mismatch.

use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use brwhash::analysis::{axu_sweep, AxuReport, ToyConstruction, ToyParams};
use brwhash::hash::{
    brwhash, decbrw_hash, poly1305, polyhash, Backend, BrwKeyLadder, DecBrwKeySchedule,
    PolyKeySchedule,
};
use brwhash::kat::{compute_digest, read_records, write_records, KatRecord};
use brwhash::params::{PrimeConfig, P1271, P1305};
use brwhash::{Error as HashError, OpCounters};

/// Fixed seed for KAT generation and bench inputs, so files and the
/// non-timing CSV columns reproduce bit-for-bit across machines. The value
/// is arbitrary; it spells out the tool name.
const DETERMINISTIC_SEED: u64 = 0x6272_7768_6173_6801; // "brwhash\x01"

#[derive(Parser)]
#[command(
    name = "brwhash",
    version,
    about = "Polynomial and BRW universal hashing over 2^130-5 and 2^127-1"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hash one message and print the digest as lowercase hex.
    Hash(HashArgs),
    /// Generate or verify known-answer-test files (JSON lines).
    Kat {
        #[command(subcommand)]
        cmd: KatCmd,
    },
    /// Benchmark the hashing paths and print a CSV table.
    Bench(BenchArgs),
    /// Exhaustive differential-bound sweep over a toy prime; CSV report.
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Polyhash,
    Brwhash,
    Decbrw,
    Poly1305,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Scalar,
    Vec4,
}

impl From<BackendArg> for Backend {
    fn from(arg: BackendArg) -> Backend {
        match arg {
            BackendArg::Scalar => Backend::Scalar,
            BackendArg::Vec4 => Backend::Vec4,
        }
    }
}

fn parse_prime(s: &str) -> Result<u32, String> {
    match s {
        "1305" => Ok(1305),
        "1271" => Ok(1271),
        other => Err(format!("unknown prime tag {other}; use 1305 or 1271")),
    }
}

fn config_for(prime: u32) -> &'static PrimeConfig {
    match prime {
        1305 => &P1305,
        1271 => &P1271,
        _ => unreachable!("prime tags are validated at parse time"),
    }
}

#[derive(Parser)]
#[command(group(ArgGroup::new("message").required(true).args(["input", "msg_hex"])))]
struct HashArgs {
    /// Hash family to run.
    #[arg(long, value_enum)]
    algo: AlgoArg,
    /// Prime field: 1305 for 2^130-5, 1271 for 2^127-1.
    #[arg(long, value_parser = parse_prime, default_value = "1305")]
    prime: u32,
    /// Key as hex: 32 chars (16 bytes), or 64 chars for poly1305.
    #[arg(long = "key-hex")]
    key_hex: String,
    /// Read the message from this file.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Message as hex on the command line (may be empty).
    #[arg(long = "msg-hex")]
    msg_hex: Option<String>,
    /// Horner group size for polyhash/poly1305.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=4))]
    g: u32,
    /// BRW leaf order: leaves hold 2^t - 1 blocks.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(2..=5))]
    t: u32,
    /// Stream count for decbrw (vec4 backend requires 4).
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=8))]
    c: u32,
    /// Arithmetic backend.
    #[arg(long, value_enum, default_value_t = BackendArg::Scalar)]
    backend: BackendArg,
    /// Print the operation counters as JSON to standard error.
    #[arg(long)]
    counters: bool,
}

#[derive(Subcommand)]
enum KatCmd {
    /// Write a deterministic KAT file covering all algorithms and primes.
    Generate {
        path: PathBuf,
        /// Backend used to compute the stored digests.
        #[arg(long, value_enum, default_value_t = BackendArg::Scalar)]
        backend: BackendArg,
    },
    /// Recompute every record and compare against the stored digests.
    Verify {
        path: PathBuf,
        /// Backend used for recomputation (falls back to scalar where a
        /// record's algorithm or parameters have no packed path).
        #[arg(long, value_enum, default_value_t = BackendArg::Scalar)]
        backend: BackendArg,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchAlgo {
    Polyhash,
    Brwhash,
    Decbrw,
    #[value(name = "polyhash-vec4")]
    PolyhashVec4,
    #[value(name = "decbrw-vec4")]
    DecbrwVec4,
}

impl BenchAlgo {
    fn label(self) -> &'static str {
        match self {
            BenchAlgo::Polyhash => "polyhash",
            BenchAlgo::Brwhash => "brwhash",
            BenchAlgo::Decbrw => "decbrw",
            BenchAlgo::PolyhashVec4 => "polyhash-vec4",
            BenchAlgo::DecbrwVec4 => "decbrw-vec4",
        }
    }

    /// Valid parameter values: group sizes for the Horner paths, leaf
    /// orders for the BRW paths.
    fn param_range(self) -> std::ops::RangeInclusive<u32> {
        match self {
            BenchAlgo::Polyhash | BenchAlgo::PolyhashVec4 => 1..=4,
            _ => 2..=5,
        }
    }
}

#[derive(Parser)]
struct BenchArgs {
    /// Block counts to measure (default: 1..32, 50..500 by 50,
    /// 1000..5000 by 500, and 32768).
    #[arg(long, value_delimiter = ',')]
    lengths: Option<Vec<usize>>,
    /// Algorithms to bench.
    #[arg(long, value_enum, value_delimiter = ',')]
    algos: Option<Vec<BenchAlgo>>,
    /// Parameter values (g for the Horner paths, t for the BRW paths);
    /// values outside an algorithm's range are skipped for that algorithm.
    #[arg(long, value_delimiter = ',')]
    params: Option<Vec<u32>>,
    /// Samples per cell; the reported figure is the median.
    #[arg(long, default_value_t = 5)]
    reps: u32,
    /// Restrict to one prime (default: both).
    #[arg(long, value_parser = parse_prime)]
    prime: Option<u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Poly,
    Brw,
    Dec,
    All,
}

#[derive(Parser)]
struct AnalyzeArgs {
    /// Construction(s) to sweep.
    #[arg(long, value_enum, default_value_t = KindArg::All)]
    kind: KindArg,
    /// Stream counts for the decimated sweep.
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2])]
    c: Vec<usize>,
    /// Longest message in bits; every shorter bit string is included.
    #[arg(long = "max-bits", default_value_t = 10)]
    max_bits: u32,
    /// Field is 2^m - delta.
    #[arg(long, default_value_t = 7)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    delta: u64,
    /// Block size in bits.
    #[arg(long, default_value_t = 5)]
    n: u32,
    /// Key size in bits.
    #[arg(long, default_value_t = 6)]
    k: u32,
    /// Digest size in bits.
    #[arg(long, default_value_t = 6)]
    mu: u32,
}

/// A failure routed to a specific process exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn key(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

fn lib_failure(err: HashError) -> Failure {
    match err {
        HashError::KeyLength { .. } => Failure::key(err.to_string()),
        HashError::InvalidGroupSize(_)
        | HashError::InvalidLeafOrder(_)
        | HashError::InvalidStreamCount(_)
        | HashError::VectorStreamCount(_)
        | HashError::InvalidToyParams(_) => Failure::usage(err.to_string()),
        other => Failure::runtime(other.to_string()),
    }
}

fn main() {
    // Die quietly on a closed pipe (`brwhash bench | head`) instead of
    // panicking mid-write; Rust ignores SIGPIPE by default.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Hash(args) => cmd_hash(args),
        Cmd::Kat { cmd } => match cmd {
            KatCmd::Generate { path, backend } => cmd_kat_generate(&path, backend.into()),
            KatCmd::Verify { path, backend } => cmd_kat_verify(&path, backend.into()),
        },
        Cmd::Bench(args) => cmd_bench(args),
        Cmd::Analyze(args) => cmd_analyze(args),
    };
    if let Err(failure) = result {
        eprintln!("error: {}", failure.message);
        std::process::exit(failure.code);
    }
}

fn decode_hex(label: &str, text: &str) -> Result<Vec<u8>, Failure> {
    hex::decode(text).map_err(|e| Failure::usage(format!("{label}: invalid hex ({e})")))
}

fn decode_key(key_hex: &str, expected_bytes: usize) -> Result<Vec<u8>, Failure> {
    let key = decode_hex("--key-hex", key_hex)?;
    if key.len() != expected_bytes {
        return Err(Failure::key(format!(
            "key must be {} hex chars ({} bytes), got {} bytes",
            2 * expected_bytes,
            expected_bytes,
            key.len()
        )));
    }
    Ok(key)
}

fn cmd_hash(args: HashArgs) -> Result<(), Failure> {
    let key_bytes = if args.algo == AlgoArg::Poly1305 { 32 } else { 16 };
    let key = decode_key(&args.key_hex, key_bytes)?;
    let msg = match (&args.input, &args.msg_hex) {
        (Some(path), None) => fs::read(path)
            .map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))?,
        (None, Some(text)) => decode_hex("--msg-hex", text)?,
        _ => unreachable!("the argument group admits exactly one source"),
    };
    if args.algo == AlgoArg::Poly1305 && args.prime != 1305 {
        return Err(Failure::usage(
            "poly1305 is defined over 2^130-5 only; drop --prime or pass 1305",
        ));
    }
    let cfg = config_for(args.prime);
    let backend = args.backend.into();
    let mut counters = OpCounters::new();
    let digest = match args.algo {
        AlgoArg::Polyhash => {
            polyhash(&key, &msg, args.g as usize, backend, cfg, &mut counters)
        }
        AlgoArg::Brwhash => brwhash(&key, &msg, args.t, cfg, &mut counters),
        AlgoArg::Decbrw => decbrw_hash(
            &key,
            &msg,
            args.c as usize,
            args.t,
            backend,
            cfg,
            &mut counters,
        ),
        AlgoArg::Poly1305 => poly1305(&key, &msg, args.g as usize, backend, &mut counters),
    }
    .map_err(lib_failure)?;
    println!("{}", hex::encode(digest));
    if args.counters {
        let json = serde_json::to_string(&counters)
            .expect("counters are plain integers and always serialize");
        eprintln!("{json}");
    }
    Ok(())
}

/// The generated KAT corpus: every algorithm, both primes, parameters
/// spanning their ranges, and message lengths that cross block boundaries.
/// One KAT plan row: algorithm, prime tag, and the g/t/c parameters that
/// apply to it.
type KatPlan = (&'static str, u32, Option<u32>, Option<u32>, Option<u32>);

fn kat_corpus(backend: Backend) -> Result<Vec<KatRecord>, Failure> {
    let mut rng = ChaCha20Rng::seed_from_u64(DETERMINISTIC_SEED);
    let lengths = [0usize, 1, 15, 16, 17, 31, 32, 64, 255, 1024];
    let mut plans: Vec<KatPlan> = Vec::new();
    for prime in [1305u32, 1271] {
        for g in 1..=4u32 {
            plans.push(("polyhash", prime, Some(g), None, None));
        }
        for t in 2..=5u32 {
            plans.push(("brwhash", prime, None, Some(t), None));
        }
        for (c, t) in [(1u32, 2u32), (2, 3), (4, 2), (4, 5), (8, 4)] {
            plans.push(("decbrw", prime, None, Some(t), Some(c)));
        }
    }
    plans.push(("poly1305", 1305, Some(1), None, None));

    let mut records = Vec::new();
    for (idx, (algo, prime, g, t, c)) in plans.into_iter().enumerate() {
        for pick in 0..3 {
            let len = lengths[(3 * idx + pick) % lengths.len()];
            let mut msg = vec![0u8; len];
            rng.fill_bytes(&mut msg);
            let mut key = vec![0u8; if algo == "poly1305" { 32 } else { 16 }];
            rng.fill_bytes(&mut key);
            let mut record = KatRecord {
                algo: algo.to_string(),
                prime,
                key_hex: hex::encode(&key),
                msg_hex: hex::encode(&msg),
                g: g.map(|v| v as usize),
                t,
                c: c.map(|v| v as usize),
                digest_hex: String::new(),
            };
            record.digest_hex = compute_digest(&record, backend)
                .map_err(|e| Failure::runtime(e.to_string()))?;
            records.push(record);
        }
    }
    Ok(records)
}

fn cmd_kat_generate(path: &PathBuf, backend: Backend) -> Result<(), Failure> {
    let records = kat_corpus(backend)?;
    let file = fs::File::create(path)
        .map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))?;
    let mut writer = BufWriter::new(file);
    write_records(&mut writer, &records).map_err(|e| Failure::runtime(e.to_string()))?;
    writer.flush().map_err(|e| Failure::runtime(e.to_string()))?;
    println!("wrote {} records to {}", records.len(), path.display());
    Ok(())
}

fn cmd_kat_verify(path: &PathBuf, backend: Backend) -> Result<(), Failure> {
    let file = fs::File::open(path)
        .map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))?;
    let records = read_records(BufReader::new(file))
        .map_err(|e| Failure::runtime(e.to_string()))?;
    for (index, record) in records.iter().enumerate() {
        let got = compute_digest(record, backend).map_err(|e| {
            Failure::runtime(format!("record {}: {e}", index + 1))
        })?;
        if got != record.digest_hex {
            let echoed = serde_json::to_string(record).unwrap_or_default();
            return Err(Failure::runtime(format!(
                "record {} failed: recomputed {got}, file has {}\n{echoed}",
                index + 1,
                record.digest_hex
            )));
        }
    }
    println!("verified {} records", records.len());
    Ok(())
}

/// The block-count grid the default bench sweeps: dense at short message
/// lengths, spaced out through the medium range, plus one long point.
fn default_grid() -> Vec<usize> {
    (1..=32)
        .chain((50..=500).step_by(50))
        .chain((1000..=5000).step_by(500))
        .chain(std::iter::once(32768))
        .collect()
}

/// Median nanoseconds per byte over `reps` samples of `f`, each sample
/// averaging enough iterations to outgrow timer noise.
fn median_nspb(mut f: impl FnMut(), bytes: usize, reps: u32) -> f64 {
    let start = Instant::now();
    f();
    let estimate = start.elapsed().as_nanos().max(1) as f64;
    let iters = (200_000.0 / estimate).clamp(1.0, 65536.0) as u32;
    let mut samples: Vec<f64> = (0..reps.max(1))
        .map(|_| {
            let start = Instant::now();
            for _ in 0..iters {
                f();
            }
            start.elapsed().as_nanos() as f64 / f64::from(iters)
        })
        .collect();
    samples.sort_by(f64::total_cmp);
    samples[samples.len() / 2] / bytes as f64
}

fn cmd_bench(args: BenchArgs) -> Result<(), Failure> {
    let lengths = args.lengths.unwrap_or_else(default_grid);
    if lengths.contains(&0) {
        return Err(Failure::usage("--lengths entries are block counts, at least 1"));
    }
    let algos = args.algos.unwrap_or_else(|| {
        vec![
            BenchAlgo::Polyhash,
            BenchAlgo::Brwhash,
            BenchAlgo::Decbrw,
            BenchAlgo::PolyhashVec4,
            BenchAlgo::DecbrwVec4,
        ]
    });
    let primes: Vec<u32> = match args.prime {
        Some(p) => vec![p],
        None => vec![1305, 1271],
    };

    println!(
        "algo,prime,param,blocks,nspb_pre,nspb_fly,unred_mult,red,lane_unred_mult,lane_red,full_mult,squarings"
    );
    for &algo in &algos {
        let params: Vec<u32> = match &args.params {
            Some(list) => list
                .iter()
                .copied()
                .filter(|p| algo.param_range().contains(p))
                .collect(),
            None => algo.param_range().collect(),
        };
        for &prime in &primes {
            for &param in &params {
                for &blocks in &lengths {
                    bench_cell(algo, prime, param, blocks, args.reps)?;
                }
            }
        }
    }
    Ok(())
}

fn bench_cell(
    algo: BenchAlgo,
    prime: u32,
    param: u32,
    blocks: usize,
    reps: u32,
) -> Result<(), Failure> {
    let cfg = config_for(prime);
    let mut rng = ChaCha20Rng::seed_from_u64(DETERMINISTIC_SEED ^ blocks as u64);
    let mut key = [0u8; 16];
    rng.fill_bytes(&mut key);
    let mut msg = vec![0u8; blocks * cfg.block_bytes()];
    rng.fill_bytes(&mut msg);
    let bytes = msg.len();
    let mut scratch = OpCounters::new();
    let mut counters = OpCounters::new();

    let (nspb_pre, nspb_fly) = match algo {
        BenchAlgo::Polyhash | BenchAlgo::PolyhashVec4 => {
            let backend = if algo == BenchAlgo::Polyhash {
                Backend::Scalar
            } else {
                Backend::Vec4
            };
            let group = param as usize;
            let schedule =
                PolyKeySchedule::new(&key, group, cfg, &mut scratch).map_err(lib_failure)?;
            schedule
                .hash(&msg, backend, &mut counters)
                .map_err(lib_failure)?;
            let pre = median_nspb(
                || {
                    let mut c = OpCounters::new();
                    std::hint::black_box(schedule.hash(&msg, backend, &mut c).unwrap());
                },
                bytes,
                reps,
            );
            let fly = median_nspb(
                || {
                    let mut c = OpCounters::new();
                    std::hint::black_box(polyhash(&key, &msg, group, backend, cfg, &mut c).unwrap());
                },
                bytes,
                reps,
            );
            (pre, fly)
        }
        BenchAlgo::Brwhash => {
            let ladder =
                BrwKeyLadder::new(&key, blocks, cfg, &mut scratch).map_err(lib_failure)?;
            ladder.hash(&msg, param, &mut counters).map_err(lib_failure)?;
            let pre = median_nspb(
                || {
                    let mut c = OpCounters::new();
                    std::hint::black_box(ladder.hash(&msg, param, &mut c).unwrap());
                },
                bytes,
                reps,
            );
            let fly = median_nspb(
                || {
                    let mut c = OpCounters::new();
                    std::hint::black_box(brwhash(&key, &msg, param, cfg, &mut c).unwrap());
                },
                bytes,
                reps,
            );
            (pre, fly)
        }
        BenchAlgo::Decbrw | BenchAlgo::DecbrwVec4 => {
            let backend = if algo == BenchAlgo::Decbrw {
                Backend::Scalar
            } else {
                Backend::Vec4
            };
            let schedule = DecBrwKeySchedule::new(&key, 4, blocks, cfg, &mut scratch)
                .map_err(lib_failure)?;
            schedule
                .hash(&msg, param, backend, &mut counters)
                .map_err(lib_failure)?;
            let pre = median_nspb(
                || {
                    let mut c = OpCounters::new();
                    std::hint::black_box(schedule.hash(&msg, param, backend, &mut c).unwrap());
                },
                bytes,
                reps,
            );
            let fly = median_nspb(
                || {
                    let mut c = OpCounters::new();
                    std::hint::black_box(
                        decbrw_hash(&key, &msg, 4, param, backend, cfg, &mut c).unwrap(),
                    );
                },
                bytes,
                reps,
            );
            (pre, fly)
        }
    };

    println!(
        "{},{},{},{},{:.3},{:.3},{},{},{},{},{},{}",
        algo.label(),
        prime,
        param,
        blocks,
        nspb_pre,
        nspb_fly,
        counters.scalar_unreduced_mults,
        counters.scalar_reductions,
        counters.lane_unreduced_mults,
        counters.lane_reductions,
        counters.full_mults,
        counters.squarings,
    );
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<(), Failure> {
    let tp = ToyParams {
        m: args.m,
        delta: args.delta,
        n: args.n,
        k: args.k,
        mu: args.mu,
    };
    tp.validate().map_err(|e| Failure::usage(e.to_string()))?;
    if args.c.is_empty() || args.c.iter().any(|&c| c == 0 || c > 8) {
        return Err(Failure::usage("--c entries must lie in 1..=8"));
    }

    let mut kinds = Vec::new();
    if matches!(args.kind, KindArg::Poly | KindArg::All) {
        kinds.push(ToyConstruction::Poly);
    }
    if matches!(args.kind, KindArg::Brw | KindArg::All) {
        kinds.push(ToyConstruction::Brw);
    }
    if matches!(args.kind, KindArg::Dec | KindArg::All) {
        for &streams in &args.c {
            kinds.push(ToyConstruction::Dec { streams });
        }
    }

    let mut reports: Vec<AxuReport> = Vec::new();
    for kind in kinds {
        let mut swept =
            axu_sweep(&tp, args.max_bits, kind).map_err(|e| Failure::usage(e.to_string()))?;
        reports.append(&mut swept);
    }

    println!("kind,ell,c,params,queries_checked,max_count,bound_count,pass");
    let mut violated = false;
    for report in &reports {
        if report.bound_count >= tp.key_count() {
            eprintln!(
                "warning: vacuous bound for kind={} ell={} c={}: bound {} covers all {} keys",
                report.kind,
                report.ell,
                report.c,
                report.bound_count,
                tp.key_count()
            );
        }
        if !report.pass {
            violated = true;
        }
        println!(
            "{},{},{},{},{},{},{},{}",
            report.kind,
            report.ell,
            report.c,
            report.params,
            report.queries_checked,
            report.max_count,
            report.bound_count,
            report.pass
        );
    }
    if violated {
        return Err(Failure::runtime("differential bound violated; see report"));
    }
    Ok(())
}
