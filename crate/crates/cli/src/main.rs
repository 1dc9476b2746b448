//! `sparsecode`: encode, corrupt and decode sparse polynomial evaluation codes,
//! run the window-enumeration experiments and compute `n_{k,E}` tables.
//!
//! Exit status: 0 on success, 1 when decoding fails (or does not match
//! `--expect`), 2 on bad usage or malformed input.

use std::collections::BTreeSet;
use std::io::Read;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sparsecode::charzero::{unique_decode_real, word_from_json, RationalWordJson, RealCodeParameters};
use sparsecode::codec::{
    corrupt, encode, list_decode, unique_decode_majority, CandidateReport, CodeParameters, DecodeReport, Poly,
    ReceivedWord, SubsequenceMode, WordJson,
};
use sparsecode::experiment::{radius_table, simulate_success_rate, RadiusCell};
use sparsecode::sparse_poly::PolynomialJson;
use sparsecode::field::parse_rational;
use sparsecode::PrimeField;

const WORKERS_ENV: &str = "SPARSECODE_WORKERS";

#[derive(Parser)]
#[command(name = "sparsecode", version, about = "Sparse polynomial evaluation codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CodeArgs {
    /// Prime modulus.
    #[arg(long)]
    p: u64,
    /// Order of the evaluation root of unity; must divide p - 1.
    #[arg(long)]
    m: u64,
    /// Sparsity bound T.
    #[arg(short = 'T', long = "sparsity")]
    sparsity: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecodeMode {
    Majority,
    ContiguousDisjoint,
    ContiguousAll,
    AffineDisjoint,
    AffineAll,
}

impl DecodeMode {
    fn list_mode(self) -> Option<SubsequenceMode> {
        match self {
            DecodeMode::Majority => None,
            DecodeMode::ContiguousDisjoint => Some(SubsequenceMode::ContiguousDisjoint),
            DecodeMode::ContiguousAll => Some(SubsequenceMode::ContiguousAll),
            DecodeMode::AffineDisjoint => Some(SubsequenceMode::AffineDisjoint),
            DecodeMode::AffineAll => Some(SubsequenceMode::AffineAll),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WindowMode {
    ContiguousDisjoint,
    ContiguousAll,
    AffineDisjoint,
    AffineAll,
}

impl From<WindowMode> for SubsequenceMode {
    fn from(m: WindowMode) -> Self {
        match m {
            WindowMode::ContiguousDisjoint => SubsequenceMode::ContiguousDisjoint,
            WindowMode::ContiguousAll => SubsequenceMode::ContiguousAll,
            WindowMode::AffineDisjoint => SubsequenceMode::AffineDisjoint,
            WindowMode::AffineAll => SubsequenceMode::AffineAll,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a polynomial at alpha^0 .. alpha^(n-1); prints a word.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        n: usize,
        /// Polynomial JSON `{"p":..,"terms":[[e,c],..]}`, `@file` or `-` for stdin.
        #[arg(long)]
        poly: String,
    },
    /// Add random nonzero offsets to a word.
    Corrupt {
        /// Word JSON `{"p":..,"values":[..]}`, `@file` or `-`.
        #[arg(long)]
        word: String,
        /// Comma-separated error positions.
        #[arg(long, value_delimiter = ',', conflicts_with = "count")]
        positions: Vec<usize>,
        /// Number of uniformly chosen error positions.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decode a word; prints a JSON report with per-candidate mismatch counts.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value = "affine-all")]
        mode: DecodeMode,
        /// Drop list candidates with more than E mismatches.
        #[arg(long)]
        sieve: bool,
        /// Error budget E.
        #[arg(short = 'E', long = "errors", default_value_t = 0)]
        errors: usize,
        /// Exit with 1 unless this polynomial is decoded.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Encode, corrupt E random positions and decode; exits 1 iff the
    /// polynomial is not recovered.
    Roundtrip {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        poly: String,
        #[arg(short = 'E', long = "errors", default_value_t = 0)]
        errors: usize,
        #[arg(long, value_enum, default_value = "affine-all")]
        mode: DecodeMode,
        #[arg(long)]
        sieve: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo success rate of window enumeration; CSV on stdout.
    Simulate {
        /// Window length 2T.
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, value_enum, default_value = "affine-all")]
        mode: WindowMode,
        #[arg(long)]
        emax: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Table of n_{k,E}; CSV rows k,E,n_kE,witness.
    Radius {
        #[arg(long, default_value_t = 3)]
        kmin: usize,
        #[arg(long)]
        kmax: usize,
        #[arg(long)]
        emax: usize,
        /// Seconds of search per cell; slower cells print "timeout".
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Unique decoding over the rationals at points alpha^i.
    CharzeroDecode {
        /// Word JSON `{"values":["num/den",..]}`, `@file` or `-`.
        #[arg(long)]
        word: String,
        /// Ratio of the geometric points, e.g. `2` or `3/2`.
        #[arg(long)]
        alpha: String,
        #[arg(short = 'T', long = "sparsity")]
        sparsity: usize,
        #[arg(short = 'E', long = "errors")]
        errors: usize,
        /// Largest exponent searched for.
        #[arg(long)]
        degree_bound: u64,
    },
}

/// Decoding ran but did not produce the wanted result.
#[derive(Debug)]
struct DecodeFailure(String);

impl std::fmt::Display for DecodeFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for DecodeFailure {}

fn read_input(arg: &str) -> anyhow::Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    } else {
        Ok(arg.to_string())
    }
}

fn read_poly(field: &PrimeField, arg: &str) -> anyhow::Result<Poly> {
    let json: PolynomialJson = serde_json::from_str(&read_input(arg)?).context("parsing polynomial")?;
    Ok(Poly::from_json(field, &json)?)
}

fn read_word(arg: &str) -> anyhow::Result<(PrimeField, ReceivedWord)> {
    let json: WordJson = serde_json::from_str(&read_input(arg)?).context("parsing word")?;
    let field = PrimeField::new(json.p)?;
    let word = ReceivedWord::from_json(&field, &json)?;
    Ok((field, word))
}

fn code_params(code: &CodeArgs, n: usize) -> anyhow::Result<CodeParameters> {
    let field = PrimeField::new(code.p)?;
    Ok(CodeParameters::new(field, code.m, n, code.sparsity)?)
}

fn print_json<T: serde::Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

/// Runs the chosen decoder; returns the report and the decoded polynomials.
fn run_decoder(
    word: &ReceivedWord,
    params: &CodeParameters,
    mode: DecodeMode,
    budget: usize,
    sieve: bool,
) -> anyhow::Result<(DecodeReport, Vec<Poly>)> {
    let field = params.field();
    match mode.list_mode() {
        None => {
            let f = unique_decode_majority(word, params, budget).map_err(|e| DecodeFailure(e.to_string()))?;
            let mismatches = word.distance(&encode(&f, params)?);
            let report = DecodeReport {
                mode: "majority".into(),
                windows_examined: word.len() / params.window(),
                windows_skipped: 0,
                candidates: vec![CandidateReport {
                    polynomial: f.to_json(field),
                    mismatches,
                    start: 0,
                    step: 1,
                }],
            };
            Ok((report, vec![f]))
        }
        Some(m) => {
            let outcome = list_decode(word, params, budget, m, sieve)?;
            let polys = outcome.candidates.iter().map(|c| c.polynomial.clone()).collect();
            Ok((outcome.to_json(field), polys))
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Encode { code, n, poly } => {
            let params = code_params(&code, n)?;
            let f = read_poly(params.field(), &poly)?;
            print_json(&encode(&f, &params)?.to_json(params.field()))
        }
        Command::Corrupt {
            word,
            positions,
            count,
            seed,
        } => {
            let (field, w) = read_word(&word)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let support: BTreeSet<usize> = match count {
                Some(c) => {
                    if c > w.len() {
                        bail!("cannot place {c} errors in a word of length {}", w.len());
                    }
                    sample(&mut rng, w.len(), c).into_iter().collect()
                }
                None => positions.into_iter().collect(),
            };
            print_json(&corrupt(&field, &w, &support, &mut rng)?.to_json(&field))
        }
        Command::Decode {
            code,
            word,
            mode,
            sieve,
            errors,
            expect,
        } => {
            let (field, w) = read_word(&word)?;
            if field.modulus() != code.p {
                bail!("word is over F_{}, expected F_{}", field.modulus(), code.p);
            }
            let params = code_params(&code, w.len())?;
            let expected = expect.map(|e| read_poly(&field, &e)).transpose()?;
            let (report, polys) = run_decoder(&w, &params, mode, errors, sieve)?;
            print_json(&report)?;
            if polys.is_empty() {
                return Err(DecodeFailure("no candidate found".into()).into());
            }
            if let Some(f) = expected {
                if !polys.contains(&f) {
                    return Err(DecodeFailure("expected polynomial not decoded".into()).into());
                }
            }
            Ok(())
        }
        Command::Roundtrip {
            code,
            n,
            poly,
            errors,
            mode,
            sieve,
            seed,
        } => {
            let params = code_params(&code, n)?;
            let field = params.field();
            let f = read_poly(field, &poly)?;
            let clean = encode(&f, &params)?;
            if errors > n {
                bail!("cannot place {errors} errors in a word of length {n}");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let support: BTreeSet<usize> = sample(&mut rng, n, errors).into_iter().collect();
            let received = corrupt(field, &clean, &support, &mut rng)?;
            let decoded = run_decoder(&received, &params, mode, errors, sieve);
            let (report, polys) = match decoded {
                Ok(r) => r,
                Err(e) if e.is::<DecodeFailure>() => {
                    eprintln!("error positions: {support:?}");
                    return Err(e);
                }
                Err(e) => return Err(e),
            };
            print_json(&serde_json::json!({
                "errors": support,
                "word": received.to_json(field),
                "report": report,
            }))?;
            if polys.contains(&f) {
                Ok(())
            } else {
                Err(DecodeFailure("input polynomial not recovered".into()).into())
            }
        }
        Command::Simulate {
            k,
            n,
            trials,
            mode,
            emax,
            seed,
        } => {
            let rows = simulate_success_rate(n, k, emax, trials, mode.into(), seed)?;
            println!("E,successes,trials,success_fraction");
            for r in rows {
                println!("{},{},{},{:.6}", r.errors, r.successes, r.trials, r.fraction());
            }
            Ok(())
        }
        Command::Radius {
            kmin,
            kmax,
            emax,
            budget,
        } => {
            if kmin < 2 || kmin > kmax {
                bail!("need 2 <= kmin <= kmax");
            }
            let budget = budget
                .map(|b| Duration::try_from_secs_f64(b).map_err(|_| anyhow!("invalid budget {b}")))
                .transpose()?;
            let ks: Vec<usize> = (kmin..=kmax).collect();
            println!("k,E,n_kE,witness");
            for cell in radius_table(&ks, emax, budget)? {
                match cell {
                    RadiusCell::Solved(r) => {
                        let w: Vec<String> = r.witness.positions().iter().map(|p| p.to_string()).collect();
                        println!("{},{},{},{}", r.k, r.errors, r.n, w.join(" "));
                    }
                    RadiusCell::Timeout { k, errors } => println!("{k},{errors},timeout,"),
                }
            }
            Ok(())
        }
        Command::CharzeroDecode {
            word,
            alpha,
            sparsity,
            errors,
            degree_bound,
        } => {
            let json: RationalWordJson = serde_json::from_str(&read_input(&word)?).context("parsing word")?;
            let w = word_from_json(&json)?;
            let alpha = parse_rational(&alpha)?;
            let params = RealCodeParameters::geometric(alpha, w.len(), sparsity, degree_bound)?;
            match unique_decode_real(&w, &params, errors) {
                Ok(d) => print_json(&serde_json::json!({
                    "polynomial": d.polynomial.to_rational_json(),
                    "mismatches": d.mismatches,
                    "start": d.start,
                    "step": d.step,
                })),
                Err(sparsecode::Error::NoUniqueDecode(c)) => {
                    Err(DecodeFailure(format!("{c} candidates within the unique decoding radius")).into())
                }
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn configure_workers() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v.parse().with_context(|| format!("{WORKERS_ENV}={v}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_workers().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<DecodeFailure>() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
