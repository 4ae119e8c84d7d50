//! Command-line front end. Every command reads exact inputs (chain JSON
//! files, polynomial strings, rational values), prints one JSON document on
//! stdout and keeps diagnostics on stderr. Exit codes: 0 success, 2
//! validation error, 3 computation error (semi-decided results under
//! --strict, selftest failures).

use clap::{Args, Parser, Subcommand};
use keypoly::error::Error;
use keypoly::json::{family_from_wire, FamilyWire, MlvChainWire};
use keypoly::valuation::{KeyBounds, KeyVerdict};
use keypoly::{
    ball_of, mlv_normalize, optimal_sequence, IncreasingFamily, LambdaValue, MacLaneChain, RatPoly,
};
use serde_json::json;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "keypoly",
    version,
    about = "MacLane chains, key polynomials and ultrametric balls over Q, exactly"
)]
struct Cli {
    /// Exit 3 instead of 0 when a semi-decision returns unknown
    #[arg(long, global = true)]
    strict: bool,
    /// Confirm primality of p explicitly in the output
    #[arg(long, global = true)]
    prime_check: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ChainSource {
    /// Chain JSON file ("-" reads stdin)
    #[arg(long)]
    chain: Option<PathBuf>,
    /// Prime for an inline Gauss chain
    #[arg(long)]
    p: Option<u64>,
    /// gamma0 of an inline Gauss chain over --p, e.g. "1/2" or "0+1*eps"
    #[arg(long)]
    gauss: Option<String>,
}

impl ChainSource {
    fn load(&self) -> Result<MacLaneChain, CliError> {
        match (&self.chain, self.p, &self.gauss) {
            (Some(path), None, None) => read_chain(path),
            (None, Some(p), Some(g)) => {
                let gamma = LambdaValue::from_str(g).map_err(validation)?;
                MacLaneChain::gauss(p, gamma).map_err(validation)
            }
            _ => Err(validation(Error::Invalid(
                "pass either --chain FILE or both --p and --gauss".into(),
            ))),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate mu(f)
    Eval {
        #[command(flatten)]
        chain: ChainSource,
        #[arg(long)]
        poly: String,
    },
    /// eps_mu(f) = max_s (mu(f) - mu(hasse_s f))/s
    Epsilon {
        #[command(flatten)]
        chain: ChainSource,
        #[arg(long)]
        poly: String,
    },
    /// delta(mu), the radius of mu's ball
    Delta {
        #[command(flatten)]
        chain: ChainSource,
    },
    /// residue- or value-transcendental
    Classify {
        #[command(flatten)]
        chain: ChainSource,
    },
    /// Ordinary augmentation [mu; phi, gamma]; prints the new chain
    Augment {
        #[command(flatten)]
        chain: ChainSource,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        gamma: String,
        /// Bypass the key test
        #[arg(long)]
        trusted: bool,
        /// Candidate height for the key test
        #[arg(long, default_value_t = 4)]
        height: u32,
    },
    /// Truncation mu_Q(f) for an abstract key polynomial Q
    Truncate {
        #[command(flatten)]
        chain: ChainSource,
        /// The abstract key polynomial Q
        #[arg(long)]
        key: String,
        #[arg(long)]
        poly: String,
    },
    /// Abstract key polynomial test
    IsAkp {
        #[command(flatten)]
        chain: ChainSource,
        #[arg(long)]
        poly: String,
    },
    /// Key polynomial test (semi-decision)
    IsKey {
        #[command(flatten)]
        chain: ChainSource,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 4)]
        height: u32,
    },
    /// Decide mu <= eta via the ball criterion
    Compare {
        /// First chain JSON file
        #[arg(long)]
        chain: PathBuf,
        /// Second chain JSON file
        #[arg(long)]
        chain2: PathBuf,
    },
    /// Ball avatar of a chain: radius, center polynomial, degree
    Ball {
        #[command(flatten)]
        chain: ChainSource,
    },
    /// Deepest chain key per degree with eps values
    OptimalSeq {
        #[command(flatten)]
        chain: ChainSource,
    },
    /// Collapse a raw chain into a Mac Lane-Vaquie chain
    MlvNormalize {
        #[command(flatten)]
        chain: ChainSource,
    },
    /// Verify a Mac Lane-Vaquie chain against a valuation
    MlvVerify {
        /// MLV chain JSON file
        #[arg(long)]
        mlv: PathBuf,
        #[command(flatten)]
        chain: ChainSource,
    },
    /// Stable evaluation along a family
    LimitEval {
        /// Family spec JSON file
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        poly: String,
    },
    /// Limit key polynomial search along a family
    LimitKp {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[arg(long, default_value_t = 4)]
        height: u32,
        /// Instability scan depth
        #[arg(long, default_value_t = 12)]
        scan: usize,
    },
    /// Run the oracle suites and print a JSON summary
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
}

struct CliError {
    exit: u8,
    kind: &'static str,
    message: String,
}

fn validation(e: Error) -> CliError {
    CliError {
        exit: 2,
        kind: error_kind(&e),
        message: e.to_string(),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::NotPrime(_) => "not_prime",
        Error::NotMonic(_) => "not_monic",
        Error::ConstantPolynomial(_) => "constant_polynomial",
        Error::DegreeBound(_, _) => "degree_bound",
        Error::NotAugmentation { .. } => "not_augmentation",
        Error::KeyRejected(_) => "key_rejected",
        Error::KeyUndecided(_) => "key_undecided",
        Error::KeyNotAccepted(_) => "key_not_accepted",
        Error::NotAbstractKey(_) => "not_abstract_key",
        Error::MismatchedPrimes(_, _) => "mismatched_primes",
        _ => "invalid",
    }
}

fn read_to_string(path: &PathBuf) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError {
                exit: 2,
                kind: "io",
                message: format!("reading stdin: {e}"),
            })?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError {
            exit: 2,
            kind: "io",
            message: format!("reading {}: {e}", path.display()),
        })
    }
}

fn read_chain(path: &PathBuf) -> Result<MacLaneChain, CliError> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| CliError {
        exit: 2,
        kind: "parse",
        message: format!("chain {}: {e}", path.display()),
    })
}

fn read_family(path: &PathBuf) -> Result<IncreasingFamily, CliError> {
    let text = read_to_string(path)?;
    let wire: FamilyWire = serde_json::from_str(&text).map_err(|e| CliError {
        exit: 2,
        kind: "parse",
        message: format!("family {}: {e}", path.display()),
    })?;
    family_from_wire(&wire).map_err(validation)
}

fn parse_poly(s: &str) -> Result<RatPoly, CliError> {
    RatPoly::from_str(s).map_err(validation)
}

fn parse_value(s: &str) -> Result<LambdaValue, CliError> {
    LambdaValue::from_str(s).map_err(validation)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            let doc = json!({"error": {"kind": err.kind, "message": err.message}});
            println!("{doc}");
            eprintln!("error: {}", err.message);
            ExitCode::from(err.exit)
        }
    }
}

fn emit(cli: &Cli, mut doc: serde_json::Value, p: Option<u64>) -> u8 {
    if cli.prime_check {
        if let (Some(p), Some(obj)) = (p, doc.as_object_mut()) {
            obj.insert("p_prime".into(), json!(keypoly::value::is_prime_u64(p)));
        }
    }
    println!("{doc}");
    0
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Eval { chain, poly } => {
            let mu = chain.load()?;
            let f = parse_poly(poly)?;
            Ok(emit(cli, json!({"value": mu.evaluate(&f)}), Some(mu.p())))
        }
        Command::Epsilon { chain, poly } => {
            let mu = chain.load()?;
            let f = parse_poly(poly)?;
            let eps = mu.epsilon(&f).map_err(validation)?;
            Ok(emit(cli, json!({"value": eps}), Some(mu.p())))
        }
        Command::Delta { chain } => {
            let mu = chain.load()?;
            Ok(emit(cli, json!({"value": mu.delta()}), Some(mu.p())))
        }
        Command::Classify { chain } => {
            let mu = chain.load()?;
            Ok(emit(
                cli,
                json!({"class": mu.classify().to_string()}),
                Some(mu.p()),
            ))
        }
        Command::Augment {
            chain,
            poly,
            gamma,
            trusted,
            height,
        } => {
            let mu = chain.load()?;
            let phi = parse_poly(poly)?;
            let g = parse_value(gamma)?;
            let bounds = KeyBounds {
                height: *height,
                known_keys: vec![],
            };
            let next = if *trusted {
                mu.augment_trusted(&phi, g)
            } else {
                mu.augment_with_bounds(&phi, g, &bounds)
            }
            .map_err(validation)?;
            Ok(emit(
                cli,
                serde_json::to_value(&next).unwrap(),
                Some(mu.p()),
            ))
        }
        Command::Truncate { chain, key, poly } => {
            let mu = chain.load()?;
            let q = parse_poly(key)?;
            let f = parse_poly(poly)?;
            let v = mu.truncate_value(&q, &f).map_err(validation)?;
            Ok(emit(cli, json!({"value": v}), Some(mu.p())))
        }
        Command::IsAkp { chain, poly } => {
            let mu = chain.load()?;
            let q = parse_poly(poly)?;
            let akp = mu.is_abstract_key(&q).map_err(validation)?;
            Ok(emit(cli, json!({"akp": akp}), Some(mu.p())))
        }
        Command::IsKey {
            chain,
            poly,
            height,
        } => {
            let mu = chain.load()?;
            let f = parse_poly(poly)?;
            let bounds = KeyBounds {
                height: *height,
                known_keys: vec![],
            };
            let verdict = mu.is_key(&f, &bounds).map_err(validation)?;
            match verdict {
                KeyVerdict::Yes => Ok(emit(cli, json!({"result": "yes"}), Some(mu.p()))),
                KeyVerdict::No => Ok(emit(cli, json!({"result": "no"}), Some(mu.p()))),
                KeyVerdict::UnknownAtBound => {
                    let code = emit(
                        cli,
                        json!({"result": "unknown", "bound": height}),
                        Some(mu.p()),
                    );
                    Ok(if cli.strict { 3 } else { code })
                }
            }
        }
        Command::Compare { chain, chain2 } => {
            let a = read_chain(chain)?;
            let b = read_chain(chain2)?;
            let leq = a.leq(&b).map_err(validation)?;
            Ok(emit(cli, json!({"leq": leq}), Some(a.p())))
        }
        Command::Ball { chain } => {
            let mu = chain.load()?;
            let b = ball_of(&mu);
            Ok(emit(
                cli,
                json!({
                    "radius": b.radius,
                    "center_poly": b.center_poly.to_string(),
                    "degree": b.degree(),
                }),
                Some(mu.p()),
            ))
        }
        Command::OptimalSeq { chain } => {
            let mu = chain.load()?;
            let seq = optimal_sequence(&mu);
            Ok(emit(
                cli,
                json!({"sequence": serde_json::to_value(&seq).unwrap()}),
                Some(mu.p()),
            ))
        }
        Command::MlvNormalize { chain } => {
            let mu = chain.load()?;
            let mlv = mlv_normalize(&mu).map_err(validation)?;
            Ok(emit(cli, serde_json::to_value(&mlv).unwrap(), Some(mu.p())))
        }
        Command::MlvVerify { mlv, chain } => {
            let mu = chain.load()?;
            let text = read_to_string(mlv)?;
            let wire: MlvChainWire = serde_json::from_str(&text).map_err(|e| CliError {
                exit: 2,
                kind: "parse",
                message: format!("mlv chain {}: {e}", mlv.display()),
            })?;
            let chain = keypoly::json::mlv_from_wire(&wire).map_err(validation)?;
            let report = chain.verify(&mu);
            Ok(emit(
                cli,
                serde_json::to_value(&report).unwrap(),
                Some(mu.p()),
            ))
        }
        Command::LimitEval { family, poly } => {
            let fam = read_family(family)?;
            let f = parse_poly(poly)?;
            let r = fam.stable_eval(&f).map_err(validation)?;
            let doc = json!({
                "value": r.value,
                "witness_index": r.witness_index,
                "certified": r.certified,
            });
            let code = emit(cli, doc, Some(fam.p()));
            Ok(if cli.strict && !r.certified { 3 } else { code })
        }
        Command::LimitKp {
            family,
            max_degree,
            height,
            scan,
        } => {
            let fam = read_family(family)?;
            let found = fam
                .find_limit_kp(*max_degree, *height, *scan)
                .map_err(validation)?;
            let degree = found.first().and_then(|f| f.degree());
            let polys: Vec<String> = found.iter().map(|f| f.to_string()).collect();
            Ok(emit(
                cli,
                json!({"degree": degree, "polys": polys}),
                Some(fam.p()),
            ))
        }
        Command::Selftest { seed, samples } => {
            let summary = keypoly::oracle::selftest(*seed, *samples);
            let passed = summary.passed;
            println!("{}", serde_json::to_string(&summary).unwrap());
            Ok(if passed { 0 } else { 3 })
        }
    }
}
