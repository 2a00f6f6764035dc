mod cmd;

use std::path::PathBuf;
use std::process::ExitCode;

use bign::stats::SecurityLevel;
use bign::{Countermeasures, Error, Params};
use clap::{Args, Parser, Subcommand};

/// BIG-N cryptosystem and fault attack lab. Every command is reproducible
/// from its --seed.
#[derive(Parser, Debug)]
#[command(name = "bign", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a key pair.
    Keygen {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Encrypt a plaintext (given indices, or random of weight t).
    Encrypt {
        #[arg(long)]
        pk: PathBuf,
        /// Comma-separated 0-based error positions.
        #[arg(long)]
        plaintext: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Decrypt a ciphertext file produced by `encrypt`.
    Decrypt {
        #[arg(long)]
        sk: PathBuf,
        #[arg(long)]
        ciphertext: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run single fault injections against a device holding a key.
    Inject {
        #[arg(long)]
        sk: PathBuf,
        /// Comma-separated 0-based positions of p.
        #[arg(long)]
        p: String,
        /// Degree of the faulted locator coefficient.
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Full fault attack against an in-process device.
    Attack {
        #[command(flatten)]
        code: CodeArgs,
        /// Attack this key instead of a fresh one.
        #[arg(long)]
        sk: Option<PathBuf>,
        /// Write the recovered alternative pair here.
        #[arg(long)]
        alt_out: Option<PathBuf>,
        /// Ciphertexts used to verify the recovered pair.
        #[arg(long, default_value_t = 100)]
        verify: usize,
        /// Words per code used to measure success probabilities.
        #[arg(long, default_value_t = 200)]
        words: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Success probabilities of constant and quadratic injections.
    Stats {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 3)]
        codes: usize,
        #[arg(long, default_value_t = 200)]
        words: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Check an alternative pair against a public key.
    Verify {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        alt: PathBuf,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct CodeArgs {
    /// Code parameters as m,t,n.
    #[arg(long, conflicts_with = "level")]
    params: Option<String>,
    /// Named parameter set.
    #[arg(long)]
    level: Option<SecurityLevel>,
    /// Allow parameter sets with m > 10.
    #[arg(long)]
    large: bool,
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated subset of weight,reencrypt.
    #[arg(long, value_delimiter = ',')]
    countermeasures: Vec<String>,
    /// Injections per sequence (default 64 * 2^m).
    #[arg(long)]
    budget: Option<u64>,
    /// Output path; stdout when absent (for keygen: a directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Largest m accepted without --large.
const DESK_MAX_M: u32 = 10;

impl CodeArgs {
    fn resolve(&self) -> Result<Params, Error> {
        let params = match (&self.params, self.level) {
            (Some(s), _) => parse_params(s)?,
            (None, Some(l)) => l.params(),
            (None, None) => return Err(Error::ParameterViolation("one of --params or --level is required".into())),
        };
        if params.m > DESK_MAX_M && !self.large {
            return Err(Error::ParameterViolation(format!(
                "m = {} needs --large (multi-minute runtimes)",
                params.m
            )));
        }
        Ok(params)
    }
}

fn parse_params(s: &str) -> Result<Params, Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::ParameterViolation(format!("expected m,t,n, got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let m: u32 = parts[0].parse().map_err(|_| bad())?;
    let t: usize = parts[1].parse().map_err(|_| bad())?;
    let n: usize = parts[2].parse().map_err(|_| bad())?;
    Params::new(m, t, n)
}

impl CommonArgs {
    fn countermeasures(&self) -> Result<Countermeasures, Error> {
        let mut cm = Countermeasures::NONE;
        for c in &self.countermeasures {
            match c.as_str() {
                "weight" => cm.weight_check = true,
                "reencrypt" => cm.reencrypt_check = true,
                "" | "none" => {}
                other => return Err(Error::ParameterViolation(format!("unknown countermeasure {other:?}"))),
            }
        }
        Ok(cm)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cmd::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let body = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{body}");
            match e {
                Error::ParameterViolation(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
