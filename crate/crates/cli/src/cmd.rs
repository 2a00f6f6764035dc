use std::fs;
use std::io::Write;
use std::path::Path;

use bign::extender::verify_alternative;
use bign::stats::{code_counts, expected_injections, success_statistics};
use bign::{
    fault_attack, keygen, AltDecryptor, AlternativeSecretPair, AttackConfig, AttackReport, Error, FaultOracle,
    FaultTarget, PublicKey, SecretKey, Word,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::{CommonArgs, Command};

type Result<T> = std::result::Result<T, Error>;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Keygen { code, common } => {
            let params = code.resolve()?;
            let (sk, pk) = keygen(params, &mut rng(&common))?;
            match &common.out {
                Some(dir) => {
                    fs::create_dir_all(dir).map_err(io_err)?;
                    write_json(&dir.join("secret_key.json"), &sk)?;
                    write_json(&dir.join("public_key.json"), &pk)?;
                    Ok(())
                }
                None => emit(&common, &serde_json::json!({ "secret_key": sk, "public_key": pk })),
            }
        }
        Command::Encrypt { pk, plaintext, common } => {
            let pk: PublicKey = read_json(&pk)?;
            let n = pk.params().n;
            let p = match plaintext {
                Some(s) => Word::from_indices(n, &parse_indices(&s)?)?,
                None => pk.random_plaintext(&mut rng(&common)),
            };
            let c = pk.encrypt(&p)?;
            emit(&common, &CiphertextFile { plaintext: Some(p.support()), ciphertext: c })
        }
        Command::Decrypt { sk, ciphertext, common } => {
            let sk: SecretKey = read_json(&sk)?;
            let file: CiphertextFile = read_json(&ciphertext)?;
            let p = sk.decrypt(&file.ciphertext)?;
            emit(&common, &serde_json::json!({ "plaintext": p.support() }))
        }
        Command::Inject { sk, p, d, count, common } => {
            let sk: SecretKey = read_json(&sk)?;
            let mut oracle = FaultOracle::new(&sk, common.countermeasures()?);
            let p = Word::from_indices(sk.params().n, &parse_indices(&p)?)?;
            let mut rng = rng(&common);
            let mut out = String::new();
            for _ in 0..count {
                let rec = oracle.inject(&p, d, &mut rng)?;
                out.push_str(&serde_json::to_string(&rec.log_entry()).map_err(json_err)?);
                out.push('\n');
            }
            emit_raw(&common, &out)
        }
        Command::Attack { code, sk, alt_out, verify, words, common } => {
            let mut rng = rng(&common);
            let sk = match sk {
                Some(path) => read_json::<SecretKey>(&path)?,
                None => keygen(code.resolve()?, &mut rng)?.0,
            };
            attack(&sk, alt_out.as_deref(), verify, words, &common, &mut rng)
        }
        Command::Stats { code, codes, words, common } => {
            let report = success_statistics(code.resolve()?, codes, words, &mut rng(&common))?;
            emit(&common, &report)
        }
        Command::Verify { pk, alt, count, common } => {
            let pk: PublicKey = read_json(&pk)?;
            let alt: AlternativeSecretPair = read_json(&alt)?;
            AltDecryptor::new(&pk, &alt)?;
            let ok = verify_alternative(&pk, &alt, count, &mut rng(&common))?;
            emit(&common, &serde_json::json!({ "verified": ok, "total": count, "pass": ok == count }))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CiphertextFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    plaintext: Option<Vec<usize>>,
    ciphertext: Word,
}

#[derive(Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "UPPERCASE")]
enum Verdict {
    /// A verified alternative pair was recovered.
    Pass,
    /// Recovery failed for a reason other than the device's checks.
    Fail,
    /// Countermeasures kept a sequence from ever terminating.
    Defeated,
}

#[derive(Serialize)]
struct SuccessEstimate {
    words: usize,
    p0_hat: f64,
    p2_hat: f64,
    expected_injections: f64,
    /// `measured / expected`.
    ratio: f64,
}

#[derive(Serialize)]
struct AttackOutput {
    verdict: Verdict,
    injections: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<AttackReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorBody>,
    #[serde(skip_serializing_if = "Option::is_none")]
    estimate: Option<SuccessEstimate>,
}

#[derive(Serialize)]
struct ErrorBody {
    kind: &'static str,
    message: String,
}

fn attack(
    sk: &SecretKey,
    alt_out: Option<&Path>,
    verify: usize,
    words: usize,
    common: &CommonArgs,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let mut oracle = FaultOracle::new(sk, common.countermeasures()?);
    let config = AttackConfig { budget_per_seq: common.budget, verify_ciphertexts: verify, ..AttackConfig::default() };
    let outcome = fault_attack(&mut oracle, rng, config);
    let injections = oracle.injections();

    let (verdict, report, error) = match outcome {
        Ok((alt, report)) => {
            if let Some(path) = alt_out {
                write_json(path, &alt)?;
            }
            let v = if report.passed() { Verdict::Pass } else { Verdict::Fail };
            (v, Some(report), None)
        }
        Err(e @ Error::BudgetExceeded(_)) => (Verdict::Defeated, None, Some(e)),
        Err(e) => (Verdict::Fail, None, Some(e)),
    };

    let estimate = if words > 0 {
        let params = sk.params();
        let q = (1u64 << params.m) as f64;
        let counts = code_counts(&FaultOracle::transparent(sk, Default::default()), words, rng)?;
        let mean = |xs: &[usize]| xs.iter().sum::<usize>() as f64 / xs.len().max(1) as f64;
        let p0_hat = mean(&counts.constant) / q;
        let p2_hat = mean(&counts.quadratic) / q;
        let expected = expected_injections(params.n, p0_hat, p2_hat);
        Some(SuccessEstimate { words, p0_hat, p2_hat, expected_injections: expected, ratio: injections as f64 / expected })
    } else {
        None
    };

    let body = error.as_ref().map(|e| ErrorBody { kind: e.kind(), message: e.to_string() });
    emit(common, &AttackOutput { verdict, injections, report, error: body, estimate })?;
    match (verdict, error) {
        (Verdict::Fail, Some(e)) => Err(e),
        _ => Ok(()),
    }
}

fn rng(common: &CommonArgs) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(common.seed)
}

fn parse_indices(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| Error::Format(format!("bad index {x:?}"))))
        .collect()
}

fn io_err(e: std::io::Error) -> Error {
    Error::Format(e.to_string())
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(json_err)?;
    fs::write(path, text + "\n").map_err(io_err)
}

fn emit<T: Serialize>(common: &CommonArgs, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(json_err)?;
    emit_raw(common, &(text + "\n"))
}

fn emit_raw(common: &CommonArgs, text: &str) -> Result<()> {
    match &common.out {
        Some(path) => fs::write(path, text).map_err(io_err),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(io_err),
    }
}
