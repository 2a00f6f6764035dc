//! Success probabilities of constant and quadratic injections, and the
//! expected number of injections for a full fault equation system.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::bign::{keygen, Params};
use crate::error::{Error, Result};
use crate::f2::Word;
use crate::faultsim::{Countermeasures, FaultOracle, FaultTarget};

/// Recommended parameter sets, from 60-bit to 266-bit security.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SecurityLevel {
    Insec,
    Short1,
    Short2,
    Mid1,
    Mid2,
    Long1,
    Long2,
    Long3,
}

impl SecurityLevel {
    pub const ALL: [SecurityLevel; 8] = [
        SecurityLevel::Insec,
        SecurityLevel::Short1,
        SecurityLevel::Short2,
        SecurityLevel::Mid1,
        SecurityLevel::Mid2,
        SecurityLevel::Long1,
        SecurityLevel::Long2,
        SecurityLevel::Long3,
    ];

    /// `(m, t, n)`.
    pub fn shape(self) -> (u32, usize, usize) {
        match self {
            SecurityLevel::Insec => (10, 38, 1024),
            SecurityLevel::Short1 => (11, 27, 2048),
            SecurityLevel::Short2 => (11, 33, 1632),
            SecurityLevel::Mid1 => (12, 56, 2960),
            SecurityLevel::Mid2 => (12, 67, 3408),
            SecurityLevel::Long1 => (13, 95, 4624),
            SecurityLevel::Long2 => (13, 115, 6624),
            SecurityLevel::Long3 => (13, 119, 6960),
        }
    }

    pub fn params(self) -> Params {
        let (m, t, n) = self.shape();
        Params::new(m, t, n).expect("table parameters are valid")
    }

    pub fn security_bits(self) -> u32 {
        match self {
            SecurityLevel::Insec => 60,
            SecurityLevel::Short1 | SecurityLevel::Short2 => 80,
            SecurityLevel::Mid1 => 128,
            SecurityLevel::Mid2 => 147,
            SecurityLevel::Long1 => 191,
            SecurityLevel::Long2 => 256,
            SecurityLevel::Long3 => 266,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SecurityLevel::Insec => "insec",
            SecurityLevel::Short1 => "short1",
            SecurityLevel::Short2 => "short2",
            SecurityLevel::Mid1 => "mid1",
            SecurityLevel::Mid2 => "mid2",
            SecurityLevel::Long1 => "long1",
            SecurityLevel::Long2 => "long2",
            SecurityLevel::Long3 => "long3",
        }
    }
}

impl fmt::Display for SecurityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SecurityLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<SecurityLevel> {
        SecurityLevel::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::ParameterViolation(format!("unknown level {s:?}")))
    }
}

/// `n / p0 + floor(n / 10) / p2`.
pub fn expected_injections(n: usize, p0: f64, p2: f64) -> f64 {
    n as f64 / p0 + (n / 10) as f64 / p2
}

/// Mean and sample standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountSummary {
    /// Mean number of successful faults per word.
    pub avg: f64,
    pub std_dev: f64,
    /// `avg / 2^m`.
    pub p_hat: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeCounts {
    pub constant: Vec<usize>,
    pub quadratic: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub params: Params,
    pub codes: usize,
    pub words: usize,
    pub constant: CountSummary,
    pub quadratic: CountSummary,
    pub expected_injections: f64,
    pub per_code: Vec<CodeSummary>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeSummary {
    pub constant: CountSummary,
    pub quadratic: CountSummary,
}

/// Exact successful-fault counts for `words` distinct constant words
/// `e_i1 + e_i2` and `words` distinct quadratic words `e_i` with
/// `alpha_i != 0` (fewer when `n` is too small).
pub fn code_counts(oracle: &FaultOracle, words: usize, rng: &mut dyn RngCore) -> Result<CodeCounts> {
    let n = oracle.public_key().params().n;
    let alpha = oracle.true_support()?.elems().to_vec();

    let pairs = n * (n - 1) / 2;
    let mut constant = Vec::with_capacity(words);
    for k in index::sample(rng, pairs, words.min(pairs)) {
        let (i1, i2) = unrank_pair(k, n);
        let p = Word::from_indices(n, &[i1, i2])?;
        constant.push(oracle.enumerate_successful_faults(&p, 0)?);
    }

    // alpha_i = 0 ends the sequence after about one fault and yields only x_i
    let nonzero: Vec<usize> = (0..n).filter(|&i| !alpha[i].is_zero()).collect();
    let mut quadratic = Vec::with_capacity(words);
    for k in index::sample(rng, nonzero.len(), words.min(nonzero.len())) {
        let p = Word::unit(n, nonzero[k]);
        quadratic.push(oracle.enumerate_successful_faults(&p, 2)?);
    }
    Ok(CodeCounts { constant, quadratic })
}

/// `k`-th unordered pair `(i, j)`, `i < j < n`, in row-major order.
fn unrank_pair(mut k: usize, n: usize) -> (usize, usize) {
    let mut i = 0;
    while k >= n - 1 - i {
        k -= n - 1 - i;
        i += 1;
    }
    (i, i + 1 + k)
}

fn summarize(counts: &[usize], q: f64) -> CountSummary {
    let xs: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    let (avg, std_dev) = mean_std(&xs);
    CountSummary { avg, std_dev, p_hat: avg / q }
}

/// Averages over `codes` random codes of `words` words each. The overall
/// average is the mean of the per-code averages; the standard deviation is
/// taken over all words.
pub fn success_statistics(params: Params, codes: usize, words: usize, rng: &mut dyn RngCore) -> Result<StatsReport> {
    if codes == 0 || words == 0 {
        return Err(Error::Precondition("need at least one code and one word".into()));
    }
    let q = (1usize << params.m) as f64;
    let mut per_code = Vec::with_capacity(codes);
    let (mut all_c, mut all_q) = (Vec::new(), Vec::new());
    let (mut avg_c, mut avg_q) = (Vec::new(), Vec::new());
    for _ in 0..codes {
        let (sk, _) = keygen(params, rng)?;
        let oracle = FaultOracle::transparent(&sk, Countermeasures::NONE);
        let counts = code_counts(&oracle, words, rng)?;
        let c = summarize(&counts.constant, q);
        let d = summarize(&counts.quadratic, q);
        avg_c.push(c.avg);
        avg_q.push(d.avg);
        per_code.push(CodeSummary { constant: c, quadratic: d });
        all_c.extend(counts.constant.iter().map(|&x| x as f64));
        all_q.extend(counts.quadratic.iter().map(|&x| x as f64));
    }
    let combine = |avgs: &[f64], all: &[f64]| {
        let avg = avgs.iter().sum::<f64>() / avgs.len() as f64;
        CountSummary { avg, std_dev: mean_std(all).1, p_hat: avg / q }
    };
    let constant = combine(&avg_c, &all_c);
    let quadratic = combine(&avg_q, &all_q);
    let expected = expected_injections(params.n, constant.p_hat, quadratic.p_hat);
    Ok(StatsReport { params, codes, words, constant, quadratic, expected_injections: expected, per_code })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn levels_roundtrip_and_validate() {
        for l in SecurityLevel::ALL {
            assert_eq!(l.name().parse::<SecurityLevel>().unwrap(), l);
            let p = l.params();
            assert!(p.mt() < p.n && p.n <= 1 << p.m);
        }
        assert!("mid3".parse::<SecurityLevel>().is_err());
        assert_eq!(serde_json::to_string(&SecurityLevel::Short2).unwrap(), "\"short2\"");
    }

    #[test]
    fn pair_unranking_is_a_bijection() {
        let n = 7;
        let pairs: Vec<_> = (0..21).map(|k| unrank_pair(k, n)).collect();
        let mut expect = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                expect.push((i, j));
            }
        }
        assert_eq!(pairs, expect);
    }

    #[test]
    fn sample_std_dev() {
        let (m, s) = mean_std(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]);
        assert_eq!(m, 5.0);
        assert!((s - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
        assert_eq!(mean_std(&[3.0]), (3.0, 0.0));
    }

    #[test]
    fn full_support_counts_are_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = success_statistics(Params::new(4, 2, 16).unwrap(), 3, 50, &mut rng).unwrap();
        assert_eq!(r.constant.avg, 7.0);
        assert_eq!(r.constant.std_dev, 0.0);
        assert_eq!(r.quadratic.avg, 7.0);
        assert_eq!(r.constant.p_hat, 7.0 / 16.0);
        assert!((r.expected_injections - (16.0 * 16.0 / 7.0 + 16.0 / 7.0)).abs() < 1e-9);
    }

    #[test]
    fn shorter_codes_succeed_less() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let full = success_statistics(Params::new(6, 4, 64).unwrap(), 2, 60, &mut rng).unwrap();
        let short = success_statistics(Params::new(6, 4, 40).unwrap(), 2, 60, &mut rng).unwrap();
        assert!(short.constant.p_hat < full.constant.p_hat);
        assert!(short.quadratic.p_hat < full.quadratic.p_hat);
    }
}
