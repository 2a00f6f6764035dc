//! From support candidates to an alternative secret pair, and the full
//! fault attack.

use std::time::Instant;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::attack::{build_fault_equation_system, default_budget};
use crate::bign::{AltDecryptor, AlternativeSecretPair, Params, PublicKey};
use crate::error::{Error, Result};
use crate::f2::Word;
use crate::faultsim::FaultTarget;
use crate::field::{Field, Gf};
use crate::goppa::{GeneratingPair, SupportTuple};
use crate::poly::Poly;
use crate::solver::{support_candidates_with_cap, DEFAULT_VAR_CAP};

pub use crate::goppa::sigma_hat;

/// Outcome of [`goppa_gcd`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtensionResult {
    Fail,
    /// Monic `g~` with `deg g~ >= 2t`, no root on the support, and every
    /// basis codeword in `Gamma(alpha~, g~)`.
    Extended(Poly),
}

impl ExtensionResult {
    pub fn is_fail(&self) -> bool {
        matches!(self, ExtensionResult::Fail)
    }

    pub fn poly(&self) -> Option<&Poly> {
        match self {
            ExtensionResult::Fail => None,
            ExtensionResult::Extended(g) => Some(g),
        }
    }
}

/// Running gcd of `s^_{c, alpha~}` over the basis of `C`.
///
/// Fails as soon as the degree drops below `2t`. At degree exactly `2t` the
/// loop stops and the remaining codewords are checked against the parity
/// check matrix of `(alpha~, g~)` instead. Otherwise every linear factor
/// `x - alpha~_i` is divided out before the final degree check.
pub fn goppa_gcd(field: &'static Field, alpha: &SupportTuple, t: usize, basis: &[Word]) -> Result<ExtensionResult> {
    let nonzero: Vec<&Word> = basis.iter().filter(|c| !c.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::Precondition("basis of C has no nonzero codeword".into()));
    }
    let bound = 2 * t;
    let mut g: Option<Poly> = None;
    for (k, c) in nonzero.iter().enumerate() {
        let s = sigma_hat(field, c, alpha)?;
        let next = match g {
            None => s.monic(field),
            Some(prev) => prev.gcd(field, &s)?,
        };
        let deg = next.degree().unwrap_or(0);
        if deg < bound {
            return Ok(ExtensionResult::Fail);
        }
        if deg == bound {
            return check_degree_2t(field, alpha, next, &nonzero[k + 1..]);
        }
        g = Some(next);
    }
    let mut g = g.expect("at least one codeword");
    for &a in alpha.elems() {
        let lin = Poly::linear(a);
        while g.eval(field, a).is_zero() {
            g = g.divrem(field, &lin)?.0;
        }
    }
    if g.degree().unwrap_or(0) < bound {
        return Ok(ExtensionResult::Fail);
    }
    Ok(ExtensionResult::Extended(g.monic(field)))
}

fn check_degree_2t(field: &'static Field, alpha: &SupportTuple, g: Poly, rest: &[&Word]) -> Result<ExtensionResult> {
    // a support root would have to be stripped, leaving degree < 2t
    if alpha.elems().iter().any(|&a| g.eval(field, a).is_zero()) {
        return Ok(ExtensionResult::Fail);
    }
    let pair = GeneratingPair::new(field, alpha.clone(), g)?;
    let h = pair.parity_check_matrix();
    for c in rest {
        if !h.mul_vec(c)?.is_zero() {
            return Ok(ExtensionResult::Fail);
        }
    }
    Ok(ExtensionResult::Extended(pair.g().clone()))
}

/// `(a alpha, g(a^{-1} x))`, which defines the same code.
pub fn scale_pair(pair: &GeneratingPair, a: Gf) -> Result<GeneratingPair> {
    let field = pair.field();
    if a.is_zero() {
        return Err(Error::ZeroScalar);
    }
    let support = pair.alpha().iter().map(|&x| field.mul(a, x)).collect();
    let support = SupportTuple::new(field, support)?;
    let g = pair.g().compose_scale(field, field.inv(a)?);
    GeneratingPair::new(field, support, g)
}

/// Knobs for [`fault_attack`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackConfig {
    /// Injections per sequence; `None` means `64 * 2^m`.
    pub budget_per_seq: Option<u64>,
    pub var_cap: usize,
    /// Random ciphertexts the result must decrypt before it is returned.
    pub verify_ciphertexts: usize,
}

impl Default for AttackConfig {
    fn default() -> AttackConfig {
        AttackConfig { budget_per_seq: None, var_cap: DEFAULT_VAR_CAP, verify_ciphertexts: 100 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimings {
    pub harvest_s: f64,
    pub solve_s: f64,
    pub extend_s: f64,
    pub verify_s: f64,
    pub total_s: f64,
}

/// Attack transcript.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackReport {
    pub params: Params,
    pub constant_injections: u64,
    pub quadratic_injections: u64,
    pub total_injections: u64,
    pub l1: usize,
    pub l2: usize,
    pub l2_quadratic: usize,
    pub normalizer_var: usize,
    pub eliminated: usize,
    pub reduced_indeterminates: usize,
    pub reduced_equations: usize,
    pub zero_set_size: usize,
    pub candidates: usize,
    pub candidates_tested: usize,
    pub g_tilde_degree: usize,
    pub verified: usize,
    pub verify_total: usize,
    pub timings: PhaseTimings,
}

impl AttackReport {
    pub fn passed(&self) -> bool {
        self.verified == self.verify_total
    }
}

/// Decrypts `count` random ciphertexts of weight-`t` plaintexts with `alt`;
/// returns how many came back right.
pub fn verify_alternative(pk: &PublicKey, alt: &AlternativeSecretPair, count: usize, rng: &mut dyn RngCore) -> Result<usize> {
    let dec = AltDecryptor::new(pk, alt)?;
    let mut ok = 0;
    for _ in 0..count {
        let p = pk.random_plaintext(rng);
        let c = pk.encrypt(&p)?;
        if dec.decrypt(&c).is_ok_and(|q| q == p) {
            ok += 1;
        }
    }
    Ok(ok)
}

/// Builds the fault equation system, solves it, and returns the first
/// candidate that extends to a pair decrypting every verification
/// ciphertext.
pub fn fault_attack(
    target: &mut dyn FaultTarget,
    rng: &mut dyn RngCore,
    config: AttackConfig,
) -> Result<(AlternativeSecretPair, AttackReport)> {
    let start = Instant::now();
    let pk = target.public_key().clone();
    let params = pk.params();
    let field = pk.field();
    let budget = config.budget_per_seq.unwrap_or_else(|| default_budget(params.m));

    let sys = build_fault_equation_system(target, rng, budget)?;
    let harvest_s = start.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let cands = support_candidates_with_cap(&sys, config.var_cap)?;
    let solve_s = t1.elapsed().as_secs_f64();

    let basis = pk.code_basis();
    let mut extend_s = 0.0;
    let mut verify_s = 0.0;
    for (k, cand) in cands.candidates.iter().enumerate() {
        let t2 = Instant::now();
        let alpha = SupportTuple::new(field, cand.clone())?;
        let ext = goppa_gcd(field, &alpha, params.t, &basis)?;
        extend_s += t2.elapsed().as_secs_f64();
        let ExtensionResult::Extended(g) = ext else { continue };
        let alt = AlternativeSecretPair::new(field, alpha, g);
        let t3 = Instant::now();
        let verified = match verify_alternative(&pk, &alt, config.verify_ciphertexts, rng) {
            Ok(v) => v,
            Err(Error::Inconsistent) | Err(Error::Precondition(_)) => 0,
            Err(e) => return Err(e),
        };
        verify_s += t3.elapsed().as_secs_f64();
        if verified < config.verify_ciphertexts {
            continue;
        }
        let report = AttackReport {
            params,
            constant_injections: sys.constant_injections,
            quadratic_injections: sys.quadratic_injections,
            total_injections: sys.injections(),
            l1: sys.l1.len(),
            l2: sys.l2.len(),
            l2_quadratic: sys.quadratic_count(),
            normalizer_var: sys.normalizer_var,
            eliminated: cands.eliminated,
            reduced_indeterminates: cands.free_vars,
            reduced_equations: cands.reduced_equations,
            zero_set_size: cands.zero_set_size,
            candidates: cands.candidates.len(),
            candidates_tested: k + 1,
            g_tilde_degree: alt.g_tilde.degree().unwrap_or(0),
            verified,
            verify_total: config.verify_ciphertexts,
            timings: PhaseTimings { harvest_s, solve_s, extend_s, verify_s, total_s: start.elapsed().as_secs_f64() },
        };
        return Ok((alt, report));
    }
    Err(Error::Exhausted(cands.candidates.len()))
}
