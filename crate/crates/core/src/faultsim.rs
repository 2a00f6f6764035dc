//! Fault-injection oracle over the decryption pipeline.
//!
//! A fault replaces the error locator `sigma_p` by `eps x^d + sigma_p` with
//! `eps` uniform in GF(2^m), right before it is evaluated on the support.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::bign::{Params, PublicKey, SecretKey};
use crate::error::{Error, Result};
use crate::f2::Word;
use crate::field::Gf;
use crate::goppa::SupportTuple;
use crate::poly::Poly;

/// Device-side checks on the faulty output.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Countermeasures {
    /// Reject outputs whose weight differs from `t`.
    pub weight_check: bool,
    /// Reject outputs that do not re-encrypt to the ciphertext.
    pub reencrypt_check: bool,
}

impl Countermeasures {
    pub const NONE: Countermeasures = Countermeasures { weight_check: false, reencrypt_check: false };
    pub const ALL: Countermeasures = Countermeasures { weight_check: true, reencrypt_check: true };
}

/// One injection `(p, d, p~)`. `p_tilde` is `None` when a countermeasure
/// rejected the output; `epsilon` is only filled in transparent mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaultInjectionRecord {
    pub p: Word,
    pub d: usize,
    pub p_tilde: Option<Word>,
    pub epsilon: Option<Gf>,
}

impl FaultInjectionRecord {
    pub fn rejected(&self) -> bool {
        self.p_tilde.is_none()
    }

    pub fn log_entry(&self) -> LogEntry {
        LogEntry {
            p: self.p.support(),
            d: self.d,
            p_tilde: self.p_tilde.as_ref().map(Word::support),
            rejected: self.rejected(),
        }
    }
}

/// JSON-lines form of an injection, with 0-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogEntry {
    pub p: Vec<usize>,
    pub d: usize,
    pub p_tilde: Option<Vec<usize>>,
    pub rejected: bool,
}

/// What an attacker can do with a device: read the public key and inject.
pub trait FaultTarget {
    fn public_key(&self) -> &PublicKey;

    /// Runs the faulty decryption of `p H_pub^T` with a fault in degree `d`.
    fn inject(&mut self, p: &Word, d: usize, rng: &mut dyn RngCore) -> Result<FaultInjectionRecord>;

    /// Injections performed so far, rejected ones included.
    fn injections(&self) -> u64;

    fn params(&self) -> Params {
        self.public_key().params()
    }
}

/// In-process device holding a simplified secret key.
#[derive(Clone, Debug)]
pub struct FaultOracle {
    sk: SecretKey,
    pk: PublicKey,
    countermeasures: Countermeasures,
    transparent: bool,
    forced_epsilon: Option<Gf>,
    injections: u64,
    rejections: u64,
    altered: u64,
    log: Option<Vec<LogEntry>>,
}

impl FaultOracle {
    pub fn new(sk: &SecretKey, countermeasures: Countermeasures) -> FaultOracle {
        let sk = sk.simplify();
        let pk = sk.public_key();
        FaultOracle {
            sk,
            pk,
            countermeasures,
            transparent: false,
            forced_epsilon: None,
            injections: 0,
            rejections: 0,
            altered: 0,
            log: None,
        }
    }

    /// Oracle that reveals `eps` and the support, for testing only.
    pub fn transparent(sk: &SecretKey, countermeasures: Countermeasures) -> FaultOracle {
        FaultOracle { transparent: true, ..FaultOracle::new(sk, countermeasures) }
    }

    pub fn is_transparent(&self) -> bool {
        self.transparent
    }

    pub fn countermeasures(&self) -> Countermeasures {
        self.countermeasures
    }

    /// Fixes `eps` for subsequent injections (`None` restores sampling).
    pub fn force_epsilon(&mut self, eps: Option<Gf>) -> Result<()> {
        if !self.transparent {
            return Err(Error::NotTransparent);
        }
        self.forced_epsilon = eps;
        Ok(())
    }

    /// The simplified support `alpha` the device decodes with.
    pub fn true_support(&self) -> Result<&SupportTuple> {
        if !self.transparent {
            return Err(Error::NotTransparent);
        }
        Ok(self.sk.pair().support())
    }

    pub fn secret_key(&self) -> Result<&SecretKey> {
        if !self.transparent {
            return Err(Error::NotTransparent);
        }
        Ok(&self.sk)
    }

    pub fn rejections(&self) -> u64 {
        self.rejections
    }

    /// Non-rejected injections whose output differed from `p`.
    pub fn altered(&self) -> u64 {
        self.altered
    }

    pub fn enable_log(&mut self) {
        self.log.get_or_insert_with(Vec::new);
    }

    pub fn take_log(&mut self) -> Vec<LogEntry> {
        self.log.as_mut().map(std::mem::take).unwrap_or_default()
    }

    fn check_shape(&self, p: &Word, d: usize) -> Result<()> {
        let t = self.pk.params().t;
        let w = p.weight();
        if p.len() != self.pk.params().n {
            return Err(Error::LengthMismatch { expected: self.pk.params().n, got: p.len() });
        }
        if w == 0 || w > t {
            return Err(Error::Precondition(format!("need 0 < wt(p) <= {t}, got {w}")));
        }
        // the locator register holds t + 1 coefficients
        if d > t {
            return Err(Error::Precondition(format!("need d <= {t}, got {d}")));
        }
        Ok(())
    }

    /// Number of `eps` in GF(2^m) for which an injection `(p, d)` ends the
    /// corresponding sequence: for a constant injection `wt(p~) = 2` and
    /// `p~ != p`; for a quadratic one `wt(p~) > 1` with `i in I_p~`, or
    /// `wt(p~) = 2`. Countermeasures are ignored.
    pub fn enumerate_successful_faults(&self, p: &Word, d: usize) -> Result<usize> {
        if !self.transparent {
            return Err(Error::NotTransparent);
        }
        self.check_shape(p, d)?;
        let shape = InjectionShape::classify(p, d)?;
        let c = self.pk.encrypt_any(p)?;
        let sigma = self.sk.error_locator(&c)?;
        Ok(count_successes(&self.sk, &sigma, p, d, shape))
    }
}

impl FaultTarget for FaultOracle {
    fn public_key(&self) -> &PublicKey {
        &self.pk
    }

    fn inject(&mut self, p: &Word, d: usize, rng: &mut dyn RngCore) -> Result<FaultInjectionRecord> {
        self.check_shape(p, d)?;
        let field = self.pk.field();
        let c = self.pk.encrypt_any(p)?;
        let eps = match self.forced_epsilon {
            Some(e) => e,
            None => field.random(rng),
        };
        let out = self.sk.decrypt_with(&c, |sigma| *sigma = sigma.add(&Poly::monomial(eps, d)))?;
        self.injections += 1;
        let t = self.pk.params().t;
        let reject = (self.countermeasures.weight_check && out.weight() != t)
            || (self.countermeasures.reencrypt_check && self.pk.h_pub().mul_vec(&out)? != c);
        let p_tilde = if reject {
            self.rejections += 1;
            None
        } else {
            if &out != p {
                self.altered += 1;
            }
            Some(out)
        };
        let rec = FaultInjectionRecord {
            p: p.clone(),
            d,
            p_tilde,
            epsilon: self.transparent.then_some(eps),
        };
        if let Some(log) = self.log.as_mut() {
            log.push(rec.log_entry());
        }
        Ok(rec)
    }

    fn injections(&self) -> u64 {
        self.injections
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InjectionShape {
    /// `p = e_i1 + e_i2`, `d = 0`.
    Constant,
    /// `p = e_i`, `d = 2`.
    Quadratic(usize),
}

impl InjectionShape {
    pub fn classify(p: &Word, d: usize) -> Result<InjectionShape> {
        let idx = p.support();
        match (idx.len(), d) {
            (2, 0) => Ok(InjectionShape::Constant),
            (1, 2) => Ok(InjectionShape::Quadratic(idx[0])),
            (w, d) => Err(Error::UnsupportedShape(format!("wt(p) = {w}, d = {d}"))),
        }
    }
}

/// Counts terminating faults without running one decryption per `eps`.
///
/// Position `j` is a root of `eps x^d + sigma` iff `eps w_j = v_j` with
/// `w_j = a_j^d`, `v_j = sigma(a_j)`: for `w_j != 0` exactly one `eps`
/// works, for `w_j = 0` either every `eps` (when `v_j = 0`) or none.
pub(crate) fn count_successes(sk: &SecretKey, sigma: &Poly, p: &Word, d: usize, shape: InjectionShape) -> usize {
    let pair = sk.pair();
    let field = pair.field();
    let q = field.order();
    let in_p: Vec<bool> = (0..pair.n()).map(|j| p.get(j)).collect();
    let wt_p = p.weight();
    let mut hist = vec![0usize; q];
    let mut hist_p = vec![0usize; q];
    let mut hit_i = vec![false; q];
    let (mut always, mut always_p, mut always_i) = (0usize, 0usize, false);
    let target = match shape {
        InjectionShape::Quadratic(i) => Some(i),
        InjectionShape::Constant => None,
    };
    for (j, &a) in pair.alpha().iter().enumerate() {
        let v = sigma.eval(field, a);
        let w = field.pow(a, d as u64);
        if w.is_zero() {
            if v.is_zero() {
                always += 1;
                always_p += in_p[j] as usize;
                always_i |= target == Some(j);
            }
            continue;
        }
        let eps = field.div(v, w).expect("nonzero divisor").0 as usize;
        hist[eps] += 1;
        hist_p[eps] += in_p[j] as usize;
        if target == Some(j) {
            hit_i[eps] = true;
        }
    }
    (0..q)
        .filter(|&e| {
            let wt = hist[e] + always;
            match shape {
                InjectionShape::Constant => {
                    let same = wt == wt_p && hist_p[e] + always_p == wt_p;
                    wt == 2 && !same
                }
                InjectionShape::Quadratic(_) => (wt > 1 && (hit_i[e] || always_i)) || wt == 2,
            }
        })
        .count()
}
