//! Niederreiter cryptosystem over a binary irreducible Goppa code.

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::f2::{random_permutation, BitMatrix, Word};
use crate::field::{Field, FieldContext, Gf};
use crate::goppa::{check_params, random_goppa, GeneratingPair, SupportTuple};
use crate::poly::Poly;

const KEYGEN_ATTEMPTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub m: u32,
    pub t: usize,
    pub n: usize,
}

impl Params {
    pub fn new(m: u32, t: usize, n: usize) -> Result<Params> {
        check_params(m, t, n)?;
        Ok(Params { m, t, n })
    }

    /// Syndrome length `m t`.
    pub fn mt(&self) -> usize {
        self.m as usize * self.t
    }

    pub fn field(&self) -> Result<&'static Field> {
        Field::get(self.m)
    }
}

/// `(S, H, P, alpha, g)`, with `P` stored as the permutation `pi` such that
/// column `j` of `H P` is column `pi[j]` of `H`. `H` is cached in `pair`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecretKey {
    params: Params,
    s: BitMatrix,
    s_inv: BitMatrix,
    pair: GeneratingPair,
    pi: Option<Vec<usize>>,
}

/// `(m, t, n, H_pub)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    params: Params,
    h_pub: BitMatrix,
}

impl SecretKey {
    pub fn from_parts(params: Params, s: BitMatrix, pair: GeneratingPair, pi: Option<Vec<usize>>) -> Result<SecretKey> {
        check_params(params.m, params.t, params.n)?;
        if pair.field().m() != params.m || pair.t() != params.t || pair.n() != params.n {
            return Err(Error::ParameterViolation("generating pair does not match parameters".into()));
        }
        if s.nrows() != params.mt() || s.ncols() != params.mt() {
            return Err(Error::LengthMismatch { expected: params.mt(), got: s.nrows() });
        }
        let s_inv = s.inverse()?;
        if let Some(p) = &pi {
            let mut seen = vec![false; params.n];
            if p.len() != params.n || p.iter().any(|&j| j >= params.n || std::mem::replace(&mut seen[j], true)) {
                return Err(Error::Format("P is not a permutation".into()));
            }
        }
        Ok(SecretKey { params, s, s_inv, pair, pi })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn s(&self) -> &BitMatrix {
        &self.s
    }

    pub fn pair(&self) -> &GeneratingPair {
        &self.pair
    }

    pub fn h(&self) -> &BitMatrix {
        self.pair.parity_check_matrix()
    }

    pub fn permutation(&self) -> Option<&[usize]> {
        self.pi.as_deref()
    }

    pub fn is_simplified(&self) -> bool {
        self.pi.is_none()
    }

    /// `S H P`.
    pub fn public_key(&self) -> PublicKey {
        let h = match &self.pi {
            Some(pi) => self.h().permute_columns(pi),
            None => self.h().clone(),
        };
        let h_pub = self.s.mul(&h).expect("shapes agree");
        PublicKey { params: self.params, h_pub }
    }

    /// Folds `P` into the support: `(S, H P, alpha P, g)`.
    pub fn simplify(&self) -> SecretKey {
        match &self.pi {
            None => self.clone(),
            Some(pi) => SecretKey {
                params: self.params,
                s: self.s.clone(),
                s_inv: self.s_inv.clone(),
                pair: self.pair.permute(pi),
                pi: None,
            },
        }
    }

    /// Decryption steps 1 to 3: syndrome, syndrome polynomial, error locator.
    pub fn error_locator(&self, c: &Word) -> Result<Poly> {
        if c.len() != self.params.mt() {
            return Err(Error::LengthMismatch { expected: self.params.mt(), got: c.len() });
        }
        if c.is_zero() {
            return Err(Error::DecodeFailure("zero ciphertext".into()));
        }
        let s = self.s_inv.mul_vec(c)?;
        let sp = self.pair.syndrome_poly(&s)?;
        self.pair.solve_key_equation(&sp).map_err(|e| match e {
            Error::ZeroSyndrome => Error::DecodeFailure("zero syndrome".into()),
            other => other,
        })
    }

    /// Decryption step 4: roots of the locator on the support.
    pub fn evaluate_locator(&self, sigma: &Poly) -> Word {
        let e = self.pair.locate_errors(sigma);
        match &self.pi {
            Some(pi) => e.permute(pi),
            None => e,
        }
    }

    pub fn decrypt(&self, c: &Word) -> Result<Word> {
        self.decrypt_with(c, |_| {})
    }

    /// Decryption with `hook` applied to the error locator between its
    /// computation and its evaluation.
    pub fn decrypt_with<F: FnOnce(&mut Poly)>(&self, c: &Word, hook: F) -> Result<Word> {
        let mut sigma = self.error_locator(c)?;
        hook(&mut sigma);
        Ok(self.evaluate_locator(&sigma))
    }
}

impl PublicKey {
    pub fn from_parts(params: Params, h_pub: BitMatrix) -> Result<PublicKey> {
        check_params(params.m, params.t, params.n)?;
        if h_pub.nrows() != params.mt() || h_pub.ncols() != params.n {
            return Err(Error::LengthMismatch { expected: params.mt(), got: h_pub.nrows() });
        }
        Ok(PublicKey { params, h_pub })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn h_pub(&self) -> &BitMatrix {
        &self.h_pub
    }

    pub fn field(&self) -> &'static Field {
        Field::get(self.params.m).expect("validated at construction")
    }

    /// Basis of the public code `{c : H_pub c^T = 0}`.
    pub fn code_basis(&self) -> Vec<Word> {
        self.h_pub.kernel_basis()
    }

    /// Encryption of a plaintext of weight exactly `t`.
    pub fn encrypt(&self, p: &Word) -> Result<Word> {
        self.check_len(p)?;
        if p.weight() != self.params.t {
            return Err(Error::WeightViolation { expected: self.params.t, got: p.weight() });
        }
        self.h_pub.mul_vec(p)
    }

    /// `p H_pub^T` for any `0 < wt(p) <= t`.
    pub fn encrypt_any(&self, p: &Word) -> Result<Word> {
        self.check_len(p)?;
        let w = p.weight();
        if w == 0 || w > self.params.t {
            return Err(Error::WeightViolation { expected: self.params.t, got: w });
        }
        self.h_pub.mul_vec(p)
    }

    fn check_len(&self, p: &Word) -> Result<()> {
        if p.len() != self.params.n {
            return Err(Error::LengthMismatch { expected: self.params.n, got: p.len() });
        }
        Ok(())
    }

    pub fn random_plaintext<R: Rng + ?Sized>(&self, rng: &mut R) -> Word {
        Word::random_weight(self.params.n, self.params.t, rng)
    }
}

/// Random secret key with permutation, and its public key. `H` is resampled
/// until it has full rank `m t`.
pub fn keygen<R: Rng + ?Sized>(params: Params, rng: &mut R) -> Result<(SecretKey, PublicKey)> {
    check_params(params.m, params.t, params.n)?;
    for _ in 0..KEYGEN_ATTEMPTS {
        let pair = random_goppa(params.m, params.t, params.n, rng)?;
        if pair.parity_check_matrix().rank() != params.mt() {
            continue;
        }
        let s = BitMatrix::random_invertible(params.mt(), rng);
        let pi = random_permutation(params.n, rng);
        let sk = SecretKey::from_parts(params, s, pair, Some(pi))?;
        let pk = sk.public_key();
        return Ok((sk, pk));
    }
    Err(Error::ParameterViolation("no full-rank parity check found".into()))
}

/// Support and polynomial `(alpha~, g~)` with `deg g~ >= 2t` whose code
/// contains the public code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternativeSecretPair {
    field: &'static Field,
    pub alpha_tilde: SupportTuple,
    pub g_tilde: Poly,
}

impl AlternativeSecretPair {
    pub fn new(field: &'static Field, alpha_tilde: SupportTuple, g_tilde: Poly) -> AlternativeSecretPair {
        AlternativeSecretPair { field, alpha_tilde, g_tilde }
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn to_pair(&self) -> Result<GeneratingPair> {
        GeneratingPair::new(self.field, self.alpha_tilde.clone(), self.g_tilde.clone())
    }

    /// Every basis codeword of the public code lies in `Gamma(alpha~, g~)`.
    pub fn contains_code(&self, basis: &[Word]) -> Result<bool> {
        let pair = self.to_pair()?;
        let h = pair.parity_check_matrix();
        for c in basis {
            if !h.mul_vec(c)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Decryptor for `Gamma(alpha~, g~)`, holding `H~` and `S~` with `S~ H_pub = H~`.
#[derive(Clone, Debug)]
pub struct AltDecryptor {
    params: Params,
    pair: GeneratingPair,
    s_tilde: BitMatrix,
}

impl AltDecryptor {
    pub fn new(pk: &PublicKey, alt: &AlternativeSecretPair) -> Result<AltDecryptor> {
        let params = pk.params();
        let deg = alt.g_tilde.degree().unwrap_or(0);
        if deg < 2 * params.t {
            return Err(Error::Precondition(format!("deg g~ = {deg} is below 2t = {}", 2 * params.t)));
        }
        if alt.alpha_tilde.len() != params.n {
            return Err(Error::LengthMismatch { expected: params.n, got: alt.alpha_tilde.len() });
        }
        let pair = alt.to_pair()?;
        let h_tilde = pair.parity_check_matrix();
        let s_tilde = pk.h_pub().solve_left(h_tilde)?;
        if &s_tilde.mul(pk.h_pub())? != h_tilde {
            return Err(Error::Inconsistent);
        }
        Ok(AltDecryptor { params, pair, s_tilde })
    }

    pub fn s_tilde(&self) -> &BitMatrix {
        &self.s_tilde
    }

    /// `p` with `p H_pub^T = c`, for `wt(p) <= floor(deg g~ / 2)`.
    pub fn decrypt(&self, c: &Word) -> Result<Word> {
        if c.len() != self.params.mt() {
            return Err(Error::LengthMismatch { expected: self.params.mt(), got: c.len() });
        }
        let c_tilde = self.s_tilde.mul_vec(c)?;
        self.pair.syndrome_decode_half(&c_tilde).map_err(|e| match e {
            Error::ZeroSyndrome => Error::DecodeFailure("zero syndrome".into()),
            other => other,
        })
    }
}

/// One-shot alternative decryption.
pub fn alt_decrypt(c: &Word, pk: &PublicKey, alt: &AlternativeSecretPair) -> Result<Word> {
    AltDecryptor::new(pk, alt)?.decrypt(c)
}

#[derive(Serialize, Deserialize)]
struct SecretKeyRepr {
    params: Params,
    context: FieldContext,
    #[serde(rename = "S")]
    s: BitMatrix,
    alpha: Vec<Gf>,
    g: Poly,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pi: Option<Vec<usize>>,
}

impl Serialize for SecretKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SecretKeyRepr {
            params: self.params,
            context: self.pair.field().context(),
            s: self.s.clone(),
            alpha: self.pair.alpha().to_vec(),
            g: self.pair.g().clone(),
            pi: self.pi.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SecretKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SecretKeyRepr::deserialize(d)?;
        let build = || -> Result<SecretKey> {
            let field = r.context.field()?;
            if field.m() != r.params.m {
                return Err(Error::Format("context does not match params".into()));
            }
            let pair = GeneratingPair::new(field, SupportTuple::new(field, r.alpha.clone())?, r.g.clone())?;
            SecretKey::from_parts(r.params, r.s.clone(), pair, r.pi.clone())
        };
        build().map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct PublicKeyRepr {
    params: Params,
    #[serde(rename = "H_pub")]
    h_pub: BitMatrix,
}

impl Serialize for PublicKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PublicKeyRepr { params: self.params, h_pub: self.h_pub.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PublicKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PublicKeyRepr::deserialize(d)?;
        PublicKey::from_parts(r.params, r.h_pub).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct AltRepr {
    context: FieldContext,
    alpha_tilde: Vec<Gf>,
    g_tilde: Poly,
}

impl Serialize for AlternativeSecretPair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AltRepr {
            context: self.field.context(),
            alpha_tilde: self.alpha_tilde.elems().to_vec(),
            g_tilde: self.g_tilde.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlternativeSecretPair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = AltRepr::deserialize(d)?;
        let build = || -> Result<AlternativeSecretPair> {
            let field = r.context.field()?;
            Ok(AlternativeSecretPair::new(field, SupportTuple::new(field, r.alpha_tilde.clone())?, r.g_tilde.clone()))
        };
        build().map_err(serde::de::Error::custom)
    }
}
