//! Dense univariate polynomials over GF(2^m).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Gf};

/// Polynomial with coefficients indexed by exponent, constant term first.
///
/// Trailing zero coefficients are always stripped, so the zero polynomial
/// has an empty coefficient vector and no degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Gf>", into = "Vec<Gf>")]
pub struct Poly {
    coeffs: Vec<Gf>,
}

impl From<Vec<Gf>> for Poly {
    fn from(coeffs: Vec<Gf>) -> Self {
        Poly::from_coeffs(coeffs)
    }
}

impl From<Poly> for Vec<Gf> {
    fn from(p: Poly) -> Self {
        p.coeffs
    }
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Gf::ONE)
    }

    pub fn constant(c: Gf) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// The indeterminate `x`.
    pub fn x() -> Poly {
        Poly::monomial(Gf::ONE, 1)
    }

    /// `c * x^k`.
    pub fn monomial(c: Gf, k: usize) -> Poly {
        let mut coeffs = vec![Gf::ZERO; k + 1];
        coeffs[k] = c;
        Poly::from_coeffs(coeffs)
    }

    /// `x - a`, which equals `x + a` in characteristic 2.
    pub fn linear(a: Gf) -> Poly {
        Poly { coeffs: vec![a, Gf::ONE] }
    }

    pub fn from_coeffs(mut coeffs: Vec<Gf>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Validates raw bit patterns against the field.
    pub fn from_bits(field: &Field, bits: &[u32]) -> Result<Poly> {
        let coeffs = bits.iter().map(|&b| field.element(b)).collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(coeffs))
    }

    /// `prod (x - a)` over the given roots.
    pub fn from_roots(field: &Field, roots: &[Gf]) -> Poly {
        let mut coeffs = Vec::with_capacity(roots.len() + 1);
        coeffs.push(Gf::ONE);
        for &r in roots {
            coeffs.push(Gf::ZERO);
            for k in (1..coeffs.len()).rev() {
                let shifted = coeffs[k - 1];
                coeffs[k] = field.add(field.mul(coeffs[k], r), shifted);
            }
            coeffs[0] = field.mul(coeffs[0], r);
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[Gf] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`.
    pub fn deg_i(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn coeff(&self, k: usize) -> Gf {
        self.coeffs.get(k).copied().unwrap_or(Gf::ZERO)
    }

    pub fn leading(&self) -> Gf {
        self.coeffs.last().copied().unwrap_or(Gf::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Gf::ONE
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (long, short) =
            if self.coeffs.len() >= other.coeffs.len() { (self, other) } else { (other, self) };
        let mut coeffs = long.coeffs.clone();
        for (c, s) in coeffs.iter_mut().zip(&short.coeffs) {
            c.0 ^= s.0;
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, field: &Field, c: Gf) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|&a| field.mul(a, c)).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Gf::ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    pub fn mul(&self, field: &Field, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Gf::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j].0 ^= field.mul(a, b).0;
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn square(&self, field: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Gf::ZERO; 2 * self.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = field.square(a);
        }
        Poly::from_coeffs(coeffs)
    }

    /// Euclidean division: `(q, r)` with `self = q * h + r` and `deg r < deg h`.
    pub fn divrem(&self, field: &Field, h: &Poly) -> Result<(Poly, Poly)> {
        let dh = h.degree().ok_or(Error::DivisionByZeroPoly)?;
        if self.coeffs.len() <= dh {
            return Ok((Poly::zero(), self.clone()));
        }
        let inv_lead = field.inv(h.leading())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Gf::ZERO; rem.len() - dh];
        for k in (dh..rem.len()).rev() {
            let c = rem[k];
            if c.is_zero() {
                continue;
            }
            let q = field.mul(c, inv_lead);
            quot[k - dh] = q;
            for (i, &hc) in h.coeffs.iter().enumerate() {
                rem[k - dh + i].0 ^= field.mul(q, hc).0;
            }
        }
        rem.truncate(dh);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    pub fn rem(&self, field: &Field, h: &Poly) -> Result<Poly> {
        Ok(self.divrem(field, h)?.1)
    }

    pub fn monic(&self, field: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = field.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(field, inv)
    }

    /// Monic gcd; `gcd(f, 0) = monic(f)`.
    pub fn gcd(&self, field: &Field, other: &Poly) -> Result<Poly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::BothZero);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(field, &b)?;
            a = b;
            b = r;
        }
        Ok(a.monic(field))
    }

    /// Horner evaluation.
    pub fn eval(&self, field: &Field, x: Gf) -> Gf {
        self.coeffs.iter().rev().fold(Gf::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }

    /// Formal derivative; in characteristic 2 only odd exponents survive.
    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = (1..self.coeffs.len())
            .map(|k| if k % 2 == 1 { self.coeffs[k] } else { Gf::ZERO })
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// `u` with `self * u = 1 mod g` and `deg u < deg g`.
    pub fn modinv(&self, field: &Field, g: &Poly) -> Result<Poly> {
        let a = self.rem(field, g)?;
        if a.is_zero() {
            return Err(Error::NotInvertible);
        }
        // extended Euclid tracking only the coefficient of `a`
        let (mut r0, mut r1) = (g.clone(), a);
        let (mut v0, mut v1) = (Poly::zero(), Poly::one());
        while r1.degree().is_some_and(|d| d > 0) {
            let (q, r) = r0.divrem(field, &r1)?;
            let v = v0.add(&q.mul(field, &v1));
            r0 = std::mem::replace(&mut r1, r);
            v0 = std::mem::replace(&mut v1, v);
        }
        if r1.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv = field.inv(r1.leading())?;
        v1.scale(field, inv).rem(field, g)
    }

    pub fn mul_mod(&self, field: &Field, other: &Poly, g: &Poly) -> Result<Poly> {
        self.mul(field, other).rem(field, g)
    }

    pub fn square_mod(&self, field: &Field, g: &Poly) -> Result<Poly> {
        self.square(field).rem(field, g)
    }

    /// `self^(2^k) mod g` by `k` squarings.
    pub fn frobenius_mod(&self, field: &Field, g: &Poly, k: u64) -> Result<Poly> {
        let mut acc = self.rem(field, g)?;
        for _ in 0..k {
            acc = acc.square_mod(field, g)?;
        }
        Ok(acc)
    }

    /// Square root in `GF(2^m)[x] / <g>` for irreducible `g` of degree `t`,
    /// computed as `w^(2^(mt - 1)) mod g`.
    pub fn sqrt_mod(&self, field: &Field, g: &Poly) -> Result<Poly> {
        let t = g.degree().ok_or(Error::DivisionByZeroPoly)? as u64;
        let k = (field.m() as u64 * t).saturating_sub(1);
        self.frobenius_mod(field, g, k)
    }

    /// `self(a * x)`: coefficient `k` is multiplied by `a^k`.
    pub fn compose_scale(&self, field: &Field, a: Gf) -> Poly {
        let mut pow = Gf::ONE;
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            coeffs.push(field.mul(c, pow));
            pow = field.mul(pow, a);
        }
        Poly::from_coeffs(coeffs)
    }

    /// Irreducibility over GF(q), q = 2^m, via the field-power criterion:
    /// `x^(q^t) = x mod g` and `gcd(x^(q^(t/p)) - x, g) = 1` for each prime
    /// `p | t`.
    pub fn is_irreducible(&self, field: &Field) -> bool {
        let Some(t) = self.degree() else { return false };
        if t == 0 {
            return false;
        }
        if t == 1 {
            return true;
        }
        let m = field.m() as u64;
        let x = Poly::x();
        let full = x.frobenius_mod(field, self, m * t as u64).expect("nonzero modulus");
        if full != x.rem(field, self).expect("nonzero modulus") {
            return false;
        }
        for p in prime_divisors(t) {
            let partial = x.frobenius_mod(field, self, m * (t / p) as u64).expect("nonzero modulus");
            let diff = partial.add(&x);
            if diff.is_zero() {
                return false;
            }
            let g = self.gcd(field, &diff).expect("not both zero");
            if g.degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// Uniformly random monic polynomial of degree `t`.
    pub fn random_monic<R: Rng + ?Sized>(field: &Field, t: usize, rng: &mut R) -> Poly {
        let mut coeffs: Vec<Gf> = (0..t).map(|_| field.random(rng)).collect();
        coeffs.push(Gf::ONE);
        Poly { coeffs }
    }

    /// Random monic irreducible polynomial of degree `t >= 1`.
    pub fn random_irreducible<R: Rng + ?Sized>(field: &Field, t: usize, rng: &mut R) -> Result<Poly> {
        if t == 0 {
            return Err(Error::ParameterViolation("irreducible polynomial needs degree >= 1".into()));
        }
        loop {
            let g = Poly::random_monic(field, t, rng);
            if g.is_irreducible(field) {
                return Ok(g);
            }
        }
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
