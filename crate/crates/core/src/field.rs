//! Arithmetic in GF(2^m) for 1 <= m <= 16.
//!
//! Elements are bit patterns in the polynomial basis `{1, z, ..., z^(m-1)}`
//! with bit `i` holding the coefficient of `z^i`. Each degree uses one fixed
//! modulus: the numerically smallest irreducible polynomial of degree `m`
//! with a nonzero constant term. Every F2-expansion in the crate (parity
//! checks, syndromes) goes through this same basis.

use std::fmt;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_M: u32 = 16;

/// Fixed moduli, indexed by `m - 1`. Bit `m` and bit 0 are always set.
pub const MODULI: [u32; 16] = [
    0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021,
    0x8003, 0x1002b,
];

/// An element of GF(2^m), stored as its bit pattern.
///
/// The value carries no reference to its field; arithmetic goes through a
/// [`Field`]. Use [`Elem`] when the field must travel with the value.
#[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gf(pub u16);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn bits(self) -> u16 {
        self.0
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Serializable description of a field: `{m, modulus}`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldContext {
    pub m: u32,
    pub modulus: u32,
}

impl FieldContext {
    /// Resolves the context to the shared field, rejecting foreign moduli.
    pub fn field(&self) -> Result<&'static Field> {
        let field = Field::get(self.m)?;
        if field.modulus != self.modulus {
            return Err(Error::ModulusMismatch {
                m: self.m,
                modulus: self.modulus,
                expected: field.modulus,
            });
        }
        Ok(field)
    }
}

/// GF(2^m) with log/antilog tables.
///
/// Instances are immutable and shared: [`Field::get`] hands out one
/// `&'static Field` per degree.
pub struct Field {
    m: u32,
    modulus: u32,
    order: usize,
    // exp has length 2 * (order - 1) so that log a + log b never needs a reduction.
    exp: Vec<u16>,
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.m, self.modulus)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.modulus == other.modulus
    }
}
impl Eq for Field {}

static FIELDS: [OnceLock<Field>; MAX_M as usize] = [const { OnceLock::new() }; MAX_M as usize];

/// Carry-less product of two polynomials over F2 (no reduction).
#[inline]
pub fn clmul(a: u32, b: u32) -> u64 {
    let mut acc = 0u64;
    let a = a as u64;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

/// Remainder of `a` modulo `modulus` as polynomials over F2.
#[inline]
pub fn reduce_f2(mut a: u64, modulus: u32) -> u32 {
    let deg = 31 - modulus.leading_zeros();
    while a != 0 {
        let da = 63 - a.leading_zeros();
        if da < deg {
            break;
        }
        a ^= (modulus as u64) << (da - deg);
    }
    a as u32
}

/// Irreducibility over F2 by trial division with every polynomial of degree
/// at most `deg / 2`.
pub fn is_irreducible_f2(poly: u32) -> bool {
    if poly < 2 {
        return false;
    }
    let deg = 31 - poly.leading_zeros();
    if deg == 1 {
        return true;
    }
    for divisor in 2u32..(1 << (deg / 2 + 1)) {
        if reduce_f2(poly as u64, divisor) == 0 {
            return false;
        }
    }
    true
}

impl Field {
    /// The shared field of degree `m`, built and validated on first use.
    pub fn get(m: u32) -> Result<&'static Field> {
        if !(1..=MAX_M).contains(&m) {
            return Err(Error::InvalidField(m));
        }
        Ok(FIELDS[(m - 1) as usize].get_or_init(|| Field::build(m)))
    }

    fn build(m: u32) -> Field {
        let modulus = MODULI[(m - 1) as usize];
        assert!(
            modulus >> m == 1 && modulus & 1 == 1 && is_irreducible_f2(modulus),
            "modulus table entry for m = {m} is invalid"
        );
        let order = 1usize << m;
        let group = order - 1;
        let mut exp = vec![0u16; 2 * group.max(1)];
        let mut log = vec![0u32; order];
        // The fixed moduli are not all primitive, so search for a generator.
        let generator = (1..order as u32)
            .find(|&cand| {
                let mut x = 1u32;
                for k in 1..=group {
                    x = reduce_f2(clmul(x, cand), modulus);
                    if x == 1 {
                        return k == group;
                    }
                }
                false
            })
            .expect("multiplicative group is cyclic");
        let mut x = 1u32;
        for k in 0..group {
            exp[k] = x as u16;
            exp[k + group] = x as u16;
            log[x as usize] = k as u32;
            x = reduce_f2(clmul(x, generator), modulus);
        }
        Field { m, modulus, order, exp, log }
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of elements, `2^m`.
    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn context(&self) -> FieldContext {
        FieldContext { m: self.m, modulus: self.modulus }
    }

    /// Checked conversion from a bit pattern.
    pub fn element(&self, bits: u32) -> Result<Gf> {
        if (bits as usize) < self.order {
            Ok(Gf(bits as u16))
        } else {
            Err(Error::ElementOutOfRange(bits))
        }
    }

    /// Wraps a value together with this field.
    pub fn elem(&'static self, value: Gf) -> Elem {
        Elem { field: self, value }
    }

    /// All field elements in increasing bit-pattern order.
    pub fn elements(&self) -> impl Iterator<Item = Gf> {
        (0..self.order as u32).map(|b| Gf(b as u16))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Gf {
        Gf(rng.gen_range(0..self.order as u32) as u16)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Gf {
        Gf(rng.gen_range(1..self.order as u32) as u16)
    }

    #[inline]
    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        Gf(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a.0 == 0 || b.0 == 0 {
            return Gf::ZERO;
        }
        let idx = self.log[a.0 as usize] + self.log[b.0 as usize];
        Gf(self.exp[idx as usize])
    }

    /// Reference multiplication: carry-less product reduced by the modulus.
    pub fn mul_clmul(&self, a: Gf, b: Gf) -> Gf {
        Gf(reduce_f2(clmul(a.0 as u32, b.0 as u32), self.modulus) as u16)
    }

    #[inline]
    pub fn square(&self, a: Gf) -> Gf {
        self.mul(a, a)
    }

    pub fn inv(&self, a: Gf) -> Result<Gf> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let group = (self.order - 1) as u32;
        let l = self.log[a.0 as usize];
        Ok(Gf(self.exp[((group - l) % group) as usize]))
    }

    pub fn div(&self, a: Gf, b: Gf) -> Result<Gf> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^k` with `0^0 = 1`.
    pub fn pow(&self, a: Gf, k: u64) -> Gf {
        if k == 0 {
            return Gf::ONE;
        }
        if a.0 == 0 {
            return Gf::ZERO;
        }
        let group = (self.order - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (k % group)) % group;
        Gf(self.exp[l as usize])
    }

    /// Square-and-multiply power, independent of the log tables.
    pub fn pow_slow(&self, a: Gf, mut k: u64) -> Gf {
        let mut base = a;
        let mut acc = Gf::ONE;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_clmul(acc, base);
            }
            base = self.mul_clmul(base, base);
            k >>= 1;
        }
        acc
    }

    /// The unique square root, `a^(2^(m-1))`.
    pub fn sqrt(&self, a: Gf) -> Gf {
        self.pow(a, 1u64 << (self.m - 1))
    }

    /// Absolute trace to F2.
    pub fn trace(&self, a: Gf) -> Gf {
        let mut acc = a;
        let mut x = a;
        for _ in 1..self.m {
            x = self.square(x);
            acc = self.add(acc, x);
        }
        acc
    }

    /// Bit `b` of the basis expansion of `a`.
    #[inline]
    pub fn bit(a: Gf, b: u32) -> bool {
        (a.0 >> b) & 1 == 1
    }
}

/// A field element bundled with its field, for callers that need checked
/// mixed-field arithmetic.
#[derive(Copy, Clone, Debug)]
pub struct Elem {
    field: &'static Field,
    value: Gf,
}

impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.value == other.value
    }
}
impl Eq for Elem {}

impl Elem {
    pub fn new(field: &'static Field, bits: u32) -> Result<Elem> {
        Ok(Elem { field, value: field.element(bits)? })
    }

    pub fn value(&self) -> Gf {
        self.value
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    fn same_field(&self, other: &Elem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Elem) -> Result<Elem> {
        self.same_field(other)?;
        Ok(Elem { field: self.field, value: self.field.add(self.value, other.value) })
    }

    pub fn try_mul(&self, other: &Elem) -> Result<Elem> {
        self.same_field(other)?;
        Ok(Elem { field: self.field, value: self.field.mul(self.value, other.value) })
    }

    pub fn inv(&self) -> Result<Elem> {
        Ok(Elem { field: self.field, value: self.field.inv(self.value)? })
    }

    pub fn pow(&self, k: u64) -> Elem {
        Elem { field: self.field, value: self.field.pow(self.value, k) }
    }
}
