//! Sparse multivariate polynomials over GF(2^m).
//!
//! Terms are kept in graded lexicographic order with `x_0 > x_1 > ...`,
//! strictly descending, with no zero coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Field, Gf};

/// Power product as `(variable, exponent)` pairs, variables ascending,
/// exponents nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(u32, u16)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(i: u32) -> Monomial {
        Monomial(vec![(i, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(u32, u16)>) -> Monomial {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable_by_key(|&(v, _)| v);
        let mut out: Vec<(u32, u16)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn pairs(&self) -> &[(u32, u16)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn exponent(&self, var: u32) -> u16 {
        self.0.iter().find(|&&(v, _)| v == var).map_or(0, |&(_, e)| e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn eval(&self, field: &Field, point: &[Gf]) -> Gf {
        self.0.iter().fold(Gf::ONE, |acc, &(v, e)| field.mul(acc, field.pow(point[v as usize], e as u64)))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0) {
                if a.0 != b.0 {
                    // the smaller variable index is the larger variable
                    return b.0.cmp(&a.0);
                }
                if a.1 != b.1 {
                    return a.1.cmp(&b.1);
                }
            }
            self.0.len().cmp(&other.0.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "x{}", v + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial in `x_0, x_1, ...` over GF(2^m).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiPoly {
    terms: Vec<(Monomial, Gf)>,
}

impl MultiPoly {
    pub fn zero() -> MultiPoly {
        MultiPoly { terms: Vec::new() }
    }

    pub fn constant(c: Gf) -> MultiPoly {
        MultiPoly::from_terms(vec![(Monomial::one(), c)])
    }

    pub fn var(i: usize) -> MultiPoly {
        MultiPoly { terms: vec![(Monomial::var(i as u32), Gf::ONE)] }
    }

    /// Sum of the given variables, all with coefficient 1.
    pub fn sum_of_vars(vars: &[usize]) -> MultiPoly {
        MultiPoly::from_terms(vars.iter().map(|&v| (Monomial::var(v as u32), Gf::ONE)).collect())
    }

    /// Canonicalizes: sorts, merges equal monomials (char 2), drops zeros.
    pub fn from_terms(mut terms: Vec<(Monomial, Gf)>) -> MultiPoly {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, Gf)> = Vec::with_capacity(terms.len());
        for (mono, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == mono => last.1 = Gf(last.1 .0 ^ c.0),
                _ => out.push((mono, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        MultiPoly { terms: out }
    }

    pub fn terms(&self) -> &[(Monomial, Gf)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, Gf)> {
        self.terms.first()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.degree() {
            None => true,
            Some(d) => self.terms.iter().all(|(m, _)| m.degree() == d),
        }
    }

    /// Degree at most one.
    pub fn is_affine(&self) -> bool {
        self.degree().is_none_or(|d| d <= 1)
    }

    /// Variables that occur, ascending.
    pub fn variables(&self) -> Vec<usize> {
        let mut vs: Vec<usize> =
            self.terms.iter().flat_map(|(m, _)| m.pairs().iter().map(|&(v, _)| v as usize)).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Number of terms in which `var` occurs.
    pub fn occurrences(&self, var: usize) -> usize {
        self.terms.iter().filter(|(m, _)| m.exponent(var as u32) > 0).count()
    }

    pub fn constant_term(&self) -> Gf {
        match self.terms.last() {
            Some((m, c)) if m.degree() == 0 => *c,
            _ => Gf::ZERO,
        }
    }

    /// Affine form `(sum c_v x_v, constant)` when the degree is at most one.
    pub fn as_affine(&self) -> Option<(Vec<(usize, Gf)>, Gf)> {
        if !self.is_affine() {
            return None;
        }
        let lin = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree() == 1)
            .map(|(m, c)| (m.pairs()[0].0 as usize, *c))
            .collect();
        Some((lin, self.constant_term()))
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = Gf(a[i].1 .0 ^ b[j].1 .0);
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        MultiPoly { terms: out }
    }

    pub fn scale(&self, field: &Field, c: Gf) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, a)| (m.clone(), field.mul(*a, c))).collect() }
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monic(&self, field: &Field) -> MultiPoly {
        match self.leading() {
            Some(&(_, c)) if c != Gf::ONE => self.scale(field, field.inv(c).expect("nonzero coefficient")),
            _ => self.clone(),
        }
    }

    pub fn mul(&self, field: &Field, other: &MultiPoly) -> MultiPoly {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.mul(mb), field.mul(*ca, *cb)));
            }
        }
        MultiPoly::from_terms(terms)
    }

    pub fn pow(&self, field: &Field, k: u32) -> MultiPoly {
        (0..k).fold(MultiPoly::constant(Gf::ONE), |acc, _| acc.mul(field, self))
    }

    /// Value at `point`, indexed by variable.
    pub fn eval(&self, field: &Field, point: &[Gf]) -> Gf {
        self.terms.iter().fold(Gf::ZERO, |acc, (m, c)| field.add(acc, field.mul(*c, m.eval(field, point))))
    }

    /// Replaces every variable `v` by `image(v)`.
    pub fn substitute<F>(&self, field: &Field, mut image: F) -> MultiPoly
    where
        F: FnMut(usize) -> MultiPoly,
    {
        let mut cache: BTreeMap<usize, MultiPoly> = BTreeMap::new();
        let mut acc = MultiPoly::zero();
        for (mono, c) in &self.terms {
            let mut term = MultiPoly::constant(*c);
            for &(v, e) in mono.pairs() {
                let img = cache.entry(v as usize).or_insert_with(|| image(v as usize));
                term = term.mul(field, &img.pow(field, e as u32));
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Renames variables through `map`.
    pub fn rename(&self, map: impl Fn(usize) -> usize) -> MultiPoly {
        MultiPoly::from_terms(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let pairs = m.pairs().iter().map(|&(v, e)| (map(v as usize) as u32, e)).collect();
                    (Monomial::from_pairs(pairs), *c)
                })
                .collect(),
        )
    }

    /// Checks that every coefficient lies in `field`.
    pub fn check_field(&self, field: &Field) -> Result<()> {
        for (_, c) in &self.terms {
            field.element(c.0 as u32)?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match (c.0, m.degree()) {
                (1, 0) => write!(f, "1")?,
                (1, _) => write!(f, "{m}")?,
                (_, 0) => write!(f, "{}", c.0)?,
                _ => write!(f, "{}*{m}", c.0)?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: u16,
    exps: BTreeMap<String, u16>,
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr {
                coeff: c.0,
                exps: m.pairs().iter().map(|&(v, e)| (v.to_string(), e)).collect(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<MultiPoly, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(d)?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let mut pairs = Vec::with_capacity(t.exps.len());
            for (v, e) in t.exps {
                let v: u32 = v.parse().map_err(|_| serde::de::Error::custom(format!("bad variable {v:?}")))?;
                pairs.push((v, e));
            }
            out.push((Monomial::from_pairs(pairs), Gf(t.coeff)));
        }
        Ok(MultiPoly::from_terms(out))
    }
}

/// Parses `x1*x2 + 3*x4^2 + 1` style text (1-based variables).
pub fn parse(field: &Field, text: &str) -> Result<MultiPoly> {
    let mut terms = Vec::new();
    for raw in text.split('+') {
        let raw = raw.trim();
        if raw.is_empty() {
            return Err(Error::Format(format!("empty term in {text:?}")));
        }
        let mut coeff = Gf::ONE;
        let mut pairs = Vec::new();
        for factor in raw.split('*').map(str::trim) {
            if let Some(rest) = factor.strip_prefix('x') {
                let (v, e) = match rest.split_once('^') {
                    Some((v, e)) => (v, e.parse::<u16>().map_err(|_| Error::Format(factor.to_string()))?),
                    None => (rest, 1),
                };
                let v: u32 = v.parse().map_err(|_| Error::Format(factor.to_string()))?;
                if v == 0 {
                    return Err(Error::Format("variables are numbered from x1".into()));
                }
                pairs.push((v - 1, e));
            } else {
                let c: u32 = factor.parse().map_err(|_| Error::Format(factor.to_string()))?;
                coeff = field.mul(coeff, field.element(c)?);
            }
        }
        terms.push((Monomial::from_pairs(pairs), coeff));
    }
    Ok(MultiPoly::from_terms(terms))
}
