//! Buchberger's algorithm in graded reverse lexicographic order, and the
//! rational zero set of a polynomial system built on top of it.
//!
//! Field equations `x^(2^m) + x` are never added. Rationality is enforced
//! when branching: a variable is fixed either to the roots in GF(2^m) of
//! its minimal polynomial (zero-dimensional ideals) or to every field
//! element.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use crate::attack::MultiPoly;
use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::poly::Poly;

/// Maximum number of variables a dense monomial can hold.
pub const CAP: usize = 24;

/// Dense exponent vector.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Exps([u16; CAP]);

impl Exps {
    pub const ONE: Exps = Exps([0; CAP]);

    pub fn var(v: usize) -> Exps {
        let mut e = [0; CAP];
        e[v] = 1;
        Exps(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn get(&self, v: usize) -> u16 {
        self.0[v]
    }

    pub fn divides(&self, other: &Exps) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Exps) -> Exps {
        Exps(std::array::from_fn(|i| self.0[i] + other.0[i]))
    }

    /// `self / other`; requires `other | self`.
    pub fn div(&self, other: &Exps) -> Exps {
        Exps(std::array::from_fn(|i| self.0[i] - other.0[i]))
    }

    pub fn lcm(&self, other: &Exps) -> Exps {
        Exps(std::array::from_fn(|i| self.0[i].max(other.0[i])))
    }

    pub fn coprime(&self, other: &Exps) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// `Some(v)` when the monomial is `x_v^e` with `e >= 1`.
    pub fn pure_power(&self) -> Option<usize> {
        let mut found = None;
        for (v, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(v);
            }
        }
        found
    }
}

impl Ord for Exps {
    fn cmp(&self, other: &Exps) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for i in (0..CAP).rev() {
                if self.0[i] != other.0[i] {
                    // smaller exponent in the last differing variable wins
                    return other.0[i].cmp(&self.0[i]);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Exps {
    fn partial_cmp(&self, other: &Exps) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with dense monomials, terms strictly descending.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GPoly {
    terms: Vec<(Exps, Gf)>,
}

impl GPoly {
    pub fn from_terms(mut terms: Vec<(Exps, Gf)>) -> GPoly {
        terms.sort_by_key(|t| std::cmp::Reverse(t.0));
        let mut out: Vec<(Exps, Gf)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = Gf(last.1 .0 ^ c.0),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        GPoly { terms: out }
    }

    /// Converts a polynomial whose variables are all below `k <= CAP`.
    pub fn from_multi(p: &MultiPoly, k: usize) -> Result<GPoly> {
        if k > CAP {
            return Err(Error::SolverOverflow { vars: k, cap: CAP });
        }
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let mut e = [0u16; CAP];
            for &(v, x) in m.pairs() {
                if v as usize >= k {
                    return Err(Error::Precondition(format!("variable x{} outside 0..{k}", v + 1)));
                }
                e[v as usize] = x;
            }
            terms.push((Exps(e), *c));
        }
        Ok(GPoly::from_terms(terms))
    }

    pub fn to_multi(&self) -> MultiPoly {
        use crate::attack::Monomial;
        MultiPoly::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| {
                    let pairs = e.0.iter().enumerate().filter(|(_, &x)| x > 0).map(|(v, &x)| (v as u32, x)).collect();
                    (Monomial::from_pairs(pairs), *c)
                })
                .collect(),
        )
    }

    pub fn terms(&self) -> &[(Exps, Gf)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Exps {
        &self.terms[0].0
    }

    pub fn lc(&self) -> Gf {
        self.terms[0].1
    }

    pub fn is_constant(&self) -> bool {
        !self.terms.is_empty() && self.terms[0].0 == Exps::ONE
    }

    pub fn monic(&self, field: &Field) -> GPoly {
        if self.is_zero() || self.lc() == Gf::ONE {
            return self.clone();
        }
        let inv = field.inv(self.lc()).expect("nonzero leading coefficient");
        GPoly { terms: self.terms.iter().map(|(m, c)| (*m, field.mul(*c, inv))).collect() }
    }

    pub fn eval(&self, field: &Field, point: &[Gf]) -> Gf {
        self.terms.iter().fold(Gf::ZERO, |acc, (m, c)| {
            let v = point.iter().enumerate().fold(*c, |a, (i, &x)| match m.0[i] {
                0 => a,
                e => field.mul(a, field.pow(x, e as u64)),
            });
            field.add(acc, v)
        })
    }

    /// `a + c * mono * b`, all descending.
    fn add_scaled(field: &Field, a: &[(Exps, Gf)], b: &[(Exps, Gf)], mono: &Exps, c: Gf) -> Vec<(Exps, Gf)> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut bi = b.iter().map(|(m, x)| (m.mul(mono), field.mul(*x, c))).peekable();
        let mut ai = a.iter().copied().peekable();
        loop {
            match (ai.peek(), bi.peek()) {
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Greater => out.push(ai.next().unwrap()),
                    Ordering::Less => out.push(bi.next().unwrap()),
                    Ordering::Equal => {
                        let (m, u) = ai.next().unwrap();
                        let (_, w) = bi.next().unwrap();
                        if u != w {
                            out.push((m, Gf(u.0 ^ w.0)));
                        }
                    }
                },
                (Some(_), None) => out.push(ai.next().unwrap()),
                (None, Some(_)) => out.push(bi.next().unwrap()),
                (None, None) => break,
            }
        }
        out
    }

    fn mul_var(&self, v: usize) -> GPoly {
        let x = Exps::var(v);
        GPoly { terms: self.terms.iter().map(|(m, c)| (m.mul(&x), *c)).collect() }
    }

    /// Sets `x_v = value` and drops `x_v` from the variable list.
    pub fn substitute(&self, field: &Field, v: usize, value: Gf) -> GPoly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let c = field.mul(*c, field.pow(value, m.0[v] as u64));
                let mut e = [0u16; CAP];
                e[..v].copy_from_slice(&m.0[..v]);
                e[v..CAP - 1].copy_from_slice(&m.0[v + 1..]);
                (Exps(e), c)
            })
            .collect();
        GPoly::from_terms(terms)
    }
}

/// Full normal form of `f` modulo `basis` (monic members).
pub fn normal_form(field: &Field, f: &GPoly, basis: &[GPoly]) -> GPoly {
    let mut p = f.terms.clone();
    let mut start = 0;
    let mut rem = Vec::new();
    while start < p.len() {
        let (m, c) = p[start];
        match basis.iter().find(|g| g.lm().divides(&m)) {
            Some(g) => {
                let q = m.div(g.lm());
                let c = field.div(c, g.lc()).expect("nonzero leading coefficient");
                p = GPoly::add_scaled(field, &p[start..], &g.terms, &q, c);
                start = 0;
            }
            None => {
                rem.push((m, c));
                start += 1;
            }
        }
    }
    GPoly { terms: rem }
}

fn s_poly(field: &Field, f: &GPoly, g: &GPoly) -> GPoly {
    let l = f.lm().lcm(g.lm());
    let a = GPoly { terms: GPoly::add_scaled(field, &[], &f.terms, &l.div(f.lm()), field.inv(f.lc()).unwrap()) };
    GPoly { terms: GPoly::add_scaled(field, &a.terms, &g.terms, &l.div(g.lm()), field.inv(g.lc()).unwrap()) }
}

/// Reduced Groebner basis; `[1]` for the unit ideal, empty for `{0}`.
pub fn groebner_basis(field: &Field, input: &[GPoly]) -> Vec<GPoly> {
    let mut g: Vec<GPoly> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let mut queue: Vec<GPoly> = input.iter().filter(|p| !p.is_zero()).cloned().collect();
    queue.sort_by(|a, b| b.lm().cmp(a.lm()));
    loop {
        let next = if let Some(f) = queue.pop() {
            Some(f)
        } else {
            let best = pending.iter().copied().min_by(|&(a, b), &(c, d)| {
                g[a].lm().lcm(g[b].lm()).cmp(&g[c].lm().lcm(g[d].lm())).then((a, b).cmp(&(c, d)))
            });
            match best {
                None => break,
                Some((i, j)) => {
                    pending.remove(&(i, j));
                    if g[i].lm().coprime(g[j].lm()) {
                        continue;
                    }
                    let l = g[i].lm().lcm(g[j].lm());
                    let chain = (0..g.len()).any(|k| {
                        k != i
                            && k != j
                            && g[k].lm().divides(&l)
                            && !pending.contains(&(i.min(k), i.max(k)))
                            && !pending.contains(&(j.min(k), j.max(k)))
                    });
                    if chain {
                        continue;
                    }
                    Some(s_poly(field, &g[i], &g[j]))
                }
            }
        };
        let Some(f) = next else { break };
        let r = normal_form(field, &f, &g);
        if r.is_zero() {
            continue;
        }
        let r = r.monic(field);
        if r.is_constant() {
            return vec![r];
        }
        let idx = g.len();
        g.push(r);
        for i in 0..idx {
            pending.insert((i, idx));
        }
    }
    reduce_basis(field, g)
}

fn reduce_basis(field: &Field, mut g: Vec<GPoly>) -> Vec<GPoly> {
    g.sort_by(|a, b| a.lm().cmp(b.lm()));
    let mut minimal: Vec<GPoly> = Vec::new();
    for p in g {
        if !minimal.iter().any(|q| q.lm().divides(p.lm())) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<GPoly> = minimal.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q.clone()).collect();
        let lead = GPoly { terms: vec![minimal[i].terms[0]] };
        let tail = GPoly { terms: minimal[i].terms[1..].to_vec() };
        let tail = normal_form(field, &tail, &others);
        let mut terms = lead.terms;
        terms.extend(tail.terms);
        out.push(GPoly { terms }.monic(field));
    }
    out
}

/// Monic generator of `I ∩ F[x_v]`, found by linear algebra on normal forms
/// of `x_v^j`; `None` when its degree would exceed `max_deg`.
pub fn minimal_polynomial(field: &Field, gb: &[GPoly], v: usize, max_deg: usize) -> Option<Poly> {
    let mut rows: Vec<(GPoly, Vec<Gf>)> = Vec::new();
    let mut pivots: HashMap<Exps, usize> = HashMap::new();
    let mut power = normal_form(field, &GPoly::from_terms(vec![(Exps::ONE, Gf::ONE)]), gb);
    for j in 0..=max_deg {
        let mut vec = power.clone();
        let mut comb = vec![Gf::ZERO; j + 1];
        comb[j] = Gf::ONE;
        while !vec.is_zero() {
            let Some(&r) = pivots.get(vec.lm()) else { break };
            let (row, rc) = &rows[r];
            let c = field.div(vec.lc(), row.lc()).unwrap();
            vec = GPoly { terms: GPoly::add_scaled(field, &vec.terms, &row.terms, &Exps::ONE, c) };
            for (i, &x) in rc.iter().enumerate() {
                comb[i] = field.add(comb[i], field.mul(c, x));
            }
        }
        if vec.is_zero() {
            return Some(Poly::from_coeffs(comb).monic(field));
        }
        pivots.insert(*vec.lm(), rows.len());
        rows.push((vec, comb));
        power = normal_form(field, &power.mul_var(v), gb);
    }
    None
}

fn roots_in_field(field: &Field, p: &Poly) -> Vec<Gf> {
    field.elements().filter(|&a| p.eval(field, a).is_zero()).collect()
}

/// All common zeros in GF(2^m)^k, sorted lexicographically.
pub fn zero_set(field: &Field, k: usize, polys: &[GPoly]) -> Vec<Vec<Gf>> {
    let mut out = solve(field, k, polys.to_vec());
    out.sort();
    out
}

fn solve(field: &Field, k: usize, polys: Vec<GPoly>) -> Vec<Vec<Gf>> {
    let gb = groebner_basis(field, &polys);
    if gb.first().is_some_and(GPoly::is_constant) {
        return Vec::new();
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut pure: Vec<Option<u16>> = vec![None; k];
    for g in &gb {
        if let Some(v) = g.lm().pure_power() {
            let e = g.lm().get(v);
            pure[v] = Some(pure[v].map_or(e, |p| p.min(e)));
        }
    }
    let zero_dim = pure.iter().all(Option::is_some);
    let (v, values) = if zero_dim {
        let v = (0..k).min_by_key(|&v| pure[v].unwrap()).unwrap();
        match minimal_polynomial(field, &gb, v, field.order()) {
            Some(mp) => (v, roots_in_field(field, &mp)),
            None => (v, field.elements().collect()),
        }
    } else {
        let v = (0..k).find(|&v| pure[v].is_none()).unwrap();
        (v, field.elements().collect())
    };
    let mut out = Vec::new();
    for a in values {
        let sub: Vec<GPoly> = gb.iter().map(|g| g.substitute(field, v, a)).filter(|g| !g.is_zero()).collect();
        for mut s in solve(field, k - 1, sub) {
            s.insert(v, a);
            out.push(s);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attack::mpoly::parse;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f16() -> &'static Field {
        Field::get(4).unwrap()
    }

    fn gp(f: &Field, s: &str, k: usize) -> GPoly {
        GPoly::from_multi(&parse(f, s).unwrap(), k).unwrap()
    }

    fn brute(f: &Field, k: usize, polys: &[GPoly]) -> Vec<Vec<Gf>> {
        let q = f.order();
        let mut out = Vec::new();
        for idx in 0..q.pow(k as u32) {
            let pt: Vec<Gf> = (0..k).map(|i| Gf(((idx / q.pow(i as u32)) % q) as u16)).collect();
            if polys.iter().all(|p| p.eval(f, &pt).is_zero()) {
                out.push(pt);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn grevlex_order() {
        let x = Exps::var(0);
        let y = Exps::var(1);
        let z = Exps::var(2);
        assert!(x > y && y > z);
        // lex would put x*z^2 first
        assert!(y.mul(&y).mul(&y) > x.mul(&z).mul(&z));
        assert!(x.mul(&y) > x.mul(&z));
    }

    #[test]
    fn unit_and_zero_ideals() {
        let f = f16();
        assert!(groebner_basis(f, &[]).is_empty());
        let gb = groebner_basis(f, &[gp(f, "x1 + 1", 2), gp(f, "x1", 2)]);
        assert_eq!(gb.len(), 1);
        assert!(gb[0].is_constant());
    }

    #[test]
    fn basis_property() {
        // every S-polynomial reduces to zero and inputs reduce to zero
        let f = f16();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..40 {
            let k = 3;
            let polys: Vec<GPoly> = (0..3)
                .map(|_| {
                    let t = (0..4)
                        .map(|_| {
                            let mut e = [0u16; CAP];
                            for _ in 0..rng.gen_range(0..3) {
                                e[rng.gen_range(0..k)] += 1;
                            }
                            (Exps(e), f.random(&mut rng))
                        })
                        .collect();
                    GPoly::from_terms(t)
                })
                .collect();
            let gb = groebner_basis(f, &polys);
            for p in &polys {
                assert!(normal_form(f, p, &gb).is_zero());
            }
            for i in 0..gb.len() {
                for j in i + 1..gb.len() {
                    assert!(normal_form(f, &s_poly(f, &gb[i], &gb[j]), &gb).is_zero());
                }
            }
        }
    }

    #[test]
    fn single_square() {
        let f = f16();
        // x^2 + a^2 has the single root a in characteristic 2
        for a in 1..16u16 {
            let a2 = f.square(Gf(a));
            let p = gp(f, &format!("x1^2 + {}", a2.0), 1);
            assert_eq!(zero_set(f, 1, &[p]), vec![vec![Gf(a)]]);
        }
    }

    #[test]
    fn minimal_polynomial_of_known_ideal() {
        let f = f16();
        // x1 = 3, x2^2 + x2 + 1 = 0
        let gb = groebner_basis(f, &[gp(f, "x1 + 3", 2), gp(f, "x2^2 + x2 + 1", 2)]);
        let mp = minimal_polynomial(f, &gb, 1, 16).unwrap();
        assert_eq!(mp.degree(), Some(2));
        let mp0 = minimal_polynomial(f, &gb, 0, 16).unwrap();
        assert_eq!(mp0, Poly::linear(Gf(3)));
    }

    #[test]
    fn positive_dimensional_matches_brute_force() {
        let f = f16();
        let polys = vec![gp(f, "x1*x2 + x1*x3 + x2*x3", 3)];
        assert_eq!(zero_set(f, 3, &polys), brute(f, 3, &polys));
        assert!(zero_set(f, 2, &[]).len() == 256);
    }

    #[test]
    fn random_quadratic_systems_match_brute_force() {
        let f = Field::get(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..60 {
            let k = rng.gen_range(1..=4);
            let polys: Vec<GPoly> = (0..rng.gen_range(1..=k + 1))
                .map(|_| {
                    let t = (0..rng.gen_range(1..6))
                        .map(|_| {
                            let mut e = [0u16; CAP];
                            for _ in 0..rng.gen_range(0..3) {
                                e[rng.gen_range(0..k)] += 1;
                            }
                            (Exps(e), f.random(&mut rng))
                        })
                        .collect();
                    GPoly::from_terms(t)
                })
                .collect();
            assert_eq!(zero_set(f, k, &polys), brute(f, k, &polys));
        }
    }

    #[test]
    fn conversion_roundtrip() {
        let f = f16();
        let p = parse(f, "x1*x3 + 5*x2^2 + x3 + 9").unwrap();
        let g = GPoly::from_multi(&p, 3).unwrap();
        assert_eq!(g.to_multi(), p);
        assert!(GPoly::from_multi(&p, 2).is_err());
        assert!(matches!(GPoly::from_multi(&p, 30), Err(Error::SolverOverflow { .. })));
    }
}
