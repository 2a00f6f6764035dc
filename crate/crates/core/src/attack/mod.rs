//! Fault-injection sequences and the fault equation system they produce.
//!
//! Every sequence talks to the device only through [`FaultTarget`], so no
//! secret material can reach the attacker side.

pub mod mpoly;

use rand::seq::index;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::Word;
use crate::faultsim::{FaultInjectionRecord, FaultTarget};
use crate::field::{Field, FieldContext, Gf};

pub use mpoly::{Monomial, MultiPoly};

/// Per-sequence injection cap, in multiples of `2^m`.
pub const DEFAULT_BUDGET_FACTOR: u64 = 64;

/// Fresh quadratic rounds tried before giving up on an anchor.
pub const MAX_ANCHOR_RETRIES: usize = 8;

pub fn default_budget(m: u32) -> u64 {
    DEFAULT_BUDGET_FACTOR << m
}

/// Polynomial returned by a finished sequence, with its cost.
#[derive(Clone, Debug)]
pub struct Harvest {
    pub poly: MultiPoly,
    pub injections: u64,
    /// The injection that ended the sequence.
    pub record: FaultInjectionRecord,
}

fn check_index(n: usize, i: usize) -> Result<()> {
    if i >= n {
        return Err(Error::Precondition(format!("index {i} out of range for n = {n}")));
    }
    Ok(())
}

fn check_budget(budget: u64) -> Result<()> {
    if budget == 0 {
        return Err(Error::Precondition("budget must be at least 1".into()));
    }
    Ok(())
}

/// Injects `(e_i1 + e_i2, d = 0)` until the output has weight 2 and differs
/// from `p`; returns `x_i1 + x_i2 + x_j1 + x_j2` for `I_p~ = {j1, j2}`.
pub fn constant_injection_sequence(
    target: &mut dyn FaultTarget,
    i1: usize,
    i2: usize,
    rng: &mut dyn RngCore,
    budget: u64,
) -> Result<Harvest> {
    let n = target.params().n;
    check_index(n, i1)?;
    check_index(n, i2)?;
    check_budget(budget)?;
    if i1 == i2 {
        return Err(Error::Precondition("constant injection needs i1 != i2".into()));
    }
    let p = Word::from_indices(n, &[i1, i2])?;
    for k in 1..=budget {
        let rec = target.inject(&p, 0, rng)?;
        let Some(pt) = rec.p_tilde.as_ref() else { continue };
        if pt.weight() == 2 && pt != &p {
            let j = pt.support();
            let poly = MultiPoly::sum_of_vars(&[i1, i2, j[0], j[1]]);
            return Ok(Harvest { poly, injections: k, record: rec });
        }
    }
    Err(Error::BudgetExceeded(budget))
}

/// Injects `(e_i, d = 2)`. Returns `x_i` once `i` is among several roots
/// (then `alpha_i = 0`), else `x_i x_j1 + x_i x_j2 + x_j1 x_j2` once the
/// output has weight 2.
pub fn quadratic_injection_sequence(
    target: &mut dyn FaultTarget,
    i: usize,
    rng: &mut dyn RngCore,
    budget: u64,
) -> Result<Harvest> {
    let n = target.params().n;
    check_index(n, i)?;
    check_budget(budget)?;
    let p = Word::unit(n, i);
    for k in 1..=budget {
        let rec = target.inject(&p, 2, rng)?;
        let Some(pt) = rec.p_tilde.as_ref() else { continue };
        let w = pt.weight();
        if w > 1 && pt.get(i) {
            return Ok(Harvest { poly: MultiPoly::var(i), injections: k, record: rec });
        }
        if w == 2 {
            let j = pt.support();
            let poly = quadratic_relation(i, j[0], j[1]);
            return Ok(Harvest { poly, injections: k, record: rec });
        }
    }
    Err(Error::BudgetExceeded(budget))
}

/// `x_i x_j + x_i x_k + x_j x_k`.
pub fn quadratic_relation(i: usize, j: usize, k: usize) -> MultiPoly {
    let prod = |a: usize, b: usize| (Monomial::from_pairs(vec![(a as u32, 1), (b as u32, 1)]), Gf::ONE);
    MultiPoly::from_terms(vec![prod(i, j), prod(i, k), prod(j, k)])
}

/// `prod_{k in I} (x_v - x_k)`.
fn vanishing_product(field: &Field, v: usize, idx: &[usize]) -> MultiPoly {
    idx.iter().fold(MultiPoly::constant(Gf::ONE), |acc, &k| {
        if k == v {
            MultiPoly::zero()
        } else {
            acc.mul(field, &MultiPoly::sum_of_vars(&[v, k]))
        }
    })
}

/// For every pair `{i, j}` of roots of the faulty locator:
/// `x_i^d prod_{k in I_p}(x_j - x_k) - x_j^d prod_{k in I_p}(x_i - x_k)`.
/// Each equation has up to `2^(wt(p) + 1)` terms.
pub fn general_fault_equations(field: &Field, rec: &FaultInjectionRecord) -> Result<Vec<MultiPoly>> {
    let pt = rec
        .p_tilde
        .as_ref()
        .ok_or_else(|| Error::Precondition("injection was rejected by a countermeasure".into()))?;
    let roots = pt.support();
    if roots.len() < 2 {
        return Err(Error::TooFewRoots);
    }
    let ip = rec.p.support();
    let d = rec.d as u32;
    let mut out = Vec::with_capacity(roots.len() * (roots.len() - 1) / 2);
    for (a, &i) in roots.iter().enumerate() {
        for &j in &roots[a + 1..] {
            let left = MultiPoly::var(i).pow(field, d).mul(field, &vanishing_product(field, j, &ip));
            let right = MultiPoly::var(j).pow(field, d).mul(field, &vanishing_product(field, i, &ip));
            out.push(left.add(&right));
        }
    }
    Ok(out)
}

/// The harvested system `L = L1 + L2 + {x_i - 1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaultEquationSystem {
    pub n: usize,
    pub context: FieldContext,
    pub l1: Vec<MultiPoly>,
    pub l2: Vec<MultiPoly>,
    pub normalizer_var: usize,
    pub normalizer: MultiPoly,
    /// Indices the quadratic sequences were run on, in order.
    pub quadratic_indices: Vec<usize>,
    pub constant_injections: u64,
    pub quadratic_injections: u64,
}

impl FaultEquationSystem {
    pub fn field(&self) -> Result<&'static Field> {
        self.context.field()
    }

    /// All members of `L`, normalizer last.
    pub fn polys(&self) -> impl Iterator<Item = &MultiPoly> {
        self.l1.iter().chain(&self.l2).chain(std::iter::once(&self.normalizer))
    }

    pub fn injections(&self) -> u64 {
        self.constant_injections + self.quadratic_injections
    }

    /// Number of members of `L2` that are not a single variable.
    pub fn quadratic_count(&self) -> usize {
        self.l2.iter().filter(|p| p.degree() == Some(2)).count()
    }
}

/// Variable occurring in some quadratic of `l2` and most often in the terms
/// of `l1`; ties go to the lowest index.
pub fn choose_normalizer(n: usize, l1: &[MultiPoly], l2: &[MultiPoly]) -> Option<usize> {
    let mut anchored = vec![false; n];
    for p in l2.iter().filter(|p| p.degree() == Some(2)) {
        for v in p.variables() {
            anchored[v] = true;
        }
    }
    let mut counts = vec![0usize; n];
    for p in l1 {
        for (m, _) in p.terms() {
            for &(v, _) in m.pairs() {
                counts[v as usize] += 1;
            }
        }
    }
    // max_by_key keeps the last maximum, so scan indices in reverse
    (0..n).rev().filter(|&v| anchored[v]).max_by_key(|&v| counts[v])
}

/// Runs constant sequences on the cyclic pairs `(i, i+1)` and `(n-1, 0)`,
/// quadratic sequences on `max(1, n/10)` random indices, and appends the
/// normalizer.
pub fn build_fault_equation_system(
    target: &mut dyn FaultTarget,
    rng: &mut dyn RngCore,
    budget_per_seq: u64,
) -> Result<FaultEquationSystem> {
    let params = target.params();
    let n = params.n;
    let field = params.field()?;
    let start = target.injections();

    let mut l1 = Vec::with_capacity(n);
    for i in 0..n {
        let h = constant_injection_sequence(target, i, (i + 1) % n, rng, budget_per_seq)?;
        l1.push(h.poly);
    }
    let constant_injections = target.injections() - start;

    let count = (n / 10).max(1);
    let mut l2 = Vec::with_capacity(count);
    let mut used = vec![false; n];
    let mut quadratic_indices = Vec::with_capacity(count);
    for _ in 0..=MAX_ANCHOR_RETRIES {
        let fresh: Vec<usize> = (0..n).filter(|&i| !used[i]).collect();
        if fresh.is_empty() {
            break;
        }
        for k in index::sample(rng, fresh.len(), count.min(fresh.len())) {
            let i = fresh[k];
            used[i] = true;
            quadratic_indices.push(i);
            l2.push(quadratic_injection_sequence(target, i, rng, budget_per_seq)?.poly);
        }
        if let Some(v) = choose_normalizer(n, &l1, &l2) {
            let normalizer = MultiPoly::var(v).add(&MultiPoly::constant(Gf::ONE));
            let quadratic_injections = target.injections() - start - constant_injections;
            return Ok(FaultEquationSystem {
                n,
                context: field.context(),
                l1,
                l2,
                normalizer_var: v,
                normalizer,
                quadratic_indices,
                constant_injections,
                quadratic_injections,
            });
        }
    }
    Err(Error::NoQuadraticAnchor)
}
