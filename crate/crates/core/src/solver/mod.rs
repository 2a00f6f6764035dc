//! Solving a fault equation system: linear interreduction, substitution
//! into the remaining equations, the rational zero set of the reduced
//! system, and lifting back to support candidates.

pub mod enumerate;
pub mod groebner;

use serde::{Deserialize, Serialize};

use crate::attack::{FaultEquationSystem, MultiPoly};
use crate::error::{Error, Result};
use crate::field::{Field, FieldContext, Gf};

/// Largest number of free variables `zero_set` accepts.
pub const DEFAULT_VAR_CAP: usize = groebner::CAP;

/// Reduced systems with at most this many variables are enumerated.
pub const ENUMERATION_MAX_VARS: usize = 3;

/// Affine row `sum c_v x_v + c0`, variables ascending, no zero entries.
#[derive(Clone, Debug, PartialEq)]
struct Row {
    lin: Vec<(usize, Gf)>,
    c0: Gf,
}

impl Row {
    fn coeff(&self, v: usize) -> Gf {
        match self.lin.binary_search_by_key(&v, |&(u, _)| u) {
            Ok(i) => self.lin[i].1,
            Err(_) => Gf::ZERO,
        }
    }

    /// `self + c * other`.
    fn add_scaled(&self, field: &Field, other: &Row, c: Gf) -> Row {
        let mut lin = Vec::with_capacity(self.lin.len() + other.lin.len());
        let (a, b) = (&self.lin, &other.lin);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                lin.push(a[i]);
                i += 1;
            } else if take_b {
                lin.push((b[j].0, field.mul(b[j].1, c)));
                j += 1;
            } else {
                let x = field.add(a[i].1, field.mul(b[j].1, c));
                if !x.is_zero() {
                    lin.push((a[i].0, x));
                }
                i += 1;
                j += 1;
            }
        }
        Row { lin, c0: field.add(self.c0, field.mul(other.c0, c)) }
    }

    fn scale(&self, field: &Field, c: Gf) -> Row {
        Row { lin: self.lin.iter().map(|&(v, x)| (v, field.mul(x, c))).collect(), c0: field.mul(self.c0, c) }
    }

    fn to_poly(&self) -> MultiPoly {
        let mut p = MultiPoly::constant(self.c0);
        for &(v, c) in &self.lin {
            p = p.add(&MultiPoly::from_terms(vec![(crate::attack::Monomial::var(v as u32), c)]));
        }
        p
    }
}

/// The map `Psi` sending every eliminated variable to an affine expression
/// in the free ones.
///
/// Free variables are renumbered `0..k` in increasing original index;
/// `images[v]` is written in that numbering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubstitutionMap {
    pub n: usize,
    /// Eliminated (leading) variables, ascending.
    pub eliminated: Vec<usize>,
    /// Free variables, ascending; position = new index.
    pub free: Vec<usize>,
    pub images: Vec<MultiPoly>,
}

impl SubstitutionMap {
    pub fn identity(n: usize) -> SubstitutionMap {
        SubstitutionMap {
            n,
            eliminated: Vec::new(),
            free: (0..n).collect(),
            images: (0..n).map(MultiPoly::var).collect(),
        }
    }

    pub fn r(&self) -> usize {
        self.eliminated.len()
    }

    pub fn k(&self) -> usize {
        self.free.len()
    }

    /// Renumbering: eliminated variables first, then the free ones.
    pub fn permutation(&self) -> Vec<usize> {
        self.eliminated.iter().chain(&self.free).copied().collect()
    }

    pub fn apply(&self, field: &Field, p: &MultiPoly) -> MultiPoly {
        p.substitute(field, |v| self.images[v].clone())
    }

    /// The point map `psi`: free coordinates to a full tuple.
    pub fn lift(&self, field: &Field, gamma: &[Gf]) -> Vec<Gf> {
        self.images.iter().map(|img| img.eval(field, gamma)).collect()
    }

    /// Free coordinates of a full tuple.
    pub fn restrict(&self, alpha: &[Gf]) -> Vec<Gf> {
        self.free.iter().map(|&v| alpha[v]).collect()
    }
}

/// Gaussian interreduction of every affine member of `L` (the normalizer
/// and single variables from `L2` included).
///
/// Returns the rows `l_i`, each with its leading variable absent from every
/// other row, and the induced substitution map.
pub fn interreduce_linear(sys: &FaultEquationSystem) -> Result<(Vec<MultiPoly>, SubstitutionMap)> {
    let field = sys.field()?;
    let n = sys.n;
    // pivot_of[v] = index into rows when v leads a row
    let mut pivot_of: Vec<Option<usize>> = vec![None; n];
    let mut rows: Vec<(usize, Row)> = Vec::new();
    for p in sys.polys() {
        let Some((lin, c0)) = p.as_affine() else { continue };
        let mut row = Row { lin, c0 };
        if let Some(&(v, _)) = row.lin.iter().find(|&&(v, _)| v >= n) {
            return Err(Error::Precondition(format!("variable x{} outside 1..{n}", v + 1)));
        }
        let leads: Vec<(usize, Gf)> = row.lin.iter().filter(|&&(v, _)| pivot_of[v].is_some()).copied().collect();
        for (v, c) in leads {
            row = row.add_scaled(field, &rows[pivot_of[v].unwrap()].1, c);
        }
        let Some(&(lead, c)) = row.lin.first() else {
            if !row.c0.is_zero() {
                return Err(Error::InconsistentLinear);
            }
            continue;
        };
        let row = row.scale(field, field.inv(c)?);
        for (_, other) in rows.iter_mut() {
            let c = other.coeff(lead);
            if !c.is_zero() {
                *other = other.add_scaled(field, &row, c);
            }
        }
        pivot_of[lead] = Some(rows.len());
        rows.push((lead, row));
    }

    let free: Vec<usize> = (0..n).filter(|&v| pivot_of[v].is_none()).collect();
    let mut position = vec![usize::MAX; n];
    for (i, &v) in free.iter().enumerate() {
        position[v] = i;
    }
    let mut images: Vec<MultiPoly> = (0..n).map(|v| MultiPoly::var(position[v])).collect();
    for (lead, row) in &rows {
        // x_lead = sum c_u x_u + c0 in characteristic 2
        let tail = Row { lin: row.lin[1..].to_vec(), c0: row.c0 };
        images[*lead] = tail.to_poly().rename(|u| position[u]);
    }
    let mut eliminated: Vec<usize> = rows.iter().map(|(v, _)| *v).collect();
    eliminated.sort_unstable();
    rows.sort_by_key(|(v, _)| *v);
    let reduced = rows.iter().map(|(_, r)| r.to_poly()).collect();
    Ok((reduced, SubstitutionMap { n, eliminated, free, images }))
}

/// `Psi(L) \ {0}` over the free variables `0..k`, each member made monic,
/// duplicates removed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedSystem {
    pub k: usize,
    pub context: FieldContext,
    pub polys: Vec<MultiPoly>,
}

pub fn reduce_system(sys: &FaultEquationSystem, map: &SubstitutionMap) -> Result<ReducedSystem> {
    let field = sys.field()?;
    let mut polys: Vec<MultiPoly> =
        sys.polys().map(|p| map.apply(field, p)).filter(|p| !p.is_zero()).map(|p| p.monic(field)).collect();
    polys.sort();
    polys.dedup();
    Ok(ReducedSystem { k: map.k(), context: field.context(), polys })
}

fn check_cap(red: &ReducedSystem, cap: usize) -> Result<&'static Field> {
    let cap = cap.min(groebner::CAP);
    if red.k > cap {
        return Err(Error::SolverOverflow { vars: red.k, cap });
    }
    red.context.field()
}

/// Rational zero set by pruned enumeration.
pub fn zero_set_enumerate(red: &ReducedSystem, cap: usize) -> Result<Vec<Vec<Gf>>> {
    let field = check_cap(red, cap)?;
    Ok(enumerate::zero_set(field, red.k, &red.polys))
}

/// Rational zero set through Groebner bases.
pub fn zero_set_groebner(red: &ReducedSystem, cap: usize) -> Result<Vec<Vec<Gf>>> {
    let field = check_cap(red, cap)?;
    let polys = red.polys.iter().map(|p| groebner::GPoly::from_multi(p, red.k)).collect::<Result<Vec<_>>>()?;
    Ok(groebner::zero_set(field, red.k, &polys))
}

/// Enumeration for `k <= 3`, Groebner bases above; sorted output.
pub fn zero_set(red: &ReducedSystem, cap: usize) -> Result<Vec<Vec<Gf>>> {
    if red.k <= ENUMERATION_MAX_VARS {
        zero_set_enumerate(red, cap)
    } else {
        zero_set_groebner(red, cap)
    }
}

/// The support candidate set `S_L` with solver bookkeeping.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportCandidateSet {
    /// Pairwise-distinct tuples satisfying all of `L`, lexicographic.
    pub candidates: Vec<Vec<Gf>>,
    /// Rank of the linear part.
    pub eliminated: usize,
    /// Indeterminates of the reduced system.
    pub free_vars: usize,
    /// Equations of the reduced system.
    pub reduced_equations: usize,
    /// Size of its rational zero set before the distinctness filter.
    pub zero_set_size: usize,
}

fn pairwise_distinct(field: &Field, a: &[Gf]) -> bool {
    let mut seen = vec![false; field.order()];
    a.iter().all(|x| !std::mem::replace(&mut seen[x.0 as usize], true))
}

pub fn support_candidates(sys: &FaultEquationSystem) -> Result<SupportCandidateSet> {
    support_candidates_with_cap(sys, DEFAULT_VAR_CAP)
}

pub fn support_candidates_with_cap(sys: &FaultEquationSystem, cap: usize) -> Result<SupportCandidateSet> {
    let field = sys.field()?;
    let (_, map) = interreduce_linear(sys)?;
    let red = reduce_system(sys, &map)?;
    let zeros = zero_set(&red, cap)?;
    let all: Vec<&MultiPoly> = sys.polys().collect();
    let mut candidates: Vec<Vec<Gf>> = zeros
        .iter()
        .map(|g| map.lift(field, g))
        .filter(|a| pairwise_distinct(field, a))
        .filter(|a| all.iter().all(|p| p.eval(field, a).is_zero()))
        .collect();
    candidates.sort();
    Ok(SupportCandidateSet {
        candidates,
        eliminated: map.r(),
        free_vars: map.k(),
        reduced_equations: red.polys.len(),
        zero_set_size: zeros.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attack::mpoly::parse;
    use crate::attack::{build_fault_equation_system, default_budget};
    use crate::bign::{keygen, Params};
    use crate::faultsim::{Countermeasures, FaultOracle, FaultTarget};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn system(f: &Field, n: usize, l1: &[&str], l2: &[&str], normalizer_var: usize) -> FaultEquationSystem {
        FaultEquationSystem {
            n,
            context: f.context(),
            l1: l1.iter().map(|s| parse(f, s).unwrap()).collect(),
            l2: l2.iter().map(|s| parse(f, s).unwrap()).collect(),
            normalizer_var,
            normalizer: MultiPoly::var(normalizer_var).add(&MultiPoly::constant(Gf::ONE)),
            quadratic_indices: Vec::new(),
            constant_injections: 0,
            quadratic_injections: 0,
        }
    }

    fn honest(m: u32, t: usize, n: usize, seed: u64) -> (FaultOracle, FaultEquationSystem) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (sk, _) = keygen(Params::new(m, t, n).unwrap(), &mut rng).unwrap();
        let mut o = FaultOracle::transparent(&sk, Countermeasures::NONE);
        let sys = build_fault_equation_system(&mut o, &mut rng, default_budget(m)).unwrap();
        (o, sys)
    }

    #[test]
    fn two_step_elimination() {
        let f = Field::get(4).unwrap();
        let mut sys = system(f, 3, &["x1 + x2", "x2 + x3"], &[], 2);
        sys.normalizer = MultiPoly::zero();
        let (rows, map) = interreduce_linear(&sys).unwrap();
        assert_eq!(map.r(), 2);
        assert_eq!(map.eliminated, vec![0, 1]);
        assert_eq!(map.free, vec![2]);
        assert_eq!(rows, vec![parse(f, "x1 + x3").unwrap(), parse(f, "x2 + x3").unwrap()]);
        for r in &rows {
            assert!(map.apply(f, r).is_zero());
        }
    }

    #[test]
    fn no_linear_equations() {
        let f = Field::get(4).unwrap();
        let mut sys = system(f, 3, &[], &["x1*x2 + x1*x3 + x2*x3"], 0);
        sys.normalizer = MultiPoly::zero();
        let (rows, map) = interreduce_linear(&sys).unwrap();
        assert!(rows.is_empty());
        assert_eq!(map, SubstitutionMap::identity(3));
    }

    #[test]
    fn inconsistent_linear() {
        let f = Field::get(4).unwrap();
        let sys = system(f, 2, &["x1 + x2"], &["x2"], 0);
        assert_eq!(interreduce_linear(&sys).unwrap_err(), Error::InconsistentLinear);
    }

    #[test]
    fn all_linear_reduces_to_nothing() {
        let f = Field::get(4).unwrap();
        let sys = system(f, 3, &["x1 + x2", "x2 + x3"], &[], 0);
        let (_, map) = interreduce_linear(&sys).unwrap();
        let red = reduce_system(&sys, &map).unwrap();
        assert_eq!(red.k, 0);
        assert!(red.polys.is_empty());
        assert_eq!(zero_set(&red, DEFAULT_VAR_CAP).unwrap(), vec![Vec::<Gf>::new()]);
        let cands = support_candidates(&sys).unwrap();
        // (1, 1, 1) is not pairwise distinct
        assert!(cands.candidates.is_empty());
        assert_eq!(cands.zero_set_size, 1);
    }

    #[test]
    fn overflow_is_reported() {
        let f = Field::get(4).unwrap();
        let red = ReducedSystem { k: 25, context: f.context(), polys: Vec::new() };
        assert_eq!(zero_set(&red, DEFAULT_VAR_CAP).unwrap_err(), Error::SolverOverflow { vars: 25, cap: 24 });
        let red = ReducedSystem { k: 5, context: f.context(), polys: Vec::new() };
        assert_eq!(zero_set(&red, 4).unwrap_err(), Error::SolverOverflow { vars: 5, cap: 4 });
    }

    #[test]
    fn honest_system_contains_normalized_support() {
        for (seed, (m, t, n)) in [(4, 2, 16), (6, 4, 40), (5, 3, 24)].into_iter().enumerate() {
            let (o, sys) = honest(m, t, n, seed as u64);
            let f = o.public_key().field();
            let alpha = o.true_support().unwrap().elems().to_vec();
            let inv = f.inv(alpha[sys.normalizer_var]).unwrap();
            let normalized: Vec<Gf> = alpha.iter().map(|&a| f.mul(a, inv)).collect();

            let (rows, map) = interreduce_linear(&sys).unwrap();
            for r in &rows {
                assert!(r.eval(f, &normalized).is_zero());
                assert!(map.apply(f, r).is_zero());
            }
            let red = reduce_system(&sys, &map).unwrap();
            let gamma = map.restrict(&normalized);
            for p in &red.polys {
                assert!(p.eval(f, &gamma).is_zero());
                assert!(p.degree().unwrap() <= 2);
            }
            assert_eq!(map.lift(f, &gamma), normalized);

            let cands = support_candidates(&sys).unwrap();
            assert!(cands.candidates.contains(&normalized));
            assert!(cands.candidates.windows(2).all(|w| w[0] < w[1]));
            for c in &cands.candidates {
                assert!(pairwise_distinct(f, c));
                assert_eq!(c[sys.normalizer_var], Gf::ONE);
            }
        }
    }

    #[test]
    fn enumeration_and_groebner_agree_on_small_systems() {
        let mut checked = 0;
        for seed in 0..30 {
            let (_, sys) = honest(4, 2, 16, 100 + seed);
            let (_, map) = interreduce_linear(&sys).unwrap();
            let red = reduce_system(&sys, &map).unwrap();
            if red.k > 4 {
                continue;
            }
            assert_eq!(zero_set_enumerate(&red, 24).unwrap(), zero_set_groebner(&red, 24).unwrap());
            checked += 1;
        }
        assert!(checked > 10);
    }
}
