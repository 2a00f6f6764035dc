//! Binary Goppa codes: parity checks, syndrome polynomials and decoders.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::f2::{BitMatrix, Word};
use crate::field::{Field, FieldContext, Gf};
use crate::poly::Poly;

/// Pairwise distinct field elements `(a_1, .., a_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SupportTuple {
    elems: Vec<Gf>,
}

impl SupportTuple {
    pub fn new(field: &Field, elems: Vec<Gf>) -> Result<SupportTuple> {
        if elems.len() > field.order() {
            return Err(Error::ParameterViolation(format!(
                "support length {} exceeds field order {}",
                elems.len(),
                field.order()
            )));
        }
        let mut seen = vec![false; field.order()];
        for &a in &elems {
            field.element(a.0 as u32)?;
            if std::mem::replace(&mut seen[a.0 as usize], true) {
                return Err(Error::SupportNotDistinct);
            }
        }
        Ok(SupportTuple { elems })
    }

    pub fn elems(&self) -> &[Gf] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn get(&self, i: usize) -> Gf {
        self.elems[i]
    }

    /// `out[j] = self[pi[j]]`.
    pub fn permute(&self, pi: &[usize]) -> SupportTuple {
        SupportTuple { elems: pi.iter().map(|&j| self.elems[j]).collect() }
    }

    /// Position of `a` in the tuple.
    pub fn index_of(&self, a: Gf) -> Option<usize> {
        self.elems.iter().position(|&b| b == a)
    }
}

/// Generating pair `(alpha, g)` of the Goppa code `Gamma(alpha, g)`.
///
/// Holds `beta_i = g(alpha_i)^-1` and the binary parity-check matrix.
#[derive(Clone, Debug)]
pub struct GeneratingPair {
    field: &'static Field,
    support: SupportTuple,
    g: Poly,
    beta: Vec<Gf>,
    h: BitMatrix,
}

impl PartialEq for GeneratingPair {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.support == other.support && self.g == other.g
    }
}

impl Eq for GeneratingPair {}

impl GeneratingPair {
    /// Requires `deg g >= 1` and `g(alpha_i) != 0` for every `i`.
    pub fn new(field: &'static Field, support: SupportTuple, g: Poly) -> Result<GeneratingPair> {
        if g.degree().unwrap_or(0) == 0 {
            return Err(Error::ParameterViolation("Goppa polynomial needs degree >= 1".into()));
        }
        for &c in g.coeffs() {
            field.element(c.0 as u32)?;
        }
        let mut beta = Vec::with_capacity(support.len());
        for (i, &a) in support.elems().iter().enumerate() {
            let v = g.eval(field, a);
            if v.is_zero() {
                return Err(Error::GoppaRoot(i));
            }
            beta.push(field.inv(v)?);
        }
        let h = parity_check(field, support.elems(), &beta, g.degree().unwrap_or(0));
        Ok(GeneratingPair { field, support, g, beta, h })
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn support(&self) -> &SupportTuple {
        &self.support
    }

    pub fn alpha(&self) -> &[Gf] {
        self.support.elems()
    }

    pub fn g(&self) -> &Poly {
        &self.g
    }

    /// `deg g`.
    pub fn t(&self) -> usize {
        self.g.degree().unwrap_or(0)
    }

    pub fn n(&self) -> usize {
        self.support.len()
    }

    pub fn beta(&self) -> &[Gf] {
        &self.beta
    }

    /// The `(m t) x n` binary parity-check matrix.
    pub fn parity_check_matrix(&self) -> &BitMatrix {
        &self.h
    }

    /// F2-basis of the code.
    pub fn code_basis(&self) -> Vec<Word> {
        self.h.kernel_basis()
    }

    pub fn dimension(&self) -> usize {
        self.n() - self.h.rank()
    }

    /// `c * H^T`.
    pub fn syndrome(&self, c: &Word) -> Result<Word> {
        self.h.mul_vec(c)
    }

    /// Membership by divisibility: `g | sigma_hat(c)`. Independent of `H`.
    pub fn is_codeword(&self, c: &Word) -> Result<bool> {
        if c.len() != self.n() {
            return Err(Error::LengthMismatch { expected: self.n(), got: c.len() });
        }
        if c.is_zero() {
            return Ok(true);
        }
        let s = sigma_hat(self.field, c, &self.support)?;
        Ok(s.rem(self.field, &self.g)?.is_zero())
    }

    /// Syndrome polynomial `sum c_i / g(a_i) * (g(x) - g(a_i)) / (x - a_i)`
    /// from a binary syndrome of length `m t`.
    pub fn syndrome_poly(&self, s: &Word) -> Result<Poly> {
        let m = self.field.m() as usize;
        let t = self.t();
        if s.len() != m * t {
            return Err(Error::LengthMismatch { expected: m * t, got: s.len() });
        }
        let s_hat: Vec<Gf> = (0..t)
            .map(|l| {
                let bits = (0..m).fold(0u16, |acc, b| acc | ((s.get(l * m + b) as u16) << b));
                Gf(bits)
            })
            .collect();
        let gc = self.g.coeffs();
        let coeffs = (0..t)
            .map(|j| {
                (0..t - j).fold(Gf::ZERO, |acc, l| self.field.add(acc, self.field.mul(gc[l + j + 1], s_hat[l])))
            })
            .collect();
        Ok(Poly::from_coeffs(coeffs))
    }

    /// Patterson: the monic error locator of the unique `e` with
    /// `1 <= wt(e) <= t` having this syndrome polynomial. Needs `g` irreducible.
    pub fn solve_key_equation(&self, s_poly: &Poly) -> Result<Poly> {
        let f = self.field;
        let g = &self.g;
        let t = self.t();
        if s_poly.rem(f, g)?.is_zero() {
            return Err(Error::ZeroSyndrome);
        }
        let inv = s_poly.modinv(f, g).map_err(|_| Error::DecodeFailure("syndrome not invertible".into()))?;
        let tx = inv.add(&Poly::x()).rem(f, g)?;
        let sigma = if tx.is_zero() {
            Poly::x()
        } else {
            let r = tx.sqrt_mod(f, g)?;
            let (a, b) = half_euclid(f, g, &r, t / 2, false)?;
            a.square(f).add(&b.square(f).shift(1))
        };
        if sigma.is_zero() {
            return Err(Error::DecodeFailure("vanishing locator".into()));
        }
        let sigma = sigma.monic(f);
        self.check_locator(&sigma, t)?;
        Ok(sigma)
    }

    /// Key-equation decoder for up to `floor(deg g / 2)` errors that works
    /// for any `g`: extended Euclid on `(g, s)` until the remainder degree
    /// drops below the bound.
    pub fn solve_key_equation_half(&self, s_poly: &Poly) -> Result<Poly> {
        let f = self.field;
        let tau = self.t() / 2;
        let s = s_poly.rem(f, &self.g)?;
        if s.is_zero() {
            return Err(Error::ZeroSyndrome);
        }
        let (_, v) = half_euclid(f, &self.g, &s, tau, true)?;
        if v.is_zero() {
            return Err(Error::DecodeFailure("vanishing locator".into()));
        }
        let sigma = v.monic(f);
        self.check_locator(&sigma, tau)?;
        Ok(sigma)
    }

    fn check_locator(&self, sigma: &Poly, bound: usize) -> Result<()> {
        let d = sigma.degree().unwrap_or(0);
        if d == 0 || d > bound {
            return Err(Error::DecodeFailure(format!("locator degree {d} outside 1..={bound}")));
        }
        let roots = locate_errors(self.field, sigma, &self.support).weight();
        if roots != d {
            return Err(Error::DecodeFailure(format!("locator of degree {d} has {roots} support roots")));
        }
        Ok(())
    }

    /// `e` with `e_i = 1` iff `sigma(a_i) = 0`.
    pub fn locate_errors(&self, sigma: &Poly) -> Word {
        locate_errors(self.field, sigma, &self.support)
    }

    /// Patterson decoding of a binary syndrome.
    pub fn syndrome_decode(&self, s: &Word) -> Result<Word> {
        if s.is_zero() {
            return Err(Error::ZeroSyndrome);
        }
        let sp = self.syndrome_poly(s)?;
        let sigma = self.solve_key_equation(&sp)?;
        Ok(self.locate_errors(&sigma))
    }

    /// Decoding of up to `floor(deg g / 2)` errors for arbitrary `g`.
    pub fn syndrome_decode_half(&self, s: &Word) -> Result<Word> {
        if s.is_zero() {
            return Err(Error::ZeroSyndrome);
        }
        let sp = self.syndrome_poly(s)?;
        let sigma = self.solve_key_equation_half(&sp)?;
        Ok(self.locate_errors(&sigma))
    }

    /// `(alpha_{pi(0)}, .., alpha_{pi(n-1)})` with the same `g`.
    pub fn permute(&self, pi: &[usize]) -> GeneratingPair {
        let support = self.support.permute(pi);
        let beta = pi.iter().map(|&j| self.beta[j]).collect();
        let h = self.h.permute_columns(pi);
        GeneratingPair { field: self.field, support, g: self.g.clone(), beta, h }
    }
}

/// Builds the expanded `H'` with entry `(j, i) = a_i^j beta_i`; bit `b` of
/// row block `j` is binary row `j m + b`.
fn parity_check(field: &Field, alpha: &[Gf], beta: &[Gf], t: usize) -> BitMatrix {
    let m = field.m() as usize;
    let n = alpha.len();
    let mut h = BitMatrix::zeros(m * t, n);
    for i in 0..n {
        let mut v = beta[i];
        for j in 0..t {
            for b in 0..m {
                if Field::bit(v, b as u32) {
                    h.set(j * m + b, i, true);
                }
            }
            v = field.mul(v, alpha[i]);
        }
    }
    h
}

/// Extended Euclid on `(a, b)` tracking only the coefficient of `b`.
/// Stops at the first remainder of degree `<= bound` (or `< bound` when
/// `strict`) and returns `(remainder, coefficient)`.
fn half_euclid(field: &Field, a: &Poly, b: &Poly, bound: usize, strict: bool) -> Result<(Poly, Poly)> {
    let done = |p: &Poly| if strict { p.deg_i() < bound as isize } else { p.deg_i() <= bound as isize };
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut v0, mut v1) = (Poly::zero(), Poly::one());
    while !done(&r1) {
        if r1.is_zero() {
            return Err(Error::DecodeFailure("Euclid ran out of remainders".into()));
        }
        let (q, r) = r0.divrem(field, &r1)?;
        let v = v0.add(&q.mul(field, &v1));
        r0 = std::mem::replace(&mut r1, r);
        v0 = std::mem::replace(&mut v1, v);
    }
    Ok((r1, v1))
}

/// `e` with `e_i = 1` iff `sigma(a_i) = 0`.
pub fn locate_errors(field: &Field, sigma: &Poly, support: &SupportTuple) -> Word {
    let mut e = Word::zeros(support.len());
    for (i, &a) in support.elems().iter().enumerate() {
        if sigma.eval(field, a).is_zero() {
            e.set(i, true);
        }
    }
    e
}

/// `sum_{i in I_c} prod_{j in I_c, j != i} (x - a_j)`, computed as the formal
/// derivative of `prod_{j in I_c} (x - a_j)`.
pub fn sigma_hat(field: &Field, c: &Word, support: &SupportTuple) -> Result<Poly> {
    if c.len() != support.len() {
        return Err(Error::LengthMismatch { expected: support.len(), got: c.len() });
    }
    if c.is_zero() {
        return Err(Error::ZeroWord);
    }
    let roots: Vec<Gf> = c.support().into_iter().map(|i| support.get(i)).collect();
    Ok(Poly::from_roots(field, &roots).derivative())
}

/// The defining sum of [`sigma_hat`], evaluated term by term.
pub fn sigma_hat_literal(field: &Field, c: &Word, support: &SupportTuple) -> Result<Poly> {
    if c.is_zero() {
        return Err(Error::ZeroWord);
    }
    let idx = c.support();
    let mut acc = Poly::zero();
    for &i in &idx {
        let others: Vec<Gf> = idx.iter().filter(|&&j| j != i).map(|&j| support.get(j)).collect();
        acc = acc.add(&Poly::from_roots(field, &others));
    }
    Ok(acc)
}

/// Random code with `m t < n <= 2^m`: `n` support elements taken from a
/// uniformly shuffled field, and a random monic irreducible `g` of degree
/// `t` with no root on the support.
pub fn random_goppa<R: Rng + ?Sized>(m: u32, t: usize, n: usize, rng: &mut R) -> Result<GeneratingPair> {
    let field = Field::get(m)?;
    check_params(m, t, n)?;
    let mut all: Vec<Gf> = field.elements().collect();
    all.shuffle(rng);
    all.truncate(n);
    let support = SupportTuple::new(field, all)?;
    loop {
        let g = Poly::random_irreducible(field, t, rng)?;
        // only reachable for t = 1
        if support.elems().iter().any(|&a| g.eval(field, a).is_zero()) {
            continue;
        }
        return GeneratingPair::new(field, support, g);
    }
}

/// `t >= 1` and `m t < n <= 2^m`.
pub fn check_params(m: u32, t: usize, n: usize) -> Result<()> {
    if !(1..=crate::field::MAX_M).contains(&m) {
        return Err(Error::InvalidField(m));
    }
    if t == 0 {
        return Err(Error::ParameterViolation("t must be at least 1".into()));
    }
    let order = 1usize << m;
    if m as usize * t >= n || n > order {
        return Err(Error::ParameterViolation(format!("need m*t < n <= 2^m, got m={m}, t={t}, n={n}")));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct PairRepr {
    context: FieldContext,
    alpha: Vec<Gf>,
    g: Poly,
}

impl Serialize for GeneratingPair {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PairRepr { context: self.field.context(), alpha: self.support.elems.clone(), g: self.g.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeneratingPair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PairRepr::deserialize(d)?;
        let build = || -> Result<GeneratingPair> {
            let field = r.context.field()?;
            GeneratingPair::new(field, SupportTuple::new(field, r.alpha.clone())?, r.g.clone())
        };
        build().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn small() -> GeneratingPair {
        random_goppa(4, 2, 12, &mut ChaCha8Rng::seed_from_u64(1)).unwrap()
    }

    /// Direct evaluation of the defining sum of the syndrome polynomial.
    fn direct_syndrome_poly(pair: &GeneratingPair, e: &Word) -> Poly {
        let f = pair.field();
        let mut acc = Poly::zero();
        for i in e.support() {
            let a = pair.alpha()[i];
            let ga = pair.g().eval(f, a);
            let num = pair.g().add(&Poly::constant(ga));
            let (q, r) = num.divrem(f, &Poly::linear(a)).unwrap();
            assert!(r.is_zero());
            acc = acc.add(&q.scale(f, f.inv(ga).unwrap()));
        }
        acc
    }

    fn all_words(n: usize) -> impl Iterator<Item = Word> {
        (0u32..1 << n).map(move |code| {
            let bits: Vec<bool> = (0..n).map(|i| (code >> i) & 1 == 1).collect();
            Word::from_bits(&bits)
        })
    }

    #[test]
    fn parity_check_shape_and_zero_column() {
        let f = Field::get(4).unwrap();
        let mut alpha: Vec<Gf> = (0..12).map(Gf).collect();
        alpha.swap(0, 5);
        let g = Poly::random_irreducible(f, 2, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        let pair = GeneratingPair::new(f, SupportTuple::new(f, alpha).unwrap(), g).unwrap();
        let h = pair.parity_check_matrix();
        assert_eq!((h.nrows(), h.ncols()), (8, 12));
        let zero_col = pair.support().index_of(Gf::ZERO).unwrap();
        let col = h.column(zero_col);
        let beta = pair.beta()[zero_col];
        for b in 0..4 {
            assert_eq!(col.get(b), Field::bit(beta, b as u32));
        }
        for r in 4..8 {
            assert!(!col.get(r));
        }
    }

    #[test]
    fn membership_agrees_with_parity_check_exhaustively() {
        let pair = small();
        let h = pair.parity_check_matrix();
        let mut count = 0;
        for c in all_words(12) {
            let by_h = h.mul_vec(&c).unwrap().is_zero();
            assert_eq!(pair.is_codeword(&c).unwrap(), by_h, "{c:?}");
            count += by_h as usize;
        }
        assert_eq!(count, 1 << pair.dimension());
        assert!(pair.dimension() >= 4);
        assert!(!pair.is_codeword(&Word::unit(12, 3)).unwrap());
    }

    #[test]
    fn code_equals_code_of_g_squared() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (m, t, n) in [(4, 2, 12), (5, 3, 20), (6, 4, 40)] {
            let pair = random_goppa(m, t, n, &mut rng).unwrap();
            let sq = GeneratingPair::new(pair.field(), pair.support().clone(), pair.g().square(pair.field()))
                .unwrap();
            let basis = pair.code_basis();
            let basis_sq = sq.code_basis();
            assert_eq!(basis.len(), basis_sq.len());
            for c in &basis {
                assert!(sq.syndrome(c).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn sigma_hat_matches_literal_sum() {
        let pair = random_goppa(6, 3, 40, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let f = pair.field();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for w in 1..12 {
            let c = Word::random_weight(40, w, &mut rng);
            assert_eq!(
                sigma_hat(f, &c, pair.support()).unwrap(),
                sigma_hat_literal(f, &c, pair.support()).unwrap()
            );
        }
        assert_eq!(sigma_hat(f, &Word::zeros(40), pair.support()).unwrap_err(), Error::ZeroWord);
    }

    #[test]
    fn syndrome_poly_examples() {
        let pair = small();
        let f = pair.field();
        assert!(pair.syndrome_poly(&Word::zeros(8)).unwrap().is_zero());
        for i in 0..pair.n() {
            let e = Word::unit(12, i);
            let a = pair.alpha()[i];
            let ga = pair.g().eval(f, a);
            let (q, _) = pair.g().add(&Poly::constant(ga)).divrem(f, &Poly::linear(a)).unwrap();
            let expected = q.scale(f, f.inv(ga).unwrap());
            assert_eq!(pair.syndrome_poly(&pair.syndrome(&e).unwrap()).unwrap(), expected);
        }
        assert!(matches!(pair.syndrome_poly(&Word::zeros(7)), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn syndrome_poly_matches_direct_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let pair = random_goppa(8, 10, 200, &mut rng).unwrap();
        for _ in 0..30 {
            let e = Word::random(200, &mut rng);
            let s = pair.syndrome(&e).unwrap();
            assert_eq!(pair.syndrome_poly(&s).unwrap(), direct_syndrome_poly(&pair, &e));
        }
    }

    #[test]
    fn key_equation_examples() {
        let pair = small();
        for i in 0..pair.n() {
            let sp = pair.syndrome_poly(&pair.syndrome(&Word::unit(12, i)).unwrap()).unwrap();
            assert_eq!(pair.solve_key_equation(&sp).unwrap(), Poly::linear(pair.alpha()[i]));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let big = random_goppa(8, 20, 256, &mut rng).unwrap();
        for w in 1..=20 {
            let e = Word::random_weight(256, w, &mut rng);
            let sp = big.syndrome_poly(&big.syndrome(&e).unwrap()).unwrap();
            let roots: Vec<Gf> = e.support().iter().map(|&i| big.alpha()[i]).collect();
            assert_eq!(big.solve_key_equation(&sp).unwrap(), Poly::from_roots(big.field(), &roots));
        }
        assert_eq!(pair.solve_key_equation(&Poly::zero()).unwrap_err(), Error::ZeroSyndrome);
    }

    #[test]
    fn decode_round_trip_all_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (m, t, n) in [(4, 2, 12), (5, 2, 32), (6, 4, 40), (7, 6, 100)] {
            for _ in 0..5 {
                let pair = random_goppa(m, t, n, &mut rng).unwrap();
                for w in 1..=t {
                    let e = Word::random_weight(n, w, &mut rng);
                    assert_eq!(pair.syndrome_decode(&pair.syndrome(&e).unwrap()).unwrap(), e);
                }
            }
        }
        let pair = small();
        assert_eq!(pair.syndrome_decode(&Word::zeros(8)).unwrap_err(), Error::ZeroSyndrome);
    }

    #[test]
    fn half_decoder_on_squared_polynomial() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (m, t, n) in [(4, 2, 16), (6, 4, 40), (8, 10, 200)] {
            let pair = random_goppa(m, t, n, &mut rng).unwrap();
            let f = pair.field();
            let sq = GeneratingPair::new(f, pair.support().clone(), pair.g().square(f)).unwrap();
            for w in 1..=t {
                let e = Word::random_weight(n, w, &mut rng);
                assert_eq!(sq.syndrome_decode_half(&sq.syndrome(&e).unwrap()).unwrap(), e);
            }
        }
    }

    #[test]
    fn locate_errors_examples() {
        let pair = small();
        let f = pair.field();
        assert_eq!(pair.locate_errors(&Poly::linear(pair.alpha()[4])), Word::unit(12, 4));
        assert!(pair.locate_errors(&Poly::constant(Gf(3))).is_zero());
        // eps x^2 + x + a_i = eps (x + a_j)(x + a_k) for a suitable triple
        let n = pair.n();
        let (i, j, k, eps) = (0..n)
            .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
            .find_map(|(j, k)| {
                let (aj, ak) = (pair.alpha()[j], pair.alpha()[k]);
                let eps = f.inv(f.add(aj, ak)).unwrap();
                let c = f.mul(eps, f.mul(aj, ak));
                pair.support().index_of(c).map(|i| (i, j, k, eps))
            })
            .expect("some triple exists");
        let sigma = Poly::from_coeffs(vec![pair.alpha()[i], Gf::ONE, eps]);
        let located = pair.locate_errors(&sigma);
        let oracle: Vec<usize> = (0..n).filter(|&l| sigma.eval(f, pair.alpha()[l]).is_zero()).collect();
        assert_eq!(located.support(), oracle);
        assert_eq!(located.support(), vec![j, k]);
    }

    #[test]
    fn random_goppa_examples() {
        let pair = small();
        assert!(pair.dimension() >= 4);
        assert!(matches!(
            random_goppa(4, 2, 20, &mut ChaCha8Rng::seed_from_u64(1)),
            Err(Error::ParameterViolation(_))
        ));
        assert!(matches!(
            random_goppa(4, 2, 8, &mut ChaCha8Rng::seed_from_u64(1)),
            Err(Error::ParameterViolation(_))
        ));
        assert_eq!(small(), small());
        let lin = random_goppa(4, 1, 12, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert_eq!(lin.t(), 1);
    }

    #[test]
    fn pair_validation() {
        let f = Field::get(4).unwrap();
        assert_eq!(SupportTuple::new(f, vec![Gf(1), Gf(1)]).unwrap_err(), Error::SupportNotDistinct);
        assert!(SupportTuple::new(f, vec![Gf(16)]).is_err());
        let support = SupportTuple::new(f, vec![Gf(1), Gf(2), Gf(3)]).unwrap();
        let g = Poly::linear(Gf(2)).mul(f, &Poly::linear(Gf(9)));
        assert_eq!(GeneratingPair::new(f, support, g).unwrap_err(), Error::GoppaRoot(1));
    }

    #[test]
    fn pair_serde_round_trip() {
        let pair = small();
        let json = serde_json::to_value(&pair).unwrap();
        assert_eq!(json["context"]["m"], 4);
        let back: GeneratingPair = serde_json::from_value(json).unwrap();
        assert_eq!(back, pair);
        assert_eq!(back.parity_check_matrix(), pair.parity_check_matrix());
    }

    #[test]
    fn permuted_pair_matches_rebuilt_pair() {
        let pair = small();
        let pi = crate::f2::random_permutation(12, &mut ChaCha8Rng::seed_from_u64(4));
        let p = pair.permute(&pi);
        let rebuilt = GeneratingPair::new(pair.field(), p.support().clone(), pair.g().clone()).unwrap();
        assert_eq!(p.parity_check_matrix(), rebuilt.parity_check_matrix());
        assert_eq!(p.beta(), rebuilt.beta());
    }
}
