use bign::attack::mpoly::parse;
use bign::attack::{default_budget, general_fault_equations};
use bign::solver::support_candidates;
use bign::{
    build_fault_equation_system, keygen, scale_pair, AltDecryptor, AlternativeSecretPair, BitMatrix, Countermeasures,
    FaultOracle, FaultTarget, Field, MultiPoly, Params, Poly, PublicKey, SecretKey, Word,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(m: u32) -> &'static Field {
    Field::get(m).unwrap()
}

fn poly(f: &Field, bits: Vec<u32>) -> Poly {
    let mask = (1u32 << f.m()) - 1;
    Poly::from_bits(f, &bits.into_iter().map(|b| b & mask).collect::<Vec<_>>()).unwrap()
}

fn keys(m: u32, t: usize, n: usize, seed: u64) -> (SecretKey, PublicKey) {
    keygen(Params::new(m, t, n).unwrap(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_is_a_field(m in 1u32..=16, a: u32, b: u32, c: u32) {
        let f = field(m);
        let mask = (1u32 << m) - 1;
        let (a, b, c) = (f.element(a & mask).unwrap(), f.element(b & mask).unwrap(), f.element(c & mask).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, b), f.mul_clmul(a, b));
        prop_assert_eq!(f.square(f.sqrt(a)), a);
        if !a.is_zero() {
            prop_assert_eq!(f.div(f.mul(a, b), a).unwrap(), b);
        }
    }

    #[test]
    fn division_identity(m in 2u32..=13, a in prop::collection::vec(any::<u32>(), 0..20),
                         b in prop::collection::vec(any::<u32>(), 1..10)) {
        let f = field(m);
        let (a, b) = (poly(f, a), poly(f, b));
        prop_assume!(!b.is_zero());
        let (q, r) = a.divrem(f, &b).unwrap();
        prop_assert_eq!(q.mul(f, &b).add(&r), a);
        prop_assert!(r.deg_i() < b.deg_i());
    }

    #[test]
    fn gcd_divides_both(m in 2u32..=10, a in prop::collection::vec(any::<u32>(), 1..12),
                        b in prop::collection::vec(any::<u32>(), 1..12)) {
        let f = field(m);
        let (a, b) = (poly(f, a), poly(f, b));
        prop_assume!(!a.is_zero() && !b.is_zero());
        let g = a.gcd(f, &b).unwrap();
        prop_assert!(g.is_monic());
        prop_assert!(a.rem(f, &g).unwrap().is_zero());
        prop_assert!(b.rem(f, &g).unwrap().is_zero());
    }

    #[test]
    fn word_algebra(bits in prop::collection::vec(any::<bool>(), 1..300), other in any::<u64>()) {
        let w = Word::from_bits(&bits);
        let mut rng = ChaCha8Rng::seed_from_u64(other);
        let v = Word::random(w.len(), &mut rng);
        prop_assert_eq!(w.xor(&v).xor(&v), w.clone());
        prop_assert_eq!(w.weight(), bits.iter().filter(|&&b| b).count());
        prop_assert_eq!(Word::from_hex(w.len(), &w.to_hex()).unwrap(), w.clone());
        prop_assert_eq!(Word::from_indices(w.len(), &w.support()).unwrap(), w);
    }

    #[test]
    fn kernel_is_annihilated(rows in 1usize..20, cols in 1usize..40, seed: u64) {
        let a = BitMatrix::random(rows, cols, &mut ChaCha8Rng::seed_from_u64(seed));
        let ker = a.kernel_basis();
        prop_assert_eq!(ker.len() + a.rank(), cols);
        for v in &ker {
            prop_assert!(a.mul_vec(v).unwrap().is_zero());
        }
    }

    #[test]
    fn multipoly_text_roundtrip(m in 2u32..=8, seed: u64) {
        let f = field(m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = MultiPoly::zero();
        for k in 0..4 {
            let term = MultiPoly::var(k).mul(f, &MultiPoly::var((k + 1) % 4)).scale(f, f.random(&mut rng));
            p = p.add(&term).add(&MultiPoly::var(k).scale(f, f.random(&mut rng)));
        }
        p = p.add(&MultiPoly::constant(f.random(&mut rng)));
        prop_assert_eq!(parse(f, &p.to_string()).unwrap(), p.clone());
        let json = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<MultiPoly>(&json).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn decryption_inverts_encryption(seed: u64, shape in prop::sample::select(vec![(4u32, 2usize, 12usize), (5, 3, 20), (6, 4, 40), (7, 6, 100)])) {
        let (m, t, n) = shape;
        let (sk, pk) = keys(m, t, n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        for _ in 0..8 {
            let p = pk.random_plaintext(&mut rng);
            prop_assert_eq!(sk.decrypt(&pk.encrypt(&p).unwrap()).unwrap(), p);
        }
        let back: SecretKey = serde_json::from_str(&serde_json::to_string(&sk).unwrap()).unwrap();
        prop_assert_eq!(back, sk);
        let back: PublicKey = serde_json::from_str(&serde_json::to_string(&pk).unwrap()).unwrap();
        prop_assert_eq!(back, pk);
    }

    #[test]
    fn scaled_pairs_decrypt(seed: u64, a in 1u32..16) {
        let (sk, pk) = keys(4, 2, 14, seed);
        let f = pk.field();
        let scaled = scale_pair(sk.simplify().pair(), f.element(a).unwrap()).unwrap();
        // binary Goppa codes satisfy Gamma(alpha, g) = Gamma(alpha, g^2)
        let alt = AlternativeSecretPair::new(f, scaled.support().clone(), scaled.g().square(f));
        let dec = AltDecryptor::new(&pk, &alt).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..8 {
            let p = pk.random_plaintext(&mut rng);
            prop_assert_eq!(dec.decrypt(&pk.encrypt(&p).unwrap()).unwrap(), p);
        }
    }

    #[test]
    fn general_equations_vanish_on_support(seed: u64, w in 1usize..=4, d in 0usize..=4) {
        let (sk, pk) = keys(6, 4, 48, seed);
        let mut oracle = FaultOracle::transparent(&sk, Countermeasures::NONE);
        let alpha = oracle.true_support().unwrap().elems().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Word::random_weight(48, w, &mut rng);
        let rec = oracle.inject(&p, d, &mut rng).unwrap();
        if let Ok(eqs) = general_fault_equations(pk.field(), &rec) {
            for e in eqs {
                prop_assert!(e.eval(pk.field(), &alpha).is_zero());
            }
        }
    }

    #[test]
    fn true_support_is_a_candidate_up_to_scaling(seed: u64) {
        let (sk, _) = keys(5, 3, 24, seed);
        let transparent = FaultOracle::transparent(&sk, Countermeasures::NONE);
        let alpha = transparent.true_support().unwrap().elems().to_vec();
        let mut target = FaultOracle::new(&sk, Countermeasures::NONE);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = build_fault_equation_system(&mut target, &mut rng, default_budget(5)).unwrap();
        let f = target.public_key().field();
        let a = alpha[sys.normalizer_var];
        prop_assume!(!a.is_zero());
        let inv = f.inv(a).unwrap();
        let normalized: Vec<_> = alpha.iter().map(|&x| f.mul(inv, x)).collect();
        let cands = support_candidates(&sys).unwrap();
        prop_assert!(cands.candidates.contains(&normalized));
    }
}
