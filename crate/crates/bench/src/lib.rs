//! Seeded fixtures shared by the benchmarks.

use bign::attack::{build_fault_equation_system, default_budget};
use bign::{keygen, FaultEquationSystem, FaultOracle, Params, PublicKey, SecretKey, Countermeasures};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn keys(m: u32, t: usize, n: usize, seed: u64) -> (SecretKey, PublicKey) {
    keygen(Params::new(m, t, n).expect("valid parameters"), &mut rng(seed)).expect("keygen")
}

/// Fault equation system harvested from an unprotected device.
pub fn harvested_system(sk: &SecretKey, seed: u64) -> FaultEquationSystem {
    let mut oracle = FaultOracle::new(sk, Countermeasures::NONE);
    build_fault_equation_system(&mut oracle, &mut rng(seed), default_budget(sk.params().m)).expect("harvest")
}
