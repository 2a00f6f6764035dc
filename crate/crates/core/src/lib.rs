pub mod attack;
pub mod bign;
pub mod error;
pub mod extender;
pub mod faultsim;
pub mod f2;
pub mod field;
pub mod goppa;
pub mod poly;
pub mod solver;
pub mod stats;

pub use attack::{build_fault_equation_system, FaultEquationSystem, MultiPoly};
pub use bign::{alt_decrypt, keygen, AltDecryptor, AlternativeSecretPair, Params, PublicKey, SecretKey};
pub use error::{Error, Result};
pub use extender::{fault_attack, goppa_gcd, scale_pair, AttackConfig, AttackReport, ExtensionResult};
pub use f2::{BitMatrix, Word};
pub use faultsim::{Countermeasures, FaultInjectionRecord, FaultOracle, FaultTarget};
pub use field::{Elem, Field, FieldContext, Gf};
pub use goppa::{GeneratingPair, SupportTuple};
pub use poly::Poly;
pub use solver::{support_candidates, SubstitutionMap, SupportCandidateSet};
pub use stats::{expected_injections, success_statistics, SecurityLevel, StatsReport};
