//! Additive combinatorics in `Z/pZ`: sumsets, covering progressions,
//! small-doubling structure checks, numeric constants, exponential sums and
//! m-sum-free sets.

pub mod constants;
pub mod error;
pub mod integer;
pub mod mask;
pub mod msf;
pub mod primes;
pub mod progression;
pub mod spectral;
pub mod sumfree;
pub mod verify;
pub mod zp;

pub use error::{Error, Result};
pub use progression::Progression;
pub use verify::{EtaChoice, HypothesisProfile};
pub use zp::{DoublingReport, PrimeModulus, ZpSet};
