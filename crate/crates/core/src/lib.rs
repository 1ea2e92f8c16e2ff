//! Exact-arithmetic verification of supercongruences for truncated
//! hypergeometric sums built from `(-1/2)_k / k!`, their WZ-pair proof
//! ingredients, and recovery of the integer constants in the conjectured
//! higher-weight generalizations.
//!
//! All values are exact rationals; a congruence `a ≡ b (mod p^t)` means
//! `v_p(a - b) >= t`.

pub mod arith;
pub mod congruence;
pub mod conjecture;
pub mod error;
pub mod report;
pub mod series;
pub mod special;

pub use arith::{
    congruent, crt_lift, primes_in_range, reduce_mod, vp, PrimePower, Rational, Valuation,
};
pub use congruence::{check, check_with, CheckId};
pub use error::{ArithError, Error, Result};
pub use report::{CongruenceReport, DiscoveryResult, Format, Record};
