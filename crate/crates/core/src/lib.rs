//! Exact computational engine for the coprimality topology on the positive
//! integers: the topology generated by the base sets
//! `sigma(n) = { m >= 1 : gcd(n, m) = 1 }`.
//!
//! The crate provides
//!
//! * exact 64-bit number theory ([`arith`]),
//! * a canonical algebra of eventually periodic sets ([`perset`]),
//! * closure/interior operators and open/closed/dense classification for the
//!   coprimality topology ([`topology`]),
//! * a comparison against Golomb's arithmetic-progression topology
//!   ([`golomb`]),
//! * prime families with bounded density probes ([`primefam`]), and
//! * an independent brute-force cross-checker for the derived decision
//!   procedures ([`oracle`]).

pub mod arith;
pub mod error;
pub mod golomb;
pub mod oracle;
pub mod perset;
pub mod primefam;
pub mod topology;

pub use error::{Error, Result};
pub use perset::{EPSet, Fraction};
pub use topology::ClassifyReport;
