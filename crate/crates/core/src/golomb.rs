//! Golomb's topology on the positive integers as a comparison basis.
//!
//! Golomb's space is generated by the progressions `a + b*k` (k >= 0) with
//! gcd(a, b) = 1. Every basic open `sigma(n)` of the coprimality topology is
//! a finite union of such progressions, so the coprimality topology is
//! coarser; it is *strictly* coarser because a single progression such as
//! `1 + 4k` is Golomb-open but has empty coprimality interior.
//!
//! # Deciding Golomb-openness of an eventually periodic set
//!
//! For S in canonical form (modulus m, residues R, exceptions A and B) and a
//! member x, a progression `x + b*k` visits exactly the coset
//! `x + <d> mod m`, where `d = gcd(b, m)`; each coset residue is visited
//! infinitely often, so the progression eventually stays inside S only if
//! the whole coset lies in R. Conversely, whenever some divisor d of m has
//! gcd(d, x) = 1 and coset `x + <d> ⊆ R`, a valid step exists: choose
//! b = d*t with t coprime to both x and m/d and large enough that every
//! later progression point clears the removed set B. Since gcd(d, x) only
//! depends on x mod m, the decision is per residue class. An added point
//! never qualifies — its own residue lies outside R yet is revisited
//! infinitely often — and removals never matter beyond the choice of a
//! larger step. The sampled brute-force search in [`crate::oracle`] checks
//! this criterion against the raw definition.

use serde::Serialize;

use crate::arith::{divisors, gcd};
use crate::error::{Error, Result};
use crate::perset::EPSet;
use crate::topology::{is_open, sigma};

/// The Golomb basic open `{ a + b*k : k >= 0 }`, as an eventually periodic
/// set: the class of a mod b with the class members below a removed.
/// Requires gcd(a, b) = 1.
pub fn golomb_basic(a: u64, b: u64) -> Result<EPSet> {
    if a == 0 || b == 0 {
        return Err(Error::Zero);
    }
    let g = gcd(a, b);
    if g != 1 {
        return Err(Error::NotCoprime { a, b, g });
    }
    let r = a % b;
    let first = if r == 0 { b } else { r };
    let removed: Vec<u64> = (0..).map(|k| first + k * b).take_while(|&x| x < a).collect();
    EPSet::new(b, [r], [], removed)
}

fn coset_inside(residues: &[u64], m: u64, a: u64, d: u64) -> bool {
    (0..m / d).all(|k| residues.binary_search(&((a + k * d) % m)).is_ok())
}

/// Exact Golomb-openness for eventually periodic sets; see module docs for
/// the criterion.
pub fn is_golomb_open(s: &EPSet) -> bool {
    let m = s.modulus();
    let ds = divisors(m);
    let class_ok = |a: u64| {
        ds.iter().rev().any(|&d| {
            let coprime = if a == 0 { d == 1 } else { gcd(d, a) == 1 };
            coprime && coset_inside(s.residues(), m, a, d)
        })
    };
    s.residues().iter().all(|&a| class_ok(a)) && s.added().iter().all(|&x| class_ok(x % m))
}

/// Outcome of the strict-coarseness demonstration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoarsenessReport {
    pub checked_sigma_max: u64,
    pub all_sigma_golomb_open: bool,
    pub witness: EPSet,
    pub witness_is_golomb_open: bool,
    pub witness_is_tau_open: bool,
}

impl CoarsenessReport {
    /// True when the report exhibits strictness: every checked basic open is
    /// Golomb-open while the witness separates the two topologies.
    pub fn demonstrates_strictness(&self) -> bool {
        self.all_sigma_golomb_open && self.witness_is_golomb_open && !self.witness_is_tau_open
    }
}

/// Checks that sigma(n) is Golomb-open for every n <= n_max and that the
/// progression `1 + 4k` is Golomb-open but not open in the coprimality
/// topology. Any Golomb basic whose class complement contains a unit
/// residue would do as witness; `1 + 4k` is simply the smallest convenient
/// choice.
pub fn coarseness_demo(n_max: u64) -> Result<CoarsenessReport> {
    assert!(n_max >= 4, "coarseness_demo requires n_max >= 4");
    let mut all_sigma_golomb_open = true;
    for n in 1..=n_max {
        if !is_golomb_open(&sigma(n)?) {
            all_sigma_golomb_open = false;
            break;
        }
    }
    let witness = golomb_basic(1, 4)?;
    let witness_is_golomb_open = is_golomb_open(&witness);
    let witness_is_tau_open = is_open(&witness)?;
    Ok(CoarsenessReport {
        checked_sigma_max: n_max,
        all_sigma_golomb_open,
        witness,
        witness_is_golomb_open,
        witness_is_tau_open,
    })
}
