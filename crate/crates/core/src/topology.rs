//! The coprimality topology on the positive integers.
//!
//! The base consists of the sets `sigma(n) = { m : gcd(n, m) = 1 }`; it is a
//! base because `sigma(nm) = sigma(n) ∩ sigma(m)`. The closed sets are built
//! from the multiple sets `M_r`: the closure of a singleton `{n}` with n > 1
//! is `M_rad(n)`, and `{1}` is dense.
//!
//! # The general closure operator
//!
//! A point x lies outside the closure of S exactly when some basic open
//! `sigma(n)` contains x and misses S. `sigma(n)` misses S precisely when
//! the primes of n *cover* S: every element of S is divisible by one of
//! them. A finite prime set Q covers the residue class `a mod m` if and
//! only if some q ∈ Q divides gcd(a, m) — a prime not dividing m leaves a
//! positive fraction `1 - 1/q` of the class uncovered, and a prime dividing
//! m but not a touches no element of the class at all, so no combination of
//! useless primes can conspire to cover it. Finitely many removals cannot
//! make a class coverable (the uncovered elements are infinite), and an
//! added point s is covered exactly by the primes dividing s.
//!
//! Minimal covers therefore pick one prime divisor of `g_i = gcd(a_i, m)`
//! per class and one prime divisor of each added point, which yields the
//! closed form implemented by [`closure`]:
//!
//! ```text
//! cl(S) = N                                      if 1 ∈ S or some g_i = 1
//! cl(S) = ⋃_i M_rad(g_i)  ∪  ⋃_{s ∈ A} M_rad(s)  otherwise
//! ```
//!
//! This closed form is a derived engine-level result, not a textbook
//! formula; the [`crate::oracle`] module exists to validate it against the
//! raw definitions, and the acceptance suite runs that validation.

use serde::Serialize;

use crate::arith::{gcd, radical};
use crate::error::Result;
use crate::perset::EPSet;

/// gcd(a, m) for a residue a ∈ 0..m, where class 0 consists of the
/// multiples of m.
fn class_gcd(a: u64, m: u64) -> u64 {
    if a == 0 {
        m
    } else {
        gcd(a, m)
    }
}

/// The basic open `sigma(n) = { m >= 1 : gcd(n, m) = 1 }`.
///
/// Built directly at modulus rad(n), since coprimality to n only depends on
/// the radical; `sigma(1)` is the whole space.
pub fn sigma(n: u64) -> Result<EPSet> {
    assert!(n >= 1, "sigma requires n >= 1");
    if n == 1 {
        return Ok(EPSet::universe());
    }
    let r = radical(n);
    EPSet::periodic(r, (1..r).filter(|&x| gcd(x, r) == 1))
}

/// An arithmetic progression `first + step * k` for k >= 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Progression {
    pub first: u64,
    pub step: u64,
}

/// `sigma(n)` written as the union of the progressions `m + n*k` over the
/// residues 1 <= m < n coprime to n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SigmaDecomposition {
    /// n = 1: the whole space, not a proper union of progressions.
    WholeSpace,
    Progressions(Vec<Progression>),
}

pub fn sigma_decomposition(n: u64) -> SigmaDecomposition {
    assert!(n >= 1, "sigma_decomposition requires n >= 1");
    if n == 1 {
        return SigmaDecomposition::WholeSpace;
    }
    SigmaDecomposition::Progressions(
        (1..n)
            .filter(|&m| gcd(m, n) == 1)
            .map(|m| Progression { first: m, step: n })
            .collect(),
    )
}

/// Closure of the singleton {n}: the whole space for n = 1, otherwise the
/// multiples of the radical of n (equivalently `⋂_{p|n} M_p`).
pub fn closure_singleton(n: u64) -> Result<EPSet> {
    assert!(n >= 1, "closure_singleton requires n >= 1");
    if n == 1 {
        return Ok(EPSet::universe());
    }
    EPSet::multiples(radical(n))
}

/// Exact closure in the coprimality topology. See the module docs for the
/// derivation. Extensive and idempotent; removals never affect the result.
pub fn closure(s: &EPSet) -> Result<EPSet> {
    if s.is_empty() {
        return Ok(EPSet::empty());
    }
    let m = s.modulus();
    let mut radicals: Vec<u64> = Vec::new();
    for &a in s.residues() {
        let g = class_gcd(a, m);
        if g == 1 {
            return Ok(EPSet::universe());
        }
        radicals.push(radical(g));
    }
    for &x in s.added() {
        if x == 1 {
            return Ok(EPSet::universe());
        }
        radicals.push(radical(x));
    }
    radicals.sort_unstable();
    radicals.dedup();
    // M_r ⊆ M_d whenever d | r, so only divisibility-minimal radicals count.
    let minimal: Vec<u64> = radicals
        .iter()
        .copied()
        .filter(|&r| !radicals.iter().any(|&d| d != r && r % d == 0))
        .collect();
    let mut acc = EPSet::empty();
    for r in minimal {
        acc = acc.union(&EPSet::multiples(r)?)?;
    }
    Ok(acc)
}

/// Interior as the dual of closure: `int(S) = N \ cl(N \ S)`.
pub fn interior(s: &EPSet) -> Result<EPSet> {
    Ok(closure(&s.complement())?.complement())
}

/// `cl(S) \ int(S)`.
pub fn boundary(s: &EPSet) -> Result<EPSet> {
    closure(s)?.difference(&interior(s)?)
}

pub fn is_open(s: &EPSet) -> Result<bool> {
    Ok(interior(s)? == *s)
}

pub fn is_closed(s: &EPSet) -> Result<bool> {
    Ok(closure(s)? == *s)
}

/// Density has a direct criterion: S is dense iff 1 ∈ S or some canonical
/// class is a unit class (gcd(a, m) = 1). This is the closure formula
/// specialized to "closure = whole space".
pub fn is_dense(s: &EPSet) -> bool {
    let dense =
        s.member(1) || s.residues().iter().any(|&a| class_gcd(a, s.modulus()) == 1);
    #[cfg(debug_assertions)]
    if let Ok(cl) = closure(s) {
        debug_assert_eq!(dense, cl == EPSet::universe(), "density shortcut drifted");
    }
    dense
}

/// Nowhere dense: the closure has empty interior. Computed from the
/// operators, not from the dense/nowhere-dense dichotomy, so the dichotomy
/// stays a testable theorem.
pub fn is_nowhere_dense(s: &EPSet) -> Result<bool> {
    Ok(interior(&closure(s)?)?.is_empty())
}

/// Classification of one set: flags plus the witnessing closure, interior
/// and boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifyReport {
    pub is_open: bool,
    pub is_closed: bool,
    pub is_dense: bool,
    pub is_nowhere_dense: bool,
    pub closure: EPSet,
    pub interior: EPSet,
    pub boundary: EPSet,
}

pub fn classify(s: &EPSet) -> Result<ClassifyReport> {
    let cl = closure(s)?;
    let int = interior(s)?;
    let bd = cl.difference(&int)?;
    Ok(ClassifyReport {
        is_open: int == *s,
        is_closed: cl == *s,
        is_dense: cl == EPSet::universe(),
        is_nowhere_dense: interior(&cl)?.is_empty(),
        closure: cl,
        interior: int,
        boundary: bd,
    })
}
