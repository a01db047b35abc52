//! Independent brute-force cross-checks for the engine's derived decision
//! procedures: the general closure operator, openness, and Golomb-openness.
//!
//! The rule this module lives by: it never calls the engine's closure
//! formula, its prime-cover characterization, or the Golomb coset criterion.
//! It works from gcd, exhaustive scans over one full period past every
//! exception, and the raw definitions:
//!
//! * x is outside cl(S) iff some basic open sigma(n) contains x and misses S;
//! * S is open iff every member has some sigma(n) around it inside S;
//! * S is Golomb-open iff every member starts a progression with coprime
//!   step that stays inside S.
//!
//! Emptiness of `S ∩ sigma(n)` over one period window is a complete
//! decision for eventually periodic sets, so when the oracle produces a
//! separating basic open, the engine's "not in the closure" verdict is
//! proven, not sampled. The reverse directions are one-sided searches under
//! a bound, and an exhausted search is recorded as `inconclusive` rather
//! than forced into a boolean. The oracle may be orders of magnitude slower
//! than the engine; that is the point.

use std::collections::HashMap;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::{gcd, primes};
use crate::error::{Error, Result};
use crate::golomb::{golomb_basic, is_golomb_open};
use crate::perset::EPSet;
use crate::topology::{closure, is_open, sigma};

/// What the oracle concluded for one point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleAnswer {
    Decided(bool),
    /// The bounded search was exhausted in a direction where exhaustion
    /// proves nothing.
    Inconclusive,
}

impl Serialize for OracleAnswer {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            OracleAnswer::Decided(b) => serializer.serialize_bool(*b),
            OracleAnswer::Inconclusive => serializer.serialize_str("inconclusive"),
        }
    }
}

/// A point where engine and oracle failed to agree outright.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub x: u64,
    pub engine_says: bool,
    pub oracle_says: OracleAnswer,
}

/// Outcome of one oracle run. Empty discrepancies means agreement over the
/// whole checked window at the stated bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    /// Points checked: a window 1..=N for closure checks, a sample size for
    /// the openness checks.
    pub checked_window: u64,
    /// Search bound: the cover prime bound for closure checks, the basic
    /// open bound or step bound for the openness checks.
    pub cover_prime_bound: u64,
    pub discrepancies: Vec<Discrepancy>,
}

impl OracleVerdict {
    pub fn agrees(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

impl Serialize for OracleVerdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("OracleVerdict", 3)?;
        s.serialize_field("checked_window", &self.checked_window)?;
        s.serialize_field("cover_prime_bound", &self.cover_prime_bound)?;
        s.serialize_field("discrepancies", &self.discrepancies)?;
        s.end()
    }
}

/// Exact emptiness of `S ∩ sigma(n)` by scanning each residue class of S
/// over one full period of the values mod n, past every exception. Added
/// points are members by canonicality, so a coprime added point settles it
/// immediately.
fn meets_sigma_raw(s: &EPSet, n: u64) -> bool {
    for &a in s.added() {
        if gcd(a, n) == 1 {
            return true;
        }
    }
    let m = s.modulus();
    let steps = n / gcd(m, n) + s.max_exception() / m + 2;
    // Row-by-row across the classes, so an uncovered class surfaces after a
    // few rows instead of waiting behind a covered class's full period.
    for k in 0..steps {
        for &r in s.residues() {
            let x = if r == 0 { m } else { r } + k * m;
            if s.removed().binary_search(&x).is_ok() {
                continue;
            }
            if gcd(x, n) == 1 {
                return true;
            }
        }
    }
    false
}

/// The squarefree products of at most `max_factors` primes <= `prime_bound`,
/// paired with whether `S ∩ sigma(product)` is empty. Emptiness is inherited
/// upward along divisibility (sigma shrinks as primes are added), so only
/// divisibility-minimal empty products are scanned in full.
fn empty_cover_products(
    s: &EPSet,
    prime_bound: u64,
    max_factors: usize,
) -> Result<Vec<(u64, bool)>> {
    let ps: Vec<u64> = primes().take_while(|&p| p <= prime_bound).collect();
    let mut levels: Vec<Vec<(u64, usize)>> = vec![vec![(1, 0)]];
    for size in 1..=max_factors {
        let mut level = Vec::new();
        for &(product, next_idx) in &levels[size - 1] {
            for (offset, &p) in ps[next_idx..].iter().enumerate() {
                let n = product.checked_mul(p).ok_or(Error::Overflow {
                    context: "cover candidate product",
                })?;
                level.push((n, next_idx + offset + 1));
            }
        }
        levels.push(level);
    }

    let mut verdicts: HashMap<u64, bool> = HashMap::new();
    let mut out = Vec::new();
    for level in &levels {
        for &(n, _) in level {
            let inherited = ps
                .iter()
                .filter(|&&p| n % p == 0)
                .any(|&p| verdicts.get(&(n / p)).copied().unwrap_or(false));
            let empty = inherited || !meets_sigma_raw(s, n);
            verdicts.insert(n, empty);
            out.push((n, empty));
        }
    }
    Ok(out)
}

/// Cross-checks the engine closure of S over the window 1..=N against
/// separating basic opens built from at most `subset_size` primes up to
/// `prime_bound`.
pub fn oracle_closure_check(
    s: &EPSet,
    window: u64,
    prime_bound: u64,
    subset_size: usize,
) -> Result<OracleVerdict> {
    assert!(window >= 1 && prime_bound >= 2 && subset_size >= 1);
    let engine_closure = closure(s)?;
    let separators: Vec<u64> = empty_cover_products(s, prime_bound, subset_size)?
        .into_iter()
        .filter_map(|(n, empty)| empty.then_some(n))
        .collect();

    let mut discrepancies = Vec::new();
    for x in 1..=window {
        let engine_in = engine_closure.member(x);
        let separated = separators.iter().any(|&n| gcd(n, x) == 1);
        match (engine_in, separated) {
            (false, true) | (true, false) => {}
            (true, true) => discrepancies.push(Discrepancy {
                x,
                engine_says: true,
                oracle_says: OracleAnswer::Decided(false),
            }),
            (false, false) => discrepancies.push(Discrepancy {
                x,
                engine_says: false,
                oracle_says: OracleAnswer::Inconclusive,
            }),
        }
    }
    Ok(OracleVerdict {
        checked_window: window,
        cover_prime_bound: prime_bound,
        discrepancies,
    })
}

/// Raw inclusion `sigma(n) ⊆ S`, decided by scanning one joint period past
/// every exception.
fn sigma_inside_raw(s: &EPSet, n: u64) -> bool {
    let m = s.modulus();
    let window = crate::arith::lcm_wide(n, m).saturating_add(s.max_exception() as u128);
    let mut y: u64 = 1;
    loop {
        if y as u128 > window {
            return true;
        }
        if gcd(y, n) == 1 && !s.member(y) {
            return false;
        }
        y += 1;
    }
}

/// Cross-checks engine openness on the first `sample` members of S: an open
/// set must yield, for every sampled x, some n <= n_bound with x in
/// sigma(n) ⊆ S; a non-open verdict needs at least one sampled member whose
/// search exhausts.
pub fn oracle_open_check(s: &EPSet, sample: usize, n_bound: u64) -> Result<OracleVerdict> {
    let engine_open = is_open(s)?;
    let points = s.enumerate(sample);
    let mut inclusion_memo: HashMap<u64, bool> = HashMap::new();
    let mut inside = |n: u64| -> bool {
        *inclusion_memo
            .entry(n)
            .or_insert_with(|| sigma_inside_raw(s, n))
    };

    let mut discrepancies = Vec::new();
    let mut refuted = false;
    for &x in &points {
        let witnessed = (1..=n_bound).any(|n| gcd(n, x) == 1 && inside(n));
        if witnessed {
            continue;
        }
        if engine_open {
            discrepancies.push(Discrepancy {
                x,
                engine_says: true,
                oracle_says: OracleAnswer::Inconclusive,
            });
        } else {
            refuted = true;
            break;
        }
    }
    if !engine_open && !refuted && !points.is_empty() {
        // Every sampled member has a basic neighborhood inside S; the
        // non-open verdict is unsupported at this sample and bound.
        discrepancies.push(Discrepancy {
            x: points[0],
            engine_says: false,
            oracle_says: OracleAnswer::Inconclusive,
        });
    }
    Ok(OracleVerdict {
        checked_window: sample as u64,
        cover_prime_bound: n_bound,
        discrepancies,
    })
}

/// Does the progression x, x+b, x+2b, ... stay inside S? Checked over one
/// full residue cycle past every exception.
fn progression_stays_raw(s: &EPSet, x: u64, b: u64) -> bool {
    let m = s.modulus();
    let k_max = m / gcd(b, m) + s.max_exception() / b + 2;
    let mut y = x;
    for _ in 0..=k_max {
        if !s.member(y) {
            return false;
        }
        y = match y.checked_add(b) {
            Some(v) => v,
            None => return false,
        };
    }
    true
}

/// Cross-checks engine Golomb-openness on the first `sample` members of S
/// by searching progression steps b <= b_bound with gcd(b, x) = 1.
pub fn oracle_golomb_check(s: &EPSet, sample: usize, b_bound: u64) -> OracleVerdict {
    let engine_open = is_golomb_open(s);
    let points = s.enumerate(sample);
    let mut discrepancies = Vec::new();
    let mut refuted = false;
    for &x in &points {
        let witnessed = (1..=b_bound).any(|b| gcd(b, x) == 1 && progression_stays_raw(s, x, b));
        if witnessed {
            continue;
        }
        if engine_open {
            discrepancies.push(Discrepancy {
                x,
                engine_says: true,
                oracle_says: OracleAnswer::Inconclusive,
            });
        } else {
            refuted = true;
            break;
        }
    }
    if !engine_open && !refuted && !points.is_empty() {
        discrepancies.push(Discrepancy {
            x: points[0],
            engine_says: false,
            oracle_says: OracleAnswer::Inconclusive,
        });
    }
    OracleVerdict {
        checked_window: sample as u64,
        cover_prime_bound: b_bound,
        discrepancies,
    }
}

/// The committed validation corpus: 50 sets spanning every construction the
/// engine supports, all with cover primes <= 31 and at most five classes
/// plus added points, so the acceptance-level oracle bounds are conclusive.
pub fn curated_cases() -> Vec<(&'static str, EPSet)> {
    fn periodic(m: u64, rs: &[u64]) -> EPSet {
        EPSet::periodic(m, rs.iter().copied()).unwrap()
    }
    fn raw(m: u64, rs: &[u64], add: &[u64], rem: &[u64]) -> EPSet {
        EPSet::new(m, rs.iter().copied(), add.iter().copied(), rem.iter().copied()).unwrap()
    }
    let multiples = |n: u64| EPSet::multiples(n).unwrap();
    let sig = |n: u64| sigma(n).unwrap();

    vec![
        ("universe", EPSet::universe()),
        ("universe-minus-one", raw(1, &[0], &[], &[1])),
        ("empty", EPSet::empty()),
        ("singleton-1", EPSet::finite([1]).unwrap()),
        ("singleton-2", EPSet::finite([2]).unwrap()),
        ("singleton-12", EPSet::finite([12]).unwrap()),
        ("singleton-30", EPSet::finite([30]).unwrap()),
        ("finite-4-9", EPSet::finite([4, 9]).unwrap()),
        ("multiples-2", multiples(2)),
        ("multiples-3", multiples(3)),
        ("multiples-5", multiples(5)),
        ("multiples-7", multiples(7)),
        ("multiples-6", multiples(6)),
        ("multiples-10", multiples(10)),
        ("multiples-30", multiples(30)),
        ("multiples-4", multiples(4)),
        ("sigma-2", sig(2)),
        ("sigma-3", sig(3)),
        ("sigma-6", sig(6)),
        ("sigma-10", sig(10)),
        ("sigma-12", sig(12)),
        ("sigma-30", sig(30)),
        ("odds-plus-2", raw(2, &[1], &[2], &[])),
        ("evens-minus-2", raw(2, &[0], &[], &[2])),
        ("class-1-mod-4", periodic(4, &[1])),
        ("class-3-mod-4", periodic(4, &[3])),
        ("golomb-1-4", golomb_basic(1, 4).unwrap()),
        ("golomb-7-3", golomb_basic(7, 3).unwrap()),
        ("golomb-5-6", golomb_basic(5, 6).unwrap()),
        ("golomb-11-2", golomb_basic(11, 2).unwrap()),
        (
            "m2-union-m3",
            multiples(2).union(&multiples(3)).unwrap(),
        ),
        ("evens-coprime-3", periodic(6, &[2, 4])),
        ("odd-multiples-of-3", periodic(6, &[3])),
        ("m6-union-35", raw(6, &[0], &[35], &[])),
        ("sigma6-minus-7", raw(6, &[1, 5], &[], &[7])),
        ("sigma6-plus-6", raw(6, &[1, 5], &[6], &[])),
        ("complement-sigma6", sig(6).complement()),
        ("m5-plus-1", raw(5, &[0], &[1], &[])),
        ("m5-minus-5", raw(5, &[0], &[], &[5])),
        ("mixed-12", periodic(12, &[2, 3, 8])),
        ("units-12", periodic(12, &[1, 5])),
        ("span-30", periodic(30, &[6, 10, 15])),
        ("class-4-mod-8", periodic(8, &[4])),
        ("thirds-of-9", periodic(9, &[3, 6])),
        ("adds-4-25", raw(6, &[3], &[4, 25], &[])),
        ("prime-powers", EPSet::finite([8, 9, 25]).unwrap()),
        ("class-2-mod-5", periodic(5, &[2])),
        ("class-5-mod-10", periodic(10, &[5])),
        ("m12-plus-7", raw(12, &[0], &[7], &[])),
        ("units-30-minus-1", raw(30, &[1, 7, 11, 13, 17, 19, 23, 29], &[], &[1])),
    ]
}
