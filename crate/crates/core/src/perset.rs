//! Exact algebra of eventually periodic subsets of the positive integers.
//!
//! Every set handled by the engine is a finite union of residue classes
//! modulo some m, adjusted by finitely many added or removed elements:
//!
//! ```text
//! S = (Periodic(m, R) ∪ A) \ B    where Periodic(m, R) = { x >= 1 : x mod m ∈ R }
//! ```
//!
//! Values are kept in a canonical form, so structural equality coincides
//! with set equality:
//!
//! * m is the minimal period of the tail of S (no prime divisor of m admits
//!   a consistent residue folding);
//! * A is disjoint from the periodic part and B is contained in it, so both
//!   exception sets are genuine and minimal.
//!
//! All operations return new values; nothing mutates in place.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, gcd, lcm_wide};
use crate::error::{Error, Result};

/// Largest modulus an [`EPSet`] may take after any operation.
///
/// The canonical representation materializes one residue per class, so the
/// modulus bounds both memory and the cost of a Boolean combination. The
/// limit comfortably covers desk-scale work; anything past it is reported
/// as a range error rather than attempted.
pub const MODULUS_LIMIT: u64 = 1 << 22;

/// An eventually periodic subset of the positive integers, in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct EPSet {
    #[serde(rename = "m")]
    modulus: u64,
    residues: Vec<u64>,
    added: Vec<u64>,
    removed: Vec<u64>,
}

impl<'de> Deserialize<'de> for EPSet {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            m: u64,
            residues: Vec<u64>,
            added: Vec<u64>,
            removed: Vec<u64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        EPSet::new(raw.m, raw.residues, raw.added, raw.removed).map_err(serde::de::Error::custom)
    }
}

impl EPSet {
    /// Builds the set `(Periodic(modulus, residues) ∪ added) \ removed` and
    /// canonicalizes it. Residues must lie in `0..modulus`; every explicit
    /// element must be positive.
    pub fn new(
        modulus: u64,
        residues: impl IntoIterator<Item = u64>,
        added: impl IntoIterator<Item = u64>,
        removed: impl IntoIterator<Item = u64>,
    ) -> Result<EPSet> {
        if modulus == 0 {
            return Err(Error::Zero);
        }
        if modulus > MODULUS_LIMIT {
            return Err(Error::ModulusTooLarge {
                required: modulus as u128,
                limit: MODULUS_LIMIT,
            });
        }
        let mut res: Vec<u64> = residues.into_iter().collect();
        res.sort_unstable();
        res.dedup();
        if let Some(&r) = res.iter().find(|&&r| r >= modulus) {
            return Err(Error::ResidueOutOfRange {
                residue: r,
                modulus,
            });
        }
        let mut add: Vec<u64> = added.into_iter().collect();
        let mut rem: Vec<u64> = removed.into_iter().collect();
        if add.iter().chain(rem.iter()).any(|&x| x == 0) {
            return Err(Error::Zero);
        }
        add.sort_unstable();
        add.dedup();
        rem.sort_unstable();
        rem.dedup();

        // Exceptions relative to the periodic part: removals only count when
        // they hit it, additions only when they fall outside it and survive
        // every removal.
        let in_periodic = |x: u64| res.binary_search(&(x % modulus)).is_ok();
        let effective_removed: Vec<u64> = rem.iter().copied().filter(|&x| in_periodic(x)).collect();
        let effective_added: Vec<u64> = add
            .iter()
            .copied()
            .filter(|&x| rem.binary_search(&x).is_err() && !in_periodic(x))
            .collect();

        let (modulus, residues) = fold_minimal(modulus, res);
        Ok(EPSet {
            modulus,
            residues,
            added: effective_added,
            removed: effective_removed,
        })
    }

    /// `{ x >= 1 : x mod m ∈ residues }`.
    pub fn periodic(modulus: u64, residues: impl IntoIterator<Item = u64>) -> Result<EPSet> {
        EPSet::new(modulus, residues, [], [])
    }

    /// A finite set given by its elements.
    pub fn finite(elems: impl IntoIterator<Item = u64>) -> Result<EPSet> {
        EPSet::new(1, [], elems, [])
    }

    /// The positive multiples of n.
    pub fn multiples(n: u64) -> Result<EPSet> {
        if n == 0 {
            return Err(Error::Zero);
        }
        EPSet::new(n, [0], [], [])
    }

    /// The whole space of positive integers.
    pub fn universe() -> EPSet {
        EPSet {
            modulus: 1,
            residues: vec![0],
            added: vec![],
            removed: vec![],
        }
    }

    /// The empty set.
    pub fn empty() -> EPSet {
        EPSet {
            modulus: 1,
            residues: vec![],
            added: vec![],
            removed: vec![],
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn added(&self) -> &[u64] {
        &self.added
    }

    pub fn removed(&self) -> &[u64] {
        &self.removed
    }

    /// Largest exceptional element, or 0 when there is none. Beyond this
    /// point the set is exactly periodic.
    pub fn max_exception(&self) -> u64 {
        self.added
            .last()
            .copied()
            .max(self.removed.last().copied())
            .unwrap_or(0)
    }

    /// Membership of a positive integer.
    pub fn member(&self, x: u64) -> bool {
        assert!(x >= 1, "EPSet membership is defined on positive integers");
        if self.removed.binary_search(&x).is_ok() {
            return false;
        }
        if self.added.binary_search(&x).is_ok() {
            return true;
        }
        self.residues.binary_search(&(x % self.modulus)).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty() && self.added.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.residues.is_empty()
    }

    /// Complement within the positive integers. An involution.
    pub fn complement(&self) -> EPSet {
        let residues: Vec<u64> = (0..self.modulus)
            .filter(|r| self.residues.binary_search(r).is_err())
            .collect();
        // Folding consistency is preserved under complement and the old
        // exceptions swap roles, so this is already canonical.
        EPSet {
            modulus: self.modulus,
            residues,
            added: self.removed.clone(),
            removed: self.added.clone(),
        }
    }

    pub fn intersect(&self, other: &EPSet) -> Result<EPSet> {
        self.combine(other, |a, b| a && b)
    }

    pub fn union(&self, other: &EPSet) -> Result<EPSet> {
        self.combine(other, |a, b| a || b)
    }

    pub fn difference(&self, other: &EPSet) -> Result<EPSet> {
        self.combine(other, |a, b| a && !b)
    }

    /// Pointwise Boolean combination at the joint modulus.
    fn combine(&self, other: &EPSet, f: impl Fn(bool, bool) -> bool) -> Result<EPSet> {
        let wide = lcm_wide(self.modulus, other.modulus);
        if wide > MODULUS_LIMIT as u128 {
            return Err(Error::ModulusTooLarge {
                required: wide,
                limit: MODULUS_LIMIT,
            });
        }
        let joint = wide as u64;
        let mask_a = residue_mask(self.modulus, &self.residues);
        let mask_b = residue_mask(other.modulus, &other.residues);
        let periodic = |x: u64| {
            f(
                mask_a[(x % self.modulus) as usize],
                mask_b[(x % other.modulus) as usize],
            )
        };
        let residues: Vec<u64> = (0..joint).filter(|&r| f(mask_a[(r % self.modulus) as usize], mask_b[(r % other.modulus) as usize])).collect();

        // Away from both sides' exceptions, membership follows the periodic
        // parts, so only those finitely many points can deviate.
        let mut added = Vec::new();
        let mut removed = Vec::new();
        let hotspots: BTreeSet<u64> = self
            .added
            .iter()
            .chain(self.removed.iter())
            .chain(other.added.iter())
            .chain(other.removed.iter())
            .copied()
            .collect();
        for x in hotspots {
            let actual = f(self.member(x), other.member(x));
            if actual != periodic(x) {
                if actual {
                    added.push(x);
                } else {
                    removed.push(x);
                }
            }
        }

        let (modulus, residues) = fold_minimal(joint, residues);
        Ok(EPSet {
            modulus,
            residues,
            added,
            removed,
        })
    }

    /// Ascending elements; infinite unless the set is finite.
    pub fn iter(&self) -> Elements<'_> {
        Elements {
            set: self,
            block: 0,
            residue_idx: 0,
            added_idx: 0,
            done: self.residues.is_empty(),
        }
    }

    /// The k smallest elements (fewer if the set has fewer).
    pub fn enumerate(&self, k: usize) -> Vec<u64> {
        self.iter().take(k).collect()
    }

    /// Share of residues per period, as a reduced fraction. Finitely many
    /// exceptions never move the density.
    pub fn natural_density(&self) -> Fraction {
        Fraction::new(self.residues.len() as u64, self.modulus)
    }
}

fn residue_mask(modulus: u64, residues: &[u64]) -> Vec<bool> {
    let mut mask = vec![false; modulus as usize];
    for &r in residues {
        mask[r as usize] = true;
    }
    mask
}

/// Folds (m, R) down to the minimal period: repeatedly divide m by any prime
/// p whose fibers are intact, i.e. every residue class mod m/p is either
/// fully inside R or fully outside it.
fn fold_minimal(mut modulus: u64, mut residues: Vec<u64>) -> (u64, Vec<u64>) {
    if residues.is_empty() {
        return (1, residues);
    }
    'fold: loop {
        for p in factorize(modulus).primes() {
            let shrunk = modulus / p;
            if residues.len() as u64 % p != 0 {
                continue;
            }
            let whole_fiber = residues.iter().all(|&r| {
                let base = r % shrunk;
                (0..p).all(|k| residues.binary_search(&(base + k * shrunk)).is_ok())
            });
            if whole_fiber {
                let mut folded: Vec<u64> = residues.iter().map(|&r| r % shrunk).collect();
                folded.sort_unstable();
                folded.dedup();
                modulus = shrunk;
                residues = folded;
                continue 'fold;
            }
        }
        return (modulus, residues);
    }
}

/// Iterator over the elements of an [`EPSet`] in ascending order.
pub struct Elements<'a> {
    set: &'a EPSet,
    block: u64,
    residue_idx: usize,
    added_idx: usize,
    done: bool,
}

impl Elements<'_> {
    fn next_periodic(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        loop {
            if self.residue_idx == self.set.residues.len() {
                self.residue_idx = 0;
                match self.block.checked_add(self.set.modulus) {
                    Some(b) => self.block = b,
                    None => {
                        self.done = true;
                        return None;
                    }
                }
            }
            let candidate = match self.block.checked_add(self.set.residues[self.residue_idx]) {
                Some(c) => c,
                None => {
                    self.done = true;
                    return None;
                }
            };
            self.residue_idx += 1;
            if candidate == 0 {
                continue;
            }
            if self.set.removed.binary_search(&candidate).is_ok() {
                continue;
            }
            return Some(candidate);
        }
    }

    fn peek_periodic(&self) -> Option<u64> {
        let mut probe = Elements {
            set: self.set,
            block: self.block,
            residue_idx: self.residue_idx,
            added_idx: self.added_idx,
            done: self.done,
        };
        probe.next_periodic()
    }
}

impl Iterator for Elements<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let added = self.set.added.get(self.added_idx).copied();
        match (self.peek_periodic(), added) {
            (Some(p), Some(a)) if a < p => {
                self.added_idx += 1;
                Some(a)
            }
            (Some(_), _) => self.next_periodic(),
            (None, Some(a)) => {
                self.added_idx += 1;
                Some(a)
            }
            (None, None) => None,
        }
    }
}

/// A reduced nonnegative fraction, used for density reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Fraction {
        assert!(den > 0, "fraction denominator must be positive");
        if num == 0 {
            return Fraction { num: 0, den: 1 };
        }
        let g = gcd(num, den);
        Fraction {
            num: num / g,
            den: den / g,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Display for EPSet {
    /// Canonical rendering: `Periodic(m; r1,r2,...) + {adds} - {removes}`,
    /// with the purely finite cases written as plain element sets.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, xs: &[u64]) -> fmt::Result {
            write!(f, "{{")?;
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "}}")
        }

        if self.residues.is_empty() {
            return list(f, &self.added);
        }
        write!(f, "Periodic({}; ", self.modulus)?;
        for (i, r) in self.residues.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")?;
        if !self.added.is_empty() {
            write!(f, " + ")?;
            list(f, &self.added)?;
        }
        if !self.removed.is_empty() {
            write!(f, " - ")?;
            list(f, &self.removed)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn periodic(m: u64, rs: &[u64]) -> EPSet {
        EPSet::periodic(m, rs.iter().copied()).unwrap()
    }

    /// Membership scan over a provably sufficient window: one full joint
    /// period past every exception decides equality of eventually periodic
    /// sets. This is the independent equality oracle.
    fn window_equal(a: &EPSet, b: &EPSet) -> bool {
        let window = lcm_wide(a.modulus(), b.modulus()) as u64
            + a.max_exception().max(b.max_exception())
            + 1;
        (1..=window).all(|x| a.member(x) == b.member(x))
    }

    #[test]
    fn make_periodic_examples() {
        let m5 = EPSet::multiples(5).unwrap();
        assert_eq!(m5, periodic(5, &[0]));
        assert!(m5.member(10));
        assert!(!m5.member(11));

        assert_eq!(periodic(1, &[0]), EPSet::universe());

        // Both encodings of the odd numbers canonicalize identically.
        let odds = periodic(4, &[1, 3]);
        assert_eq!(odds.modulus(), 2);
        assert_eq!(odds.residues(), &[1]);
        assert_eq!(odds, periodic(2, &[1]));
    }

    #[test]
    fn make_periodic_rejects_bad_residue() {
        assert_eq!(
            EPSet::periodic(4, [4]),
            Err(Error::ResidueOutOfRange {
                residue: 4,
                modulus: 4
            })
        );
    }

    #[test]
    fn finite_sets() {
        let single = EPSet::finite([12]).unwrap();
        assert!(single.member(12));
        assert!(!single.member(6));
        assert!(single.is_finite() && !single.is_empty());

        let empty = EPSet::finite([]).unwrap();
        assert!(empty.is_empty());
        assert_eq!(empty, EPSet::empty());

        let pair = EPSet::finite([9, 4]).unwrap();
        assert_eq!(pair.enumerate(5), vec![4, 9]);
    }

    #[test]
    fn membership_examples() {
        // sigma(12) is the set of integers coprime to 12.
        let units: Vec<u64> = (1..12).filter(|&r| gcd_u(r, 12) == 1).collect();
        let sigma12 = periodic(12, &units);
        assert!(sigma12.member(35));

        let m6 = EPSet::multiples(6).unwrap();
        assert!(!m6.member(15));

        let n1 = EPSet::new(1, [0], [], [1]).unwrap();
        assert!(!n1.member(1));
        assert!(n1.member(2));
    }

    fn gcd_u(a: u64, b: u64) -> u64 {
        crate::arith::gcd(a, b)
    }

    #[test]
    fn complement_examples() {
        let evens = EPSet::multiples(2).unwrap();
        let odds = evens.complement();
        assert_eq!(odds, periodic(2, &[1]));

        assert_eq!(EPSet::universe().complement(), EPSet::empty());

        let n1 = EPSet::finite([1]).unwrap().complement();
        assert_eq!(n1, EPSet::new(1, [0], [], [1]).unwrap());
    }

    #[test]
    fn boolean_examples() {
        let sigma = |n: u64| {
            EPSet::periodic(n, (0..n).filter(|&r| gcd_u(if r == 0 { n } else { r }, n) == 1))
                .unwrap()
        };
        assert_eq!(sigma(2).intersect(&sigma(3)).unwrap(), sigma(6));

        let m2 = EPSet::multiples(2).unwrap();
        assert_eq!(m2.union(&m2.complement()).unwrap(), EPSet::universe());

        let n1 = EPSet::universe()
            .difference(&EPSet::finite([1]).unwrap())
            .unwrap();
        assert_eq!(n1, EPSet::new(1, [0], [], [1]).unwrap());

        assert!(m2.intersect(&m2.complement()).unwrap().is_empty());
        assert_ne!(m2, EPSet::multiples(4).unwrap());
    }

    #[test]
    fn combine_reports_modulus_overflow() {
        let a = periodic(4_000_037, &[1]);
        let b = periodic(3_999_971, &[1]);
        assert!(matches!(
            a.intersect(&b),
            Err(Error::ModulusTooLarge { .. })
        ));
    }

    #[test]
    fn enumerate_examples() {
        let sigma6 = periodic(6, &[1, 5]);
        assert_eq!(sigma6.enumerate(5), vec![1, 5, 7, 11, 13]);
        assert_eq!(EPSet::empty().enumerate(3), Vec::<u64>::new());
        assert_eq!(EPSet::multiples(5).unwrap().enumerate(3), vec![5, 10, 15]);

        // Exceptions interleave correctly.
        let s = EPSet::new(4, [1], [2, 6], [5]).unwrap();
        assert_eq!(s.enumerate(6), vec![1, 2, 6, 9, 13, 17]);
    }

    #[test]
    fn density_examples() {
        assert_eq!(periodic(6, &[1, 5]).natural_density(), Fraction::new(1, 3));
        assert_eq!(
            EPSet::multiples(7).unwrap().natural_density(),
            Fraction::new(1, 7)
        );
        assert!(EPSet::finite([4, 9]).unwrap().natural_density().is_zero());
        assert_eq!(EPSet::universe().natural_density().to_string(), "1");
        assert_eq!(periodic(6, &[1, 5]).natural_density().to_string(), "1/3");
    }

    #[test]
    fn display_forms() {
        assert_eq!(EPSet::universe().to_string(), "Periodic(1; 0)");
        assert_eq!(EPSet::empty().to_string(), "{}");
        assert_eq!(EPSet::multiples(6).unwrap().to_string(), "Periodic(6; 0)");
        assert_eq!(EPSet::finite([4, 9]).unwrap().to_string(), "{4,9}");
        let s = EPSet::new(4, [1], [2], [5]).unwrap();
        assert_eq!(s.to_string(), "Periodic(4; 1) + {2} - {5}");
    }

    #[test]
    fn serde_round_trip() {
        let s = EPSet::new(6, [1, 5], [4], [7]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(
            json,
            r#"{"m":6,"residues":[1,5],"added":[4],"removed":[7]}"#
        );
        let back: EPSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);

        // Deserialization canonicalizes raw shapes.
        let raw: EPSet = serde_json::from_str(r#"{"m":4,"residues":[1,3],"added":[],"removed":[]}"#).unwrap();
        assert_eq!(raw, periodic(2, &[1]));
    }

    fn ep_strategy() -> impl Strategy<Value = EPSet> {
        (
            1u64..=36,
            prop::collection::vec(0u64..36, 0..12),
            prop::collection::vec(1u64..=48, 0..3),
            prop::collection::vec(1u64..=96, 0..3),
        )
            .prop_map(|(m, rs, add, rem)| {
                let residues: Vec<u64> = rs.into_iter().map(|r| r % m).collect();
                EPSet::new(m, residues, add, rem).unwrap()
            })
    }

    proptest! {
        #[test]
        fn membership_homomorphism(a in ep_strategy(), b in ep_strategy()) {
            let inter = a.intersect(&b).unwrap();
            let uni = a.union(&b).unwrap();
            let diff = a.difference(&b).unwrap();
            let comp = a.complement();
            for x in 1..=10_000u64 {
                prop_assert_eq!(inter.member(x), a.member(x) && b.member(x));
                prop_assert_eq!(uni.member(x), a.member(x) || b.member(x));
                prop_assert_eq!(diff.member(x), a.member(x) && !b.member(x));
                prop_assert_eq!(comp.member(x), !a.member(x));
            }
        }

        #[test]
        fn equality_matches_window_oracle(a in ep_strategy(), b in ep_strategy()) {
            prop_assert_eq!(a == b, window_equal(&a, &b));
        }

        #[test]
        fn boolean_algebra_laws(a in ep_strategy(), b in ep_strategy(), c in ep_strategy()) {
            // De Morgan
            prop_assert_eq!(
                a.union(&b).unwrap().complement(),
                a.complement().intersect(&b.complement()).unwrap()
            );
            prop_assert_eq!(
                a.intersect(&b).unwrap().complement(),
                a.complement().union(&b.complement()).unwrap()
            );
            // Involution
            prop_assert_eq!(a.complement().complement(), a.clone());
            // Distributivity
            prop_assert_eq!(
                a.intersect(&b.union(&c).unwrap()).unwrap(),
                a.intersect(&b).unwrap().union(&a.intersect(&c).unwrap()).unwrap()
            );
            // Difference as relative complement
            prop_assert_eq!(
                a.difference(&b).unwrap(),
                a.intersect(&b.complement()).unwrap()
            );
        }

        #[test]
        fn representation_independence(a in ep_strategy(), k in 1u64..=6) {
            let m = a.modulus();
            let lifted_modulus = m * k;
            let lifted: Vec<u64> = a
                .residues()
                .iter()
                .flat_map(|&r| (0..k).map(move |i| r + i * m))
                .collect();
            let rebuilt = EPSet::new(
                lifted_modulus,
                lifted,
                a.added().iter().copied(),
                a.removed().iter().copied(),
            )
            .unwrap();
            prop_assert_eq!(rebuilt, a);
        }

        #[test]
        fn canonical_invariants(a in ep_strategy()) {
            for &x in a.added() {
                prop_assert!(a.residues().binary_search(&(x % a.modulus())).is_err());
            }
            for &x in a.removed() {
                prop_assert!(a.residues().binary_search(&(x % a.modulus())).is_ok());
            }
            // Enumeration ascends and matches membership.
            let elems = a.enumerate(40);
            for w in elems.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            for &e in &elems {
                prop_assert!(a.member(e));
            }
        }
    }

    #[test]
    fn finiteness_flags() {
        for n in 1..=100u64 {
            let sigma = EPSet::periodic(
                n,
                (0..n).filter(|&r| gcd_u(if r == 0 { n } else { r }, n) == 1),
            )
            .unwrap();
            assert!(!sigma.is_finite(), "sigma({n}) must be infinite");
        }
        let f = EPSet::finite([7]).unwrap();
        assert!(f.is_finite() && !f.is_empty());
        let odds = EPSet::multiples(2).unwrap().complement();
        assert!(EPSet::multiples(2)
            .unwrap()
            .intersect(&odds)
            .unwrap()
            .is_empty());
    }
}
