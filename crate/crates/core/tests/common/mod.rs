//! Shared helpers for the integration suites: a small deterministic RNG and
//! eventually-periodic-set generators with bounded prime content, so that
//! every derived closure stays comfortably inside the exact-representation
//! limit and the fixed oracle bounds are conclusive.
#![allow(dead_code)]

use coprime_topology::arith::gcd;
use coprime_topology::EPSet;

/// SplitMix64; deterministic across runs so suite outcomes are stable.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(seed)
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

/// A random eventually periodic set: modulus up to 60, up to two added
/// points below 24 and two removed points below 96. Half the draws keep
/// only non-unit classes so the non-dense closure paths get real coverage.
pub fn random_epset(rng: &mut Rng) -> EPSet {
    let m = rng.below(60) + 1;
    let fill = rng.below(101);
    let mut residues: Vec<u64> = (0..m).filter(|_| rng.below(100) < fill).collect();
    if rng.below(2) == 0 {
        residues.retain(|&r| r == 0 || gcd(r, m) > 1);
    }
    let added: Vec<u64> = (0..rng.below(3)).map(|_| rng.below(24) + 1).collect();
    let removed: Vec<u64> = (0..rng.below(3)).map(|_| rng.below(96) + 1).collect();
    EPSet::new(m, residues, added, removed).expect("generator stays in range")
}

pub fn random_nonempty_epset(rng: &mut Rng) -> EPSet {
    loop {
        let s = random_epset(rng);
        if !s.is_empty() {
            return s;
        }
    }
}

/// A smaller shape (modulus up to 12, at most one removal) whose members
/// expose every residue class within the first thirty elements; used by the
/// sampled-soundness suites where the sample size is pinned.
pub fn random_small_epset(rng: &mut Rng) -> EPSet {
    let m = rng.below(12) + 1;
    let fill = rng.below(101);
    let residues: Vec<u64> = (0..m).filter(|_| rng.below(100) < fill).collect();
    let added: Vec<u64> = (0..rng.below(3)).map(|_| rng.below(24) + 1).collect();
    let removed: Vec<u64> = (0..rng.below(2)).map(|_| rng.below(24) + 1).collect();
    EPSet::new(m, residues, added, removed).expect("generator stays in range")
}

/// Enough leading elements to reach every value up to one joint period of
/// the set and its exception radicals past the largest exception; boundary
/// points of non-open sets live inside that horizon.
pub fn covering_sample(s: &EPSet) -> usize {
    let horizon = s.modulus() * (s.max_exception() + 2) + s.max_exception() + 10;
    horizon as usize
}
