//! Compact countable sets measured by iterated accumulation: a set is
//! represented by its signature, the count of canonical building blocks per
//! rank, where the rank-r block is a point at r = 0 and, above that, a
//! convergent arrangement of rank r-1 blocks. Everything about the measures
//! depends only on the signature.

use std::collections::BTreeMap;

use num::{BigInt, BigRational};

use crate::error::Result;
use crate::extval::ExtVal;
use crate::poset::{DimValue, FinitePoset};
use crate::structure::{DimensionStructure, StructureData};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankedSet {
    /// rank -> number of disjoint canonical blocks of that rank; zero
    /// counts are not stored.
    pub counts: BTreeMap<u32, u64>,
}

impl RankedSet {
    pub fn new(pairs: &[(u32, u64)]) -> RankedSet {
        let mut counts = BTreeMap::new();
        for &(r, c) in pairs {
            if c > 0 {
                *counts.entry(r).or_insert(0) += c;
            }
        }
        RankedSet { counts }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    fn max_rank(&self) -> Option<u32> {
        self.counts.keys().next_back().copied()
    }
}

/// Count of points surviving n accumulation steps: infinite while any block
/// of rank above n remains, the block count at rank n otherwise.
pub fn ranked_mu(h: &RankedSet, n: u32) -> ExtVal {
    match h.max_rank() {
        Some(r) if r > n => ExtVal::Inf,
        Some(r) if r == n => {
            ExtVal::Fin(BigRational::from(BigInt::from(h.counts[&n])))
        }
        _ => ExtVal::Zero,
    }
}

/// The empty set keeps the zero signature: every measurement is 0 and the
/// dimension collapses to rank 0.
pub fn ranked_dim(h: &RankedSet) -> DimValue {
    DimValue::Element(h.max_rank().unwrap_or(0).to_string())
}

/// Disjoint union; accumulation distributes over it, so signatures add.
pub fn ranked_union(a: &RankedSet, b: &RankedSet) -> RankedSet {
    let mut out = a.clone();
    for (&r, &c) in &b.counts {
        *out.counts.entry(r).or_insert(0) += c;
    }
    // finite synchronization: the union's dimension is the larger one
    debug_assert_eq!(
        out.max_rank().unwrap_or(0),
        a.max_rank().unwrap_or(0).max(b.max_rank().unwrap_or(0))
    );
    out
}

/// Independent oracle: one accumulation step sends every rank-r block to a
/// single rank r-1 block and erases points. n-fold stepping then counting
/// must agree with `ranked_mu`.
pub fn derived_step(h: &RankedSet) -> RankedSet {
    let mut counts = BTreeMap::new();
    for (&r, &c) in &h.counts {
        if r > 0 {
            *counts.entry(r - 1).or_insert(0) += c;
        }
    }
    RankedSet { counts }
}

pub fn oracle_mu(h: &RankedSet, n: u32) -> ExtVal {
    let mut cur = h.clone();
    for _ in 0..n {
        cur = derived_step(&cur);
    }
    // finite exactly when nothing of positive rank remains
    if cur.counts.keys().any(|&r| r > 0) {
        ExtVal::Inf
    } else {
        match cur.counts.get(&0) {
            Some(&c) => ExtVal::Fin(BigRational::from(BigInt::from(c))),
            None => ExtVal::Zero,
        }
    }
}

/// Samples signatures over the rank window 0..=max_rank as a finite
/// structure on a chain of positions.
pub fn sample_finite(sets: &[(String, RankedSet)], max_rank: u32) -> Result<DimensionStructure> {
    let poset = FinitePoset::chain((0..=max_rank).map(|n| n.to_string()).collect());
    let mu = sets
        .iter()
        .map(|(_, h)| (0..=max_rank).map(|n| ranked_mu(h, n)).collect())
        .collect();
    DimensionStructure::validate(StructureData {
        poset,
        points: sets.iter().map(|(name, _)| name.clone()).collect(),
        mu,
    })
}
