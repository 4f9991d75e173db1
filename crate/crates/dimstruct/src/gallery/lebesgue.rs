//! Length and area structures on bounded sets: the measurement at level n
//! is the Lebesgue mass inside the unit cell starting at n, provided nothing
//! of positive mass lives above that cell; otherwise it is infinite. Sets
//! are finite unions of half-open rational intervals (resp. axis-aligned
//! rectangles), so all masses are exact rationals.

use num::{BigRational, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::extval::ExtVal;
use crate::poset::FinitePoset;
use crate::structure::{DimensionStructure, StructureData};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Finite union of half-open intervals [a, b), kept sorted, merged and
/// positive-length.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntervalSet {
    intervals: Vec<(BigRational, BigRational)>,
}

impl IntervalSet {
    /// Normalizes: drops empty pieces, sorts, merges overlaps and abutments.
    pub fn new(pieces: &[(BigRational, BigRational)]) -> IntervalSet {
        let mut sorted: Vec<_> = pieces.iter().filter(|(a, b)| a < b).cloned().collect();
        sorted.sort();
        let mut intervals: Vec<(BigRational, BigRational)> = Vec::new();
        for (a, b) in sorted {
            match intervals.last_mut() {
                Some((_, hi)) if a <= *hi => {
                    if b > *hi {
                        *hi = b;
                    }
                }
                _ => intervals.push((a, b)),
            }
        }
        IntervalSet { intervals }
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Total length.
    pub fn measure(&self) -> BigRational {
        self.intervals
            .iter()
            .map(|(a, b)| b - a)
            .fold(BigRational::zero(), |acc, l| acc + l)
    }

    fn sup(&self) -> Option<&BigRational> {
        self.intervals.last().map(|(_, b)| b)
    }

    /// Length of the overlap with [lo, hi).
    fn measure_in(&self, lo: &BigRational, hi: &BigRational) -> BigRational {
        self.intervals
            .iter()
            .map(|(a, b)| {
                let l = a.max(lo);
                let r = b.min(hi);
                if l < r {
                    r - l
                } else {
                    BigRational::zero()
                }
            })
            .fold(BigRational::zero(), |acc, l| acc + l)
    }
}

/// Mass inside [n, n+1), infinite while positive mass remains above n+1.
pub fn leb_mu(h: &IntervalSet, n: i64) -> ExtVal {
    match h.sup() {
        Some(b) if *b > rat(n + 1) => ExtVal::Inf,
        _ => ExtVal::from_ratio(h.measure_in(&rat(n), &rat(n + 1)))
            .expect("interval lengths are nonnegative"),
    }
}

/// Level where the mass is finitely measured: the least n with nothing above
/// n+1, i.e. ⌈sup − 1⌉. None for a measure-zero set (every level vanishes).
pub fn leb_dim(h: &IntervalSet) -> Option<i64> {
    h.sup().map(|b| {
        (b - rat(1))
            .ceil()
            .to_integer()
            .to_i64()
            .expect("interval bounds fit in i64 windows")
    })
}

/// Finite union of pairwise disjoint half-open rectangles [a,b)×[c,d).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RectSet {
    rects: Vec<((BigRational, BigRational), (BigRational, BigRational))>,
}

impl RectSet {
    pub fn new(
        rects: &[((BigRational, BigRational), (BigRational, BigRational))],
    ) -> Result<RectSet> {
        let rects: Vec<_> = rects
            .iter()
            .filter(|((a, b), (c, d))| a < b && c < d)
            .cloned()
            .collect();
        for (i, ((a1, b1), (c1, d1))) in rects.iter().enumerate() {
            for ((a2, b2), (c2, d2)) in rects.iter().skip(i + 1) {
                if a1.max(a2) < b1.min(b2) && c1.max(c2) < d1.min(d2) {
                    return Err(Error::Disjointness(format!(
                        "rectangles [{a1},{b1})x[{c1},{d1}) and [{a2},{b2})x[{c2},{d2}) overlap"
                    )));
                }
            }
        }
        Ok(RectSet { rects })
    }

    pub fn measure(&self) -> BigRational {
        self.rects
            .iter()
            .map(|((a, b), (c, d))| (b - a) * (d - c))
            .fold(BigRational::zero(), |acc, m| acc + m)
    }

    fn sups(&self) -> Option<(BigRational, BigRational)> {
        if self.rects.is_empty() {
            return None;
        }
        let bx = self.rects.iter().map(|((_, b), _)| b).max().unwrap();
        let by = self.rects.iter().map(|(_, (_, d))| d).max().unwrap();
        Some((bx.clone(), by.clone()))
    }

    /// Area overlapping [n,n+1) × [m,m+1).
    fn measure_in_cell(&self, n: i64, m: i64) -> BigRational {
        self.rects
            .iter()
            .map(|((a, b), (c, d))| {
                let w = b.min(&rat(n + 1)) - a.max(&rat(n));
                let h = d.min(&rat(m + 1)) - c.max(&rat(m));
                if w > BigRational::zero() && h > BigRational::zero() {
                    w * h
                } else {
                    BigRational::zero()
                }
            })
            .fold(BigRational::zero(), |acc, m| acc + m)
    }
}

/// Planar version over the coordinatewise order on ℤ²: infinite while
/// positive area lies right of n+1 or above m+1.
pub fn pleb_mu(h: &RectSet, n: i64, m: i64) -> ExtVal {
    match h.sups() {
        Some((bx, by)) if bx > rat(n + 1) || by > rat(m + 1) => ExtVal::Inf,
        _ => ExtVal::from_ratio(h.measure_in_cell(n, m)).expect("areas are nonnegative"),
    }
}

pub fn pleb_dim(h: &RectSet) -> Option<(i64, i64)> {
    h.sups().map(|(bx, by)| {
        let f = |b: BigRational| {
            (b - rat(1))
                .ceil()
                .to_integer()
                .to_i64()
                .expect("rectangle bounds fit in i64 windows")
        };
        (f(bx), f(by))
    })
}

/// Samples interval sets over an integer window chain.
pub fn sample_finite(
    sets: &[(String, IntervalSet)],
    window: std::ops::RangeInclusive<i64>,
) -> Result<DimensionStructure> {
    let poset = FinitePoset::chain(window.clone().map(|n| n.to_string()).collect());
    let mu = sets
        .iter()
        .map(|(_, h)| window.clone().map(|n| leb_mu(h, n)).collect())
        .collect();
    DimensionStructure::validate(StructureData {
        poset,
        points: sets.iter().map(|(name, _)| name.clone()).collect(),
        mu,
    })
}

/// Samples rectangle sets over the product of two integer window chains.
pub fn sample_finite_planar(
    sets: &[(String, RectSet)],
    window: std::ops::RangeInclusive<i64>,
) -> Result<DimensionStructure> {
    let names: Vec<String> = window.clone().map(|n| n.to_string()).collect();
    let chain = FinitePoset::chain(names);
    let poset = chain.product(&chain);
    let cells: Vec<(i64, i64)> = window
        .clone()
        .flat_map(|n| window.clone().map(move |m| (n, m)))
        .collect();
    let mu = sets
        .iter()
        .map(|(_, h)| cells.iter().map(|&(n, m)| pleb_mu(h, n, m)).collect())
        .collect();
    DimensionStructure::validate(StructureData {
        poset,
        points: sets.iter().map(|(name, _)| name.clone()).collect(),
        mu,
    })
}
