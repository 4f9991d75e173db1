//! Divergence-speed measurements for sequences of the closed symbolic form
//! c * f_m(n) * n^pow * (log n)^logexp, where f_0 = 1 and f_{m+1} = e^{f_m}.
//! Probes divide by f_k(n) * n^alpha; every lower/upper limit of the ratio
//! is decided by comparing (m, pow, logexp) with (k, alpha, 0)
//! lexicographically. Also the even/odd variant with the product order on
//! probe pairs.

use std::cmp::Ordering;

use num::{BigRational, ToPrimitive};

use crate::error::{Error, Result};
use crate::extval::ExtVal;
use crate::poset::{pair_name, FinitePoset};
use crate::structure::{DimensionStructure, StructureData};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthSeq {
    pub tower: u32,
    pub pow: BigRational,
    pub logexp: i32,
    pub coeff: BigRational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitKind {
    LimInf,
    LimSup,
}

impl GrowthSeq {
    pub fn new(tower: u32, pow: BigRational, logexp: i32, coeff: BigRational) -> Result<GrowthSeq> {
        if coeff <= BigRational::from_integer(0.into()) {
            return Err(Error::NegativeInput(format!("coefficient {coeff}")));
        }
        let zero = BigRational::from_integer(0.into());
        let diverges = tower > 0
            || pow > zero
            || (pow == zero && logexp > 0);
        if !diverges {
            return Err(Error::Shape(
                "sequence must tend to +inf: need (tower,pow,logexp) above (0,0,0)".into(),
            ));
        }
        Ok(GrowthSeq { tower, pow, logexp, coeff })
    }

    fn lex_cmp_probe(&self, k: u32, alpha: &BigRational) -> Ordering {
        self.tower
            .cmp(&k)
            .then_with(|| self.pow.cmp(alpha))
            .then_with(|| self.logexp.cmp(&0))
    }
}

/// Limit of c*f_m(n)*n^pow*log^logexp(n) / (f_k(n)*n^alpha). The symbolic
/// terms are eventually monotone, so the lower and upper limits coincide.
pub fn growth_measure(x: &GrowthSeq, k: u32, alpha: &BigRational, _kind: LimitKind) -> ExtVal {
    match x.lex_cmp_probe(k, alpha) {
        Ordering::Greater => ExtVal::Inf,
        Ordering::Less => ExtVal::Zero,
        Ordering::Equal => ExtVal::Fin(x.coeff.clone()),
    }
}

/// Symbolic dimension in the one-parameter probe family (alpha > 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaDim {
    /// No probe is finite: the term outgrows every power.
    AboveAll,
    /// Every probe is finite; the infimum 0 is outside the open index set.
    BelowAll,
    At { alpha: BigRational, mu: ExtVal },
}

pub fn growth_dim_alpha(x: &GrowthSeq) -> AlphaDim {
    let zero = BigRational::from_integer(0.into());
    if x.tower > 0 {
        return AlphaDim::AboveAll;
    }
    if x.pow == zero {
        // divergence forces logexp > 0 here; every alpha > 0 kills it
        return AlphaDim::BelowAll;
    }
    let mu = match x.logexp.cmp(&0) {
        Ordering::Greater => ExtVal::Inf,
        Ordering::Less => ExtVal::Zero,
        Ordering::Equal => ExtVal::Fin(x.coeff.clone()),
    };
    AlphaDim::At { alpha: x.pow.clone(), mu }
}

/// Dimension in the two-parameter family (k, alpha) with k a tower level
/// and alpha >= 0, ordered lexicographically.
pub fn growth_dim_tower(x: &GrowthSeq) -> (u32, BigRational, ExtVal) {
    let zero = BigRational::from_integer(0.into());
    if x.pow < zero || (x.pow == zero && x.logexp < 0) {
        // the ratio at (tower, 0) already vanishes
        return (x.tower, zero, ExtVal::Zero);
    }
    let mu = match x.logexp.cmp(&0) {
        Ordering::Greater => ExtVal::Inf,
        Ordering::Less => ExtVal::Zero,
        Ordering::Equal => ExtVal::Fin(x.coeff.clone()),
    };
    (x.tower, x.pow.clone(), mu)
}

/// Numeric oracle: the log of the probe ratio at huge n, classified by its
/// slope between two sample points. Independent of the symbolic rule.
pub fn numeric_probe(x: &GrowthSeq, k: u32, alpha: &BigRational) -> ExtVal {
    let lr = |ln_n: f64| -> f64 {
        // ln f_m(n): 0, n, e^n, ... saturating in f64
        let ln_f = |m: u32| -> f64 {
            let mut v: f64 = 0.0;
            for level in 0..m {
                v = if level == 0 { ln_n.exp() } else { v.exp() };
            }
            v
        };
        let beta = x.pow.to_f64().unwrap();
        let a = alpha.to_f64().unwrap();
        let c = x.coeff.to_f64().unwrap();
        // identical towers cancel exactly; different ones saturate cleanly
        let towers = if x.tower == k {
            0.0
        } else {
            ln_f(x.tower) - ln_f(k)
        };
        towers + (beta - a) * ln_n + f64::from(x.logexp) * ln_n.ln() + c.ln()
    };
    let (v1, v2) = (lr(150.0 * std::f64::consts::LN_10), lr(300.0 * std::f64::consts::LN_10));
    // saturated towers give v1 = v2 = +/-inf with a NaN slope
    if v2 > 700.0 {
        return ExtVal::Inf;
    }
    if v2 < -700.0 {
        return ExtVal::Zero;
    }
    let slope = v2 - v1;
    if slope > 0.3 {
        ExtVal::Inf
    } else if slope < -0.3 {
        ExtVal::Zero
    } else {
        ExtVal::Fin(BigRational::from_float(v2.exp()).unwrap())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenOddSeq {
    pub even: GrowthSeq,
    pub odd: GrowthSeq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineMode {
    Product,
    Min,
}

/// Lower limit along the evens at alpha, combined with the upper limit
/// along the odds at beta: infinite as soon as either half is.
pub fn evenodd_measure(
    x: &EvenOddSeq,
    alpha: &BigRational,
    beta: &BigRational,
    mode: CombineMode,
) -> ExtVal {
    let a = growth_measure(&x.even, 0, alpha, LimitKind::LimInf);
    let b = growth_measure(&x.odd, 0, beta, LimitKind::LimSup);
    if a.is_inf() || b.is_inf() {
        return ExtVal::Inf;
    }
    match mode {
        CombineMode::Product => a.mul(&b),
        CombineMode::Min => a.min_of(&b),
    }
}

/// Coordinatewise infimum of the finiteness rectangle; both halves must be
/// tower-free for the coordinates to be plain exponents.
pub fn evenodd_dim(x: &EvenOddSeq) -> Result<(BigRational, BigRational)> {
    if x.even.tower > 0 || x.odd.tower > 0 {
        return Err(Error::Precondition(
            "even/odd dimension needs tower-free components".into(),
        ));
    }
    Ok((x.even.pow.clone(), x.odd.pow.clone()))
}

/// Samples the even/odd family on a grid of probe pairs under the product
/// order.
pub fn sample_evenodd(
    seqs: &[(String, EvenOddSeq)],
    alphas: &[BigRational],
    betas: &[BigRational],
    mode: CombineMode,
) -> Result<DimensionStructure> {
    let axis = |vals: &[BigRational]| {
        let mut v = vals.to_vec();
        v.sort();
        FinitePoset::chain(v.iter().map(|q| q.to_string()).collect())
    };
    let poset = axis(alphas).product(&axis(betas));
    let mut sa = alphas.to_vec();
    sa.sort();
    let mut sb = betas.to_vec();
    sb.sort();
    let mu = seqs
        .iter()
        .map(|(_, x)| {
            sa.iter()
                .flat_map(|a| sb.iter().map(move |b| (a, b)))
                .map(|(a, b)| evenodd_measure(x, a, b, mode))
                .collect()
        })
        .collect();
    DimensionStructure::validate(StructureData {
        poset,
        points: seqs.iter().map(|(n, _)| n.clone()).collect(),
        mu,
    })
}

/// Samples the one-parameter family on a sorted probe chain; with the
/// two-level variant the positions are (tower, alpha) pairs in
/// lexicographic order, still a chain.
pub fn sample_growth(
    seqs: &[(String, GrowthSeq)],
    probes: &[(u32, BigRational)],
) -> Result<DimensionStructure> {
    let mut sorted = probes.to_vec();
    sorted.sort();
    sorted.dedup();
    let poset = FinitePoset::chain(
        sorted
            .iter()
            .map(|(k, a)| pair_name(&k.to_string(), &a.to_string()))
            .collect(),
    );
    let mu = seqs
        .iter()
        .map(|(_, x)| {
            sorted
                .iter()
                .map(|(k, a)| growth_measure(x, *k, a, LimitKind::LimInf))
                .collect()
        })
        .collect();
    DimensionStructure::validate(StructureData {
        poset,
        points: seqs.iter().map(|(n, _)| n.clone()).collect(),
        mu,
    })
}
