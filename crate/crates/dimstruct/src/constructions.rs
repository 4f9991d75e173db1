//! Ways to build structures from existing ones: restriction, normalization,
//! quotients by point partitions, order-indexed sums, pointwise measure
//! sums and suprema, and three flavors of product. Every output is
//! re-validated, and the dimension laws each construction promises are
//! asserted before returning.

use crate::error::{Error, Result};
use crate::extval::ExtVal;
use crate::poset::{pair_name, BoundDir, DimValue, FinitePoset};
use crate::structure::{DimensionStructure, StructureData};

/// A partition of the point set into named blocks.
#[derive(Clone, Debug)]
pub struct Partition {
    pub blocks: Vec<(String, Vec<String>)>,
}

impl Partition {
    /// Singleton blocks named after their points.
    pub fn singletons(d: &DimensionStructure) -> Partition {
        Partition {
            blocks: d.points().iter().map(|x| (x.clone(), vec![x.clone()])).collect(),
        }
    }

    /// The canonical partition by shared (dim, μ at dim) pair.
    pub fn by_mu_d(d: &DimensionStructure) -> Result<Partition> {
        let mut blocks: Vec<(String, Vec<String>)> = Vec::new();
        for x in d.points() {
            let md = d.mu_d(x)?;
            let id = pair_name(&md.dim.to_string(), &md.value.to_string());
            match blocks.iter_mut().find(|(b, _)| *b == id) {
                Some((_, members)) => members.push(x.clone()),
                None => blocks.push((id, vec![x.clone()])),
            }
        }
        Ok(Partition { blocks })
    }

    fn check_against(&self, points: &[String]) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        let mut ids = std::collections::HashSet::new();
        for (id, members) in &self.blocks {
            if !ids.insert(id) {
                return Err(Error::DuplicateName(id.clone()));
            }
            if members.is_empty() {
                return Err(Error::Shape(format!("block {id} is empty")));
            }
            for m in members {
                if !points.contains(m) {
                    return Err(Error::UnknownPoint(m.clone()));
                }
                if !seen.insert(m) {
                    return Err(Error::Disjointness(m.clone()));
                }
            }
        }
        if seen.len() != points.len() {
            let missing = points.iter().find(|p| !seen.contains(p)).unwrap();
            return Err(Error::Shape(format!("partition misses point {missing}")));
        }
        Ok(())
    }
}

/// Restricts a structure to a subset of points and a subset of positions.
/// The restriction may break the infimum axiom, in which case the witness
/// is reported; completeness of the kept positions is sufficient but not
/// required.
pub fn substructure(
    d: &DimensionStructure,
    keep_points: &[String],
    keep_elems: &[String],
) -> Result<DimensionStructure> {
    let pidx: Vec<usize> = keep_points
        .iter()
        .map(|x| d.point_idx(x))
        .collect::<Result<_>>()?;
    let eidx: Vec<usize> = keep_elems
        .iter()
        .map(|s| d.poset().idx(s))
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    for &a in &eidx {
        for &b in &eidx {
            if d.poset().lt_idx(a, b) {
                pairs.push((
                    d.poset().name(a).to_string(),
                    d.poset().name(b).to_string(),
                ));
            }
        }
    }
    let poset = FinitePoset::new(keep_elems.to_vec(), &pairs)?;
    let mu = pidx
        .iter()
        .map(|&xi| eidx.iter().map(|&s| d.mu_idx(xi, s).clone()).collect())
        .collect();
    DimensionStructure::validate(StructureData { poset, points: keep_points.to_vec(), mu })
}

/// Keeps only dim-points and the positions carrying them. The result is
/// normal whenever nonempty — asserted. Dropping positions can break the
/// infimum axiom, so the outcome is validated rather than assumed.
pub fn normalization(d: &DimensionStructure) -> Result<DimensionStructure> {
    let points: Vec<String> = d
        .points()
        .iter()
        .filter(|x| d.is_dim_point(x).unwrap_or(false))
        .cloned()
        .collect();
    let elems: Vec<String> = d
        .poset()
        .elements()
        .iter()
        .filter(|s| {
            d.points()
                .iter()
                .any(|x| d.mu(x, s).map(|v| v.is_pos_finite()).unwrap_or(false))
        })
        .cloned()
        .collect();
    let out = substructure(d, &points, &elems)?;
    if !out.points().is_empty() {
        let r = out.classify()?;
        if !r.normal.holds {
            return Err(Error::Internal(format!(
                "normalization is not normal: {:?}",
                r.normal.witness
            )));
        }
    }
    Ok(out)
}

/// Quotient by a point partition: each block measures to the supremum of
/// its members. Valid whenever the positions form a complete lattice;
/// otherwise the infimum axiom may fail and the witness is reported.
pub fn quotient(d: &DimensionStructure, partition: &Partition) -> Result<DimensionStructure> {
    partition.check_against(d.points())?;
    let n = d.poset().len();
    let mut mu = Vec::with_capacity(partition.blocks.len());
    for (_, members) in &partition.blocks {
        let row: Vec<ExtVal> = (0..n)
            .map(|s| {
                let vals: Vec<ExtVal> = members
                    .iter()
                    .map(|x| d.mu_idx(d.point_idx(x).unwrap(), s).clone())
                    .collect();
                ExtVal::sup(vals.iter())
            })
            .collect();
        mu.push(row);
    }
    let out = DimensionStructure::validate(StructureData {
        poset: d.poset().clone(),
        points: partition.blocks.iter().map(|(id, _)| id.clone()).collect(),
        mu,
    })?;
    // block dimension dominates the supremum of member dims, whenever that
    // supremum exists
    for (id, members) in &partition.blocks {
        let dims: Vec<DimValue> = members
            .iter()
            .map(|x| d.dim(x))
            .collect::<Result<_>>()?;
        if let Some(sup) = d.poset().dim_sup(&dims) {
            let bd = out.dim(id)?;
            let ok = matches!(
                d.poset().dim_cmp(&sup, &bd),
                Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal)
            );
            if !ok {
                return Err(Error::Internal(format!(
                    "block {id}: member-dim sup {sup} exceeds block dim {bd}"
                )));
            }
        }
    }
    Ok(out)
}

/// Order-indexed sum: blocks keep their own order and measures; a point
/// measures 0 at every position in a strictly higher block and +inf at
/// lower or incomparable blocks.
pub fn sum(
    index: &FinitePoset,
    family: &[(String, DimensionStructure)],
) -> Result<DimensionStructure> {
    let block_posets: Vec<(String, FinitePoset)> = family
        .iter()
        .map(|(id, d)| (id.clone(), d.poset().clone()))
        .collect();
    let poset = FinitePoset::indexed_sum(index, &block_posets)?;
    let mut points = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (_, d) in family {
        for x in d.points() {
            if !seen.insert(x.clone()) {
                return Err(Error::Disjointness(x.clone()));
            }
            points.push(x.clone());
        }
    }
    let n = poset.len();
    let mut mu = Vec::with_capacity(points.len());
    for (pid, dp) in family {
        let pi = index.idx(pid)?;
        for x in dp.points() {
            let mut row = Vec::with_capacity(n);
            for (qid, dq) in family {
                let qi = index.idx(qid)?;
                for s in dq.poset().elements() {
                    row.push(if pi == qi {
                        dp.mu(x, s)?.clone()
                    } else if index.lt_idx(pi, qi) {
                        ExtVal::Zero
                    } else {
                        ExtVal::Inf
                    });
                }
            }
            mu.push(row);
        }
    }
    let out = DimensionStructure::validate(StructureData { poset, points, mu })?;
    assert_sum_dims(index, family, &out)?;
    Ok(out)
}

/// The dim-relocation law of the sum, asserted when every block has a
/// minimum and maximum — the law's statement references them.
fn assert_sum_dims(
    index: &FinitePoset,
    family: &[(String, DimensionStructure)],
    out: &DimensionStructure,
) -> Result<()> {
    let bounded = family.iter().all(|(_, d)| {
        d.poset().min_element().is_some() && d.poset().max_element().is_some()
    });
    if !bounded {
        return Ok(());
    }
    for (pid, dp) in family {
        let pi = index.idx(pid)?;
        let max_p = dp.poset().max_element().unwrap().to_string();
        for x in dp.points() {
            let local = dp.dim(x)?;
            let at_top = dp.poset().dim_eq(&local, &DimValue::Element(max_p.clone()));
            let expected = if !at_top || dp.mu(x, &max_p)?.is_finite() {
                // every block has a minimum, so the local dim is an element
                match &local {
                    DimValue::Element(s) => Some(DimValue::Element(s.clone())),
                    DimValue::Bottom => {
                        Some(DimValue::Element(dp.poset().min_element().unwrap().to_string()))
                    }
                    DimValue::Top => Some(DimValue::Element(max_p.clone())),
                }
            } else {
                // the point measures +inf everywhere in its own block; its
                // dim relocates to the bottom of the least block above
                let above: Vec<usize> = (0..index.len())
                    .filter(|&q| index.lt_idx(pi, q))
                    .collect();
                match index.bound_in_sbar(&above, BoundDir::Inf) {
                    Some(DimValue::Element(r)) if above.contains(&index.idx(&r)?) => {
                        let dr = &family.iter().find(|(id, _)| *id == r).unwrap().1;
                        Some(DimValue::Element(dr.poset().min_element().unwrap().to_string()))
                    }
                    _ => None, // no least block above: the law makes no claim
                }
            };
            if let Some(e) = expected {
                let got = out.dim(x)?;
                if !out.poset().dim_eq(&got, &e) {
                    return Err(Error::Internal(format!(
                        "sum dim of {x}: expected {e}, got {got}"
                    )));
                }
            }
        }
    }
    Ok(())
}

fn require_same_shape(list: &[&DimensionStructure]) -> Result<()> {
    let first = list.first().ok_or_else(|| Error::Precondition("empty list".into()))?;
    for d in &list[1..] {
        if d.poset() != first.poset() || d.points() != first.points() {
            return Err(Error::Precondition(
                "all inputs must share the same points and positions".into(),
            ));
        }
    }
    Ok(())
}

/// Pointwise sum of the measures of finitely many structures over shared X
/// and S. Requires S complete, or a lattice with every input principal.
pub fn measure_sum(list: &[&DimensionStructure]) -> Result<DimensionStructure> {
    require_same_shape(list)?;
    let first = list[0];
    let props = first.poset().properties();
    if !props.complete {
        let all_principal = list
            .iter()
            .map(|d| Ok(d.classify()?.principal.holds))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|b| b);
        if !(props.lattice && all_principal) {
            return Err(Error::Precondition(
                "measure sum needs complete S, or lattice S with all inputs principal".into(),
            ));
        }
    }
    let n = first.poset().len();
    let mu: Vec<Vec<ExtVal>> = (0..first.points().len())
        .map(|xi| {
            (0..n)
                .map(|s| {
                    list.iter()
                        .fold(ExtVal::Zero, |acc, d| acc.add(d.mu_idx(xi, s)))
                })
                .collect()
        })
        .collect();
    let out = DimensionStructure::validate(StructureData {
        poset: first.poset().clone(),
        points: first.points().to_vec(),
        mu,
    })?;
    assert_measure_sum_dims(list, &out)?;
    Ok(out)
}

/// Lower bound on the summed dim, and on chains the successor law when the
/// bound is strict.
fn assert_measure_sum_dims(list: &[&DimensionStructure], out: &DimensionStructure) -> Result<()> {
    let poset = out.poset();
    for x in out.points() {
        let dims: Vec<DimValue> = list.iter().map(|d| d.dim(x)).collect::<Result<_>>()?;
        let dx = out.dim(x)?;
        let sup = match poset.dim_sup(&dims) {
            Some(s) => s,
            None => continue,
        };
        let le = matches!(
            poset.dim_cmp(&sup, &dx),
            Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal)
        );
        if !le {
            return Err(Error::Internal(format!(
                "measure sum: sup of input dims {sup} exceeds dim {dx} at {x}"
            )));
        }
        if poset.is_chain() && !poset.dim_eq(&sup, &dx) {
            // strictly below: the summed dim must be the immediate successor
            let succ = match &sup {
                DimValue::Element(s) => match poset.successor_idx(poset.idx(s)?) {
                    Some(p) => DimValue::Element(poset.name(p).to_string()),
                    None => DimValue::Top,
                },
                DimValue::Bottom => match poset.min_element() {
                    Some(m) => DimValue::Element(m.to_string()),
                    None => continue,
                },
                DimValue::Top => continue,
            };
            if !poset.dim_eq(&succ, &dx) {
                return Err(Error::Internal(format!(
                    "measure sum on a chain: dim {dx} at {x} is not the successor {succ} of {sup}"
                )));
            }
        }
    }
    Ok(())
}

/// Pointwise supremum of the measures over shared X and S.
pub fn sup_combine(list: &[&DimensionStructure]) -> Result<DimensionStructure> {
    require_same_shape(list)?;
    let first = list[0];
    let n = first.poset().len();
    let mu: Vec<Vec<ExtVal>> = (0..first.points().len())
        .map(|xi| {
            (0..n)
                .map(|s| ExtVal::sup(list.iter().map(|d| d.mu_idx(xi, s))))
                .collect()
        })
        .collect();
    DimensionStructure::validate(StructureData {
        poset: first.poset().clone(),
        points: first.points().to_vec(),
        mu,
    })
}

/// How two finite coordinate values merge in a product. Any combiner must
/// vanish exactly when a coordinate vanishes and stay positive finite on
/// positive finite pairs; this is checked on every pair that arises.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combiner {
    Product,
    Min,
}

impl Combiner {
    fn apply(&self, a: &ExtVal, b: &ExtVal) -> Result<ExtVal> {
        let v = match self {
            Combiner::Product => a.mul(b),
            Combiner::Min => a.min_of(b),
        };
        let lawful = if a.is_zero() || b.is_zero() {
            v.is_zero()
        } else if a.is_pos_finite() && b.is_pos_finite() {
            v.is_pos_finite()
        } else {
            true
        };
        if !lawful {
            return Err(Error::CombinerLaw(a.to_string(), b.to_string()));
        }
        Ok(v)
    }
}

/// Expected product-coordinate dim: the pair when both coordinates are
/// elements, the proper extreme when a coordinate degenerates the product
/// spectrum.
fn paired_dim(
    d1: &DimensionStructure,
    d2: &DimensionStructure,
    dx1: &DimValue,
    dx2: &DimValue,
) -> DimValue {
    let to_elem = |d: &DimensionStructure, v: &DimValue| -> Option<String> {
        match v {
            DimValue::Element(s) => Some(s.clone()),
            DimValue::Bottom => d.poset().min_element().map(str::to_string),
            DimValue::Top => d.poset().max_element().map(str::to_string),
        }
    };
    // a raw Top means an empty finiteness spectrum (the bound of a nonempty
    // set is never Top), which empties the product's spectrum outright
    if matches!(dx1, DimValue::Top) || matches!(dx2, DimValue::Top) {
        return DimValue::Top;
    }
    match (to_elem(d1, dx1), to_elem(d2, dx2)) {
        (Some(a), Some(b)) => DimValue::Element(pair_name(&a, &b)),
        // a coordinate with no lower bound leaves the product unbounded too
        _ => DimValue::Bottom,
    }
}

/// Direct product: points and positions pair up, μ is +inf as soon as a
/// coordinate is, otherwise the combiner (default: product) of the
/// coordinates. The dim of a pair is the pair of dims — asserted.
pub fn direct_product(
    d1: &DimensionStructure,
    d2: &DimensionStructure,
    combiner: Combiner,
) -> Result<DimensionStructure> {
    let poset = d1.poset().product(d2.poset());
    let mut points = Vec::new();
    for x1 in d1.points() {
        for x2 in d2.points() {
            points.push(pair_name(x1, x2));
        }
    }
    let (n1, n2) = (d1.poset().len(), d2.poset().len());
    let mut mu = Vec::with_capacity(points.len());
    for x1 in 0..d1.points().len() {
        for x2 in 0..d2.points().len() {
            let mut row = Vec::with_capacity(n1 * n2);
            for s1 in 0..n1 {
                for s2 in 0..n2 {
                    let (a, b) = (d1.mu_idx(x1, s1), d2.mu_idx(x2, s2));
                    row.push(if a.is_inf() || b.is_inf() {
                        ExtVal::Inf
                    } else {
                        combiner.apply(a, b)?
                    });
                }
            }
            mu.push(row);
        }
    }
    let out = DimensionStructure::validate(StructureData { poset, points, mu })?;
    for x1 in d1.points() {
        for x2 in d2.points() {
            let expected = paired_dim(d1, d2, &d1.dim(x1)?, &d2.dim(x2)?);
            let got = out.dim(&pair_name(x1, x2))?;
            if !out.poset().dim_eq(&got, &expected) {
                return Err(Error::Internal(format!(
                    "product dim of ({x1},{x2}): expected {expected}, got {got}"
                )));
            }
        }
    }
    Ok(out)
}

/// Product of a finite family with the minimum of the finite coordinate
/// values: the fold of binary min-products, which computes exactly +inf on
/// any infinite coordinate and the minimum otherwise.
pub fn i_direct_product(family: &[&DimensionStructure]) -> Result<DimensionStructure> {
    let mut iter = family.iter();
    let first = *iter
        .next()
        .ok_or_else(|| Error::Precondition("empty family".into()))?;
    let mut acc = first.clone();
    for d in iter {
        acc = direct_product(&acc, d, Combiner::Min)?;
    }
    Ok(acc)
}

/// Lexicographic product: the first factor dominates; μ is +inf whenever
/// the first coordinate is, else the product of the coordinates. Requires
/// the first factor small.
pub fn l_direct_product(
    d1: &DimensionStructure,
    d2: &DimensionStructure,
) -> Result<DimensionStructure> {
    let cls = d1.classify()?;
    if !cls.small.holds {
        return Err(Error::Precondition(format!(
            "the first factor must be small: {}",
            cls.small.witness.unwrap_or_default()
        )));
    }
    let poset = d1.poset().lexicographic(d2.poset());
    let mut points = Vec::new();
    for x1 in d1.points() {
        for x2 in d2.points() {
            points.push(pair_name(x1, x2));
        }
    }
    let (n1, n2) = (d1.poset().len(), d2.poset().len());
    let mut mu = Vec::with_capacity(points.len());
    for x1 in 0..d1.points().len() {
        for x2 in 0..d2.points().len() {
            let mut row = Vec::with_capacity(n1 * n2);
            for s1 in 0..n1 {
                for s2 in 0..n2 {
                    let a = d1.mu_idx(x1, s1);
                    row.push(if a.is_inf() {
                        ExtVal::Inf
                    } else {
                        a.mul(d2.mu_idx(x2, s2))
                    });
                }
            }
            mu.push(row);
        }
    }
    let out = DimensionStructure::validate(StructureData { poset, points, mu })?;
    // smallness makes every first-coordinate dim an attained element, so the
    // pairing claim is checkable whenever the second dim is one too
    for x1 in d1.points() {
        for x2 in d2.points() {
            let a = match d1.dim(x1)? {
                DimValue::Element(a) => a,
                other => {
                    return Err(Error::Internal(format!(
                        "small factor has non-element dim {other} at {x1}"
                    )))
                }
            };
            // a raw Top/Bottom second dim leaves the lexicographic infimum
            // outside the pairing claim; skip those points
            let b = match d2.dim(x2)? {
                DimValue::Element(b) => Some(b),
                DimValue::Bottom | DimValue::Top => None,
            };
            if let Some(b) = b {
                let expected = DimValue::Element(pair_name(&a, &b));
                let got = out.dim(&pair_name(x1, x2))?;
                if !out.poset().dim_eq(&got, &expected) {
                    return Err(Error::Internal(format!(
                        "lexicographic dim of ({x1},{x2}): expected {expected}, got {got}"
                    )));
                }
            }
        }
    }
    Ok(out)
}
