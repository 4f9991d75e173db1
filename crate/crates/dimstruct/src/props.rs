//! Instance-level checks of the universally quantified facts every valid
//! structure must satisfy. A failure here on a validated structure means an
//! implementation bug, which makes this suite the central regression oracle
//! for the whole crate.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::Result;
use crate::poset::{BoundDir, DimValue, FinitePoset};
use crate::structure::{DimensionStructure, LeqDVerdict};

#[derive(Clone, Debug, Serialize)]
pub struct PropResult {
    pub id: &'static str,
    pub pass: bool,
    pub witness: Option<String>,
}

impl PropResult {
    fn ok(id: &'static str) -> PropResult {
        PropResult { id, pass: true, witness: None }
    }

    fn fail(id: &'static str, witness: String) -> PropResult {
        PropResult { id, pass: false, witness: Some(witness) }
    }
}

/// Evaluates every decidable proposition on the instance. A point order may
/// be supplied to also exercise the ordered-S synchronization equivalence.
pub fn proposition_suite(
    d: &DimensionStructure,
    point_order: Option<&FinitePoset>,
) -> Result<Vec<PropResult>> {
    let mut out = Vec::new();
    out.push(below_positive_is_inf(d)?);
    out.push(inf_set_down_convex(d)?);
    out.push(zero_set_up_convex(d)?);
    out.push(at_most_one_s_point(d)?);
    out.push(sup_inf_sandwich(d)?);
    out.push(leq_d_is_lexicographic(d)?);
    out.push(principal_vanishing_equivalence(d)?);
    out.push(dim_inf_agreement(d)?);
    out.push(small_implies_strong(d)?);
    if d.poset().is_chain() {
        out.push(ax1prime_equivalence(d)?);
        out.push(discrete_sandwich(d)?);
        out.push(p_strong_implies_p_small_on_chains(d)?);
        if let Some(order) = point_order {
            out.push(sync_pointwise_equivalence(d, order)?);
        }
    }
    Ok(out)
}

/// s < p and mu(x,p) > 0 force mu(x,s) = +inf.
fn below_positive_is_inf(d: &DimensionStructure) -> Result<PropResult> {
    const ID: &str = "below_positive_is_inf";
    let p = d.poset();
    for x in d.points() {
        for s in p.elements() {
            for q in p.elements() {
                if p.lt(s, q)? && !d.mu(x, q)?.is_zero() && !d.mu(x, s)?.is_inf() {
                    return Ok(PropResult::fail(
                        ID,
                        format!("mu({x},{q}) > 0 but mu({x},{s}) < +inf with {s} < {q}"),
                    ));
                }
            }
        }
    }
    Ok(PropResult::ok(ID))
}

fn inf_set_down_convex(d: &DimensionStructure) -> Result<PropResult> {
    const ID: &str = "inf_set_down_convex";
    for x in d.points() {
        let spec = d.spectrum(x)?;
        let r = d.poset().convexity(&spec.sinf_x)?;
        if !r.down_convex {
            return Ok(PropResult::fail(ID, format!("infinity set of {x} is not down-convex")));
        }
    }
    Ok(PropResult::ok(ID))
}

fn zero_set_up_convex(d: &DimensionStructure) -> Result<PropResult> {
    const ID: &str = "zero_set_up_convex";
    for x in d.points() {
        let spec = d.spectrum(x)?;
        let r = d.poset().convexity(&spec.s0_x)?;
        if !r.up_convex {
            return Ok(PropResult::fail(ID, format!("zero set of {x} is not up-convex")));
        }
    }
    Ok(PropResult::ok(ID))
}

fn at_most_one_s_point(d: &DimensionStructure) -> Result<PropResult> {
    const ID: &str = "at_most_one_s_point";
    for x in d.points() {
        let hits: Vec<&String> = d
            .poset()
            .elements()
            .iter()
            .filter(|s| d.mu(x, s).map(|v| v.is_pos_finite()).unwrap_or(false))
            .collect();
        if hits.len() > 1 {
            return Ok(PropResult::fail(
                ID,
                format!("{x} is an s-point at both {} and {}", hits[0], hits[1]),
            ));
        }
    }
    Ok(PropResult::ok(ID))
}

/// sup of the infinity set <= inf of the zero set, whenever both bounds are
/// attained inside their sets and comparable. Attainment is essential:
/// with merely existing comparable bounds the inequality can fail (see the
/// sandwich_needs_attained_bounds test), because nothing then places an
/// infinite position above a zero position.
fn sup_inf_sandwich(d: &DimensionStructure) -> Result<PropResult> {
    const ID: &str = "sup_inf_sandwich";
    let p = d.poset();
    for x in d.points() {
        let spec = d.spectrum(x)?;
        let sup = p.bound_of_names(&spec.sinf_x, BoundDir::Sup)?;
        let inf = p.bound_of_names(&spec.s0_x, BoundDir::Inf)?;
        if let (Some(DimValue::Element(s)), Some(DimValue::Element(i))) = (sup, inf) {
            if !spec.sinf_x.contains(&s) || !spec.s0_x.contains(&i) {
                continue;
            }
            if p.comparable(&s, &i)? && !p.leq(&s, &i)? {
                return Ok(PropResult::fail(
                    ID,
                    format!("point {x}: sup of infinity set {s} > inf of zero set {i}"),
                ));
            }
        }
    }
    Ok(PropResult::ok(ID))
}

/// The point preorder agrees with lexicographic comparison of μ_D pairs.
fn leq_d_is_lexicographic(d: &DimensionStructure) -> Result<PropResult> {
    const ID: &str = "leq_d_is_lexicographic";
    let p = d.poset();
    for x in d.points() {
        for y in d.points() {
            let verdict = d.leq_d(x, y)?;
            let mx = d.mu_d(x)?;
            let my = d.mu_d(y)?;
            let lex = match p.dim_cmp(&mx.dim, &my.dim) {
                None => LeqDVerdict::Incomparable,
                Some(Ordering::Less) => LeqDVerdict::LessOrEqual,
                Some(Ordering::Greater) => LeqDVerdict::Greater,
                Some(Ordering::Equal) => match mx.value.cmp(&my.value) {
                    Ordering::Less => LeqDVerdict::LessOrEqual,
                    Ordering::Greater => LeqDVerdict::Greater,
                    Ordering::Equal => LeqDVerdict::EqualClass,
                },
            };
            if verdict != lex {
                return Ok(PropResult::fail(
                    ID,
                    format!("({x},{y}): verdict {verdict:?} but lexicographic {lex:?}"),
                ));
            }
        }
    }
    Ok(PropResult::ok(ID))
}

/// Principality via the filter shape coincides with μ vanishing strictly
/// above the dimension, pointwise.
fn principal_vanishing_equivalence(d: &DimensionStructure) -> Result<PropResult> {
    const ID: &str = "principal_vanishing_equivalence";
    let p = d.poset();
    for x in d.points() {
        let dim = d.dim(x)?;
        let spec = d.spectrum(x)?;
        let by_filter = match &dim {
            DimValue::Element(l) => {
                let mut f = spec.s_x.clone();
                if !f.contains(l) {
                    f.push(l.clone());
                }
                let rep = p.convexity(&f)?;
                rep.principal_filter
            }
            DimValue::Bottom => spec.s_x.len() == p.len(),
            DimValue::Top => spec.s_x.is_empty(),
        };
        let by_vanishing = p.elements().iter().all(|s| {
            let sv = DimValue::Element(s.clone());
            p.dim_cmp(&sv, &dim) != Some(Ordering::Greater)
                || d.mu(x, s).map(|v| v.is_zero()).unwrap_or(false)
        });
        if by_filter != by_vanishing {
            return Ok(PropResult::fail(
                ID,
                format!("point {x}: filter route {by_filter}, vanishing route {by_vanishing}"),
            ));
        }
    }
    Ok(PropResult::ok(ID))
}

/// dim x (the inf of the finiteness set) relates to the inf of the zero set:
/// equal unless x carries a positive finite value, in which case dim x lies
/// at or below it.
fn dim_inf_agreement(d: &DimensionStructure) -> Result<PropResult> {
    const ID: &str = "dim_inf_agreement";
    let p = d.poset();
    for x in d.points() {
        let dim = d.dim(x)?;
        let spec = d.spectrum(x)?;
        let inf_zero = match p.bound_of_names(&spec.s0_x, BoundDir::Inf)? {
            Some(v) => v,
            None => {
                return Ok(PropResult::fail(ID, format!("zero set of {x} has no infimum")))
            }
        };
        let ok = if d.is_dim_point(x)? {
            matches!(p.dim_cmp(&dim, &inf_zero), Some(Ordering::Less | Ordering::Equal))
        } else {
            p.dim_eq(&dim, &inf_zero)
        };
        if !ok {
            return Ok(PropResult::fail(
                ID,
                format!("point {x}: dim = {dim} vs inf of zero set = {inf_zero}"),
            ));
        }
    }
    Ok(PropResult::ok(ID))
}

fn small_implies_strong(d: &DimensionStructure) -> Result<PropResult> {
    const ID: &str = "small_implies_strong";
    let r = d.classify()?;
    if r.p_small.holds && !r.p_strong.holds {
        return Ok(PropResult::fail(ID, "p-small without p-strong".into()));
    }
    if r.m_small.holds && !r.m_strong.holds {
        return Ok(PropResult::fail(ID, "m-small without m-strong".into()));
    }
    if r.small.holds && !r.strong.holds {
        return Ok(PropResult::fail(ID, "small without strong".into()));
    }
    Ok(PropResult::ok(ID))
}

/// On chains the one-step successor law is equivalent to the full first
/// axiom, so it must hold on every validated chain structure.
fn ax1prime_equivalence(d: &DimensionStructure) -> Result<PropResult> {
    const ID: &str = "ax1prime_on_chains";
    let flag = d.check_ax1prime()?;
    Ok(if flag.holds {
        PropResult::ok(ID)
    } else {
        PropResult::fail(ID, flag.witness.unwrap_or_default())
    })
}

fn discrete_sandwich(d: &DimensionStructure) -> Result<PropResult> {
    const ID: &str = "discrete_sandwich";
    let flag = d.discrete_bounds_check()?;
    Ok(if flag.holds {
        PropResult::ok(ID)
    } else {
        PropResult::fail(ID, flag.witness.unwrap_or_default())
    })
}

fn p_strong_implies_p_small_on_chains(d: &DimensionStructure) -> Result<PropResult> {
    const ID: &str = "p_strong_implies_p_small_on_chains";
    let r = d.classify()?;
    if r.p_strong.holds && !r.p_small.holds {
        return Ok(PropResult::fail(
            ID,
            r.p_small.witness.unwrap_or_else(|| "p-strong chain structure is not p-small".into()),
        ));
    }
    Ok(PropResult::ok(ID))
}

/// With S ordered, the μ_D monotonicity condition is equivalent to plain
/// pointwise monotonicity of every μ_s along the point order.
fn sync_pointwise_equivalence(
    d: &DimensionStructure,
    order: &FinitePoset,
) -> Result<PropResult> {
    const ID: &str = "sync_pointwise_equivalence";
    let cond1 = d.check_synchronization(order, Some(1))?.cond1.holds;
    let mut pointwise = true;
    'outer: for x in d.points() {
        for y in d.points() {
            if x == y || !order.leq(x, y)? {
                continue;
            }
            for s in d.poset().elements() {
                if d.mu(x, s)? > d.mu(y, s)? {
                    pointwise = false;
                    break 'outer;
                }
            }
        }
    }
    if cond1 != pointwise {
        return Ok(PropResult::fail(
            ID,
            format!("μ_D monotone: {cond1}, pointwise monotone: {pointwise}"),
        ));
    }
    Ok(PropResult::ok(ID))
}
