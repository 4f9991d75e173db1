//! The dimension structure type: a finite poset S of measurement positions,
//! a finite point set X, and a total table μ : X×S → [0, +inf] subject to
//! three axioms. Everything downstream (dimension, μ_D, classification,
//! synchronization) lives here.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extval::ExtVal;
use crate::poset::{BoundDir, DimValue, FinitePoset};

/// Raw candidate before axiom checking: the pieces of a structure with no
/// validity promise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureData {
    pub poset: FinitePoset,
    pub points: Vec<String>,
    /// Row-per-point, column-per-element, matching declaration order.
    pub mu: Vec<Vec<ExtVal>>,
}

/// A boolean check outcome carrying a human-readable counterexample when it
/// fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flag {
    pub holds: bool,
    pub witness: Option<String>,
}

impl Flag {
    pub fn ok() -> Flag {
        Flag { holds: true, witness: None }
    }

    pub fn fail(witness: String) -> Flag {
        Flag { holds: false, witness: Some(witness) }
    }
}

/// Outcome of the axiom check, one optional witness per axiom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    /// (x, s, p): s < p, mu(x,s) finite, but mu(x,p) nonzero.
    pub ax1: Option<(String, String, String)>,
    /// (x, s, p): mu(x,s) positive finite, mu(x,p) finite, s and p incomparable.
    pub ax2: Option<(String, String, String)>,
    /// (x, S0_x): the zero set has lower bounds but no greatest one.
    pub ax3: Option<(String, Vec<String>)>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.ax1.is_none() && self.ax2.is_none() && self.ax3.is_none()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "all axioms hold");
        }
        if let Some((x, s, p)) = &self.ax1 {
            writeln!(f, "(ax1): mu({x},{s}) is finite, {s} < {p}, but mu({x},{p}) != 0")?;
        }
        if let Some((x, s, p)) = &self.ax2 {
            writeln!(f, "(ax2): mu({x},{s}) is positive finite, mu({x},{p}) is finite, but {s} and {p} are incomparable")?;
        }
        if let Some((x, zs)) = &self.ax3 {
            writeln!(f, "(ax3): the zero set of {x} = {{{}}} has no infimum", zs.join(", "))?;
        }
        Ok(())
    }
}

/// The three measurement spectra of a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumSets {
    /// Positions where mu is finite.
    pub s_x: Vec<String>,
    /// Positions where mu is zero.
    pub s0_x: Vec<String>,
    /// Positions where mu is infinite.
    pub sinf_x: Vec<String>,
}

/// The pair μ_D(x) = (dim x, μ at the dimension).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuD {
    pub dim: DimValue,
    pub value: ExtVal,
}

/// Verdict of the dimension preorder comparison of two points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeqDVerdict {
    LessOrEqual,
    Greater,
    Incomparable,
    EqualClass,
}

/// Classification flags, each with a failure witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub fully_normal: Flag,
    pub normal: Flag,
    pub quasi_normal: Flag,
    pub p_strong: Flag,
    pub m_strong: Flag,
    pub strong: Flag,
    pub p_small: Flag,
    pub m_small: Flag,
    pub small: Flag,
    pub principal: Flag,
}

/// Synchronization check outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyncReport {
    /// x <= y implies μ_D(x) <= μ_D(y).
    pub cond1: Flag,
    /// Weaker form: x <= y implies dim x <= dim y.
    pub cond1_weak: Flag,
    /// dim(sup Y) = sup of the dims, over subsets Y of bounded size.
    pub cond2: Flag,
    /// Subset-size cap used for cond2; None means all subsets.
    pub alpha: Option<usize>,
}

impl SyncReport {
    pub fn synchronized(&self) -> bool {
        self.cond1.holds && self.cond2.holds
    }
}

/// A validated dimension structure. Construction goes through
/// [`DimensionStructure::validate`], so every instance satisfies the axioms.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionStructure {
    poset: FinitePoset,
    points: Vec<String>,
    point_index: HashMap<String, usize>,
    mu: Vec<Vec<ExtVal>>,
}

/// Runs the three axioms on a raw candidate without constructing anything.
pub fn check_axioms(data: &StructureData) -> Result<AxiomReport> {
    let n = data.poset.len();
    if data.mu.len() != data.points.len() {
        return Err(Error::Shape(format!(
            "mu has {} rows for {} points",
            data.mu.len(),
            data.points.len()
        )));
    }
    for (x, row) in data.points.iter().zip(&data.mu) {
        if row.len() != n {
            return Err(Error::Totality {
                point: x.clone(),
                element: format!("row has {} of {} entries", row.len(), n),
            });
        }
    }
    let mut report = AxiomReport { ax1: None, ax2: None, ax3: None };
    'ax1: for (xi, x) in data.points.iter().enumerate() {
        for s in 0..n {
            if data.mu[xi][s].is_inf() {
                continue;
            }
            for p in 0..n {
                if data.poset.lt_idx(s, p) && !data.mu[xi][p].is_zero() {
                    report.ax1 = Some((
                        x.clone(),
                        data.poset.name(s).to_string(),
                        data.poset.name(p).to_string(),
                    ));
                    break 'ax1;
                }
            }
        }
    }
    'ax2: for (xi, x) in data.points.iter().enumerate() {
        for s in 0..n {
            if !data.mu[xi][s].is_pos_finite() {
                continue;
            }
            for p in 0..n {
                if data.mu[xi][p].is_finite()
                    && !data.poset.leq_idx(s, p)
                    && !data.poset.leq_idx(p, s)
                {
                    report.ax2 = Some((
                        x.clone(),
                        data.poset.name(s).to_string(),
                        data.poset.name(p).to_string(),
                    ));
                    break 'ax2;
                }
            }
        }
    }
    for (xi, x) in data.points.iter().enumerate() {
        let zeros: Vec<usize> = (0..n).filter(|&s| data.mu[xi][s].is_zero()).collect();
        if data.poset.bound_in_sbar(&zeros, BoundDir::Inf).is_none() {
            report.ax3 = Some((
                x.clone(),
                zeros.iter().map(|&s| data.poset.name(s).to_string()).collect(),
            ));
            break;
        }
    }
    Ok(report)
}

impl DimensionStructure {
    pub fn validate(data: StructureData) -> Result<DimensionStructure> {
        let report = check_axioms(&data)?;
        if !report.passed() {
            return Err(Error::Validation(report));
        }
        let mut point_index = HashMap::with_capacity(data.points.len());
        for (i, x) in data.points.iter().enumerate() {
            if point_index.insert(x.clone(), i).is_some() {
                return Err(Error::DuplicateName(x.clone()));
            }
        }
        Ok(DimensionStructure {
            poset: data.poset,
            points: data.points,
            point_index,
            mu: data.mu,
        })
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn data(&self) -> StructureData {
        StructureData {
            poset: self.poset.clone(),
            points: self.points.clone(),
            mu: self.mu.clone(),
        }
    }

    pub fn point_idx(&self, x: &str) -> Result<usize> {
        self.point_index
            .get(x)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(x.to_string()))
    }

    pub(crate) fn mu_idx(&self, xi: usize, s: usize) -> &ExtVal {
        &self.mu[xi][s]
    }

    pub fn mu(&self, x: &str, s: &str) -> Result<&ExtVal> {
        Ok(&self.mu[self.point_idx(x)?][self.poset.idx(s)?])
    }

    pub(crate) fn s_set_idx(&self, xi: usize) -> Vec<usize> {
        (0..self.poset.len()).filter(|&s| self.mu[xi][s].is_finite()).collect()
    }

    pub(crate) fn zero_set_idx(&self, xi: usize) -> Vec<usize> {
        (0..self.poset.len()).filter(|&s| self.mu[xi][s].is_zero()).collect()
    }

    pub fn spectrum(&self, x: &str) -> Result<SpectrumSets> {
        let xi = self.point_idx(x)?;
        let name = |s: &usize| self.poset.name(*s).to_string();
        Ok(SpectrumSets {
            s_x: self.s_set_idx(xi).iter().map(name).collect(),
            s0_x: self.zero_set_idx(xi).iter().map(name).collect(),
            sinf_x: (0..self.poset.len())
                .filter(|&s| self.mu[xi][s].is_inf())
                .map(|s| self.poset.name(s).to_string())
                .collect(),
        })
    }

    pub(crate) fn dim_idx(&self, xi: usize) -> Result<DimValue> {
        let sx = self.s_set_idx(xi);
        self.poset.bound_in_sbar(&sx, BoundDir::Inf).ok_or_else(|| {
            Error::Internal(format!(
                "inf of the finiteness set of {} is undefined on a validated structure",
                self.points[xi]
            ))
        })
    }

    /// dim x = inf of the finiteness set, valued in the bar-extension.
    /// Defined on every point of a validated structure.
    pub fn dim(&self, x: &str) -> Result<DimValue> {
        self.dim_idx(self.point_idx(x)?)
    }

    /// μ extended to the bar-extension: the bottom measures everything to
    /// +inf and the top to 0, except that a true minimum/maximum of S takes
    /// over when present.
    pub fn mu_extended(&self, x: &str, d: &DimValue) -> Result<ExtVal> {
        let xi = self.point_idx(x)?;
        Ok(self.mu_extended_idx(xi, d))
    }

    pub(crate) fn mu_extended_idx(&self, xi: usize, d: &DimValue) -> ExtVal {
        match d {
            DimValue::Bottom => match self.poset.min_element_idx() {
                Some(m) => self.mu[xi][m].clone(),
                None => ExtVal::Inf,
            },
            DimValue::Top => match self.poset.max_element_idx() {
                Some(m) => self.mu[xi][m].clone(),
                None => ExtVal::Zero,
            },
            DimValue::Element(s) => {
                let si = self.poset.idx(s).expect("dim value is an element");
                self.mu[xi][si].clone()
            }
        }
    }

    pub fn mu_d(&self, x: &str) -> Result<MuD> {
        let xi = self.point_idx(x)?;
        let dim = self.dim_idx(xi)?;
        let value = self.mu_extended_idx(xi, &dim);
        Ok(MuD { dim, value })
    }

    /// True iff 0 < mu(x,s) < inf.
    pub fn is_s_point(&self, x: &str, s: &str) -> Result<bool> {
        Ok(self.mu(x, s)?.is_pos_finite())
    }

    /// The unique s-point position of x, if x has one.
    pub fn s_point_position(&self, x: &str) -> Result<Option<String>> {
        let xi = self.point_idx(x)?;
        Ok((0..self.poset.len())
            .find(|&s| self.mu[xi][s].is_pos_finite())
            .map(|s| self.poset.name(s).to_string()))
    }

    pub fn is_dim_point(&self, x: &str) -> Result<bool> {
        Ok(self.s_point_position(x)?.is_some())
    }

    /// The class of points sharing a given μ_D pair.
    pub fn class_c(&self, d: &DimValue, m: &ExtVal) -> Result<Vec<String>> {
        if let DimValue::Element(s) = d {
            self.poset.idx(s)?;
        }
        let mut out = Vec::new();
        for (xi, x) in self.points.iter().enumerate() {
            let dx = self.dim_idx(xi)?;
            if self.poset.dim_eq(&dx, d) && self.mu_extended_idx(xi, &dx) == *m {
                out.push(x.clone());
            }
        }
        Ok(out)
    }

    /// The dimension preorder: x below y when dim x < dim y strictly, or the
    /// dims agree and μ at the common dim is <=.
    pub fn leq_d(&self, x: &str, y: &str) -> Result<LeqDVerdict> {
        let (xi, yi) = (self.point_idx(x)?, self.point_idx(y)?);
        let dx = self.dim_idx(xi)?;
        let dy = self.dim_idx(yi)?;
        use std::cmp::Ordering::*;
        Ok(match self.poset.dim_cmp(&dx, &dy) {
            None => LeqDVerdict::Incomparable,
            Some(Less) => LeqDVerdict::LessOrEqual,
            Some(Greater) => LeqDVerdict::Greater,
            Some(Equal) => {
                let mx = self.mu_extended_idx(xi, &dx);
                let my = self.mu_extended_idx(yi, &dy);
                match mx.cmp(&my) {
                    Less => LeqDVerdict::LessOrEqual,
                    Greater => LeqDVerdict::Greater,
                    Equal => LeqDVerdict::EqualClass,
                }
            }
        })
    }

    /// On a chain: the one-step consequence of (ax1). mu(x,s) finite forces
    /// mu at the successor of s to vanish.
    pub fn check_ax1prime(&self) -> Result<Flag> {
        if !self.poset.is_chain() {
            return Err(Error::Shape("ax1' requires an ordered S".into()));
        }
        for (xi, x) in self.points.iter().enumerate() {
            for s in 0..self.poset.len() {
                if !self.mu[xi][s].is_finite() {
                    continue;
                }
                if let Some(p) = self.poset.successor_idx(s) {
                    if !self.mu[xi][p].is_zero() {
                        return Ok(Flag::fail(format!(
                            "mu({x},{}) finite but mu({x},{}) nonzero",
                            self.poset.name(s),
                            self.poset.name(p)
                        )));
                    }
                }
            }
        }
        Ok(Flag::ok())
    }

    /// On a chain: (sup of the infinity set)+ <= dim x <= inf of the zero
    /// set, for every x; and finite dims force finite values there.
    pub fn discrete_bounds_check(&self) -> Result<Flag> {
        if !self.poset.is_chain() {
            return Err(Error::Shape("discrete bounds require an ordered S".into()));
        }
        for (xi, x) in self.points.iter().enumerate() {
            let d = self.dim_idx(xi)?;
            let sinf: Vec<usize> =
                (0..self.poset.len()).filter(|&s| self.mu[xi][s].is_inf()).collect();
            let lhs = match self.poset.bound_in_sbar(&sinf, BoundDir::Sup) {
                Some(DimValue::Bottom) => match self.poset.min_element_idx() {
                    Some(m) => DimValue::Element(self.poset.name(m).to_string()),
                    None => DimValue::Bottom,
                },
                Some(DimValue::Element(t)) => {
                    let ti = self.poset.idx(&t)?;
                    match self.poset.successor_idx(ti) {
                        Some(p) => DimValue::Element(self.poset.name(p).to_string()),
                        None => DimValue::Top,
                    }
                }
                Some(DimValue::Top) => DimValue::Top,
                None => {
                    return Err(Error::Internal(format!(
                        "sup of a chain subset undefined for {x}"
                    )))
                }
            };
            let rhs = self
                .poset
                .bound_in_sbar(&self.zero_set_idx(xi), BoundDir::Inf)
                .ok_or_else(|| Error::Internal(format!("(ax3) bound undefined for {x}")))?;
            let lower_ok =
                matches!(self.poset.dim_cmp(&lhs, &d), Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal));
            let upper_ok =
                matches!(self.poset.dim_cmp(&d, &rhs), Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal));
            if !lower_ok || !upper_ok {
                return Ok(Flag::fail(format!(
                    "point {x}: expected {lhs} <= dim {x} = {d} <= {rhs}"
                )));
            }
        }
        Ok(Flag::ok())
    }

    pub fn classify(&self) -> Result<PropertyReport> {
        let n = self.poset.len();
        let min = self.poset.min_element_idx();
        let max = self.poset.max_element_idx();

        let mut fully_normal = Flag::ok();
        let mut normal = Flag::ok();
        let mut quasi_normal = Flag::ok();
        for s in 0..n {
            let has_s_point = (0..self.points.len()).any(|xi| self.mu[xi][s].is_pos_finite());
            if !has_s_point && fully_normal.holds {
                fully_normal = Flag::fail(format!("no point measures positive finite at {}", self.poset.name(s)));
            }
            // the extremes of S stand for -inf/+inf and are excluded from
            // the normality quantifiers
            let extreme = Some(s) == min || Some(s) == max;
            if extreme {
                continue;
            }
            if !has_s_point && normal.holds {
                normal = Flag::fail(format!("no s-point at {}", self.poset.name(s)));
            }
            if quasi_normal.holds {
                let target = DimValue::Element(self.poset.name(s).to_string());
                let attained = (0..self.points.len())
                    .any(|xi| self.dim_idx(xi).map(|d| self.poset.dim_eq(&d, &target)).unwrap_or(false));
                if !attained {
                    quasi_normal = Flag::fail(format!("no point has dimension {}", self.poset.name(s)));
                }
            }
        }

        let mut p_strong = Flag::ok();
        let mut m_strong = Flag::ok();
        let mut p_small = Flag::ok();
        let mut m_small = Flag::ok();
        let mut principal = Flag::ok();
        for (xi, x) in self.points.iter().enumerate() {
            let all_inf = (0..n).all(|s| self.mu[xi][s].is_inf());
            let all_zero = (0..n).all(|s| self.mu[xi][s].is_zero());
            if p_strong.holds && all_inf {
                p_strong = Flag::fail(format!("{x} measures +inf everywhere"));
            }
            if m_strong.holds && all_zero {
                m_strong = Flag::fail(format!("{x} measures 0 everywhere"));
            }
            let d = self.dim_idx(xi)?;
            let md = self.mu_extended_idx(xi, &d);
            // smallness at a point subsumes strongness there: the degenerate
            // extremes (all-inf with dim +inf, all-zero with dim -inf) count
            // as failures even though the extended μ value alone would pass,
            // otherwise small structures would not always be strong
            if p_small.holds && (md.is_inf() || all_inf) {
                p_small = Flag::fail(if all_inf {
                    format!("{x} measures +inf everywhere")
                } else {
                    format!("{x} measures +inf at its dimension {d}")
                });
            }
            if m_small.holds && (md.is_zero() || all_zero) {
                m_small = Flag::fail(if all_zero && !md.is_zero() {
                    format!("{x} measures 0 everywhere")
                } else {
                    format!("{x} measures 0 at its dimension {d}")
                });
            }
            if principal.holds {
                if let Some(w) = self.principal_failure(xi, &d) {
                    principal = Flag::fail(w);
                }
            }
        }

        let combine = |a: &Flag, b: &Flag| {
            if a.holds {
                b.clone()
            } else {
                a.clone()
            }
        };
        Ok(PropertyReport {
            fully_normal,
            normal,
            quasi_normal,
            strong: combine(&p_strong, &m_strong),
            small: combine(&p_small, &m_small),
            p_strong,
            m_strong,
            p_small,
            m_small,
            principal,
        })
    }

    /// Principality at one point, decided through two independent routes
    /// that must agree: the principal-filter shape of S_x together with its
    /// infimum, and the vanishing of μ strictly above the dimension.
    fn principal_failure(&self, xi: usize, d: &DimValue) -> Option<String> {
        let x = &self.points[xi];
        let sx = self.s_set_idx(xi);
        let by_filter = match d {
            DimValue::Element(l) => {
                let li = self.poset.idx(l).expect("dim is an element");
                let mut filter = sx.clone();
                if !filter.contains(&li) {
                    filter.push(li);
                }
                let up = self.poset.upset_idx(li);
                let mut a = filter.clone();
                let mut b = up;
                a.sort_unstable();
                b.sort_unstable();
                a == b
            }
            // no lower bound in S at all: the filter formula demands all of S
            DimValue::Bottom => sx.len() == self.poset.len(),
            // empty finiteness set: the filter formula demands the empty set
            DimValue::Top => sx.is_empty(),
        };
        let by_vanishing = (0..self.poset.len()).all(|s| {
            let sv = DimValue::Element(self.poset.name(s).to_string());
            self.poset.dim_cmp(&sv, d) != Some(std::cmp::Ordering::Greater)
                || self.mu[xi][s].is_zero()
        });
        assert_eq!(
            by_filter, by_vanishing,
            "principality routes disagree at point {x}"
        );
        if by_filter {
            None
        } else {
            let s = (0..self.poset.len())
                .find(|&s| {
                    let sv = DimValue::Element(self.poset.name(s).to_string());
                    self.poset.dim_cmp(&sv, d) == Some(std::cmp::Ordering::Greater)
                        && !self.mu[xi][s].is_zero()
                })
                .map(|s| self.poset.name(s).to_string())
                .unwrap_or_default();
            Some(format!("{s} > dim {x} = {d} but mu({x},{s}) != 0"))
        }
    }

    /// Synchronization against a partial order on the points. `alpha` caps
    /// the subset size for the supremum condition; None means all subsets.
    pub fn check_synchronization(
        &self,
        point_order: &FinitePoset,
        alpha: Option<usize>,
    ) -> Result<SyncReport> {
        let mut ours: Vec<&String> = self.points.iter().collect();
        let mut theirs: Vec<&String> = point_order.elements().iter().collect();
        ours.sort();
        theirs.sort();
        if ours != theirs {
            return Err(Error::NotAPartialOrder(
                "the point order must range over exactly the structure's points".into(),
            ));
        }
        let mut cond1 = Flag::ok();
        let mut cond1_weak = Flag::ok();
        for x in &self.points {
            for y in &self.points {
                if x == y || !point_order.leq(x, y)? {
                    continue;
                }
                match self.leq_d(x, y)? {
                    LeqDVerdict::LessOrEqual | LeqDVerdict::EqualClass => {}
                    v => {
                        if cond1.holds {
                            cond1 = Flag::fail(format!("{x} <= {y} but the μ_D pairs compare as {v:?}"));
                        }
                        let dx = self.dim(x)?;
                        let dy = self.dim(y)?;
                        let dim_le = matches!(
                            self.poset.dim_cmp(&dx, &dy),
                            Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal)
                        );
                        if cond1_weak.holds && !dim_le {
                            cond1_weak = Flag::fail(format!("{x} <= {y} but dim {x} = {dx} is not <= dim {y} = {dy}"));
                        }
                    }
                }
            }
        }

        let cap = alpha.unwrap_or(self.points.len());
        let m = self.points.len();
        let mut cond2 = Flag::ok();
        if m <= 20 {
            'outer: for mask in 1u32..(1 << m) {
                let members: Vec<usize> =
                    (0..m).filter(|i| mask & (1 << i) != 0).collect();
                if members.len() > cap {
                    continue;
                }
                let names: Vec<usize> = members
                    .iter()
                    .map(|&i| point_order.idx(&self.points[i]))
                    .collect::<Result<_>>()?;
                let sup_pt = match point_order.bound_in_sbar(&names, BoundDir::Sup) {
                    Some(DimValue::Element(p)) => p,
                    _ => continue, // no supremum among the points: condition vacuous
                };
                let dims: Vec<DimValue> = members
                    .iter()
                    .map(|&i| self.dim_idx(i))
                    .collect::<Result<_>>()?;
                let dim_sup = self.dim(&sup_pt)?;
                let label = || {
                    members
                        .iter()
                        .map(|&i| self.points[i].as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                match self.poset.dim_sup(&dims) {
                    Some(sup_dims) if self.poset.dim_eq(&sup_dims, &dim_sup) => {}
                    Some(sup_dims) => {
                        cond2 = Flag::fail(format!(
                            "Y = {{{}}}: sup of dims = {sup_dims} but dim(sup Y = {sup_pt}) = {dim_sup}",
                            label()
                        ));
                        break 'outer;
                    }
                    None => {
                        cond2 = Flag::fail(format!(
                            "Y = {{{}}}: the dims have no supremum, dim(sup Y = {sup_pt}) = {dim_sup}",
                            label()
                        ));
                        break 'outer;
                    }
                }
            }
        } else {
            return Err(Error::Shape(format!(
                "synchronization subset scan supports at most 20 points, got {m}"
            )));
        }
        Ok(SyncReport { cond1, cond1_weak, cond2, alpha })
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    /// The 5-element lattice a < c < d < e, a < b < d with four points whose
    /// dims land at a, b, c and e; all values are 0 or +inf.
    pub fn lattice_example() -> DimensionStructure {
        let poset = FinitePoset::new(
            names(&["a", "b", "c", "d", "e"]),
            &[("a", "c"), ("c", "d"), ("d", "e"), ("a", "b"), ("b", "d")],
        )
        .unwrap();
        let z = ExtVal::Zero;
        let i = ExtVal::Inf;
        // columns in element order a,b,c,d,e
        let mu = vec![
            vec![z.clone(), z.clone(), z.clone(), z.clone(), z.clone()], // x: zero everywhere
            vec![i.clone(), z.clone(), i.clone(), z.clone(), z.clone()], // y: zero on {b,d,e}
            vec![i.clone(), i.clone(), z.clone(), z.clone(), z.clone()], // z: zero on {c,d,e}
            vec![i.clone(), i.clone(), i.clone(), i.clone(), z.clone()], // w: zero on {e}
        ];
        DimensionStructure::validate(StructureData {
            poset,
            points: names(&["x", "y", "z", "w"]),
            mu,
        })
        .unwrap()
    }

    /// Finite non-principal example: bot < a < e, bot < c, bot < d, one
    /// point vanishing exactly on {c, d}.
    pub fn non_principal_example() -> DimensionStructure {
        let poset = FinitePoset::new(
            names(&["bot", "a", "e", "c", "d"]),
            &[("bot", "a"), ("a", "e"), ("bot", "c"), ("bot", "d")],
        )
        .unwrap();
        let z = ExtVal::Zero;
        let i = ExtVal::Inf;
        let mu = vec![vec![i.clone(), i.clone(), i, z.clone(), z]];
        DimensionStructure::validate(StructureData { poset, points: names(&["x"]), mu })
            .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::extval::ExtVal;
    use crate::poset::{DimValue, FinitePoset};

    fn elem(s: &str) -> DimValue {
        DimValue::Element(s.to_string())
    }

    #[test]
    fn lattice_example_is_valid() {
        let d = lattice_example();
        assert_eq!(d.points().len(), 4);
    }

    #[test]
    fn lattice_example_dims() {
        let d = lattice_example();
        assert!(d.poset().dim_eq(&d.dim("x").unwrap(), &elem("a")));
        assert!(d.poset().dim_eq(&d.dim("y").unwrap(), &elem("b")));
        assert!(d.poset().dim_eq(&d.dim("z").unwrap(), &elem("c")));
        assert!(d.poset().dim_eq(&d.dim("w").unwrap(), &elem("e")));
    }

    #[test]
    fn lattice_example_spectra() {
        let d = lattice_example();
        assert_eq!(d.spectrum("y").unwrap().s0_x, vec!["b", "d", "e"]);
        assert_eq!(d.spectrum("x").unwrap().sinf_x, Vec::<String>::new());
    }

    #[test]
    fn lattice_example_mu_d_and_order() {
        let d = lattice_example();
        let w = d.mu_d("w").unwrap();
        assert_eq!(w.dim, elem("e"));
        assert_eq!(w.value, ExtVal::Zero);
        assert_eq!(d.leq_d("x", "y").unwrap(), LeqDVerdict::LessOrEqual);
        assert_eq!(d.leq_d("y", "w").unwrap(), LeqDVerdict::LessOrEqual);
        assert_eq!(d.leq_d("x", "z").unwrap(), LeqDVerdict::LessOrEqual);
        assert_eq!(d.leq_d("z", "w").unwrap(), LeqDVerdict::LessOrEqual);
        assert_eq!(d.leq_d("y", "z").unwrap(), LeqDVerdict::Incomparable);
        assert_eq!(d.leq_d("x", "x").unwrap(), LeqDVerdict::EqualClass);
    }

    #[test]
    fn ax1_violation_witnessed() {
        let poset = FinitePoset::chain(names(&["s", "p"]));
        let data = StructureData {
            poset,
            points: names(&["x"]),
            mu: vec![vec![ExtVal::fin(1, 1), ExtVal::fin(1, 1)]],
        };
        let report = check_axioms(&data).unwrap();
        assert_eq!(report.ax1, Some(("x".into(), "s".into(), "p".into())));
    }

    #[test]
    fn ax2_violation_witnessed() {
        let poset = FinitePoset::new(names(&["s", "p"]), &[] as &[(&str, &str)]).unwrap();
        let data = StructureData {
            poset,
            points: names(&["x"]),
            mu: vec![vec![ExtVal::fin(1, 1), ExtVal::Zero]],
        };
        let report = check_axioms(&data).unwrap();
        assert_eq!(report.ax2, Some(("x".into(), "s".into(), "p".into())));
    }

    #[test]
    fn ax3_violation_witnessed() {
        let poset = FinitePoset::new(
            names(&["a", "b", "p", "q"]),
            &[("a", "p"), ("a", "q"), ("b", "p"), ("b", "q")],
        )
        .unwrap();
        let z = ExtVal::Zero;
        let i = ExtVal::Inf;
        let data = StructureData {
            poset,
            points: names(&["x"]),
            mu: vec![vec![i.clone(), i, z.clone(), z]],
        };
        let report = check_axioms(&data).unwrap();
        let (x, zeros) = report.ax3.unwrap();
        assert_eq!(x, "x");
        assert_eq!(zeros, vec!["p", "q"]);
    }

    #[test]
    fn all_inf_point_dim_top() {
        let poset = FinitePoset::new(names(&["p", "q"]), &[] as &[(&str, &str)]).unwrap();
        let d = DimensionStructure::validate(StructureData {
            poset,
            points: names(&["x"]),
            mu: vec![vec![ExtVal::Inf, ExtVal::Inf]],
        })
        .unwrap();
        let md = d.mu_d("x").unwrap();
        assert_eq!(md.dim, DimValue::Top);
        assert_eq!(md.value, ExtVal::Zero);
    }

    #[test]
    fn all_zero_point_dim_min() {
        let d = lattice_example();
        // x is zero everywhere; min of S is a
        assert_eq!(d.dim("x").unwrap(), elem("a"));
    }

    #[test]
    fn s_point_dim_and_value() {
        let poset = FinitePoset::chain(names(&["s", "p"]));
        let d = DimensionStructure::validate(StructureData {
            poset,
            points: names(&["x"]),
            mu: vec![vec![ExtVal::fin(2, 1), ExtVal::Zero]],
        })
        .unwrap();
        assert!(d.is_s_point("x", "s").unwrap());
        assert_eq!(d.s_point_position("x").unwrap().as_deref(), Some("s"));
        let md = d.mu_d("x").unwrap();
        assert_eq!(md.dim, elem("s"));
        assert_eq!(md.value, ExtVal::fin(2, 1));
    }

    #[test]
    fn lattice_example_classification() {
        let d = lattice_example();
        let r = d.classify().unwrap();
        assert!(!r.fully_normal.holds);
        assert!(!r.normal.holds); // no s-point anywhere, b,c,d included
        assert!(!r.quasi_normal.holds); // nothing has dim d
        assert!(r.p_strong.holds);
        assert!(!r.m_strong.holds); // x measures 0 everywhere
        assert!(r.p_small.holds);
        assert!(!r.m_small.holds); // every point measures 0 at its dim
        assert!(r.principal.holds);
    }

    #[test]
    fn non_principal_witnessed() {
        let d = non_principal_example();
        assert_eq!(d.dim("x").unwrap(), elem("bot"));
        let r = d.classify().unwrap();
        assert!(!r.principal.holds);
        let w = r.principal.witness.unwrap();
        assert!(w.contains('a'), "witness names the offending position: {w}");
    }

    #[test]
    fn ordered_s_is_principal() {
        let poset = FinitePoset::chain(names(&["1", "2", "3"]));
        let d = DimensionStructure::validate(StructureData {
            poset,
            points: names(&["x", "y"]),
            mu: vec![
                vec![ExtVal::Inf, ExtVal::fin(3, 1), ExtVal::Zero],
                vec![ExtVal::Inf, ExtVal::Inf, ExtVal::Inf],
            ],
        })
        .unwrap();
        assert!(d.classify().unwrap().principal.holds);
    }

    #[test]
    fn class_c_partitions() {
        let d = lattice_example();
        assert_eq!(d.class_c(&elem("a"), &ExtVal::Zero).unwrap(), vec!["x"]);
        assert_eq!(d.class_c(&elem("e"), &ExtVal::Zero).unwrap(), vec!["w"]);
        assert!(d.class_c(&elem("d"), &ExtVal::Zero).unwrap().is_empty());
    }

    #[test]
    fn sync_failure_on_lattice_example() {
        let d = lattice_example();
        // the order induced by <=_D: x below everything, y and z below w
        let order = FinitePoset::new(
            names(&["x", "y", "z", "w"]),
            &[("x", "y"), ("x", "z"), ("y", "w"), ("z", "w")],
        )
        .unwrap();
        let r = d.check_synchronization(&order, None).unwrap();
        assert!(r.cond1.holds);
        assert!(!r.cond2.holds);
        let w = r.cond2.witness.unwrap();
        assert!(w.contains('y') && w.contains('z'), "witness is {{y,z}}: {w}");
    }

    #[test]
    fn sync_trivial_order_passes() {
        let d = lattice_example();
        let order = FinitePoset::new(names(&["x", "y", "z", "w"]), &[] as &[(&str, &str)]).unwrap();
        let r = d.check_synchronization(&order, None).unwrap();
        assert!(r.synchronized());
    }

    #[test]
    fn sync_rejects_mismatched_points() {
        let d = lattice_example();
        let order = FinitePoset::chain(names(&["x", "y"]));
        assert!(matches!(
            d.check_synchronization(&order, None),
            Err(Error::NotAPartialOrder(_))
        ));
    }

    #[test]
    fn ax1prime_on_chain() {
        let poset = FinitePoset::chain(names(&["s", "p"]));
        let good = DimensionStructure::validate(StructureData {
            poset: poset.clone(),
            points: names(&["x"]),
            mu: vec![vec![ExtVal::fin(1, 1), ExtVal::Zero]],
        })
        .unwrap();
        assert!(good.check_ax1prime().unwrap().holds);
        // bypass validation to exercise the checker on a bad table
        let bad = StructureData {
            poset,
            points: names(&["x"]),
            mu: vec![vec![ExtVal::fin(1, 1), ExtVal::fin(1, 1)]],
        };
        assert!(!check_axioms(&bad).unwrap().passed());
    }

    #[test]
    fn ax1prime_needs_chain() {
        let d = lattice_example();
        assert!(matches!(d.check_ax1prime(), Err(Error::Shape(_))));
    }

    #[test]
    fn discrete_bounds_on_chain() {
        let poset = FinitePoset::chain(names(&["1", "2", "3", "4"]));
        let d = DimensionStructure::validate(StructureData {
            poset,
            points: names(&["x", "y"]),
            mu: vec![
                vec![ExtVal::Inf, ExtVal::fin(5, 2), ExtVal::Zero, ExtVal::Zero],
                vec![ExtVal::Zero, ExtVal::Zero, ExtVal::Zero, ExtVal::Zero],
            ],
        })
        .unwrap();
        assert!(d.discrete_bounds_check().unwrap().holds);
    }
}
