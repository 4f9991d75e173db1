//! Completion of pre-structures: adjoin an infimum for every finiteness
//! class that lacks one, extend μ by suprema and the order by the four-case
//! rule, then re-verify everything. Also principality preservation and the
//! embedding of the completion into any host structure.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extval::ExtVal;
use crate::poset::{BoundDir, DimValue, FinitePoset};
use crate::structure::{check_axioms, AxiomReport, DimensionStructure, Flag, StructureData};

/// A structure satisfying the first two axioms; the infimum axiom may fail.
#[derive(Clone, Debug)]
pub struct PreDimensionStructure {
    data: StructureData,
    /// Infimum-axiom status, informational only.
    pub ax3: Option<(String, Vec<String>)>,
}

/// Runs the full axiom check but only treats the first two axioms as
/// binding; the infimum axiom is reported informationally.
pub fn check_pre_axioms(candidate: &StructureData) -> Result<AxiomReport> {
    check_axioms(candidate)
}

impl PreDimensionStructure {
    pub fn validate(data: StructureData) -> Result<PreDimensionStructure> {
        let report = check_pre_axioms(&data)?;
        if report.ax1.is_some() || report.ax2.is_some() {
            return Err(Error::PreInvalid(report.to_string()));
        }
        Ok(PreDimensionStructure { data, ax3: report.ax3 })
    }

    pub fn data(&self) -> &StructureData {
        &self.data
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.data.poset
    }

    pub fn points(&self) -> &[String] {
        &self.data.points
    }

    /// Positions with a finite measurement, sorted by index.
    fn class_idx(&self, xi: usize) -> Vec<usize> {
        (0..self.data.poset.len())
            .filter(|&si| self.data.mu[xi][si].is_finite())
            .collect()
    }

    /// Every position strictly above the (possibly adjoined) infimum of the
    /// finiteness class must vanish. For classes with an attained infimum
    /// s0 that means every position above s0; for classes getting a new
    /// infimum the positions above it are exactly the class members.
    pub fn principal(&self) -> Flag {
        let sp = &self.data.poset;
        for (xi, x) in self.data.points.iter().enumerate() {
            let class = self.class_idx(xi);
            if class.is_empty() {
                continue;
            }
            match sp.bound_in_sbar(&class, BoundDir::Inf) {
                Some(DimValue::Element(s0)) => {
                    for p in 0..sp.len() {
                        if sp.lt(&s0, sp.name(p)).unwrap() && !self.data.mu[xi][p].is_zero() {
                            return Flag::fail(format!(
                                "mu({x},{}) != 0 above the infimum {s0}",
                                sp.name(p)
                            ));
                        }
                    }
                }
                _ => {
                    for &p in &class {
                        if !self.data.mu[xi][p].is_zero() {
                            return Flag::fail(format!(
                                "mu({x},{}) != 0 in a class with no infimum",
                                sp.name(p)
                            ));
                        }
                    }
                }
            }
        }
        Flag::ok()
    }
}

/// Canonical identifier of an adjoined infimum, built from the sorted class.
fn class_name(poset: &FinitePoset, class: &[usize]) -> String {
    let mut names: Vec<&str> = class.iter().map(|&i| poset.name(i)).collect();
    names.sort_unstable();
    format!("inf{{{}}}", names.join(","))
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionResult {
    #[serde(skip)]
    pub extended: DimensionStructure,
    /// Adjoined element name, paired with the class it completes.
    pub new_elements: Vec<(String, Vec<String>)>,
    /// Old elements keep their names; the inclusion is recorded explicitly.
    pub embedding_of_s: Vec<(String, String)>,
}

/// Completes a pre-structure: one new element per distinct finiteness class
/// with no infimum, μ extended by class suprema, order extended by the
/// four-case rule, everything re-verified. Empty classes have infimum at the
/// formal top and never spawn elements. On a lattice input the output is the
/// input itself.
pub fn extend(pre: &PreDimensionStructure) -> Result<ExtensionResult> {
    let sp = pre.poset();
    let n = sp.len();

    // distinct classes needing an infimum, keyed by the sorted index set
    let mut classes: BTreeMap<Vec<usize>, String> = BTreeMap::new();
    for xi in 0..pre.points().len() {
        let class = pre.class_idx(xi);
        if class.is_empty() {
            continue;
        }
        if matches!(
            sp.bound_in_sbar(&class, BoundDir::Inf),
            Some(DimValue::Element(_))
        ) {
            continue;
        }
        classes
            .entry(class.clone())
            .or_insert_with(|| class_name(sp, &class));
    }
    let new: Vec<(Vec<usize>, String)> =
        classes.into_iter().map(|(c, name)| (c, name)).collect();
    for (_, name) in &new {
        if sp.contains(name) {
            return Err(Error::DuplicateName(name.clone()));
        }
    }

    let m = n + new.len();
    let mut elements: Vec<String> = sp.elements().to_vec();
    elements.extend(new.iter().map(|(_, name)| name.clone()));

    // the four-case order rule, as a full relation matrix
    let mut leq = vec![false; m * m];
    let below_all = |t: usize, class: &[usize]| class.iter().all(|&p| sp.leq_idx(t, p));
    let subset = |a: &[usize], b: &[usize]| a.iter().all(|p| b.contains(p));
    for a in 0..m {
        for b in 0..m {
            leq[a * m + b] = match (a.checked_sub(n), b.checked_sub(n)) {
                (None, None) => sp.leq_idx(a, b),
                (Some(i), None) => new[i].0.contains(&b),
                (None, Some(j)) => below_all(a, &new[j].0),
                (Some(i), Some(j)) => subset(&new[j].0, &new[i].0),
            };
        }
    }
    // the relation is an order by construction, but never taken on faith
    for a in 0..m {
        if !leq[a * m + a] {
            return Err(Error::NotAPartialOrder(format!("{} not reflexive", elements[a])));
        }
        for b in 0..m {
            if a != b && leq[a * m + b] && leq[b * m + a] {
                return Err(Error::NotAPartialOrder(format!(
                    "{} and {} ordered both ways",
                    elements[a], elements[b]
                )));
            }
            for c in 0..m {
                if leq[a * m + b] && leq[b * m + c] && !leq[a * m + c] {
                    return Err(Error::NotAPartialOrder(format!(
                        "{} <= {} <= {} but not {} <= {}",
                        elements[a], elements[b], elements[c], elements[a], elements[c]
                    )));
                }
            }
        }
    }
    let mut pairs = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if a != b && leq[a * m + b] {
                pairs.push((elements[a].clone(), elements[b].clone()));
            }
        }
    }
    let extended_poset = FinitePoset::new(elements, &pairs)?;

    let mu: Vec<Vec<ExtVal>> = pre
        .data
        .mu
        .iter()
        .map(|row| {
            let mut out = row.clone();
            for (class, _) in &new {
                out.push(ExtVal::sup(class.iter().map(|&s| &row[s])));
            }
            out
        })
        .collect();

    let extended = DimensionStructure::validate(StructureData {
        poset: extended_poset,
        points: pre.points().to_vec(),
        mu,
    })
    .map_err(|e| match e {
        Error::Validation(report) => Error::PostValidation(report.to_string()),
        other => other,
    })?;

    if sp.properties().lattice {
        assert!(new.is_empty(), "a finite lattice has every infimum already");
    }
    if new.is_empty() {
        assert_eq!(extended.data(), pre.data().clone());
    }
    let new_elements: Vec<(String, Vec<String>)> = new
        .iter()
        .map(|(class, name)| {
            (
                name.clone(),
                class.iter().map(|&i| sp.name(i).to_string()).collect(),
            )
        })
        .collect();
    // each adjoined element is the infimum of the class it completes: the
    // dim of any point with that class lands exactly on it
    for (xi, x) in pre.points().iter().enumerate() {
        let class = pre.class_idx(xi);
        if let Some((_, name)) = new.iter().find(|(c, _)| *c == class) {
            assert_eq!(extended.dim(x)?, DimValue::Element(name.clone()));
        }
    }

    let embedding_of_s = sp
        .elements()
        .iter()
        .map(|s| (s.clone(), s.clone()))
        .collect();
    Ok(ExtensionResult { extended, new_elements, embedding_of_s })
}

#[derive(Clone, Debug, Serialize)]
pub struct PrincipalityReport {
    pub pre_principal: bool,
    pub extended_principal: bool,
    /// Fails only if a principal input extends to a non-principal output.
    pub preserved: Flag,
}

/// A principal input must complete to a principal output; vacuously
/// preserved otherwise.
pub fn check_principality_preserved(
    pre: &PreDimensionStructure,
    result: &ExtensionResult,
) -> Result<PrincipalityReport> {
    let pre_principal = pre.principal().holds;
    let ext = result.extended.classify()?.principal;
    let preserved = if pre_principal && !ext.holds {
        Flag::fail(format!(
            "principal input, non-principal completion: {:?}",
            ext.witness
        ))
    } else {
        Flag::ok()
    };
    Ok(PrincipalityReport {
        pre_principal,
        extended_principal: ext.holds,
        preserved,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingReport {
    /// Completed element -> target element.
    pub f: Vec<(String, String)>,
    pub injective: Flag,
    pub order_preserving: Flag,
    pub mu_agrees: Flag,
    pub sup_inequality: Flag,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.injective.holds
            && self.order_preserving.holds
            && self.mu_agrees.holds
            && self.sup_inequality.holds
    }
}

/// Embeds the completion into any structure hosting the pre-structure as a
/// substructure: old elements map to themselves, each adjoined element to
/// the target-side infimum of its class. The input must be principal.
pub fn embed_into(
    pre: &PreDimensionStructure,
    result: &ExtensionResult,
    target: &DimensionStructure,
) -> Result<EmbeddingReport> {
    let sp = pre.poset();
    // the target must contain the pre-structure verbatim
    for x in pre.points() {
        target
            .point_idx(x)
            .map_err(|_| Error::NotASubstructure(format!("target lacks point {x}")))?;
    }
    if target.points().len() != pre.points().len() {
        return Err(Error::NotASubstructure("target has extra points".into()));
    }
    for s in sp.elements() {
        if !target.poset().contains(s) {
            return Err(Error::NotASubstructure(format!("target lacks element {s}")));
        }
    }
    for s in sp.elements() {
        for p in sp.elements() {
            if sp.leq(s, p)? != target.poset().leq(s, p)? {
                return Err(Error::NotASubstructure(format!(
                    "order of {s}, {p} differs in the target"
                )));
            }
        }
    }
    for (xi, x) in pre.points().iter().enumerate() {
        for (si, s) in sp.elements().iter().enumerate() {
            if target.mu(x, s)? != &pre.data.mu[xi][si] {
                return Err(Error::NotASubstructure(format!(
                    "mu({x},{s}) differs in the target"
                )));
            }
        }
    }
    let principal = pre.principal();
    if !principal.holds {
        return Err(Error::Precondition(format!(
            "embedding requires a principal input: {}",
            principal.witness.unwrap_or_default()
        )));
    }

    let mut f: Vec<(String, String)> = sp
        .elements()
        .iter()
        .map(|s| (s.clone(), s.clone()))
        .collect();
    for (name, class) in &result.new_elements {
        match target.poset().bound_of_names(class, BoundDir::Inf)? {
            Some(DimValue::Element(t)) => f.push((name.clone(), t)),
            _ => return Err(Error::MissingInfimum(name.clone())),
        }
    }

    let mut injective = Flag::ok();
    for (i, (a, fa)) in f.iter().enumerate() {
        for (b, fb) in &f[i + 1..] {
            if fa == fb && injective.holds {
                injective = Flag::fail(format!("{a} and {b} both map to {fa}"));
            }
        }
    }
    let mut order_preserving = Flag::ok();
    let epos = result.extended.poset();
    for (a, fa) in &f {
        for (b, fb) in &f {
            if epos.lt(a, b)? && !target.poset().lt(fa, fb)? && order_preserving.holds {
                order_preserving =
                    Flag::fail(format!("{a} < {b} but f images {fa}, {fb} are not"));
            }
        }
    }
    let mut mu_agrees = Flag::ok();
    for x in pre.points() {
        for s in sp.elements() {
            if target.mu(x, s)? != result.extended.mu(x, s)? && mu_agrees.holds {
                mu_agrees = Flag::fail(format!("mu({x},{s}) differs"));
            }
        }
    }
    let mut sup_inequality = Flag::ok();
    for (name, class) in &result.new_elements {
        let ft = &f.iter().find(|(a, _)| a == name).unwrap().1;
        for (xi, x) in pre.points().iter().enumerate() {
            let xclass: Vec<String> = pre
                .class_idx(xi)
                .iter()
                .map(|&i| sp.name(i).to_string())
                .collect();
            if &xclass != class {
                continue;
            }
            let sup = ExtVal::sup(class.iter().map(|s| {
                result.extended.mu(x, s).unwrap()
            }));
            if target.mu(x, ft)? < &sup && sup_inequality.holds {
                sup_inequality = Flag::fail(format!(
                    "mu({x},{ft}) = {} below the class supremum {sup}",
                    target.mu(x, ft)?
                ));
            }
        }
    }
    Ok(EmbeddingReport { f, injective, order_preserving, mu_agrees, sup_inequality })
}
