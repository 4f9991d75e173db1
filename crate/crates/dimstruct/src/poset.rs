//! Finite partially ordered sets with decidable order queries, the order
//! combinators used by the structure constructions, and values in the
//! bar-extension S ∪ {-inf, +inf}.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// A finite poset. The relation is kept reflexive-transitively closed, so
/// every query is a table lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    elements: Vec<String>,
    index: HashMap<String, usize>,
    /// n*n row-major matrix; leq[a*n + b] holds iff a <= b.
    leq: Vec<bool>,
}

/// A value of the bar-extension: bottom (-inf), a poset element, or top (+inf).
///
/// When the poset has a minimum m, Bottom and Element(m) denote the same
/// dimension; dually for Top and a maximum. Use [`FinitePoset::dim_cmp`]
/// and [`FinitePoset::dim_eq`], which apply that identification.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DimValue {
    Bottom,
    Element(String),
    Top,
}

impl fmt::Display for DimValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimValue::Bottom => write!(f, "-inf"),
            DimValue::Top => write!(f, "+inf"),
            DimValue::Element(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundDir {
    Inf,
    Sup,
}

/// Order-theoretic profile of a finite poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetProperties {
    pub ordered: bool,
    pub dense: bool,
    /// Constant for finite posets; reported for interface uniformity.
    pub discrete: bool,
    pub lattice: bool,
    pub complete: bool,
    pub has_min: bool,
    pub has_max: bool,
    pub successors: BTreeMap<String, String>,
    pub predecessors: BTreeMap<String, String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConvexityReport {
    pub convex: bool,
    pub up_convex: bool,
    pub down_convex: bool,
    pub principal_filter: bool,
}

impl FinitePoset {
    /// Builds a poset from identifiers and a pre-closure relation given as
    /// pairs (a, b) meaning a <= b. The reflexive-transitive closure is
    /// taken; a closure that violates antisymmetry is rejected.
    pub fn new<S: AsRef<str>>(elements: Vec<String>, pairs: &[(S, S)]) -> Result<FinitePoset> {
        let n = elements.len();
        let mut index = HashMap::with_capacity(n);
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::DuplicateName(e.clone()));
            }
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in pairs {
            let ia = *index
                .get(a.as_ref())
                .ok_or_else(|| Error::UnknownElement(a.as_ref().to_string()))?;
            let ib = *index
                .get(b.as_ref())
                .ok_or_else(|| Error::UnknownElement(b.as_ref().to_string()))?;
            leq[ia * n + ib] = true;
        }
        // Warshall closure
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::Cycle(elements[i].clone(), elements[j].clone()));
                }
            }
        }
        Ok(FinitePoset { elements, index, leq })
    }

    /// A total order a0 < a1 < ... in the listed order.
    pub fn chain(elements: Vec<String>) -> FinitePoset {
        let pairs: Vec<(String, String)> = elements
            .windows(2)
            .map(|w| (w[0].clone(), w[1].clone()))
            .collect();
        FinitePoset::new(elements, &pairs).expect("a chain is always a valid poset")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn idx(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub(crate) fn leq_idx(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub(crate) fn lt_idx(&self, a: usize, b: usize) -> bool {
        a != b && self.leq_idx(a, b)
    }

    pub fn leq(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.leq_idx(self.idx(a)?, self.idx(b)?))
    }

    pub fn lt(&self, a: &str, b: &str) -> Result<bool> {
        Ok(self.lt_idx(self.idx(a)?, self.idx(b)?))
    }

    pub fn comparable(&self, a: &str, b: &str) -> Result<bool> {
        let (ia, ib) = (self.idx(a)?, self.idx(b)?);
        Ok(self.leq_idx(ia, ib) || self.leq_idx(ib, ia))
    }

    /// The closed relation as an explicit pair list in element order,
    /// reflexive pairs included.
    pub fn closed_pairs(&self) -> Vec<(String, String)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.leq_idx(i, j) {
                    out.push((self.elements[i].clone(), self.elements[j].clone()));
                }
            }
        }
        out
    }

    pub fn min_element_idx(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|j| self.leq_idx(m, j)))
    }

    pub fn max_element_idx(&self) -> Option<usize> {
        (0..self.len()).find(|&m| (0..self.len()).all(|j| self.leq_idx(j, m)))
    }

    pub fn min_element(&self) -> Option<&str> {
        self.min_element_idx().map(|i| self.name(i))
    }

    pub fn max_element(&self) -> Option<&str> {
        self.max_element_idx().map(|i| self.name(i))
    }

    pub fn is_chain(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| self.leq_idx(i, j) || self.leq_idx(j, i)))
    }

    /// s+ = min{p : p > s}, when it exists.
    pub fn successor_idx(&self, s: usize) -> Option<usize> {
        let above: Vec<usize> = (0..self.len()).filter(|&p| self.lt_idx(s, p)).collect();
        above
            .iter()
            .copied()
            .find(|&m| above.iter().all(|&p| self.leq_idx(m, p)))
    }

    pub fn predecessor_idx(&self, s: usize) -> Option<usize> {
        let below: Vec<usize> = (0..self.len()).filter(|&p| self.lt_idx(p, s)).collect();
        below
            .iter()
            .copied()
            .find(|&m| below.iter().all(|&p| self.leq_idx(p, m)))
    }

    pub(crate) fn upset_idx(&self, s: usize) -> Vec<usize> {
        (0..self.len()).filter(|&p| self.leq_idx(s, p)).collect()
    }

    /// Infimum or supremum of a subset, valued in the bar-extension.
    ///
    /// For inf: `Top` on the empty set, `Bottom` when a nonempty subset has
    /// no lower bound at all, `None` (undefined) when lower bounds exist
    /// but no greatest one does. Dual for sup.
    pub fn bound_in_sbar(&self, subset: &[usize], dir: BoundDir) -> Option<DimValue> {
        if subset.is_empty() {
            return Some(match dir {
                BoundDir::Inf => DimValue::Top,
                BoundDir::Sup => DimValue::Bottom,
            });
        }
        let bounds: Vec<usize> = (0..self.len())
            .filter(|&t| {
                subset.iter().all(|&s| match dir {
                    BoundDir::Inf => self.leq_idx(t, s),
                    BoundDir::Sup => self.leq_idx(s, t),
                })
            })
            .collect();
        if bounds.is_empty() {
            return Some(match dir {
                BoundDir::Inf => DimValue::Bottom,
                BoundDir::Sup => DimValue::Top,
            });
        }
        let extreme = bounds.iter().copied().find(|&g| {
            bounds.iter().all(|&t| match dir {
                BoundDir::Inf => self.leq_idx(t, g),
                BoundDir::Sup => self.leq_idx(g, t),
            })
        });
        extreme.map(|g| DimValue::Element(self.elements[g].clone()))
    }

    pub fn bound_of_names(&self, subset: &[String], dir: BoundDir) -> Result<Option<DimValue>> {
        let idxs: Vec<usize> = subset
            .iter()
            .map(|s| self.idx(s))
            .collect::<Result<_>>()?;
        Ok(self.bound_in_sbar(&idxs, dir))
    }

    pub fn properties(&self) -> PosetProperties {
        let n = self.len();
        let ordered = self.is_chain();
        // dense per the literal definition: every strict pair has a strict
        // intermediate; finite posets satisfy it only vacuously.
        let dense = (0..n).all(|i| {
            (0..n).all(|j| {
                !self.lt_idx(i, j)
                    || (0..n).any(|k| self.lt_idx(i, k) && self.lt_idx(k, j))
            })
        });
        let lattice = (0..n).all(|i| {
            (0..n).all(|j| {
                matches!(self.bound_in_sbar(&[i, j], BoundDir::Inf), Some(DimValue::Element(_)))
                    && matches!(self.bound_in_sbar(&[i, j], BoundDir::Sup), Some(DimValue::Element(_)))
            })
        });
        let has_min = self.min_element_idx().is_some();
        let has_max = self.max_element_idx().is_some();
        let complete = n > 0 && lattice && has_min && has_max;
        let mut successors = BTreeMap::new();
        let mut predecessors = BTreeMap::new();
        for s in 0..n {
            if let Some(p) = self.successor_idx(s) {
                successors.insert(self.elements[s].clone(), self.elements[p].clone());
            }
            if let Some(p) = self.predecessor_idx(s) {
                predecessors.insert(self.elements[s].clone(), self.elements[p].clone());
            }
        }
        PosetProperties {
            ordered,
            dense,
            discrete: true,
            lattice,
            complete,
            has_min,
            has_max,
            successors,
            predecessors,
        }
    }

    pub fn convexity(&self, subset: &[String]) -> Result<ConvexityReport> {
        let idxs: HashSet<usize> = subset
            .iter()
            .map(|s| self.idx(s))
            .collect::<Result<_>>()?;
        let n = self.len();
        let convex = idxs.iter().all(|&a| {
            idxs.iter().all(|&c| {
                (0..n).all(|b| !(self.lt_idx(a, b) && self.lt_idx(b, c)) || idxs.contains(&b))
            })
        });
        let up_convex = idxs
            .iter()
            .all(|&a| (0..n).all(|b| !self.lt_idx(a, b) || idxs.contains(&b)));
        let down_convex = idxs
            .iter()
            .all(|&a| (0..n).all(|b| !self.lt_idx(b, a) || idxs.contains(&b)));
        // principal filter: the subset is the up-set of its own minimum
        let principal_filter = idxs
            .iter()
            .copied()
            .find(|&m| idxs.iter().all(|&s| self.leq_idx(m, s)))
            .map(|m| {
                let up: HashSet<usize> = self.upset_idx(m).into_iter().collect();
                up == idxs
            })
            .unwrap_or(false);
        Ok(ConvexityReport { convex, up_convex, down_convex, principal_filter })
    }

    fn canon_dim(&self, d: &DimValue) -> DimCanon {
        match d {
            DimValue::Bottom => match self.min_element_idx() {
                Some(m) => DimCanon::Elem(m),
                None => DimCanon::Bottom,
            },
            DimValue::Top => match self.max_element_idx() {
                Some(m) => DimCanon::Elem(m),
                None => DimCanon::Top,
            },
            DimValue::Element(s) => DimCanon::Elem(
                self.index
                    .get(s.as_str())
                    .copied()
                    .unwrap_or_else(|| panic!("dim value {s} is not an element")),
            ),
        }
    }

    /// Comparison in the bar-extension, identifying Bottom/Top with the
    /// poset minimum/maximum when those exist. `None` means incomparable.
    pub fn dim_cmp(&self, a: &DimValue, b: &DimValue) -> Option<Ordering> {
        use DimCanon::*;
        match (self.canon_dim(a), self.canon_dim(b)) {
            (Bottom, Bottom) | (Top, Top) => Some(Ordering::Equal),
            (Bottom, _) | (_, Top) => Some(Ordering::Less),
            (_, Bottom) | (Top, _) => Some(Ordering::Greater),
            (Elem(x), Elem(y)) => {
                if x == y {
                    Some(Ordering::Equal)
                } else if self.leq_idx(x, y) {
                    Some(Ordering::Less)
                } else if self.leq_idx(y, x) {
                    Some(Ordering::Greater)
                } else {
                    None
                }
            }
        }
    }

    pub fn dim_eq(&self, a: &DimValue, b: &DimValue) -> bool {
        self.dim_cmp(a, b) == Some(Ordering::Equal)
    }

    /// Least upper bound of dimension values in the bar-extension, or
    /// `None` when it does not exist.
    pub fn dim_sup(&self, vals: &[DimValue]) -> Option<DimValue> {
        let mut elems: Vec<usize> = Vec::new();
        for v in vals {
            match self.canon_dim(v) {
                DimCanon::Top => return Some(DimValue::Top),
                DimCanon::Bottom => {}
                DimCanon::Elem(i) => elems.push(i),
            }
        }
        if elems.is_empty() {
            return Some(DimValue::Bottom);
        }
        self.bound_in_sbar(&elems, BoundDir::Sup)
    }

    // ---- combinators ----

    /// Product order on pairs.
    pub fn product(&self, other: &FinitePoset) -> FinitePoset {
        self.combine_pairs(other, |p, (a1, b1), (a2, b2)| {
            p.0.leq_idx(a1, a2) && p.1.leq_idx(b1, b2)
        })
    }

    /// Lexicographic order on pairs: first coordinates strictly ordered, or
    /// equal firsts and second coordinates ordered.
    pub fn lexicographic(&self, other: &FinitePoset) -> FinitePoset {
        self.combine_pairs(other, |p, (a1, b1), (a2, b2)| {
            p.0.lt_idx(a1, a2) || (a1 == a2 && p.1.leq_idx(b1, b2))
        })
    }

    fn combine_pairs(
        &self,
        other: &FinitePoset,
        rel: impl Fn((&FinitePoset, &FinitePoset), (usize, usize), (usize, usize)) -> bool,
    ) -> FinitePoset {
        let mut elements = Vec::with_capacity(self.len() * other.len());
        for a in &self.elements {
            for b in &other.elements {
                elements.push(pair_name(a, b));
            }
        }
        let n = elements.len();
        let m = other.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = rel((self, other), (i / m, i % m), (j / m, j % m));
            }
        }
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        FinitePoset { elements, index, leq }
    }

    /// Disjoint union of blocks indexed by a poset: inside a block the block
    /// order, across blocks s < t iff index(s) < index(t) strictly.
    pub fn indexed_sum(index_poset: &FinitePoset, blocks: &[(String, FinitePoset)]) -> Result<FinitePoset> {
        let mut elements = Vec::new();
        let mut owner = Vec::new(); // index-poset idx per element
        let mut seen: HashSet<&str> = HashSet::new();
        for (idx_name, block) in blocks {
            let bi = index_poset.idx(idx_name)?;
            for e in block.elements() {
                if !seen.insert(e.as_str()) {
                    return Err(Error::Disjointness(e.clone()));
                }
                elements.push(e.clone());
                owner.push(bi);
            }
        }
        let n = elements.len();
        let mut leq = vec![false; n * n];
        let mut offset = 0usize;
        let mut local = vec![(0usize, 0usize); n]; // (block number, local idx)
        for (bnum, (_, block)) in blocks.iter().enumerate() {
            for k in 0..block.len() {
                local[offset + k] = (bnum, k);
            }
            offset += block.len();
        }
        for i in 0..n {
            for j in 0..n {
                let (bi, li) = local[i];
                let (bj, lj) = local[j];
                leq[i * n + j] = if bi == bj {
                    blocks[bi].1.leq_idx(li, lj)
                } else {
                    index_poset.lt_idx(owner[i], owner[j])
                };
            }
        }
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Ok(FinitePoset { elements, index, leq })
    }
}

enum DimCanon {
    Bottom,
    Elem(usize),
    Top,
}

/// Canonical unambiguous name for a tuple: "(a|b)" with '\\', '(', ')'
/// and '|' escaped.
pub fn pair_name(a: &str, b: &str) -> String {
    fn esc(s: &str) -> String {
        let mut out = String::with_capacity(s.len());
        for c in s.chars() {
            if matches!(c, '\\' | '(' | ')' | '|') {
                out.push('\\');
            }
            out.push(c);
        }
        out
    }
    format!("({}|{})", esc(a), esc(b))
}
