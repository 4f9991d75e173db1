//! Maps between structures: morphism / isomorphism / semi-isomorphism
//! verification, dimension transport, the sign collapse, and the surjective
//! pushforward criterion on chains.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extval::ExtVal;
use crate::poset::DimValue;
use crate::structure::{check_axioms, DimensionStructure, Flag, StructureData};

/// A pair of maps: points to points and positions to positions. Order
/// preservation of the position map is a verified property, never assumed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StructureMap {
    pub f: Vec<(String, String)>,
    pub g: Vec<(String, String)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    Morphism,
    Isomorphism,
    SemiIsomorphism,
}

impl StructureMap {
    pub fn identity(d: &DimensionStructure) -> StructureMap {
        StructureMap {
            f: d.points().iter().map(|x| (x.clone(), x.clone())).collect(),
            g: d.poset().elements().iter().map(|s| (s.clone(), s.clone())).collect(),
        }
    }

    fn as_lookup<'a>(
        pairs: &'a [(String, String)],
        domain: &[String],
        codomain_has: impl Fn(&str) -> bool,
        what: &str,
    ) -> Result<HashMap<&'a str, &'a str>> {
        let mut map = HashMap::new();
        for (a, b) in pairs {
            if map.insert(a.as_str(), b.as_str()).is_some() {
                return Err(Error::Shape(format!("{what} maps {a} twice")));
            }
            if !codomain_has(b) {
                return Err(Error::Shape(format!("{what} target {b} does not exist")));
            }
        }
        for a in domain {
            if !map.contains_key(a.as_str()) {
                return Err(Error::Shape(format!("{what} is not total: {a} unmapped")));
            }
        }
        Ok(map)
    }
}

struct ResolvedMap<'a> {
    f: HashMap<&'a str, &'a str>,
    g: HashMap<&'a str, &'a str>,
}

fn resolve<'a>(
    d1: &DimensionStructure,
    d2: &DimensionStructure,
    map: &'a StructureMap,
) -> Result<ResolvedMap<'a>> {
    let f = StructureMap::as_lookup(
        &map.f,
        d1.points(),
        |b| d2.points().iter().any(|p| p == b),
        "point map",
    )?;
    let g = StructureMap::as_lookup(
        &map.g,
        d1.poset().elements(),
        |b| d2.poset().contains(b),
        "element map",
    )?;
    Ok(ResolvedMap { f, g })
}

fn is_bijection(map: &HashMap<&str, &str>, codomain: &[String]) -> bool {
    let image: HashSet<&str> = map.values().copied().collect();
    image.len() == map.len() && image.len() == codomain.len()
}

/// Checks the defining condition of the requested map kind at every point
/// and position, after verifying order preservation of the element map and
/// (for the bijective kinds) bijectivity.
pub fn verify_map(
    d1: &DimensionStructure,
    d2: &DimensionStructure,
    map: &StructureMap,
    kind: MapKind,
) -> Result<Flag> {
    let r = resolve(d1, d2, map)?;
    if kind != MapKind::Morphism {
        if !is_bijection(&r.f, d2.points()) {
            return Err(Error::Shape("point map must be a bijection".into()));
        }
        if !is_bijection(&r.g, d2.poset().elements()) {
            return Err(Error::Shape("element map must be a bijection".into()));
        }
    }
    for s in d1.poset().elements() {
        for p in d1.poset().elements() {
            if d1.poset().leq(s, p)? && !d2.poset().leq(r.g[s.as_str()], r.g[p.as_str()])? {
                return Ok(Flag::fail(format!(
                    "element map does not preserve {s} <= {p}"
                )));
            }
        }
    }
    for x in d1.points() {
        let fx = r.f[x.as_str()];
        for s in d1.poset().elements() {
            let gs = r.g[s.as_str()];
            let a = d1.mu(x, s)?;
            let b = d2.mu(fx, gs)?;
            let ok = match kind {
                MapKind::Morphism => a <= b,
                MapKind::Isomorphism => a == b,
                MapKind::SemiIsomorphism => a.is_finite() == b.is_finite(),
            };
            if !ok {
                return Ok(Flag::fail(format!(
                    "at ({x},{s}): mu = {a} maps to mu({fx},{gs}) = {b}"
                )));
            }
            if kind == MapKind::SemiIsomorphism {
                // finiteness equivalence is the same statement as the
                // infinity equivalence; a divergence is an implementation bug
                assert_eq!(a.is_inf(), b.is_inf());
            }
        }
    }
    Ok(Flag::ok())
}

/// Outcome of the dimension transport check.
#[derive(Clone, Debug, Serialize)]
pub struct TransportReport {
    /// Dims carried over exactly (iso/semi-iso) or dominated (morphism,
    /// under the positivity/comparability guard).
    pub dims: Flag,
    /// μ at the dim carried over exactly; only meaningful for isomorphisms.
    pub values: Flag,
}

fn transport_dim(
    d1: &DimensionStructure,
    d2: &DimensionStructure,
    g: &HashMap<&str, &str>,
    v: &DimValue,
) -> DimValue {
    // aliased extremes transport through their representative element
    let via = |name: Option<&str>, fallback: DimValue| match name {
        Some(m) => DimValue::Element(g[m].to_string()),
        None => fallback,
    };
    let _ = d2;
    match v {
        DimValue::Element(s) => DimValue::Element(g[s.as_str()].to_string()),
        DimValue::Bottom => via(d1.poset().min_element(), DimValue::Bottom),
        DimValue::Top => via(d1.poset().max_element(), DimValue::Top),
    }
}

/// Checks how dimensions travel along a verified map. Failures come back as
/// witnesses, not errors: a bijective order-preserving g whose inverse does
/// not preserve order can genuinely displace dims.
pub fn dim_transport_check(
    d1: &DimensionStructure,
    d2: &DimensionStructure,
    map: &StructureMap,
    kind: MapKind,
) -> Result<TransportReport> {
    let r = resolve(d1, d2, map)?;
    let mut dims = Flag::ok();
    let mut values = Flag::ok();
    for x in d1.points() {
        let dx = d1.dim(x)?;
        let fx = r.f[x.as_str()];
        let dfx = d2.dim(fx)?;
        let gdx = transport_dim(d1, d2, &r.g, &dx);
        match kind {
            MapKind::Isomorphism | MapKind::SemiIsomorphism => {
                if dims.holds && !d2.poset().dim_eq(&gdx, &dfx) {
                    dims = Flag::fail(format!(
                        "dim {x} = {dx} transports to {gdx}, but dim {fx} = {dfx}"
                    ));
                }
                if kind == MapKind::Isomorphism && values.holds {
                    let a = d1.mu_extended(x, &dx)?;
                    let b = d2.mu_extended(fx, &dfx)?;
                    if a != b {
                        values = Flag::fail(format!(
                            "mu at dim of {x} is {a}, of {fx} is {b}"
                        ));
                    }
                }
            }
            MapKind::Morphism => {
                // guard: positive value at the dim and comparable images
                let positive = !d1.mu_extended(x, &dx)?.is_zero();
                let cmp = d2.poset().dim_cmp(&gdx, &dfx);
                if positive {
                    if let Some(ord) = cmp {
                        if ord == std::cmp::Ordering::Greater && dims.holds {
                            dims = Flag::fail(format!(
                                "dim {x} transports to {gdx} above dim {fx} = {dfx}"
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(TransportReport { dims, values })
}

/// Collapses every measurement to its sign. The result is semi-isomorphic
/// to the input under identity maps — asserted.
pub fn sign_collapse(d: &DimensionStructure) -> Result<DimensionStructure> {
    let mu = d
        .points()
        .iter()
        .map(|x| {
            d.poset()
                .elements()
                .iter()
                .map(|s| Ok(d.mu(x, s)?.sign()))
                .collect::<Result<Vec<ExtVal>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let out = DimensionStructure::validate(StructureData {
        poset: d.poset().clone(),
        points: d.points().to_vec(),
        mu,
    })?;
    let id = StructureMap::identity(d);
    let flag = verify_map(d, &out, &id, MapKind::SemiIsomorphism)?;
    if !flag.holds {
        return Err(Error::Internal(format!(
            "sign collapse is not semi-isomorphic to its input: {:?}",
            flag.witness
        )));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PushMode {
    /// μ never shrinks along the map.
    Leq,
    /// signs agree along the map.
    Sign,
}

/// The surjective pushforward criterion on a chain of positions: a
/// candidate table over the image points is a structure provided μ never
/// shrinks along the map (or signs agree) and fibers that vanish force a
/// vanishing image. On success the candidate is also run through the axiom
/// check, which must pass.
pub fn pushforward_check(
    d1: &DimensionStructure,
    f: &[(String, String)],
    candidate: &StructureData,
    mode: PushMode,
) -> Result<Flag> {
    if !d1.poset().is_chain() {
        return Err(Error::Shape("pushforward requires an ordered S".into()));
    }
    if candidate.poset != *d1.poset() {
        return Err(Error::Shape("candidate must share the position chain".into()));
    }
    let fmap = StructureMap::as_lookup(
        f,
        d1.points(),
        |b| candidate.points.iter().any(|p| p == b),
        "point map",
    )?;
    let image: HashSet<&str> = fmap.values().copied().collect();
    if let Some(y) = candidate.points.iter().find(|y| !image.contains(y.as_str())) {
        return Err(Error::NotSurjective(y.clone()));
    }
    let cand_idx = |y: &str| candidate.points.iter().position(|p| p == y).unwrap();
    let n = d1.poset().len();
    for x in d1.points() {
        let y = fmap[x.as_str()];
        let yi = cand_idx(y);
        for (si, s) in d1.poset().elements().iter().enumerate() {
            let a = d1.mu(x, s)?;
            let b = &candidate.mu[yi][si];
            let ok = match mode {
                PushMode::Leq => a <= b,
                PushMode::Sign => a.sign() == b.sign(),
            };
            if !ok {
                return Ok(Flag::fail(format!(
                    "at ({x},{s}): mu = {a} against candidate mu({y},{s}) = {b}"
                )));
            }
        }
    }
    for (yi, y) in candidate.points.iter().enumerate() {
        for si in 0..n {
            let fiber_all_zero = d1
                .points()
                .iter()
                .filter(|x| fmap[x.as_str()] == y)
                .all(|x| d1.mu_idx(d1.point_idx(x).unwrap(), si).is_zero());
            if fiber_all_zero && !candidate.mu[yi][si].is_zero() {
                return Ok(Flag::fail(format!(
                    "fiber of {y} vanishes at {} but the candidate does not",
                    d1.poset().name(si)
                )));
            }
        }
    }
    let report = check_axioms(candidate)?;
    if !report.passed() {
        return Err(Error::Internal(format!(
            "pushforward conditions hold but the candidate fails the axioms:\n{report}"
        )));
    }
    Ok(Flag::ok())
}

/// The canonical candidate: each image point takes the supremum over its
/// fiber. Always satisfies the pushforward conditions.
pub fn fiber_sup_pushforward(
    d1: &DimensionStructure,
    f: &[(String, String)],
    points2: &[String],
) -> Result<DimensionStructure> {
    let n = d1.poset().len();
    let fmap: HashMap<&str, &str> = f.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let mu: Vec<Vec<ExtVal>> = points2
        .iter()
        .map(|y| {
            (0..n)
                .map(|si| {
                    ExtVal::sup(
                        d1.points()
                            .iter()
                            .filter(|x| fmap.get(x.as_str()) == Some(&y.as_str()))
                            .map(|x| d1.mu_idx(d1.point_idx(x).unwrap(), si)),
                    )
                })
                .collect()
        })
        .collect();
    let candidate = StructureData {
        poset: d1.poset().clone(),
        points: points2.to_vec(),
        mu,
    };
    let flag = pushforward_check(d1, f, &candidate, PushMode::Leq)?;
    if !flag.holds {
        return Err(Error::Internal(format!(
            "fiber supremum violates its own conditions: {:?}",
            flag.witness
        )));
    }
    DimensionStructure::validate(candidate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::FinitePoset;
    use crate::random::{generate_valid, GenMode};
    use crate::structure::fixtures::{lattice_example, names};

    fn z() -> ExtVal {
        ExtVal::Zero
    }

    fn i() -> ExtVal {
        ExtVal::Inf
    }

    #[test]
    fn identity_is_isomorphism() {
        let d = lattice_example();
        let id = StructureMap::identity(&d);
        assert!(verify_map(&d, &d, &id, MapKind::Isomorphism).unwrap().holds);
        assert!(verify_map(&d, &d, &id, MapKind::SemiIsomorphism).unwrap().holds);
        assert!(verify_map(&d, &d, &id, MapKind::Morphism).unwrap().holds);
        let t = dim_transport_check(&d, &d, &id, MapKind::Isomorphism).unwrap();
        assert!(t.dims.holds && t.values.holds);
    }

    #[test]
    fn halved_value_breaks_one_direction() {
        let mk = |v: ExtVal| {
            DimensionStructure::validate(StructureData {
                poset: FinitePoset::chain(names(&["1", "2"])),
                points: names(&["x"]),
                mu: vec![vec![v, z()]],
            })
            .unwrap()
        };
        let big = mk(ExtVal::fin(2, 1));
        let small = mk(ExtVal::fin(1, 1));
        let id = StructureMap {
            f: vec![("x".into(), "x".into())],
            g: vec![("1".into(), "1".into()), ("2".into(), "2".into())],
        };
        let fail = verify_map(&big, &small, &id, MapKind::Morphism).unwrap();
        assert!(!fail.holds);
        assert!(fail.witness.unwrap().contains("(x,1)"));
        assert!(verify_map(&small, &big, &id, MapKind::Morphism).unwrap().holds);
        // still a semi-isomorphism both ways
        assert!(verify_map(&big, &small, &id, MapKind::SemiIsomorphism).unwrap().holds);
    }

    #[test]
    fn non_order_preserving_g_witnessed() {
        let d = DimensionStructure::validate(StructureData {
            poset: FinitePoset::chain(names(&["1", "2"])),
            points: names(&["x"]),
            mu: vec![vec![z(), z()]],
        })
        .unwrap();
        let swap = StructureMap {
            f: vec![("x".into(), "x".into())],
            g: vec![("1".into(), "2".into()), ("2".into(), "1".into())],
        };
        let flag = verify_map(&d, &d, &swap, MapKind::Morphism).unwrap();
        assert!(!flag.holds);
        assert!(flag.witness.unwrap().contains("preserve"));
    }

    #[test]
    fn iso_requires_bijections() {
        let d2 = lattice_example();
        let d1 = crate::constructions::substructure(
            &d2,
            &names(&["x", "y"]),
            &d2.poset().elements().to_vec(),
        )
        .unwrap();
        let map = StructureMap {
            f: vec![("x".into(), "x".into()), ("y".into(), "y".into())],
            g: StructureMap::identity(&d2).g,
        };
        assert!(matches!(
            verify_map(&d1, &d2, &map, MapKind::Isomorphism),
            Err(Error::Shape(_))
        ));
        // as a plain morphism it is fine
        assert!(verify_map(&d1, &d2, &map, MapKind::Morphism).unwrap().holds);
    }

    #[test]
    fn sign_collapse_flattens_and_keeps_dims() {
        let d = DimensionStructure::validate(StructureData {
            poset: FinitePoset::chain(names(&["1", "2", "3"])),
            points: names(&["x"]),
            mu: vec![vec![i(), ExtVal::fin(7, 2), z()]],
        })
        .unwrap();
        let c = sign_collapse(&d).unwrap();
        assert_eq!(c.mu("x", "2").unwrap(), &ExtVal::fin(1, 1));
        assert_eq!(c.mu("x", "1").unwrap(), &i());
        // idempotent: collapsing again is an isomorphism onto itself
        let cc = sign_collapse(&c).unwrap();
        assert_eq!(c, cc);
    }

    #[test]
    fn sign_collapse_preserves_dims_on_fuzz() {
        for seed in 0..200 {
            let d = generate_valid(seed, 5, 5, GenMode::ValidGeneral).unwrap();
            let c = sign_collapse(&d).unwrap();
            let id = StructureMap::identity(&d);
            let t = dim_transport_check(&d, &c, &id, MapKind::SemiIsomorphism).unwrap();
            assert!(t.dims.holds, "seed {seed}: {:?}", t.dims.witness);
        }
    }

    #[test]
    fn semi_iso_can_displace_dims_without_order_iso_inverse() {
        // g maps an antichain bijectively onto a chain; finiteness patterns
        // agree, yet inf{b,c} is unbounded on one side and b' on the other
        let d1 = DimensionStructure::validate(StructureData {
            poset: FinitePoset::new(names(&["a", "b", "c"]), &[] as &[(&str, &str)]).unwrap(),
            points: names(&["x"]),
            mu: vec![vec![i(), z(), z()]],
        })
        .unwrap();
        let d2 = DimensionStructure::validate(StructureData {
            poset: FinitePoset::chain(names(&["a2", "b2", "c2"])),
            points: names(&["y"]),
            mu: vec![vec![i(), z(), z()]],
        })
        .unwrap();
        let map = StructureMap {
            f: vec![("x".into(), "y".into())],
            g: vec![
                ("a".into(), "a2".into()),
                ("b".into(), "b2".into()),
                ("c".into(), "c2".into()),
            ],
        };
        assert!(verify_map(&d1, &d2, &map, MapKind::SemiIsomorphism).unwrap().holds);
        assert!(verify_map(&d1, &d2, &map, MapKind::Isomorphism).unwrap().holds);
        let t = dim_transport_check(&d1, &d2, &map, MapKind::SemiIsomorphism).unwrap();
        assert!(!t.dims.holds, "transport must report the displaced dim");
    }

    #[test]
    fn morphism_lemma_guard_exempts_zero_points() {
        // dim value 0 at the source point: the inequality is not claimed
        let d1 = DimensionStructure::validate(StructureData {
            poset: FinitePoset::chain(names(&["1", "2"])),
            points: names(&["x"]),
            mu: vec![vec![z(), z()]],
        })
        .unwrap();
        let d2 = DimensionStructure::validate(StructureData {
            poset: FinitePoset::chain(names(&["1", "2"])),
            points: names(&["y"]),
            mu: vec![vec![i(), z()]],
        })
        .unwrap();
        let map = StructureMap {
            f: vec![("x".into(), "y".into())],
            g: vec![("1".into(), "2".into()), ("2".into(), "2".into())],
        };
        assert!(verify_map(&d1, &d2, &map, MapKind::Morphism).unwrap().holds);
        let t = dim_transport_check(&d1, &d2, &map, MapKind::Morphism).unwrap();
        assert!(t.dims.holds);
    }

    #[test]
    fn morphism_dim_domination_on_fuzz() {
        // identity maps from a structure to its sign collapse are morphisms
        // when values never exceed 1; restrict to that case
        for seed in 0..300 {
            let d = generate_valid(seed, 5, 4, GenMode::ValidGeneral).unwrap();
            let c = sign_collapse(&d).unwrap();
            let id = StructureMap::identity(&d);
            if !verify_map(&d, &c, &id, MapKind::Morphism).unwrap().holds {
                continue; // some value exceeded its sign
            }
            let t = dim_transport_check(&d, &c, &id, MapKind::Morphism).unwrap();
            assert!(t.dims.holds, "seed {seed}: {:?}", t.dims.witness);
        }
    }

    #[test]
    fn pushforward_identity_and_fiber_sup() {
        let d = DimensionStructure::validate(StructureData {
            poset: FinitePoset::chain(names(&["1", "2", "3"])),
            points: names(&["x", "y"]),
            mu: vec![
                vec![i(), ExtVal::fin(1, 1), z()],
                vec![i(), i(), z()],
            ],
        })
        .unwrap();
        let idf: Vec<(String, String)> =
            d.points().iter().map(|x| (x.clone(), x.clone())).collect();
        let flag = pushforward_check(&d, &idf, &d.data(), PushMode::Leq).unwrap();
        assert!(flag.holds);

        let collapse: Vec<(String, String)> =
            vec![("x".into(), "p".into()), ("y".into(), "p".into())];
        let out = fiber_sup_pushforward(&d, &collapse, &names(&["p"])).unwrap();
        assert_eq!(out.mu("p", "2").unwrap(), &i());
        assert_eq!(out.mu("p", "3").unwrap(), &z());
    }

    #[test]
    fn pushforward_witnesses_shrunk_value() {
        let d = DimensionStructure::validate(StructureData {
            poset: FinitePoset::chain(names(&["1", "2"])),
            points: names(&["x"]),
            mu: vec![vec![ExtVal::fin(1, 1), z()]],
        })
        .unwrap();
        let candidate = StructureData {
            poset: d.poset().clone(),
            points: names(&["p"]),
            mu: vec![vec![z(), z()]],
        };
        let f = vec![("x".to_string(), "p".to_string())];
        let flag = pushforward_check(&d, &f, &candidate, PushMode::Leq).unwrap();
        assert!(!flag.holds);
        // sign mode rejects it as well: signs differ at (x,1)
        let flag = pushforward_check(&d, &f, &candidate, PushMode::Sign).unwrap();
        assert!(!flag.holds);
    }

    #[test]
    fn pushforward_requires_surjectivity_and_chain() {
        let d = DimensionStructure::validate(StructureData {
            poset: FinitePoset::chain(names(&["1"])),
            points: names(&["x"]),
            mu: vec![vec![z()]],
        })
        .unwrap();
        let candidate = StructureData {
            poset: d.poset().clone(),
            points: names(&["p", "q"]),
            mu: vec![vec![z()], vec![z()]],
        };
        let f = vec![("x".to_string(), "p".to_string())];
        assert!(matches!(
            pushforward_check(&d, &f, &candidate, PushMode::Leq),
            Err(Error::NotSurjective(_))
        ));
        let lat = lattice_example();
        let idf: Vec<(String, String)> =
            lat.points().iter().map(|x| (x.clone(), x.clone())).collect();
        assert!(matches!(
            pushforward_check(&lat, &idf, &lat.data(), PushMode::Leq),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn pushforward_fiber_sup_fuzz_on_chains() {
        let mut ran = 0;
        for seed in 0..400 {
            let d = generate_valid(seed, 5, 4, GenMode::ValidGeneral).unwrap();
            if !d.poset().is_chain() || d.points().len() < 2 {
                continue;
            }
            // collapse the first two points into one fiber
            let mut f = Vec::new();
            let target = "y0".to_string();
            let mut points2 = vec![target.clone()];
            for (k, x) in d.points().iter().enumerate() {
                if k <= 1 {
                    f.push((x.clone(), target.clone()));
                } else {
                    let name = format!("y{k}");
                    f.push((x.clone(), name.clone()));
                    points2.push(name);
                }
            }
            fiber_sup_pushforward(&d, &f, &points2).unwrap();
            ran += 1;
        }
        assert!(ran > 20, "only {ran} chain structures fuzzed");
    }
}
