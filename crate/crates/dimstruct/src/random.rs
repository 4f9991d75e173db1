//! Deterministic generation of candidate structures for fuzzing, plus a
//! naive shrinker for counterexamples.

use num::{BigInt, BigRational};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::extval::ExtVal;
use crate::poset::{BoundDir, DimValue, FinitePoset};
use crate::structure::{DimensionStructure, StructureData};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenMode {
    /// Valid by construction and principal: each point either measures
    /// everything to +inf or has an up-set spectrum around one position.
    ValidPrincipal,
    /// Valid by construction, spectra built from unions of up-sets; may
    /// be non-principal.
    ValidGeneral,
    /// Unconstrained random table, for exercising the checker's failure
    /// paths.
    Raw,
}

fn random_poset(rng: &mut ChaCha8Rng, max_s: usize) -> FinitePoset {
    let n = rng.gen_range(1..=max_s.max(1));
    let elements: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    if rng.gen_bool(0.3) {
        return FinitePoset::chain(elements);
    }
    // edges only from lower to higher rank in a random permutation, so the
    // relation is acyclic before closure
    let mut rank: Vec<usize> = (0..n).collect();
    rank.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rank[i] < rank[j] && rng.gen_bool(0.4) {
                pairs.push((elements[i].clone(), elements[j].clone()));
            }
        }
    }
    FinitePoset::new(elements, &pairs).expect("rank-respecting edges cannot cycle")
}

fn random_fin(rng: &mut ChaCha8Rng) -> ExtVal {
    let n = rng.gen_range(1..=12i64);
    let d = rng.gen_range(1..=12i64);
    ExtVal::Fin(BigRational::new(BigInt::from(n), BigInt::from(d)))
}

/// Fills one μ row so the axioms hold by construction, spectra centered on
/// a single position g: +inf off the up-set of g, 0 strictly above, and a
/// free choice at g itself.
fn principal_row(rng: &mut ChaCha8Rng, poset: &FinitePoset, row: &mut [ExtVal]) {
    let n = poset.len();
    if rng.gen_bool(0.15) {
        row.iter_mut().for_each(|v| *v = ExtVal::Inf);
        return;
    }
    let g = rng.gen_range(0..n);
    for s in 0..n {
        row[s] = if poset.lt_idx(g, s) { ExtVal::Zero } else { ExtVal::Inf };
    }
    row[g] = match rng.gen_range(0..3) {
        0 => ExtVal::Zero,
        1 => random_fin(rng),
        _ => ExtVal::Inf,
    };
    if row[g].is_pos_finite() {
        // a positive finite value at g demands that the zero set (the strict
        // up-set of g) have an infimum; when it does not, fall back to 0 at g
        let zeros: Vec<usize> = (0..n).filter(|&s| row[s].is_zero()).collect();
        if poset.bound_in_sbar(&zeros, BoundDir::Inf).is_none() {
            row[g] = ExtVal::Zero;
        }
    }
    if row[g].is_inf() {
        // the remaining zero set is the strict up-set of g, whose infimum
        // may be missing; g itself restores it
        let zeros: Vec<usize> = (0..n).filter(|&s| row[s].is_zero()).collect();
        if poset.bound_in_sbar(&zeros, BoundDir::Inf).is_none() {
            row[g] = ExtVal::Zero;
        }
    }
}

/// Like `principal_row` but the zero set is a union of up to two up-sets,
/// which is where non-principal spectra come from.
fn general_row(rng: &mut ChaCha8Rng, poset: &FinitePoset, row: &mut [ExtVal]) {
    let n = poset.len();
    if rng.gen_bool(0.1) {
        row.iter_mut().for_each(|v| *v = ExtVal::Inf);
        return;
    }
    let gens: Vec<usize> = if rng.gen_bool(0.5) && n >= 2 {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        vec![a, b]
    } else {
        vec![rng.gen_range(0..n)]
    };
    let mut in_zero = vec![false; n];
    for &g in &gens {
        for s in poset.upset_idx(g) {
            in_zero[s] = true;
        }
    }
    let mut zeros: Vec<usize> = (0..n).filter(|&s| in_zero[s]).collect();
    let mut inf_zero = poset.bound_in_sbar(&zeros, BoundDir::Inf);
    if inf_zero.is_none() {
        // retry with a single generator, whose up-set always has an infimum
        in_zero.iter_mut().for_each(|b| *b = false);
        for s in poset.upset_idx(gens[0]) {
            in_zero[s] = true;
        }
        zeros = (0..n).filter(|&s| in_zero[s]).collect();
        inf_zero = poset.bound_in_sbar(&zeros, BoundDir::Inf);
    }
    for s in 0..n {
        row[s] = if in_zero[s] { ExtVal::Zero } else { ExtVal::Inf };
    }
    // optionally turn the point into a dim-point by placing a positive
    // finite value at the infimum of the zero set
    if rng.gen_bool(0.4) {
        if let Some(DimValue::Element(l)) = inf_zero {
            let li = poset.idx(&l).expect("infimum is an element");
            let mut candidate = row.to_vec();
            candidate[li] = random_fin(rng);
            // (ax1) forces zeros strictly above the finite position
            for s in 0..n {
                if poset.lt_idx(li, s) {
                    candidate[s] = ExtVal::Zero;
                }
            }
            let czeros: Vec<usize> =
                (0..n).filter(|&s| candidate[s].is_zero()).collect();
            if poset.bound_in_sbar(&czeros, BoundDir::Inf).is_some() {
                row.clone_from_slice(&candidate);
            }
        }
    }
}

/// Generates a candidate table, deterministic in the seed. Valid modes
/// always pass the axiom check; raw mode usually does not.
pub fn generate_random(seed: u64, max_s: usize, max_x: usize, mode: GenMode) -> StructureData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poset = random_poset(&mut rng, max_s);
    let npoints = rng.gen_range(1..=max_x.max(1));
    let points: Vec<String> = (0..npoints).map(|i| format!("x{i}")).collect();
    let n = poset.len();
    let mut mu = vec![vec![ExtVal::Inf; n]; npoints];
    for row in &mut mu {
        match mode {
            GenMode::ValidPrincipal => principal_row(&mut rng, &poset, row),
            GenMode::ValidGeneral => general_row(&mut rng, &poset, row),
            GenMode::Raw => {
                for v in row.iter_mut() {
                    *v = match rng.gen_range(0..10) {
                        0..=2 => ExtVal::Zero,
                        3..=4 => random_fin(&mut rng),
                        _ => ExtVal::Inf,
                    };
                }
            }
        }
    }
    StructureData { poset, points, mu }
}

/// Convenience wrapper that validates a valid-mode candidate.
pub fn generate_valid(seed: u64, max_s: usize, max_x: usize, mode: GenMode) -> Result<DimensionStructure> {
    assert!(mode != GenMode::Raw, "raw candidates are not validated");
    DimensionStructure::validate(generate_random(seed, max_s, max_x, mode))
}

/// Greedy shrinker: repeatedly drops points, then poset elements, keeping a
/// reduction only while the predicate still holds on the reduced candidate.
pub fn shrink_failing(
    data: &StructureData,
    pred: impl Fn(&StructureData) -> bool,
) -> StructureData {
    let mut cur = data.clone();
    let mut progress = true;
    while progress {
        progress = false;
        for i in 0..cur.points.len() {
            if cur.points.len() == 1 {
                break;
            }
            let mut cand = cur.clone();
            cand.points.remove(i);
            cand.mu.remove(i);
            if pred(&cand) {
                cur = cand;
                progress = true;
                break;
            }
        }
        if progress {
            continue;
        }
        for e in 0..cur.poset.len() {
            if cur.poset.len() == 1 {
                break;
            }
            if let Some(cand) = drop_element(&cur, e) {
                if pred(&cand) {
                    cur = cand;
                    progress = true;
                    break;
                }
            }
        }
    }
    cur
}

pub(crate) fn drop_element(data: &StructureData, e: usize) -> Option<StructureData> {
    let keep: Vec<usize> = (0..data.poset.len()).filter(|&i| i != e).collect();
    let elements: Vec<String> = keep.iter().map(|&i| data.poset.name(i).to_string()).collect();
    let mut pairs = Vec::new();
    for &i in &keep {
        for &j in &keep {
            if data.poset.lt_idx(i, j) {
                pairs.push((
                    data.poset.name(i).to_string(),
                    data.poset.name(j).to_string(),
                ));
            }
        }
    }
    let poset = FinitePoset::new(elements, &pairs).ok()?;
    let mu = data
        .mu
        .iter()
        .map(|row| keep.iter().map(|&i| row[i].clone()).collect())
        .collect();
    Some(StructureData { poset, points: data.points.clone(), mu })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::check_axioms;

    #[test]
    fn deterministic_in_seed() {
        for mode in [GenMode::ValidPrincipal, GenMode::ValidGeneral, GenMode::Raw] {
            let a = generate_random(7, 5, 5, mode);
            let b = generate_random(7, 5, 5, mode);
            assert_eq!(a.poset, b.poset);
            assert_eq!(a.points, b.points);
            assert_eq!(a.mu, b.mu);
        }
    }

    #[test]
    fn valid_modes_pass_axioms() {
        for seed in 0..200 {
            for mode in [GenMode::ValidPrincipal, GenMode::ValidGeneral] {
                let data = generate_random(seed, 6, 6, mode);
                let report = check_axioms(&data).unwrap();
                assert!(report.passed(), "seed {seed} {mode:?}:\n{report}");
            }
        }
    }

    #[test]
    fn principal_mode_is_principal() {
        for seed in 0..100 {
            let d = generate_valid(seed, 6, 6, GenMode::ValidPrincipal).unwrap();
            assert!(d.classify().unwrap().principal.holds, "seed {seed}");
        }
    }

    #[test]
    fn general_mode_reaches_non_principal() {
        let hit = (0..300).any(|seed| {
            generate_valid(seed, 6, 6, GenMode::ValidGeneral)
                .map(|d| !d.classify().unwrap().principal.holds)
                .unwrap_or(false)
        });
        assert!(hit, "no non-principal structure in 300 seeds");
    }

    #[test]
    fn raw_mode_hits_every_violation_kind() {
        let (mut a1, mut a2, mut a3) = (false, false, false);
        for seed in 0..1000 {
            let report = check_axioms(&generate_random(seed, 6, 6, GenMode::Raw)).unwrap();
            a1 |= report.ax1.is_some();
            a2 |= report.ax2.is_some();
            a3 |= report.ax3.is_some();
        }
        assert!(a1 && a2 && a3, "coverage: ax1={a1} ax2={a2} ax3={a3}");
    }

    #[test]
    fn shrink_keeps_failure() {
        let failing = |d: &StructureData| !check_axioms(d).map(|r| r.passed()).unwrap_or(true);
        let mut shrunk_any = false;
        for seed in 0..50 {
            let data = generate_random(seed, 6, 6, GenMode::Raw);
            if !failing(&data) {
                continue;
            }
            let small = shrink_failing(&data, failing);
            assert!(failing(&small));
            shrunk_any |= small.points.len() < data.points.len()
                || small.poset.len() < data.poset.len();
        }
        assert!(shrunk_any);
    }
}
