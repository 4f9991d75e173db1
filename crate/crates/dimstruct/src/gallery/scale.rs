//! Distance-scale model: points are integer-indexed rational vectors that
//! vanish from some index upward; the scale-n pseudo-metric reads the
//! coordinate gap at n provided everything above n agrees, and is infinite
//! otherwise. Pairs of distinct vectors form a small structure over the
//! integer chain.

use std::collections::BTreeMap;

use num::{BigRational, Signed};

use crate::error::{Error, Result};
use crate::extval::ExtVal;
use crate::poset::{DimValue, FinitePoset};
use crate::structure::{DimensionStructure, StructureData};

/// Finitely supported rational vector over ℤ.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScaleVector {
    entries: BTreeMap<i64, BigRational>,
}

impl ScaleVector {
    pub fn new(pairs: &[(i64, BigRational)]) -> ScaleVector {
        let zero = BigRational::from_integer(0.into());
        ScaleVector {
            entries: pairs
                .iter()
                .filter(|(_, v)| *v != zero)
                .cloned()
                .collect(),
        }
    }

    pub fn coord(&self, n: i64) -> BigRational {
        self.entries
            .get(&n)
            .cloned()
            .unwrap_or_else(|| BigRational::from_integer(0.into()))
    }

    /// Largest index where the two vectors disagree.
    fn top_difference(&self, other: &ScaleVector) -> Option<i64> {
        self.entries
            .keys()
            .chain(other.entries.keys())
            .copied()
            .filter(|&n| self.coord(n) != other.coord(n))
            .max()
    }
}

/// The scale-n distance: coordinate gap at n if all higher coordinates
/// agree, +inf otherwise.
pub fn scale_rho(x: &ScaleVector, y: &ScaleVector, n: i64) -> ExtVal {
    match x.top_difference(y) {
        Some(d) if d > n => ExtVal::Inf,
        Some(d) if d == n => {
            let gap = (x.coord(n) - y.coord(n)).abs();
            ExtVal::from_ratio(gap).expect("absolute value is nonnegative")
        }
        _ => ExtVal::Zero,
    }
}

/// The scale where the distance of two distinct vectors is meaningfully
/// measured.
pub fn scale_dim(x: &ScaleVector, y: &ScaleVector) -> Result<DimValue> {
    match x.top_difference(y) {
        Some(d) => Ok(DimValue::Element(d.to_string())),
        None => Err(Error::EqualPoints),
    }
}

/// Samples distinct pairs over an integer window chain.
pub fn sample_finite(
    vectors: &[(String, ScaleVector)],
    window: std::ops::RangeInclusive<i64>,
) -> Result<DimensionStructure> {
    let poset = FinitePoset::chain(window.clone().map(|n| n.to_string()).collect());
    let mut points = Vec::new();
    let mut mu = Vec::new();
    for (i, (nx, x)) in vectors.iter().enumerate() {
        for (ny, y) in vectors.iter().skip(i + 1) {
            if x == y {
                continue;
            }
            points.push(format!("({nx},{ny})"));
            mu.push(window.clone().map(|n| scale_rho(x, y, n)).collect());
        }
    }
    DimensionStructure::validate(StructureData { poset, points, mu })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn random_vector(rng: &mut ChaCha8Rng) -> ScaleVector {
        let mut pairs: Vec<(i64, BigRational)> = Vec::new();
        for n in -3..=3 {
            if rng.gen_bool(0.4) {
                pairs.push((n, q(rng.gen_range(-4..=4), rng.gen_range(1..=3))));
            }
        }
        ScaleVector::new(&pairs)
    }

    #[test]
    fn single_gap_at_index_three() {
        let x = ScaleVector::new(&[(3, q(1, 2))]);
        let y = ScaleVector::default();
        assert_eq!(scale_rho(&x, &y, 3), ExtVal::fin(1, 2));
        assert_eq!(scale_rho(&x, &y, 4), ExtVal::Zero);
        assert_eq!(scale_rho(&x, &y, 2), ExtVal::Inf);
        assert_eq!(scale_dim(&x, &y).unwrap(), DimValue::Element("3".into()));
    }

    #[test]
    fn equal_vectors_have_no_dim() {
        let x = ScaleVector::new(&[(0, q(1, 1))]);
        assert!(matches!(scale_dim(&x, &x), Err(Error::EqualPoints)));
        assert_eq!(scale_rho(&x, &x, 0), ExtVal::Zero);
    }

    #[test]
    fn pseudo_metric_laws_on_fuzzed_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..300 {
            let (x, y, z) = (
                random_vector(&mut rng),
                random_vector(&mut rng),
                random_vector(&mut rng),
            );
            for n in -4..=4 {
                // symmetry
                assert_eq!(scale_rho(&x, &y, n), scale_rho(&y, &x, n));
                // triangle inequality with absorbing infinity
                let (xz, xy, yz) = (
                    scale_rho(&x, &z, n),
                    scale_rho(&x, &y, n),
                    scale_rho(&y, &z, n),
                );
                assert!(xz <= xy.add(&yz), "{x:?} {y:?} {z:?} at {n}");
                // a finite scale zeroes the next one
                if scale_rho(&x, &y, n).is_finite() {
                    assert!(scale_rho(&x, &y, n + 1).is_zero());
                }
            }
        }
    }

    #[test]
    fn every_distinct_pair_is_a_dim_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..300 {
            let x = random_vector(&mut rng);
            let y = random_vector(&mut rng);
            if x == y {
                continue;
            }
            let DimValue::Element(d) = scale_dim(&x, &y).unwrap() else {
                unreachable!()
            };
            let rho = scale_rho(&x, &y, d.parse().unwrap());
            assert!(rho.is_pos_finite(), "{x:?} {y:?}");
        }
    }

    #[test]
    fn sampled_pairs_form_a_small_structure() {
        let vectors = vec![
            ("o".to_string(), ScaleVector::default()),
            ("a".to_string(), ScaleVector::new(&[(3, q(1, 2))])),
            ("b".to_string(), ScaleVector::new(&[(-2, q(5, 1)), (1, q(1, 3))])),
            ("c".to_string(), ScaleVector::new(&[(1, q(1, 3))])),
        ];
        let d = sample_finite(&vectors, -3..=4).unwrap();
        assert_eq!(d.points().len(), 6);
        let report = d.classify().unwrap();
        assert!(report.small.holds, "{:?}", report);
        assert_eq!(d.dim("(b,c)").unwrap(), DimValue::Element("-2".into()));
    }
}
