//! Stabilization depth of a decreasing self-map: iterating f from x walks
//! down the order until it hits a fixpoint. Writing f_0 = f(x) and
//! f_{n+1} = f(f_n(x)), the level-n measurement is 0 once f_n = f_{n+1},
//! 1 if f_n != f_{n+1} = f_{n+2}, and infinite while at least two more
//! moves remain.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::extval::ExtVal;
use crate::poset::FinitePoset;
use crate::structure::{DimensionStructure, StructureData};

/// Builds the structure on `order`'s elements over an ℕ-window chain of the
/// same size (long enough for any orbit to stabilize).
pub fn iterate_structure(
    order: &FinitePoset,
    f: &[(String, String)],
) -> Result<DimensionStructure> {
    let map: HashMap<&str, &str> = f.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let points: Vec<String> = order.elements().to_vec();
    let step = |x: &str| -> Result<String> {
        let y = map
            .get(x)
            .ok_or_else(|| Error::Totality {
                point: x.to_string(),
                element: "f".to_string(),
            })?
            .to_string();
        if !order.leq(&y, x)? {
            return Err(Error::NotDecreasing(x.to_string()));
        }
        Ok(y)
    };
    let window = points.len();
    let mut mu = Vec::new();
    for x in &points {
        // the orbit f(x), f²(x), ... out to window+2 steps
        let mut orbit = vec![step(x)?];
        for _ in 0..window + 2 {
            let next = step(orbit.last().unwrap())?;
            orbit.push(next);
        }
        mu.push(
            (0..window)
                .map(|n| {
                    if orbit[n] == orbit[n + 1] {
                        ExtVal::Zero
                    } else if orbit[n + 1] == orbit[n + 2] {
                        ExtVal::fin(1, 1)
                    } else {
                        ExtVal::Inf
                    }
                })
                .collect(),
        );
    }
    let poset = FinitePoset::chain((0..window).map(|n| n.to_string()).collect());
    DimensionStructure::validate(StructureData { poset, points, mu })
}
