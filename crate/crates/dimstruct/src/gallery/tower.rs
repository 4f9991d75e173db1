//! Exponential-tower heights: with g_0(y) = y/(y+1) and g_{n+1} = exp∘g_n,
//! the ranges Ran g_n = [t_n, t_{n+1}) tile [0,∞) along the thresholds
//! t_0 = 0, t_{n+1} = e^{t_n}. A nonnegative real z therefore has a unique
//! height n and a unique preimage y0 = g_n⁻¹(z); the level-k measurement of
//! z is infinite below the height, y0 at it, and zero above it.

use num::{BigInt, BigRational, FromPrimitive, Signed};

use crate::error::{Error, Result};
use crate::extval::ExtVal;
use crate::poset::FinitePoset;
use crate::structure::{DimensionStructure, StructureData};

pub const DEFAULT_PRECISION: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct TowerNumber {
    pub value: f64,
    pub precision: f64,
}

impl TowerNumber {
    pub fn new(value: f64) -> Result<TowerNumber> {
        TowerNumber::with_precision(value, DEFAULT_PRECISION)
    }

    pub fn with_precision(value: f64, precision: f64) -> Result<TowerNumber> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::NegativeInput(format!("value {value} is not a nonnegative real")));
        }
        if !precision.is_finite() || precision <= 0.0 {
            return Err(Error::NegativeInput(format!("precision {precision} must be positive")));
        }
        Ok(TowerNumber { value, precision })
    }
}

/// The thresholds t_0=0, t_1=1, t_2=e, t_3=e^e, ... until f64 overflow.
pub fn thresholds() -> Vec<f64> {
    let mut out = vec![0.0f64];
    loop {
        let next = out.last().unwrap().exp();
        if !next.is_finite() {
            return out;
        }
        out.push(next);
    }
}

/// The unique n with z in [t_n, t_{n+1}); anything past the largest finite
/// threshold keeps that last height.
pub fn tower_height(z: f64) -> u32 {
    let ts = thresholds();
    match ts.iter().position(|&t| z < t) {
        Some(i) => (i - 1) as u32,
        None => (ts.len() - 1) as u32,
    }
}

/// Simplest rational within tol of y, by continued-fraction convergents.
fn snap_rational(y: f64, tol: f64) -> BigRational {
    let target = BigRational::from_f64(y).expect("finite input");
    let tol = BigRational::from_f64(tol).expect("finite tolerance");
    let (mut h0, mut k0) = (BigInt::from(1), BigInt::from(0));
    let (mut h1, mut k1) = (BigInt::from(y.floor() as i64), BigInt::from(1));
    let mut frac = y - y.floor();
    for _ in 0..64 {
        let conv = BigRational::new(h1.clone(), k1.clone());
        if (conv - &target).abs() <= tol {
            break;
        }
        if frac.abs() < f64::EPSILON {
            break;
        }
        let r = 1.0 / frac;
        let a = BigInt::from(r.floor() as i64);
        frac = r - r.floor();
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        (h0, k0) = (h1, k1);
        (h1, k1) = (h2, k2);
    }
    BigRational::new(h1, k1)
}

/// Splits z into its height and the preimage y0 = g_height⁻¹(z): iterate ln
/// down to t in [0,1), then y0 = t/(1-t), snapped to the simplest rational
/// inside the configured tolerance.
pub fn tower_decompose(z: &TowerNumber) -> Result<(u32, ExtVal)> {
    let height = tower_height(z.value);
    let mut t = z.value;
    for _ in 0..height {
        t = t.ln();
    }
    // rounding may push t slightly outside Ran g_0
    if t < 0.0 {
        if t < -z.precision {
            return Err(Error::Precision(t));
        }
        t = 0.0;
    }
    if t >= 1.0 {
        return Err(Error::Precision(t));
    }
    let y0 = t / (1.0 - t);
    if !y0.is_finite() {
        return Err(Error::Precision(t));
    }
    if y0 == 0.0 {
        return Ok((height, ExtVal::Zero));
    }
    // snapping error gets amplified by the forward derivative dz/dy, so the
    // tolerance shrinks accordingly to keep |g_height(mu) - z| <= precision
    let mut v = y0 / (y0 + 1.0);
    let mut deriv = 1.0 / ((y0 + 1.0) * (y0 + 1.0));
    for _ in 0..height {
        v = v.exp();
        deriv *= v;
    }
    let tol = 0.1 * z.precision / deriv.max(1.0);
    let q = snap_rational(y0, tol);
    Ok((height, ExtVal::from_ratio(q)?))
}

/// Level-k measurement: Inf below the height, the preimage at it, zero above.
pub fn tower_mu(z: &TowerNumber, k: u32) -> Result<ExtVal> {
    let (height, mu) = tower_decompose(z)?;
    Ok(match k.cmp(&height) {
        std::cmp::Ordering::Less => ExtVal::Inf,
        std::cmp::Ordering::Equal => mu,
        std::cmp::Ordering::Greater => ExtVal::Zero,
    })
}

/// Forward map g_n, for round-trip checks.
pub fn tower_apply(y: f64, n: u32) -> f64 {
    let mut v = y / (y + 1.0);
    for _ in 0..n {
        v = v.exp();
    }
    v
}

/// Samples inputs over a level chain 0..=max_level.
pub fn sample_finite(
    inputs: &[(String, TowerNumber)],
    max_level: u32,
) -> Result<DimensionStructure> {
    let poset = FinitePoset::chain((0..=max_level).map(|n| n.to_string()).collect());
    let mut mu = Vec::new();
    for (_, z) in inputs {
        mu.push(
            (0..=max_level)
                .map(|k| tower_mu(z, k))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    DimensionStructure::validate(StructureData {
        poset,
        points: inputs.iter().map(|(name, _)| name.clone()).collect(),
        mu,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::ToPrimitive;
    use crate::poset::DimValue;

    #[test]
    fn one_quarter_inverts_algebraically() {
        let z = TowerNumber::new(0.25).unwrap();
        let (height, mu) = tower_decompose(&z).unwrap();
        assert_eq!(height, 0);
        assert_eq!(mu, ExtVal::fin(1, 3));
        assert_eq!(tower_mu(&z, 1).unwrap(), ExtVal::Zero);
    }

    #[test]
    fn double_exponential_of_a_half() {
        let z = TowerNumber::new((0.5f64.exp()).exp()).unwrap();
        let (height, mu) = tower_decompose(&z).unwrap();
        assert_eq!(height, 2);
        assert_eq!(mu, ExtVal::fin(1, 1));
        assert_eq!(tower_mu(&z, 0).unwrap(), ExtVal::Inf);
        assert_eq!(tower_mu(&z, 1).unwrap(), ExtVal::Inf);
        assert_eq!(tower_mu(&z, 3).unwrap(), ExtVal::Zero);
    }

    #[test]
    fn unit_interval_has_height_zero() {
        for z in [0.0, 0.1, 0.5, 0.999] {
            assert_eq!(tower_height(z), 0, "{z}");
        }
        assert_eq!(tower_height(1.0), 1);
        assert_eq!(tower_height(std::f64::consts::E), 2);
    }

    #[test]
    fn negative_or_bad_precision_rejected() {
        assert!(matches!(TowerNumber::new(-1.0), Err(Error::NegativeInput(_))));
        assert!(matches!(
            TowerNumber::with_precision(1.0, 0.0),
            Err(Error::NegativeInput(_))
        ));
    }

    #[test]
    fn round_trip_within_precision_on_a_grid() {
        // 10^3 points spread over [0, t_4)
        let top = thresholds()[4];
        let mut last_height = 0;
        for i in 0..1000 {
            // exponential spread so every height band gets hit
            let z_val = (i as f64 / 999.0 * top.ln().max(1.0)).exp() - 1.0;
            let z_val = z_val.max(i as f64 / 999.0);
            let z = TowerNumber::new(z_val).unwrap();
            let (height, mu) = tower_decompose(&z).unwrap();
            // heights partition monotonically
            assert!(height >= last_height, "height dropped at z={z_val}");
            last_height = height;
            let y0 = match mu {
                ExtVal::Zero => 0.0,
                ExtVal::Fin(q) => q.to_f64().unwrap(),
                ExtVal::Inf => unreachable!(),
            };
            let back = tower_apply(y0, height);
            let scale = z_val.abs().max(1.0);
            assert!(
                (back - z_val).abs() <= 1e-6 * scale,
                "g_{height}({y0}) = {back} != {z_val}"
            );
        }
    }

    #[test]
    fn sampled_grid_is_valid_and_synchronized_by_monotonicity() {
        let inputs: Vec<(String, TowerNumber)> = (0..40)
            .map(|i| {
                let z_val = (i as f64 * 0.35).exp() - 1.0;
                (format!("z{i:02}"), TowerNumber::new(z_val).unwrap())
            })
            .collect();
        let d = sample_finite(&inputs, 5).unwrap();
        assert_eq!(
            d.dim("z00").unwrap(),
            DimValue::Element(tower_height(0.0).to_string())
        );
        // the inputs are increasing, so every level's measurement is too
        for w in inputs.windows(2) {
            for k in 0..=5u32 {
                let a = tower_mu(&w[0].1, k).unwrap();
                let b = tower_mu(&w[1].1, k).unwrap();
                assert!(a <= b, "{} vs {} at level {k}", w[0].0, w[1].0);
            }
        }
    }
}
