//! Exact values in [0, +inf]: zero, a positive rational, or infinity.
//!
//! All measurements in a dimension structure land here. Arithmetic follows
//! the extended conventions `0 * inf = 0`, `r + inf = inf`, `inf * inf = inf`.

use std::cmp::Ordering;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero as NumZero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtVal {
    Zero,
    /// Strictly positive finite rational. A zero rational is always
    /// represented by the `Zero` variant, never `Fin(0)`.
    Fin(BigRational),
    Inf,
}

impl ExtVal {
    /// Builds from any nonnegative rational, normalizing zero.
    pub fn from_ratio(q: BigRational) -> Result<ExtVal> {
        if q.is_negative() {
            return Err(Error::NegativeInput(q.to_string()));
        }
        if q.is_zero() {
            Ok(ExtVal::Zero)
        } else {
            Ok(ExtVal::Fin(q))
        }
    }

    /// Convenience constructor for test code and fixtures; panics on a
    /// nonpositive value.
    pub fn fin(numer: i64, denom: i64) -> ExtVal {
        assert!(numer > 0 && denom > 0, "ExtVal::fin needs a positive fraction");
        ExtVal::Fin(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtVal::Zero)
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, ExtVal::Inf)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_inf()
    }

    /// Strictly positive and finite: the value that makes a point an s-point.
    pub fn is_pos_finite(&self) -> bool {
        matches!(self, ExtVal::Fin(_))
    }

    pub fn mul(&self, other: &ExtVal) -> ExtVal {
        use ExtVal::*;
        match (self, other) {
            // 0 absorbs even against infinity
            (Zero, _) | (_, Zero) => Zero,
            (Inf, _) | (_, Inf) => Inf,
            (Fin(a), Fin(b)) => Fin(a * b),
        }
    }

    pub fn add(&self, other: &ExtVal) -> ExtVal {
        use ExtVal::*;
        match (self, other) {
            (Inf, _) | (_, Inf) => Inf,
            (Zero, v) | (v, Zero) => v.clone(),
            (Fin(a), Fin(b)) => Fin(a + b),
        }
    }

    /// The sign function restricted to [0, +inf].
    pub fn sign(&self) -> ExtVal {
        match self {
            ExtVal::Zero => ExtVal::Zero,
            ExtVal::Fin(_) => ExtVal::Fin(BigRational::one()),
            ExtVal::Inf => ExtVal::Inf,
        }
    }

    /// Least upper bound of a finite collection; the empty collection
    /// yields `Zero`, the least element of [0, +inf].
    pub fn sup<'a, I: IntoIterator<Item = &'a ExtVal>>(vals: I) -> ExtVal {
        vals.into_iter().fold(ExtVal::Zero, |acc, v| if *v > acc { v.clone() } else { acc })
    }

    pub fn min_of(&self, other: &ExtVal) -> ExtVal {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Parses the textual form used by structure files: "0", "inf",
    /// "p/q", or the integer shorthand "n".
    pub fn parse(text: &str) -> Result<ExtVal> {
        let t = text.trim();
        if t == "inf" {
            return Ok(ExtVal::Inf);
        }
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n, d),
            None => (t, "1"),
        };
        let n: BigInt = num
            .parse()
            .map_err(|_| Error::Parse(format!("bad value {text:?}")))?;
        let d: BigInt = den
            .parse()
            .map_err(|_| Error::Parse(format!("bad value {text:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        ExtVal::from_ratio(BigRational::new(n, d))
    }
}

impl PartialOrd for ExtVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtVal {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtVal::*;
        match (self, other) {
            (Zero, Zero) | (Inf, Inf) => Ordering::Equal,
            (Zero, _) | (_, Inf) => Ordering::Less,
            (_, Zero) | (Inf, _) => Ordering::Greater,
            (Fin(a), Fin(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtVal::Zero => write!(f, "0"),
            ExtVal::Inf => write!(f, "inf"),
            ExtVal::Fin(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn all_tags() -> Vec<ExtVal> {
        vec![ExtVal::Zero, ExtVal::fin(2, 3), ExtVal::fin(3, 4), ExtVal::Inf]
    }

    #[test]
    fn mul_conventions() {
        assert_eq!(ExtVal::Zero.mul(&ExtVal::Inf), ExtVal::Zero);
        assert_eq!(ExtVal::Inf.mul(&ExtVal::Inf), ExtVal::Inf);
        assert_eq!(ExtVal::fin(2, 3).mul(&ExtVal::fin(3, 4)), ExtVal::fin(1, 2));
    }

    #[test]
    fn add_conventions() {
        assert_eq!(ExtVal::fin(5, 1).add(&ExtVal::Inf), ExtVal::Inf);
        assert_eq!(ExtVal::Zero.add(&ExtVal::Zero), ExtVal::Zero);
        assert_eq!(ExtVal::fin(1, 2).add(&ExtVal::fin(1, 3)), ExtVal::fin(5, 6));
    }

    #[test]
    fn sign_table() {
        assert_eq!(ExtVal::Zero.sign(), ExtVal::Zero);
        assert_eq!(ExtVal::Inf.sign(), ExtVal::Inf);
        assert_eq!(ExtVal::fin(7, 2).sign(), ExtVal::fin(1, 1));
    }

    #[test]
    fn sup_examples() {
        assert_eq!(ExtVal::sup([&ExtVal::fin(1, 2), &ExtVal::Inf]), ExtVal::Inf);
        assert_eq!(ExtVal::sup([&ExtVal::Zero]), ExtVal::Zero);
        assert_eq!(ExtVal::sup(std::iter::empty()), ExtVal::Zero);
    }

    #[test]
    fn assoc_comm_exhaustive() {
        let vals = all_tags();
        for a in &vals {
            for b in &vals {
                assert_eq!(a.mul(b), b.mul(a));
                assert_eq!(a.add(b), b.add(a));
                assert_eq!(a.sign().mul(&b.sign()), a.mul(b).sign());
                for c in &vals {
                    assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
                    assert_eq!(a.add(b).add(c), a.add(&b.add(c)));
                }
            }
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(ExtVal::parse("0").unwrap(), ExtVal::Zero);
        assert_eq!(ExtVal::parse("inf").unwrap(), ExtVal::Inf);
        assert_eq!(ExtVal::parse("3/6").unwrap().to_string(), "1/2");
        assert_eq!(ExtVal::parse("4").unwrap().to_string(), "4/1");
        assert_eq!(ExtVal::parse("0/7").unwrap(), ExtVal::Zero);
        assert!(ExtVal::parse("-1/2").is_err());
        assert!(ExtVal::parse("1/0").is_err());
    }

    proptest! {
        #[test]
        fn sup_is_max(raw in proptest::collection::vec((0u8..3, 1i64..50, 1i64..50), 0..8)) {
            let vals: Vec<ExtVal> = raw
                .into_iter()
                .map(|(tag, n, d)| match tag {
                    0 => ExtVal::Zero,
                    1 => ExtVal::fin(n, d),
                    _ => ExtVal::Inf,
                })
                .collect();
            let sup = ExtVal::sup(vals.iter());
            for v in &vals {
                prop_assert!(*v <= sup);
            }
            if !vals.is_empty() {
                prop_assert!(vals.contains(&sup));
            }
        }
    }
}
