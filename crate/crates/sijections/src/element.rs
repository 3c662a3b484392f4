//! Finite value trees naming the members of signed sets.
//!
//! Every member of every signed set in this crate is an [`Element`]: an
//! integer leaf, an ordered tuple, or a tagged pair `(value, tag)`. Tagged
//! pairs are what indexed disjoint unions produce; the binary union `S ⊔ T`
//! tags with the integer leaves `0` and `1`.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::{Error, Result};

/// Sign carried by a member of a signed set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }

    /// Sign of a parity: even is positive.
    pub fn from_parity(n: usize) -> Sign {
        if n % 2 == 0 {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn is_pos(self) -> bool {
        self == Sign::Pos
    }
}

impl std::ops::Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Pos => write!(f, "+"),
            Sign::Neg => write!(f, "-"),
        }
    }
}

/// A member of a signed set.
///
/// Structural equality is the only equality used anywhere in the crate.
/// Cloning is cheap: tuples and pairs share their payload.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Element {
    Int(i64),
    Tuple(Arc<[Element]>),
    /// `(value, tag)` pair produced by a disjoint union.
    Tagged(Arc<(Element, Element)>),
}

impl Element {
    pub fn int(v: i64) -> Element {
        Element::Int(v)
    }

    pub fn tuple(items: Vec<Element>) -> Element {
        Element::Tuple(items.into())
    }

    /// The empty tuple, also used as the dot element of one-point sets.
    pub fn unit() -> Element {
        Element::Tuple(Arc::from(Vec::new()))
    }

    pub fn int_row(row: &[i64]) -> Element {
        Element::tuple(row.iter().copied().map(Element::Int).collect())
    }

    pub fn tagged(value: Element, tag: Element) -> Element {
        Element::Tagged(Arc::new((value, tag)))
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Element::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[Element]> {
        match self {
            Element::Tuple(items) => Some(items),
            _ => None,
        }
    }

    pub fn as_tagged(&self) -> Option<(&Element, &Element)> {
        match self {
            Element::Tagged(p) => Some((&p.0, &p.1)),
            _ => None,
        }
    }

    /// Value part of a tagged pair, or the element itself otherwise.
    pub fn value(&self) -> &Element {
        match self {
            Element::Tagged(p) => &p.0,
            other => other,
        }
    }

    pub fn as_int_row(&self) -> Option<Vec<i64>> {
        let items = self.as_tuple()?;
        items.iter().map(Element::as_int).collect()
    }

    /// Expect an integer leaf, with a diagnostic error otherwise.
    pub fn expect_int(&self) -> Result<i64> {
        self.as_int()
            .ok_or_else(|| Error::Validation(format!("expected integer leaf, got {self}")))
    }

    pub fn expect_tuple(&self) -> Result<&[Element]> {
        self.as_tuple()
            .ok_or_else(|| Error::Validation(format!("expected tuple, got {self}")))
    }

    pub fn expect_tagged(&self) -> Result<(&Element, &Element)> {
        self.as_tagged()
            .ok_or_else(|| Error::Validation(format!("expected tagged pair, got {self}")))
    }

    /// Canonical JSON: integer, array, or `{"v": value, "t": tag}`.
    pub fn to_json(&self) -> Value {
        match self {
            Element::Int(v) => json!(v),
            Element::Tuple(items) => Value::Array(items.iter().map(Element::to_json).collect()),
            Element::Tagged(p) => json!({"v": p.0.to_json(), "t": p.1.to_json()}),
        }
    }

    pub fn from_json(value: &Value) -> Result<Element> {
        match value {
            Value::Number(n) => n
                .as_i64()
                .map(Element::Int)
                .ok_or_else(|| Error::Validation(format!("non-integer number {n}"))),
            Value::Array(items) => Ok(Element::tuple(
                items
                    .iter()
                    .map(Element::from_json)
                    .collect::<Result<Vec<_>>>()?,
            )),
            Value::Object(map) => {
                let v = map
                    .get("v")
                    .ok_or_else(|| Error::Validation("tagged pair missing \"v\"".into()))?;
                let t = map
                    .get("t")
                    .ok_or_else(|| Error::Validation("tagged pair missing \"t\"".into()))?;
                Ok(Element::tagged(Element::from_json(v)?, Element::from_json(t)?))
            }
            other => Err(Error::Validation(format!("cannot decode element from {other}"))),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(v) => write!(f, "{v}"),
            Element::Tuple(items) => {
                write!(f, "(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
            Element::Tagged(p) => write!(f, "[{}|{}]", p.0, p.1),
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structural_equality() {
        let a = Element::tagged(Element::int(4), Element::int(1));
        let b = Element::tagged(Element::int(4), Element::int(1));
        assert_eq!(a, b);
        assert_ne!(a, Element::tagged(Element::int(4), Element::int(0)));
        assert_ne!(Element::int_row(&[1, 2]), Element::int_row(&[2, 1]));
    }

    #[test]
    fn json_round_trip() {
        let e = Element::tagged(
            Element::tuple(vec![Element::int(-3), Element::unit()]),
            Element::int(1),
        );
        let v = e.to_json();
        assert_eq!(Element::from_json(&v).unwrap(), e);
        assert_eq!(v.to_string(), r#"{"t":1,"v":[-3,[]]}"#);
    }

    #[test]
    fn sign_algebra() {
        assert_eq!(Sign::Pos * Sign::Neg, Sign::Neg);
        assert_eq!(-(Sign::Neg), Sign::Pos);
        assert_eq!(Sign::from_parity(2), Sign::Pos);
        assert_eq!(Sign::from_parity(3).as_i8(), -1);
    }
}
