//! Signed sets: pairs of disjoint finite sets given structurally.
//!
//! A [`SignedSet`] is a description, not a container. Enumeration, counting,
//! membership and the elementary projection ξ are all computed from the
//! structure. All values are immutable after construction and cheap to clone.
//!
//! Enumeration order is deterministic and fixed across runs:
//! intervals ascend, explicit sets list positives then negatives in the
//! given order, products run lexicographically by factor order, and disjoint
//! unions iterate in index-enumeration order with the fiber inside.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::element::{Element, Sign};
use crate::{Error, Result};

/// A family rule for an indexed disjoint union `⨆_{t ∈ index} S_t`.
///
/// Two families compare equal when their `tag` and `params` agree; the rule
/// itself must be a pure function of those.
#[derive(Clone)]
pub struct Family {
    tag: &'static str,
    params: Vec<i64>,
    rule: Arc<dyn Fn(&Element) -> SignedSet + Send + Sync>,
}

impl Family {
    pub fn new(
        tag: &'static str,
        params: Vec<i64>,
        rule: impl Fn(&Element) -> SignedSet + Send + Sync + 'static,
    ) -> Family {
        Family {
            tag,
            params,
            rule: Arc::new(rule),
        }
    }

    pub fn fiber(&self, index_elem: &Element) -> SignedSet {
        (self.rule)(index_elem)
    }
}

impl PartialEq for Family {
    fn eq(&self, other: &Family) -> bool {
        self.tag == other.tag && self.params == other.params
    }
}
impl Eq for Family {}

enum Kind {
    Empty,
    Interval(i64, i64),
    Explicit { pos: Vec<Element>, neg: Vec<Element> },
    Opposite(SignedSet),
    /// Binary union `A ⊔ B`, elements `(a,0)` and `(b,1)`.
    Pair(SignedSet, SignedSet),
    Product(Vec<SignedSet>),
    /// Indexed union `⨆_{t ∈ index} family(t)`, elements `(s,t)`.
    Union { index: SignedSet, family: Family },
    /// Monotone triangles with the given bottom row.
    Triangles(Vec<i64>),
}

struct Node {
    kind: Kind,
    counts: OnceLock<(u128, u128)>,
}

/// A finite signed set.
#[derive(Clone)]
pub struct SignedSet(Arc<Node>);

fn mk(kind: Kind) -> SignedSet {
    SignedSet(Arc::new(Node {
        kind,
        counts: OnceLock::new(),
    }))
}

impl SignedSet {
    pub fn empty() -> SignedSet {
        mk(Kind::Empty)
    }

    /// The signed interval `[a,b]`: positive `{a..b}` when `a ≤ b`, negative
    /// `{b+1..a-1}` when `a > b`. Its size is `b - a + 1` in all cases.
    pub fn interval(a: i64, b: i64) -> SignedSet {
        mk(Kind::Interval(a, b))
    }

    pub fn explicit(pos: Vec<Element>, neg: Vec<Element>) -> SignedSet {
        mk(Kind::Explicit { pos, neg })
    }

    pub fn singleton(elem: Element, sign: Sign) -> SignedSet {
        match sign {
            Sign::Pos => SignedSet::explicit(vec![elem], vec![]),
            Sign::Neg => SignedSet::explicit(vec![], vec![elem]),
        }
    }

    /// The one-point positive set `({·}, ∅)` with the empty tuple as dot.
    pub fn dot() -> SignedSet {
        SignedSet::singleton(Element::unit(), Sign::Pos)
    }

    /// Opposite signed set. Normalizes two cheap cases: a double opposite
    /// collapses, and an opposite interval is again an interval
    /// (`-[a,b] = [b+1,a-1]`).
    pub fn opposite(&self) -> SignedSet {
        match &self.0.kind {
            Kind::Opposite(inner) => inner.clone(),
            Kind::Interval(a, b) => SignedSet::interval(b + 1, a - 1),
            Kind::Empty => SignedSet::empty(),
            _ => mk(Kind::Opposite(self.clone())),
        }
    }

    pub fn pair(first: SignedSet, second: SignedSet) -> SignedSet {
        mk(Kind::Pair(first, second))
    }

    pub fn product(factors: Vec<SignedSet>) -> SignedSet {
        mk(Kind::Product(factors))
    }

    /// The signed box `[a_1,b_1] × … × [a_m,b_m]`.
    pub fn signed_box(bounds: &[(i64, i64)]) -> SignedSet {
        SignedSet::product(
            bounds
                .iter()
                .map(|&(a, b)| SignedSet::interval(a, b))
                .collect(),
        )
    }

    pub fn union(index: SignedSet, family: Family) -> SignedSet {
        mk(Kind::Union { index, family })
    }

    /// Union of a constant family: `⨆_{t ∈ index} fiber`.
    pub fn union_const(index: SignedSet, fiber: SignedSet) -> SignedSet {
        let captured = fiber.clone();
        // params: none; constant unions compare equal only via the fiber, so
        // embed a fingerprint of the fiber description in the params.
        let mut params = Vec::new();
        fiber.fingerprint(&mut params);
        SignedSet::union(
            index,
            Family {
                tag: "const",
                params,
                rule: Arc::new(move |_| captured.clone()),
            },
        )
    }

    pub(crate) fn triangles(bottom: Vec<i64>) -> SignedSet {
        mk(Kind::Triangles(bottom))
    }

    /// Cheap structural fingerprint used for equality of constant families.
    fn fingerprint(&self, out: &mut Vec<i64>) {
        match &self.0.kind {
            Kind::Empty => out.push(-1000),
            Kind::Interval(a, b) => {
                out.push(-1001);
                out.push(*a);
                out.push(*b);
            }
            Kind::Explicit { pos, neg } => {
                out.push(-1002);
                out.push(pos.len() as i64);
                out.push(neg.len() as i64);
            }
            Kind::Opposite(s) => {
                out.push(-1003);
                s.fingerprint(out);
            }
            Kind::Pair(a, b) => {
                out.push(-1004);
                a.fingerprint(out);
                b.fingerprint(out);
            }
            Kind::Product(fs) => {
                out.push(-1005);
                out.push(fs.len() as i64);
                for f in fs {
                    f.fingerprint(out);
                }
            }
            Kind::Union { index, family } => {
                out.push(-1006);
                index.fingerprint(out);
                out.push(family.tag.as_ptr() as i64);
                out.extend_from_slice(&family.params);
            }
            Kind::Triangles(k) => {
                out.push(-1007);
                out.extend_from_slice(k);
            }
        }
    }

    /// Visit every member exactly once, in the documented deterministic order.
    pub fn for_each(&self, f: &mut dyn FnMut(Element, Sign)) {
        match &self.0.kind {
            Kind::Empty => {}
            Kind::Interval(a, b) => {
                if a <= b {
                    for v in *a..=*b {
                        f(Element::Int(v), Sign::Pos);
                    }
                } else {
                    for v in (*b + 1)..=(*a - 1) {
                        f(Element::Int(v), Sign::Neg);
                    }
                }
            }
            Kind::Explicit { pos, neg } => {
                for e in pos {
                    f(e.clone(), Sign::Pos);
                }
                for e in neg {
                    f(e.clone(), Sign::Neg);
                }
            }
            Kind::Opposite(inner) => inner.for_each(&mut |e, s| f(e, -s)),
            Kind::Pair(first, second) => {
                first.for_each(&mut |e, s| f(Element::tagged(e, Element::Int(0)), s));
                second.for_each(&mut |e, s| f(Element::tagged(e, Element::Int(1)), s));
            }
            Kind::Product(factors) => {
                let parts: Vec<Vec<(Element, Sign)>> =
                    factors.iter().map(SignedSet::elements).collect();
                if parts.iter().any(Vec::is_empty) && !factors.is_empty() {
                    return;
                }
                let mut idx = vec![0usize; parts.len()];
                loop {
                    let mut items = Vec::with_capacity(parts.len());
                    let mut sign = Sign::Pos;
                    for (p, &i) in parts.iter().zip(idx.iter()) {
                        let (e, s) = &p[i];
                        items.push(e.clone());
                        sign = sign * *s;
                    }
                    f(Element::tuple(items), sign);
                    // odometer, last factor fastest
                    let mut pos = parts.len();
                    loop {
                        if pos == 0 {
                            return;
                        }
                        pos -= 1;
                        idx[pos] += 1;
                        if idx[pos] < parts[pos].len() {
                            break;
                        }
                        idx[pos] = 0;
                    }
                }
            }
            Kind::Union { index, family } => {
                index.for_each(&mut |t, st| {
                    family.fiber(&t).for_each(&mut |s, ss| {
                        f(Element::tagged(s, t.clone()), ss * st);
                    });
                });
            }
            Kind::Triangles(bottom) => crate::mt::for_each_triangle(bottom, f),
        }
    }

    pub fn elements(&self) -> Vec<(Element, Sign)> {
        let mut out = Vec::new();
        self.for_each(&mut |e, s| out.push((e, s)));
        out
    }

    /// `(positive count, negative count)`, cached per node.
    pub fn counts(&self) -> (u128, u128) {
        if let Some(c) = self.0.counts.get() {
            return *c;
        }
        let c = match &self.0.kind {
            Kind::Empty => (0, 0),
            Kind::Interval(a, b) => {
                if a <= b {
                    ((b - a + 1) as u128, 0)
                } else {
                    (0, (a - b - 1) as u128)
                }
            }
            Kind::Explicit { pos, neg } => (pos.len() as u128, neg.len() as u128),
            Kind::Opposite(inner) => {
                let (p, n) = inner.counts();
                (n, p)
            }
            Kind::Pair(first, second) => {
                let (p1, n1) = first.counts();
                let (p2, n2) = second.counts();
                (p1 + p2, n1 + n2)
            }
            Kind::Product(factors) => {
                let mut acc = (1u128, 0u128);
                for factor in factors {
                    let (p, n) = factor.counts();
                    acc = (acc.0 * p + acc.1 * n, acc.0 * n + acc.1 * p);
                }
                acc
            }
            Kind::Union { index, family } => {
                let mut acc = (0u128, 0u128);
                index.for_each(&mut |t, st| {
                    let (p, n) = family.fiber(&t).counts();
                    match st {
                        Sign::Pos => {
                            acc.0 += p;
                            acc.1 += n;
                        }
                        Sign::Neg => {
                            acc.0 += n;
                            acc.1 += p;
                        }
                    }
                });
                acc
            }
            Kind::Triangles(bottom) => crate::mt::triangle_counts(bottom),
        };
        *self.0.counts.get_or_init(|| c)
    }

    /// Signed size: positives minus negatives.
    pub fn size(&self) -> i128 {
        let (p, n) = self.counts();
        p as i128 - n as i128
    }

    /// Membership with sign; `None` when the element is not a member.
    pub fn member_sign(&self, e: &Element) -> Option<Sign> {
        match &self.0.kind {
            Kind::Empty => None,
            Kind::Interval(a, b) => {
                let v = e.as_int()?;
                if a <= b {
                    (*a <= v && v <= *b).then_some(Sign::Pos)
                } else {
                    (*b < v && v < *a).then_some(Sign::Neg)
                }
            }
            Kind::Explicit { pos, neg } => {
                if pos.contains(e) {
                    Some(Sign::Pos)
                } else if neg.contains(e) {
                    Some(Sign::Neg)
                } else {
                    None
                }
            }
            Kind::Opposite(inner) => inner.member_sign(e).map(|s| -s),
            Kind::Pair(first, second) => {
                let (value, tag) = e.as_tagged()?;
                match tag.as_int()? {
                    0 => first.member_sign(value),
                    1 => second.member_sign(value),
                    _ => None,
                }
            }
            Kind::Product(factors) => {
                let items = e.as_tuple()?;
                if items.len() != factors.len() {
                    return None;
                }
                let mut sign = Sign::Pos;
                for (factor, item) in factors.iter().zip(items.iter()) {
                    sign = sign * factor.member_sign(item)?;
                }
                Some(sign)
            }
            Kind::Union { index, family } => {
                let (value, tag) = e.as_tagged()?;
                let st = index.member_sign(tag)?;
                let ss = family.fiber(tag).member_sign(value)?;
                Some(st * ss)
            }
            Kind::Triangles(bottom) => crate::mt::triangle_member_sign(bottom, e),
        }
    }

    /// Dimension of an elementary signed set, when defined.
    pub fn dimension(&self) -> Option<usize> {
        match &self.0.kind {
            Kind::Empty => Some(0),
            Kind::Interval(..) => Some(1),
            Kind::Explicit { pos, neg } => {
                let mut dim = None;
                for e in pos.iter().chain(neg.iter()) {
                    let d = match e {
                        Element::Int(_) => 1,
                        Element::Tuple(items) => {
                            if items.iter().all(|i| i.as_int().is_some()) {
                                items.len()
                            } else {
                                return None;
                            }
                        }
                        Element::Tagged(_) => return None,
                    };
                    match dim {
                        None => dim = Some(d),
                        Some(prev) if prev == d => {}
                        _ => return None,
                    }
                }
                dim
            }
            Kind::Opposite(inner) => inner.dimension(),
            Kind::Pair(first, second) => {
                match (first.dimension(), second.dimension()) {
                    (Some(a), Some(b)) if a == b => Some(a),
                    (Some(a), None) if second.is_empty() => Some(a),
                    (None, Some(b)) if first.is_empty() => Some(b),
                    _ => None,
                }
            }
            Kind::Product(factors) => {
                let mut total = 0;
                for factor in factors {
                    total += factor.dimension()?;
                }
                Some(total)
            }
            Kind::Union { index, family } => {
                // Probe the first index member; all fibers of an elementary
                // union share one dimension.
                let mut dim = None;
                let mut done = false;
                index.for_each(&mut |t, _| {
                    if !done {
                        dim = family.fiber(&t).dimension();
                        done = true;
                    }
                });
                if done {
                    dim
                } else {
                    Some(0)
                }
            }
            Kind::Triangles(_) => None,
        }
    }

    fn is_empty(&self) -> bool {
        let (p, n) = self.counts();
        p == 0 && n == 0
    }

    /// The elementary projection ξ: strips all disjoint-union tags and
    /// returns the underlying integer tuple.
    pub fn xi(&self, e: &Element) -> Result<Vec<i64>> {
        match &self.0.kind {
            Kind::Interval(..) => Ok(vec![e.expect_int()?]),
            Kind::Explicit { .. } => match e {
                Element::Int(v) => Ok(vec![*v]),
                Element::Tuple(items) => items
                    .iter()
                    .map(|i| i.expect_int())
                    .collect::<Result<Vec<_>>>(),
                Element::Tagged(_) => Err(Error::NotElementary(format!(
                    "tagged element {e} in explicit set"
                ))),
            },
            Kind::Opposite(inner) => inner.xi(e),
            Kind::Pair(first, second) => {
                let (value, tag) = e.expect_tagged()?;
                match tag.expect_int()? {
                    0 => first.xi(value),
                    1 => second.xi(value),
                    t => Err(Error::Validation(format!("pair tag {t} out of range"))),
                }
            }
            Kind::Product(factors) => {
                let items = e.expect_tuple()?;
                if items.len() != factors.len() {
                    return Err(Error::Validation(format!(
                        "tuple arity {} does not match product arity {}",
                        items.len(),
                        factors.len()
                    )));
                }
                let mut out = Vec::new();
                for (factor, item) in factors.iter().zip(items.iter()) {
                    out.extend(factor.xi(item)?);
                }
                Ok(out)
            }
            Kind::Union { index, family } => {
                let (value, tag) = e.expect_tagged()?;
                family.fiber(tag).xi(value)
            }
            Kind::Empty => Err(Error::NotElementary("empty set has no elements".into())),
            Kind::Triangles(_) => Err(Error::NotElementary(
                "monotone-triangle sets are not elementary".into(),
            )),
        }
    }

    pub(crate) fn describe(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            Kind::Empty => write!(f, "0"),
            Kind::Interval(a, b) => write!(f, "[{a},{b}]"),
            Kind::Explicit { pos, neg } => write!(f, "{{{}+,{}-}}", pos.len(), neg.len()),
            Kind::Opposite(inner) => {
                write!(f, "-")?;
                inner.describe(f)
            }
            Kind::Pair(first, second) => {
                write!(f, "(")?;
                first.describe(f)?;
                write!(f, " u ")?;
                second.describe(f)?;
                write!(f, ")")
            }
            Kind::Product(factors) => {
                for (i, factor) in factors.iter().enumerate() {
                    if i > 0 {
                        write!(f, "x")?;
                    }
                    factor.describe(f)?;
                }
                if factors.is_empty() {
                    write!(f, "()")?;
                }
                Ok(())
            }
            Kind::Union { index, family } => {
                write!(f, "U[{}{:?}; ", family.tag, family.params)?;
                index.describe(f)?;
                write!(f, "]")
            }
            Kind::Triangles(k) => write!(f, "MT{k:?}"),
        }
    }
}

impl PartialEq for SignedSet {
    fn eq(&self, other: &SignedSet) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&self.0.kind, &other.0.kind) {
            (Kind::Empty, Kind::Empty) => true,
            (Kind::Interval(a, b), Kind::Interval(c, d)) => a == c && b == d,
            (
                Kind::Explicit { pos: p1, neg: n1 },
                Kind::Explicit { pos: p2, neg: n2 },
            ) => p1 == p2 && n1 == n2,
            (Kind::Opposite(a), Kind::Opposite(b)) => a == b,
            (Kind::Pair(a1, b1), Kind::Pair(a2, b2)) => a1 == a2 && b1 == b2,
            (Kind::Product(f1), Kind::Product(f2)) => f1 == f2,
            (
                Kind::Union { index: i1, family: f1 },
                Kind::Union { index: i2, family: f2 },
            ) => i1 == i2 && f1 == f2,
            (Kind::Triangles(k1), Kind::Triangles(k2)) => k1 == k2,
            _ => false,
        }
    }
}
impl Eq for SignedSet {}

impl fmt::Debug for SignedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.describe(f)
    }
}

impl fmt::Display for SignedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.describe(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_cases() {
        let pos = SignedSet::interval(1, 3);
        assert_eq!(pos.counts(), (3, 0));
        assert_eq!(pos.size(), 3);

        let neg = SignedSet::interval(9, 5);
        let elems = neg.elements();
        assert_eq!(
            elems,
            vec![
                (Element::Int(6), Sign::Neg),
                (Element::Int(7), Sign::Neg),
                (Element::Int(8), Sign::Neg)
            ]
        );
        assert_eq!(neg.size(), -3);

        let empty = SignedSet::interval(2, 1);
        assert_eq!(empty.counts(), (0, 0));
        assert_eq!(empty.size(), 0);
    }

    #[test]
    fn enumerate_singleton_negative_interval() {
        assert_eq!(
            SignedSet::interval(3, 1).elements(),
            vec![(Element::Int(2), Sign::Neg)]
        );
    }

    #[test]
    fn product_with_empty_factor_is_empty() {
        let p = SignedSet::product(vec![
            SignedSet::interval(1, 2),
            SignedSet::interval(4, 3),
        ]);
        assert!(p.elements().is_empty());
        assert_eq!(p.size(), 0);
    }

    #[test]
    fn product_mixed_signs() {
        let p = SignedSet::product(vec![
            SignedSet::interval(1, 2),
            SignedSet::interval(5, 3),
        ]);
        let elems = p.elements();
        assert_eq!(elems.len(), 2);
        assert!(elems.iter().all(|(_, s)| *s == Sign::Neg));
        assert_eq!(p.size(), -2);
    }

    #[test]
    fn opposite_involution_and_size() {
        let s = SignedSet::interval(1, 5);
        assert_eq!(s.opposite().size(), -5);
        assert_eq!(s.opposite().opposite().elements(), s.elements());
    }

    #[test]
    fn union_over_negative_index() {
        // ⨆ over [6,4] (negative {5}) of the constant [1,2]: size -(2) = -2...
        // with index [6,4] = one negative element, each fiber of size 2.
        let u = SignedSet::union_const(SignedSet::interval(6, 4), SignedSet::interval(1, 2));
        assert_eq!(u.size(), -2);
        // spec-scale example: index with two negative elements
        let u = SignedSet::union_const(SignedSet::interval(7, 4), SignedSet::interval(1, 2));
        assert_eq!(u.size(), -4);
        let total: i128 = u
            .elements()
            .iter()
            .map(|(_, s)| s.as_i8() as i128)
            .sum();
        assert_eq!(total, u.size());
    }

    #[test]
    fn binary_union_tags() {
        let s = SignedSet::interval(0, 1);
        let u = SignedSet::pair(s.clone(), s.clone());
        let elems = u.elements();
        assert_eq!(elems.len(), 4);
        assert_eq!(elems[0].0, Element::tagged(Element::Int(0), Element::Int(0)));
        assert_eq!(elems[2].0, Element::tagged(Element::Int(0), Element::Int(1)));
    }

    #[test]
    fn xi_strips_tags() {
        let s = SignedSet::interval(1, 5);
        assert_eq!(s.xi(&Element::Int(4)).unwrap(), vec![4]);

        let u = SignedSet::pair(SignedSet::interval(1, 5), SignedSet::interval(6, 3));
        let e = Element::tagged(Element::Int(4), Element::Int(1));
        assert_eq!(u.xi(&e).unwrap(), vec![4]);

        let p = SignedSet::product(vec![
            SignedSet::interval(1, 3),
            SignedSet::interval(6, 8),
        ]);
        let e = Element::int_row(&[2, 7]);
        assert_eq!(p.xi(&e).unwrap(), vec![2, 7]);
    }

    #[test]
    fn member_signs() {
        let i = SignedSet::interval(9, 5);
        assert_eq!(i.member_sign(&Element::Int(6)), Some(Sign::Neg));
        assert_eq!(i.member_sign(&Element::Int(9)), None);
        let p = SignedSet::product(vec![
            SignedSet::interval(1, 2),
            SignedSet::interval(5, 3),
        ]);
        assert_eq!(
            p.member_sign(&Element::int_row(&[1, 4])),
            Some(Sign::Neg)
        );
        assert_eq!(p.member_sign(&Element::int_row(&[1, 5])), None);
    }

    #[test]
    fn size_equals_enumerated_sign_sum() {
        for a in -3..=3 {
            for b in -3..=3 {
                for c in -3..=3 {
                    for d in -3..=3 {
                        let s = SignedSet::product(vec![
                            SignedSet::interval(a, b),
                            SignedSet::interval(c, d),
                        ]);
                        let total: i128 =
                            s.elements().iter().map(|(_, s)| s.as_i8() as i128).sum();
                        assert_eq!(total, s.size(), "box [{a},{b}]x[{c},{d}]");
                    }
                }
            }
        }
    }

    #[test]
    fn interval_shift_is_opposite() {
        // [b+1, a-1] = -[a, b]
        for a in -4..=4 {
            for b in -4..=4 {
                let lhs = SignedSet::interval(b + 1, a - 1);
                let rhs = SignedSet::interval(a, b).opposite();
                assert_eq!(lhs.elements(), rhs.elements());
            }
        }
    }
}
