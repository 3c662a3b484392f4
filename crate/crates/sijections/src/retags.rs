//! Canonical re-tagging sijections.
//!
//! Associativity, distributivity and index-shift identities on signed sets
//! are sign-preserving bijections on the nose. Keeping them as explicit
//! sijections with fixed orientation makes every composition step total and
//! auditable. The caller always supplies both the domain and the codomain,
//! built from the canonical constructors, so composition can check middles
//! structurally.

use crate::element::Element;
use crate::set::SignedSet;
use crate::sijection::Sijection;
use crate::{Error, Result};

/// Identity on elements between two views of the same signed set
/// (e.g. `⨆_{l ∈ -B} -S_l` seen as `⨆_{l ∈ B} S_l`).
pub fn same_elements(name: &'static str, domain: SignedSet, codomain: SignedSet) -> Sijection {
    Sijection::retag(name, domain, codomain, |e| Ok(e.clone()), |e| Ok(e.clone()))
}

/// `F_0 × F_1 × … × F_{m-1}  ⇒  F_0 × (F_1 × … × F_{m-1})`.
pub fn nest_tail(domain: SignedSet, codomain: SignedSet) -> Sijection {
    Sijection::retag(
        "nest-tail",
        domain,
        codomain,
        |e| {
            let items = e.expect_tuple()?;
            if items.is_empty() {
                return Err(Error::Validation("nest-tail on empty tuple".into()));
            }
            Ok(Element::tuple(vec![
                items[0].clone(),
                Element::tuple(items[1..].to_vec()),
            ]))
        },
        |e| {
            let items = e.expect_tuple()?;
            if items.len() != 2 {
                return Err(Error::Validation("nest-tail inverse needs a pair".into()));
            }
            let mut out = vec![items[0].clone()];
            out.extend(items[1].expect_tuple()?.iter().cloned());
            Ok(Element::tuple(out))
        },
    )
}

/// `F_0 × … × F_{m-1}  ⇒  (F_0 × … × F_{m-2}) × F_{m-1}`.
pub fn nest_head(domain: SignedSet, codomain: SignedSet) -> Sijection {
    Sijection::retag(
        "nest-head",
        domain,
        codomain,
        |e| {
            let items = e.expect_tuple()?;
            if items.is_empty() {
                return Err(Error::Validation("nest-head on empty tuple".into()));
            }
            let (last, front) = items.split_last().unwrap();
            Ok(Element::tuple(vec![
                Element::tuple(front.to_vec()),
                last.clone(),
            ]))
        },
        |e| {
            let items = e.expect_tuple()?;
            if items.len() != 2 {
                return Err(Error::Validation("nest-head inverse needs a pair".into()));
            }
            let mut out = items[0].expect_tuple()?.to_vec();
            out.push(items[1].clone());
            Ok(Element::tuple(out))
        },
    )
}

/// Distributivity at one coordinate: a product whose `p`-th factor is a
/// binary or indexed union becomes a union of products. The element surgery
/// is the same in both cases, only the tag type differs.
pub fn distribute_at(
    p: usize,
    domain: SignedSet,
    codomain: SignedSet,
) -> Sijection {
    Sijection::retag(
        "distribute",
        domain,
        codomain,
        move |e| {
            let items = e.expect_tuple()?;
            let (value, tag) = items[p].expect_tagged()?;
            let mut flat = items.to_vec();
            flat[p] = value.clone();
            Ok(Element::tagged(Element::tuple(flat), tag.clone()))
        },
        move |e| {
            let (tuple, tag) = e.expect_tagged()?;
            let mut items = tuple.expect_tuple()?.to_vec();
            items[p] = Element::tagged(items[p].clone(), tag.clone());
            Ok(Element::tuple(items))
        },
    )
}

/// Distributivity for an indexed union at one coordinate:
/// `… × (⨆_t G_t) × … ⇒ ⨆_t (… × G_t × …)`.
pub fn distribute_union_at(
    p: usize,
    domain: SignedSet,
    codomain: SignedSet,
) -> Sijection {
    // same element surgery as the binary case
    let s = distribute_pair_at(p, domain, codomain);
    s
}

/// Associativity of disjoint unions:
/// `⨆_{t ∈ ⨆_{u∈U} T_u} S_t  ⇒  ⨆_{u∈U} ⨆_{t∈T_u} S_t`.
pub fn assoc_union(domain: SignedSet, codomain: SignedSet) -> Sijection {
    Sijection::retag(
        "assoc-union",
        domain,
        codomain,
        |e| {
            let (s, tu) = e.expect_tagged()?;
            let (t, u) = tu.expect_tagged()?;
            Ok(Element::tagged(
                Element::tagged(s.clone(), t.clone()),
                u.clone(),
            ))
        },
        |e| {
            let (st, u) = e.expect_tagged()?;
            let (s, t) = st.expect_tagged()?;
            Ok(Element::tagged(
                s.clone(),
                Element::tagged(t.clone(), u.clone()),
            ))
        },
    )
}

/// Swap the two outer levels of a doubly indexed union:
/// `⨆_{t∈T} ⨆_{u∈U} S_{t,u}  ⇒  ⨆_{u∈U} ⨆_{t∈T} S_{t,u}`.
pub fn swap_union(domain: SignedSet, codomain: SignedSet) -> Sijection {
    Sijection::retag(
        "swap-union",
        domain,
        codomain,
        |e| {
            let (su, t) = e.expect_tagged()?;
            let (s, u) = su.expect_tagged()?;
            Ok(Element::tagged(
                Element::tagged(s.clone(), t.clone()),
                u.clone(),
            ))
        },
        |e| {
            let (st, u) = e.expect_tagged()?;
            let (s, t) = st.expect_tagged()?;
            Ok(Element::tagged(
                Element::tagged(s.clone(), u.clone()),
                t.clone(),
            ))
        },
    )
}

/// Shift the integer tuple indexing a union of fibers over a signed box:
/// `⨆_{l ∈ B} S_{l+c}  ⇒  ⨆_{l ∈ B+c} S_l`.
pub fn shift_box_tags(
    shifts: Vec<i64>,
    domain: SignedSet,
    codomain: SignedSet,
) -> Sijection {
    let back: Vec<i64> = shifts.iter().map(|c| -c).collect();
    let shift = move |e: &Element, by: &[i64]| -> Result<Element> {
        let (s, l) = e.expect_tagged()?;
        let row = l
            .as_int_row()
            .ok_or_else(|| Error::Validation(format!("box tag {l} is not an integer row")))?;
        if row.len() != by.len() {
            return Err(Error::Validation(format!(
                "shift arity {} vs tag {}",
                by.len(),
                row.len()
            )));
        }
        let shifted: Vec<i64> = row.iter().zip(by.iter()).map(|(a, b)| a + b).collect();
        Ok(Element::tagged(s.clone(), Element::int_row(&shifted)))
    };
    let fwd_shift = shifts;
    let shift2 = shift.clone();
    Sijection::retag(
        "shift-box-tags",
        domain,
        codomain,
        move |e| shift(e, &fwd_shift),
        move |e| shift2(e, &back),
    )
}

/// Drop the tag of a union over a one-point index set:
/// `⨆_{· ∈ ({·},∅)} S  ⇒  S`.
pub fn drop_unit_tag(domain: SignedSet, codomain: SignedSet) -> Sijection {
    Sijection::retag(
        "drop-unit-tag",
        domain,
        codomain,
        |e| {
            let (s, tag) = e.expect_tagged()?;
            if *tag != Element::unit() {
                return Err(Error::Validation(format!("expected unit tag, got {tag}")));
            }
            Ok(s.clone())
        },
        |e| Ok(Element::tagged(e.clone(), Element::unit())),
    )
}

/// Drop an empty second part: `S ⊔ ∅ ⇒ S`.
pub fn drop_empty_second(domain: SignedSet, codomain: SignedSet) -> Sijection {
    Sijection::retag(
        "drop-empty-second",
        domain,
        codomain,
        |e| {
            let (value, tag) = e.expect_tagged()?;
            match tag.expect_int()? {
                0 => Ok(value.clone()),
                _ => Err(Error::Validation(
                    "element tagged into an empty union part".into(),
                )),
            }
        },
        |e| Ok(Element::tagged(e.clone(), Element::Int(0))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::Family;

    #[test]
    fn nest_and_distribute_round_trip() {
        let a = SignedSet::interval(0, 1);
        let b = SignedSet::interval(2, 4);
        let c = SignedSet::interval(-1, 0);
        let flat = SignedSet::product(vec![a.clone(), b.clone(), c.clone()]);
        let nested = SignedSet::product(vec![
            a.clone(),
            SignedSet::product(vec![b.clone(), c.clone()]),
        ]);
        let s = nest_tail(flat.clone(), nested);
        let report = s.verify();
        assert!(report.ok, "{:?}", report.failures);

        let nested2 = SignedSet::product(vec![
            SignedSet::product(vec![a.clone(), b.clone()]),
            c.clone(),
        ]);
        let s = nest_head(flat, nested2);
        assert!(s.verify().ok);
    }

    #[test]
    fn distribute_pair() {
        let pair = SignedSet::pair(SignedSet::interval(0, 1), SignedSet::interval(5, 2));
        let dom = SignedSet::product(vec![SignedSet::interval(7, 8), pair]);
        let cod = SignedSet::pair(
            SignedSet::product(vec![SignedSet::interval(7, 8), SignedSet::interval(0, 1)]),
            SignedSet::product(vec![SignedSet::interval(7, 8), SignedSet::interval(5, 2)]),
        );
        let s = distribute_pair_at(1, dom, cod);
        let report = s.verify();
        assert!(report.ok, "{:?}", report.failures);
        assert!(s.is_normal().unwrap());
    }

    #[test]
    fn assoc_over_pair_index() {
        // index is a binary union of intervals, constant fibers
        let fib = SignedSet::interval(0, 1);
        let index = SignedSet::pair(SignedSet::interval(1, 2), SignedSet::interval(5, 3));
        let dom = SignedSet::union_const(index.clone(), fib.clone());
        let cod = SignedSet::pair(
            SignedSet::union_const(SignedSet::interval(1, 2), fib.clone()),
            SignedSet::union_const(SignedSet::interval(5, 3), fib.clone()),
        );
        // ⨆_{t∈A⊔B} S ⇒ ⨆_{u∈{0,1}} ⨆_{t∈part_u} S is assoc with the pair
        // index seen as a union over the two-point set; the codomain here is
        // the Pair of the two partial unions, which shares element shapes.
        let s = assoc_union(dom, cod);
        let report = s.verify();
        assert!(report.ok, "{:?}", report.failures);
    }

    #[test]
    fn shift_box() {
        let base = SignedSet::signed_box(&[(0, 2), (3, 1)]);
        let shifted = SignedSet::signed_box(&[(1, 3), (3, 1)]);
        let fib = SignedSet::interval(0, 0);
        let dom = SignedSet::union_const(base, fib.clone());
        let cod = SignedSet::union_const(shifted, fib.clone());
        let s = shift_box_tags(vec![1, 0], dom, cod);
        let report = s.verify();
        assert!(report.ok, "{:?}", report.failures);
    }

    #[test]
    fn drop_helpers() {
        let s = SignedSet::interval(2, 5);
        let dom = SignedSet::union_const(SignedSet::dot(), s.clone());
        assert!(drop_unit_tag(dom, s.clone()).verify().ok);
        let dom = SignedSet::pair(s.clone(), SignedSet::empty());
        assert!(drop_empty_second(dom, s.clone()).verify().ok);
        let _ = Family::new("unused", vec![], |_| SignedSet::empty());
    }
}
