//! Sijections: signed bijections as first-class, composable objects.
//!
//! A sijection `φ: S ⇒ T` is an involution on the tagged disjoint union of
//! the members of `S` and `T` that exchanges `S⁺ ⊔ T⁻` with `S⁻ ⊔ T⁺`.
//! Values carry their side explicitly as a [`SidedElement`]; `apply` is a
//! pure total rule on members and never materializes the map.
//!
//! Composition uses the Garsia–Milne iteration: alternately apply the two
//! maps until the orbit lands outside the middle set. Termination is
//! guaranteed for finite sets; a large fail-safe cap turns an implementation
//! bug into a diagnostic instead of a hang.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::element::{Element, Sign};
use crate::set::SignedSet;
use crate::{Error, Result};

/// Which of the two sets of a sijection an element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Dom,
    Cod,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Dom => Side::Cod,
            Side::Cod => Side::Dom,
        }
    }
}

/// An element together with the side of the sijection it lives on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SidedElement {
    pub side: Side,
    pub elem: Element,
}

impl SidedElement {
    pub fn new(side: Side, elem: Element) -> SidedElement {
        SidedElement { side, elem }
    }

    pub fn dom(elem: Element) -> SidedElement {
        SidedElement::new(Side::Dom, elem)
    }

    pub fn cod(elem: Element) -> SidedElement {
        SidedElement::new(Side::Cod, elem)
    }
}

impl fmt::Display for SidedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Dom => "dom",
            Side::Cod => "cod",
        };
        write!(f, "{side}:{}", self.elem)
    }
}

type ElemMap = Arc<dyn Fn(&Element) -> Result<Element> + Send + Sync>;
type FiberRule = Arc<dyn Fn(Side, &Element) -> Result<Sijection> + Send + Sync>;
type DirectRule = Arc<dyn Fn(&SidedElement) -> Result<SidedElement> + Send + Sync>;

enum Imp {
    Identity,
    Inverse(Sijection),
    /// Same map with both ends wrapped in the opposite set.
    Neg(Sijection),
    Compose(Sijection, Sijection),
    Product(Vec<Sijection>),
    /// Disjoint union over `psi` with fiber sijections per index element.
    Union { psi: Sijection, fibers: FiberRule },
    /// Sign-preserving bijective renaming of elements.
    Retag { fwd: ElemMap, bwd: ElemMap },
    /// Sijection to the empty set: a sign-reversing involution on the domain.
    ToEmpty { swap: ElemMap },
    Direct { rule: DirectRule },
}

struct Node {
    name: &'static str,
    domain: SignedSet,
    codomain: SignedSet,
    imp: Imp,
}

/// A sijection between two signed sets.
#[derive(Clone)]
pub struct Sijection(Arc<Node>);

/// Fail-safe bound on Garsia–Milne iterations; termination is guaranteed,
/// the cap only surfaces broken involutions as errors instead of hangs.
const GM_CAP: u64 = 100_000_000;

impl Sijection {
    fn build(name: &'static str, domain: SignedSet, codomain: SignedSet, imp: Imp) -> Sijection {
        Sijection(Arc::new(Node {
            name,
            domain,
            codomain,
            imp,
        }))
    }

    pub fn name(&self) -> &'static str {
        self.0.name
    }

    pub fn domain(&self) -> &SignedSet {
        &self.0.domain
    }

    pub fn codomain(&self) -> &SignedSet {
        &self.0.codomain
    }

    /// The obvious sijection `id_S : S ⇒ S`.
    pub fn identity(set: SignedSet) -> Sijection {
        Sijection::build("id", set.clone(), set, Imp::Identity)
    }

    /// The inverse `φ⁻¹ : T ⇒ S`, obtained by re-identifying the two sides.
    pub fn inverse(&self) -> Sijection {
        if let Imp::Inverse(inner) = &self.0.imp {
            return inner.clone();
        }
        Sijection::build(
            "inverse",
            self.codomain().clone(),
            self.domain().clone(),
            Imp::Inverse(self.clone()),
        )
    }

    /// `-φ : -S ⇒ -T`; as a map it is exactly `φ`.
    pub fn neg(&self) -> Sijection {
        Sijection::build(
            "neg",
            self.domain().opposite(),
            self.codomain().opposite(),
            Imp::Neg(self.clone()),
        )
    }

    /// Garsia–Milne composition. The codomain of `self` must be the domain
    /// of `next`, structurally.
    pub fn compose(&self, next: &Sijection) -> Result<Sijection> {
        if self.codomain() != next.domain() {
            return Err(Error::Config(format!(
                "compose {}∘{}: middle sets differ: {} vs {}",
                next.name(),
                self.name(),
                self.codomain(),
                next.domain()
            )));
        }
        Ok(Sijection::build(
            "compose",
            self.domain().clone(),
            next.codomain().clone(),
            Imp::Compose(self.clone(), next.clone()),
        ))
    }

    /// Compose a chain left to right.
    pub fn compose_chain(stages: Vec<Sijection>) -> Result<Sijection> {
        let mut iter = stages.into_iter();
        let mut acc = iter
            .next()
            .ok_or_else(|| Error::Config("empty composition chain".into()))?;
        for stage in iter {
            acc = acc.compose(&stage)?;
        }
        Ok(acc)
    }

    /// Cartesian product `φ_1 × … × φ_k`. On a tuple, the first coordinate
    /// whose image falls back on its own side moves alone; otherwise all
    /// coordinates cross together.
    pub fn product(factors: Vec<Sijection>) -> Sijection {
        let domain = SignedSet::product(factors.iter().map(|f| f.domain().clone()).collect());
        let codomain = SignedSet::product(factors.iter().map(|f| f.codomain().clone()).collect());
        Sijection::build("product", domain, codomain, Imp::Product(factors))
    }

    /// Disjoint union of sijections over an index sijection `ψ : T ⇒ T̃`.
    ///
    /// `fibers(side, t)` must return `φ_t : S_(side,t) ⇒ S_(ψ(side,t))`
    /// with `φ_(ψ(t)) = φ_t⁻¹`. The caller supplies the resulting domain
    /// `⨆_{t∈T} S_t` and codomain `⨆_{t∈T̃} S_t`.
    pub fn disjoint_union(
        name: &'static str,
        psi: Sijection,
        fibers: impl Fn(Side, &Element) -> Result<Sijection> + Send + Sync + 'static,
        domain: SignedSet,
        codomain: SignedSet,
    ) -> Sijection {
        Sijection::build(
            name,
            domain,
            codomain,
            Imp::Union {
                psi,
                fibers: Arc::new(fibers),
            },
        )
    }

    /// The `ψ = id` special case: one sijection per index element, applied
    /// fiberwise under an unchanged tag.
    pub fn union_fiberwise(
        name: &'static str,
        index: SignedSet,
        fiber: impl Fn(&Element) -> Result<Sijection> + Send + Sync + 'static,
        domain: SignedSet,
        codomain: SignedSet,
    ) -> Sijection {
        let psi = Sijection::identity(index);
        let rule = move |side: Side, t: &Element| -> Result<Sijection> {
            let phi = fiber(t)?;
            Ok(match side {
                Side::Dom => phi,
                Side::Cod => phi.inverse(),
            })
        };
        Sijection::disjoint_union(name, psi, rule, domain, codomain)
    }

    /// Disjoint union over a normal index sijection with identity fibers:
    /// since `ξ(ψ(t)) = ξ(t)`, the fiber at `t` may be `id` on
    /// `fiber_set(ξ(t))`.
    pub fn union_over_normal(
        name: &'static str,
        psi: Sijection,
        fiber_set: impl Fn(&[i64]) -> SignedSet + Send + Sync + 'static,
        domain: SignedSet,
        codomain: SignedSet,
    ) -> Sijection {
        let dom_index = psi.domain().clone();
        let cod_index = psi.codomain().clone();
        let rule = move |side: Side, t: &Element| -> Result<Sijection> {
            let xi = match side {
                Side::Dom => dom_index.xi(t)?,
                Side::Cod => cod_index.xi(t)?,
            };
            Ok(Sijection::identity(fiber_set(&xi)))
        };
        Sijection::disjoint_union(name, psi, rule, domain, codomain)
    }

    /// A sign-preserving bijective renaming between two views of the same
    /// collection of members.
    pub fn retag(
        name: &'static str,
        domain: SignedSet,
        codomain: SignedSet,
        fwd: impl Fn(&Element) -> Result<Element> + Send + Sync + 'static,
        bwd: impl Fn(&Element) -> Result<Element> + Send + Sync + 'static,
    ) -> Sijection {
        Sijection::build(
            name,
            domain,
            codomain,
            Imp::Retag {
                fwd: Arc::new(fwd),
                bwd: Arc::new(bwd),
            },
        )
    }

    /// A sijection `S ⇒ ∅` given by a sign-reversing involution on `S`.
    pub fn to_empty(
        name: &'static str,
        domain: SignedSet,
        swap: impl Fn(&Element) -> Result<Element> + Send + Sync + 'static,
    ) -> Sijection {
        Sijection::build(
            name,
            domain,
            SignedSet::empty(),
            Imp::ToEmpty {
                swap: Arc::new(swap),
            },
        )
    }

    /// A sijection given by an arbitrary explicit involution rule.
    pub fn direct(
        name: &'static str,
        domain: SignedSet,
        codomain: SignedSet,
        rule: impl Fn(&SidedElement) -> Result<SidedElement> + Send + Sync + 'static,
    ) -> Sijection {
        Sijection::build(
            name,
            domain,
            codomain,
            Imp::Direct {
                rule: Arc::new(rule),
            },
        )
    }

    /// Apply the involution to a member of `domain ⊔ codomain`.
    pub fn apply(&self, x: &SidedElement) -> Result<SidedElement> {
        match &self.0.imp {
            Imp::Identity => Ok(SidedElement::new(x.side.flip(), x.elem.clone())),
            Imp::Inverse(inner) => {
                let y = inner.apply(&SidedElement::new(x.side.flip(), x.elem.clone()))?;
                Ok(SidedElement::new(y.side.flip(), y.elem))
            }
            Imp::Neg(inner) => inner.apply(x),
            Imp::Compose(first, second) => self.garsia_milne(first, second, x),
            Imp::Product(factors) => {
                let items = x.elem.expect_tuple()?;
                if items.len() != factors.len() {
                    return Err(Error::Validation(format!(
                        "product arity mismatch: {} vs {}",
                        items.len(),
                        factors.len()
                    )));
                }
                let mut crossed = Vec::with_capacity(items.len());
                for (i, (phi, item)) in factors.iter().zip(items.iter()).enumerate() {
                    let r = phi.apply(&SidedElement::new(x.side, item.clone()))?;
                    if r.side == x.side {
                        let mut same = items.to_vec();
                        same[i] = r.elem;
                        return Ok(SidedElement::new(x.side, Element::tuple(same)));
                    }
                    crossed.push(r.elem);
                }
                Ok(SidedElement::new(x.side.flip(), Element::tuple(crossed)))
            }
            Imp::Union { psi, fibers } => {
                let (value, tag) = x.elem.expect_tagged()?;
                let fiber = fibers(x.side, tag)?;
                let inner = fiber.apply(&SidedElement::dom(value.clone()))?;
                match inner.side {
                    Side::Dom => Ok(SidedElement::new(
                        x.side,
                        Element::tagged(inner.elem, tag.clone()),
                    )),
                    Side::Cod => {
                        let moved = psi.apply(&SidedElement::new(x.side, tag.clone()))?;
                        Ok(SidedElement::new(
                            moved.side,
                            Element::tagged(inner.elem, moved.elem),
                        ))
                    }
                }
            }
            Imp::Retag { fwd, bwd } => match x.side {
                Side::Dom => Ok(SidedElement::cod(fwd(&x.elem)?)),
                Side::Cod => Ok(SidedElement::dom(bwd(&x.elem)?)),
            },
            Imp::ToEmpty { swap } => match x.side {
                Side::Dom => Ok(SidedElement::dom(swap(&x.elem)?)),
                Side::Cod => Err(Error::Validation(format!(
                    "{}: the empty codomain has no elements",
                    self.0.name
                ))),
            },
            Imp::Direct { rule } => rule(x),
        }
    }

    fn garsia_milne(
        &self,
        first: &Sijection,
        second: &Sijection,
        x: &SidedElement,
    ) -> Result<SidedElement> {
        let mut steps: u64 = 0;
        match x.side {
            Side::Dom => {
                let mut cur = first.apply(x)?;
                loop {
                    if cur.side == Side::Dom {
                        return Ok(cur);
                    }
                    let via = second.apply(&SidedElement::dom(cur.elem))?;
                    if via.side == Side::Cod {
                        return Ok(via);
                    }
                    cur = first.apply(&SidedElement::cod(via.elem))?;
                    steps += 1;
                    if steps > GM_CAP {
                        return Err(Error::IterationCap(self.0.name.into()));
                    }
                }
            }
            Side::Cod => {
                let mut cur = second.apply(x)?;
                loop {
                    if cur.side == Side::Cod {
                        return Ok(cur);
                    }
                    let via = first.apply(&SidedElement::cod(cur.elem))?;
                    if via.side == Side::Dom {
                        return Ok(via);
                    }
                    cur = second.apply(&SidedElement::dom(via.elem))?;
                    steps += 1;
                    if steps > GM_CAP {
                        return Err(Error::IterationCap(self.0.name.into()));
                    }
                }
            }
        }
    }

    /// All members of `domain ⊔ codomain` with their signs.
    fn sided_members(&self) -> Vec<(SidedElement, Sign)> {
        let mut out = Vec::new();
        self.domain()
            .for_each(&mut |e, s| out.push((SidedElement::dom(e), s)));
        self.codomain()
            .for_each(&mut |e, s| out.push((SidedElement::cod(e), s)));
        out
    }

    /// Exhaustively check totality, involution, sign reversal and membership
    /// closure. Failures are data, not errors; the first ten are reported.
    pub fn verify(&self) -> Report {
        let members = self.sided_members();
        let (dom_pos, dom_neg) = self.domain().counts();
        let (cod_pos, cod_neg) = self.codomain().counts();
        let total = members.len() as u64;

        let failures: Vec<String> = members
            .par_iter()
            .filter_map(|(x, sign)| self.check_member(x, *sign).err().map(|e| e.to_string()))
            .collect();
        let mut failures = failures;
        let failure_count = failures.len() as u64;
        failures.truncate(10);

        Report {
            name: self.0.name.to_string(),
            params: serde_json::Value::Null,
            domain_pos: dom_pos as u64,
            domain_neg: dom_neg as u64,
            domain_size: dom_pos as i64 - dom_neg as i64,
            codomain_pos: cod_pos as u64,
            codomain_neg: cod_neg as u64,
            codomain_size: cod_pos as i64 - cod_neg as i64,
            pair_count: total / 2,
            ok: failure_count == 0,
            failure_count,
            failures,
        }
    }

    fn check_member(&self, x: &SidedElement, sign: Sign) -> Result<()> {
        let y = self
            .apply(x)
            .map_err(|e| Error::Validation(format!("apply({x}) failed: {e}")))?;
        let target = match y.side {
            Side::Dom => self.domain(),
            Side::Cod => self.codomain(),
        };
        let image_sign = target.member_sign(&y.elem).ok_or_else(|| {
            Error::Validation(format!("image {y} of {x} is not a member of its set"))
        })?;
        // φ exchanges S⁺ ⊔ T⁻ with S⁻ ⊔ T⁺
        let class = |side: Side, s: Sign| match side {
            Side::Dom => s,
            Side::Cod => -s,
        };
        if class(y.side, image_sign) != -class(x.side, sign) {
            return Err(Error::Validation(format!(
                "sign class not reversed: {x} ({sign}) -> {y} ({image_sign})"
            )));
        }
        let back = self
            .apply(&y)
            .map_err(|e| Error::Validation(format!("apply({y}) failed: {e}")))?;
        if back != *x {
            return Err(Error::Validation(format!(
                "not an involution: {x} -> {y} -> {back}"
            )));
        }
        Ok(())
    }

    /// Whether both sets are elementary of equal dimension and the map
    /// preserves the projection ξ on every member.
    pub fn is_normal(&self) -> Result<bool> {
        let dim_dom = self.domain().dimension().ok_or_else(|| {
            Error::NotElementary(format!("domain of {} is not elementary", self.0.name))
        })?;
        let dim_cod = self.codomain().dimension().ok_or_else(|| {
            Error::NotElementary(format!("codomain of {} is not elementary", self.0.name))
        })?;
        if dim_dom != dim_cod {
            return Err(Error::NotElementary(format!(
                "dimension mismatch {dim_dom} vs {dim_cod} in {}",
                self.0.name
            )));
        }
        for (x, _) in self.sided_members() {
            let y = self.apply(&x)?;
            let xi_x = match x.side {
                Side::Dom => self.domain().xi(&x.elem)?,
                Side::Cod => self.codomain().xi(&x.elem)?,
            };
            let xi_y = match y.side {
                Side::Dom => self.domain().xi(&y.elem)?,
                Side::Cod => self.codomain().xi(&y.elem)?,
            };
            if xi_x != xi_y {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for Sijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} => {}",
            self.0.name,
            self.domain(),
            self.codomain()
        )
    }
}

/// Result of exhaustively verifying a sijection.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub name: String,
    pub params: serde_json::Value,
    pub domain_size: i64,
    pub domain_pos: u64,
    pub domain_neg: u64,
    pub codomain_size: i64,
    pub codomain_pos: u64,
    pub codomain_neg: u64,
    pub pair_count: u64,
    pub ok: bool,
    pub failure_count: u64,
    pub failures: Vec<String>,
}

impl Report {
    pub fn with_params(mut self, params: serde_json::Value) -> Report {
        self.params = params;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_on_interval() {
        let phi = Sijection::identity(SignedSet::interval(1, 2));
        let report = phi.verify();
        assert!(report.ok, "{:?}", report.failures);
        assert_eq!(report.pair_count, 2);
    }

    #[test]
    fn identity_on_empty_is_vacuous() {
        let report = Sijection::identity(SignedSet::empty()).verify();
        assert!(report.ok);
        assert_eq!(report.pair_count, 0);
    }

    #[test]
    fn inverse_of_identity_is_identity_pointwise() {
        let s = SignedSet::interval(-1, 3);
        let id = Sijection::identity(s.clone());
        let inv = id.inverse();
        for (e, _) in s.elements() {
            let x = SidedElement::dom(e);
            assert_eq!(id.apply(&x).unwrap(), inv.apply(&x).unwrap());
        }
    }

    #[test]
    fn compose_rejects_mismatched_middle() {
        let a = Sijection::identity(SignedSet::interval(0, 1));
        let b = Sijection::identity(SignedSet::interval(0, 2));
        assert!(a.compose(&b).is_err());
    }

    #[test]
    fn verify_flags_corrupted_map() {
        // Constant rule: not an involution, lands outside the sets.
        let s = SignedSet::interval(1, 2);
        let broken = Sijection::direct(
            "broken",
            s.clone(),
            s,
            |_x| Ok(SidedElement::cod(Element::Int(99))),
        );
        let report = broken.verify();
        assert!(!report.ok);
        assert!(!report.failures.is_empty());
    }

    #[test]
    fn product_of_identities_is_identity_of_product() {
        let p = Sijection::product(vec![
            Sijection::identity(SignedSet::interval(0, 1)),
            Sijection::identity(SignedSet::interval(5, 3)),
        ]);
        let report = p.verify();
        assert!(report.ok, "{:?}", report.failures);
        let x = SidedElement::dom(Element::int_row(&[0, 4]));
        assert_eq!(
            p.apply(&x).unwrap(),
            SidedElement::cod(Element::int_row(&[0, 4]))
        );
    }
}
