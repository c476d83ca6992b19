//! Sparse elements of the group algebra with cyclotomic coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::{FiniteGroup, GroupError, IndexPContext};
use crate::arith::{ArithError, CycNumber};

#[derive(Clone)]
pub struct GroupAlgebraElement {
    group: Arc<FiniteGroup>,
    coeffs: BTreeMap<usize, CycNumber>,
}

impl GroupAlgebraElement {
    pub fn zero(group: &Arc<FiniteGroup>) -> Self {
        GroupAlgebraElement { group: group.clone(), coeffs: BTreeMap::new() }
    }

    pub fn one(group: &Arc<FiniteGroup>) -> Self {
        Self::basis(group, 0)
    }

    /// The group element `a` itself.
    pub fn basis(group: &Arc<FiniteGroup>, a: usize) -> Self {
        Self::from_terms(group, [(a, CycNumber::one(1))])
    }

    /// Sums repeated indices and drops zero coefficients.
    pub fn from_terms(group: &Arc<FiniteGroup>, terms: impl IntoIterator<Item = (usize, CycNumber)>) -> Self {
        let mut coeffs: BTreeMap<usize, CycNumber> = BTreeMap::new();
        for (a, c) in terms {
            assert!(a < group.order(), "element {a} out of range");
            match coeffs.get_mut(&a) {
                Some(v) => *v = &*v + &c,
                None => {
                    coeffs.insert(a, c);
                }
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        GroupAlgebraElement { group: group.clone(), coeffs }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn coeff(&self, a: usize) -> CycNumber {
        self.coeffs.get(&a).cloned().unwrap_or_else(|| CycNumber::zero(1))
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &CycNumber)> {
        self.coeffs.iter().map(|(&a, c)| (a, c))
    }

    pub fn support(&self) -> Vec<usize> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_group(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group) || *self.group == *other.group
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.same_group(other), "group algebra elements over different groups");
        let terms = self.terms().chain(other.terms()).map(|(a, c)| (a, c.clone()));
        Self::from_terms(&self.group, terms.collect::<Vec<_>>())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&CycNumber::from_integer(-1)))
    }

    pub fn scale(&self, c: &CycNumber) -> Self {
        Self::from_terms(&self.group, self.terms().map(|(a, v)| (a, v * c)).collect::<Vec<_>>())
    }

    /// Convolution product.
    pub fn mul(&self, other: &Self) -> Self {
        assert!(self.same_group(other), "group algebra elements over different groups");
        let mut acc: BTreeMap<usize, CycNumber> = BTreeMap::new();
        for (a, u) in self.terms() {
            for (b, v) in other.terms() {
                let ab = self.group.mul(a, b);
                let prod = u * v;
                match acc.get_mut(&ab) {
                    Some(w) => *w = &*w + &prod,
                    None => {
                        acc.insert(ab, prod);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        GroupAlgebraElement { group: self.group.clone(), coeffs: acc }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.group), |acc, _| acc.mul(self))
    }

    /// `g · self · g⁻¹`
    pub fn conjugate_by(&self, g: usize) -> Self {
        Self::from_terms(&self.group, self.terms().map(|(a, c)| (self.group.conj(g, a), c.clone())).collect::<Vec<_>>())
    }

    /// Central iff invariant under conjugation by every generator.
    pub fn is_central(&self) -> bool {
        self.group.generators().iter().all(|&g| self.conjugate_by(g) == *self)
    }

    /// Applies `σ_t` to every coefficient.
    pub fn galois(&self, t: i64) -> Result<Self, ArithError> {
        let terms = self.terms().map(|(a, c)| Ok((a, c.galois(t)?))).collect::<Result<Vec<_>, ArithError>>()?;
        Ok(Self::from_terms(&self.group, terms))
    }

    /// Moves the element to another group along `map` (own index → target index).
    pub fn transport(&self, target: &Arc<FiniteGroup>, map: impl Fn(usize) -> usize) -> Self {
        Self::from_terms(target, self.terms().map(|(a, c)| (map(a), c.clone())).collect::<Vec<_>>())
    }
}

impl PartialEq for GroupAlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_group(other) && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for GroupAlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self.terms().map(|(a, c)| format!("({c})*g{a}")).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Serialize for GroupAlgebraElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.coeffs.len()))?;
        for (a, c) in &self.coeffs {
            map.serialize_entry(&a.to_string(), c)?;
        }
        map.end()
    }
}

pub fn algebra_mul(a: &GroupAlgebraElement, b: &GroupAlgebraElement) -> GroupAlgebraElement {
    a.mul(b)
}

/// Sum of the conjugacy class of `a`.
pub fn class_sum(group: &Arc<FiniteGroup>, a: usize) -> GroupAlgebraElement {
    let mut class = vec![a];
    let mut i = 0;
    while i < class.len() {
        for &s in group.generators() {
            let c = group.conj(s, class[i]);
            if !class.contains(&c) {
                class.push(c);
            }
        }
        i += 1;
    }
    GroupAlgebraElement::from_terms(group, class.into_iter().map(|c| (c, CycNumber::one(1))))
}

/// `C̄(x)^p`, checked to be central and supported on H, and returned as an
/// element of the group algebra of H.
pub fn class_sum_pth_power(ctx: &IndexPContext) -> Result<GroupAlgebraElement, GroupError> {
    let c = class_sum(ctx.g(), ctx.x());
    let pw = c.pow(ctx.p() as u32);
    if let Some(a) = pw.support().into_iter().find(|&a| !ctx.h().contains(a)) {
        return Err(GroupError::Internal(format!("C(x)^p has support {a} outside H")));
    }
    if !pw.is_central() {
        return Err(GroupError::Internal("C(x)^p is not central".into()));
    }
    let h = ctx.h();
    Ok(pw.transport(h.group(), |a| h.position(a).expect("support inside H")))
}
