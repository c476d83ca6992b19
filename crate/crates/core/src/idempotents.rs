//! Primitive central idempotents, the eigenvalue `λ` of `C̄(x)^p` on a
//! stable block, and the idempotents of its p extensions.

use std::sync::Arc;

use serde::Serialize;

use crate::arith::numtheory::{lcm, normalize_conductor};
use crate::arith::{pth_root_in_field, ArithError, CycNumber, FieldSpec, Rational};
use crate::char::{conjugate_character, CharError, Character, CharacterTable};
use crate::group::{
    class_sum, class_sum_pth_power, ConjClassSet, FiniteGroup, GroupAlgebraElement, GroupError, IndexPContext,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdempotentError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("element is not central")]
    NotCentral,
    #[error("character is not stable under conjugation by x")]
    NotStable,
    #[error("character is stable under conjugation by x")]
    Stable,
    #[error("lambda vanishes")]
    ZeroLambda,
    #[error("mu^p does not equal lambda")]
    BadRoot,
    #[error("idempotent identity failed: {0}")]
    Verification(String),
}

/// `e_χ = (χ(1)/|K|) Σ_g χ(g⁻¹) g`
pub fn pci_from_character(group: &Arc<FiniteGroup>, classes: &ConjClassSet, chi: &Character) -> GroupAlgebraElement {
    let coef = chi.degree() / Rational::from_integer(group.order() as i64);
    let terms = (0..group.order()).map(|g| {
        let c = classes.class_of(group.inv(g));
        (g, chi.value(c).scale(&coef))
    });
    GroupAlgebraElement::from_terms(group, terms.collect::<Vec<_>>())
}

/// The scalar `ω_χ(z) = Σ_C z_C |C| χ(g_C) / χ(1)` by which a central `z`
/// acts on the block of `χ`.
pub fn central_character_value(
    classes: &ConjClassSet,
    chi: &Character,
    z: &GroupAlgebraElement,
) -> Result<CycNumber, IdempotentError> {
    if !z.is_central() {
        return Err(IdempotentError::NotCentral);
    }
    let mut acc = CycNumber::zero(1);
    for k in 0..classes.len() {
        let c = z.coeff(classes.representative(k));
        if c.is_zero() {
            continue;
        }
        let term = (&c * chi.value(k)).scale(&Rational::from_integer(classes.size(k) as i64));
        acc = &acc + &term;
    }
    Ok(acc.scale(&chi.degree().recip()))
}

/// `λ` with `C̄(x)^p e_η = λ e_η`, for an x-stable irreducible `η` of H.
pub fn lambda_of(ctx: &IndexPContext, eta: &Character) -> Result<CycNumber, IdempotentError> {
    if conjugate_character(eta, ctx) != *eta {
        return Err(IdempotentError::NotStable);
    }
    let z = class_sum_pth_power(ctx)?;
    let lambda = central_character_value(ctx.h_classes(), eta, &z)?;
    if lambda.is_zero() {
        return Err(IdempotentError::ZeroLambda);
    }
    Ok(lambda)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LambdaMu {
    pub lambda: CycNumber,
    pub mu: Option<CycNumber>,
    pub p: u64,
    #[serde(serialize_with = "ser_field")]
    pub field: FieldSpec,
}

fn ser_field<S: serde::Serializer>(f: &FieldSpec, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(f.conductor())
}

/// Looks for a p-th root of `λ` inside F.
pub fn mu_test(lambda: &CycNumber, p: u64, field: FieldSpec) -> Result<LambdaMu, IdempotentError> {
    let mu = pth_root_in_field(lambda, p, field)?;
    Ok(LambdaMu { lambda: lambda.clone(), mu, p, field })
}

/// Conductor in which all quantities of an instance live.
pub fn compositum_conductor(ctx: &IndexPContext, field: FieldSpec) -> u64 {
    lcm(lcm(ctx.g().exponent(), field.conductor()), ctx.p())
}

/// An element of the group algebra of H viewed in that of G.
pub fn embed_from_h(ctx: &IndexPContext, e: &GroupAlgebraElement) -> GroupAlgebraElement {
    let h = ctx.h();
    e.transport(ctx.g(), |a| h.embed(a))
}

/// `e_{ρ_j} = (1/p) Σ_i ζ_p^{ij} c^i e_η` with `c = C̄(x) e_η / μ`, for
/// `j = 0 … p−1`. `e_eta` lives in the group algebra of G. The identities
/// of the construction are verified before returning.
pub fn extension_idempotents(
    ctx: &IndexPContext,
    e_eta: &GroupAlgebraElement,
    mu: &CycNumber,
) -> Result<Vec<GroupAlgebraElement>, IdempotentError> {
    let p = ctx.p();
    let g = ctx.g();
    let conductor = lcm(lcm(g.exponent(), mu.conductor()), p);
    // canonical ζ_p = ζ_E^{E/p}
    let zeta = CycNumber::root_of_unity(conductor, (conductor / p) as i64);
    let conductor = normalize_conductor(conductor);
    let inv_mu = mu.inverse()?.embed(conductor);
    let c = class_sum(g, ctx.x()).mul(e_eta).scale(&inv_mu);

    let mut powers = vec![e_eta.clone()];
    for i in 1..p as usize {
        powers.push(powers[i - 1].mul(&c));
    }
    if powers[p as usize - 1].mul(&c) != *e_eta {
        return Err(IdempotentError::BadRoot);
    }
    let inv_p = CycNumber::from_rational(Rational::new(1, p as i64));
    let mut out = Vec::with_capacity(p as usize);
    for j in 0..p {
        let mut acc = GroupAlgebraElement::zero(g);
        for (i, pw) in powers.iter().enumerate() {
            acc = acc.add(&pw.scale(&zeta.pow((i as u64 * j % p) as u32)));
        }
        out.push(acc.scale(&inv_p));
    }
    let report = idempotent_checks(&out, g);
    if !report.all_idempotent() || !report.all_central() || !report.failed_orthogonal.is_empty() {
        return Err(IdempotentError::Verification(format!("{report:?}")));
    }
    if report.sum != *e_eta {
        return Err(IdempotentError::Verification("extension idempotents do not sum to e_eta".into()));
    }
    Ok(out)
}

/// `e_η + e_{η^x} + … + e_{η^{x^{p−1}}}` in the group algebra of G, for a
/// non-stable irreducible `η` of H.
pub fn fused_idempotent(
    ctx: &IndexPContext,
    h_table: &CharacterTable,
    eta: &Character,
) -> Result<GroupAlgebraElement, IdempotentError> {
    let h = ctx.h().group();
    let mut conj = conjugate_character(eta, ctx);
    if conj == *eta {
        return Err(IdempotentError::Stable);
    }
    let mut acc = pci_from_character(h, h_table.classes(), eta);
    for _ in 1..ctx.p() {
        acc = acc.add(&pci_from_character(h, h_table.classes(), &conj));
        conj = conjugate_character(&conj, ctx);
    }
    if conj != *eta {
        return Err(IdempotentError::Verification("x-orbit of eta does not close after p steps".into()));
    }
    Ok(embed_from_h(ctx, &acc))
}

#[derive(Debug, Clone, Serialize)]
pub struct IdempotentReport {
    pub idempotent: Vec<bool>,
    pub central: Vec<bool>,
    /// pairs `(i, j)` with `e_i e_j ≠ 0`
    pub failed_orthogonal: Vec<(usize, usize)>,
    pub sum: GroupAlgebraElement,
    pub sum_is_one: bool,
}

impl IdempotentReport {
    pub fn all_idempotent(&self) -> bool {
        self.idempotent.iter().all(|&b| b)
    }

    pub fn all_central(&self) -> bool {
        self.central.iter().all(|&b| b)
    }

    pub fn all_pass(&self) -> bool {
        self.all_idempotent() && self.all_central() && self.failed_orthogonal.is_empty()
    }
}

/// `e² = e`, centrality, pairwise orthogonality and the total sum.
pub fn idempotent_checks(elements: &[GroupAlgebraElement], ambient: &Arc<FiniteGroup>) -> IdempotentReport {
    let idempotent = elements.iter().map(|e| e.mul(e) == *e).collect();
    let central = elements.iter().map(GroupAlgebraElement::is_central).collect();
    let mut failed_orthogonal = Vec::new();
    for i in 0..elements.len() {
        for j in 0..elements.len() {
            if i != j && !elements[i].mul(&elements[j]).is_zero() {
                failed_orthogonal.push((i, j));
            }
        }
    }
    let sum = elements.iter().fold(GroupAlgebraElement::zero(ambient), |acc, e| acc.add(e));
    let sum_is_one = sum == GroupAlgebraElement::one(ambient);
    IdempotentReport { idempotent, central, failed_orthogonal, sum, sum_is_one }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::char::{character_table, inner_product, restrict_character};
    use crate::group::tests::{perm_group, q8, s3};
    use crate::group::Subgroup;

    fn int(n: i64) -> CycNumber {
        CycNumber::from_integer(n)
    }

    fn arc(g: FiniteGroup) -> Arc<FiniteGroup> {
        Arc::new(g)
    }

    #[test]
    fn pci_examples() {
        let c2 = arc(perm_group(2, &[&[2, 1]]));
        let t = character_table(&c2).unwrap();
        let e0 = pci_from_character(&c2, t.classes(), t.character(0));
        let half = CycNumber::from_rational(Rational::new(1, 2));
        assert_eq!(e0, GroupAlgebraElement::from_terms(&c2, [(0, half.clone()), (1, half.clone())]));
        let e1 = pci_from_character(&c2, t.classes(), t.character(1));
        assert_eq!(e1, GroupAlgebraElement::from_terms(&c2, [(0, half.clone()), (1, -half)]));

        let c3 = arc(perm_group(3, &[&[2, 3, 1]]));
        let t = character_table(&c3).unwrap();
        for c in t.characters() {
            let e = pci_from_character(&c3, t.classes(), c);
            assert_eq!(e.mul(&e), e);
        }
        let g = c3.generators()[0];
        let w = (0..3).find(|&i| t.character(i).value(t.classes().class_of(g)) == &CycNumber::zeta(3)).unwrap();
        let e = pci_from_character(&c3, t.classes(), t.character(w));
        assert_eq!(e.coeff(g), CycNumber::root_of_unity(3, 2).scale(&Rational::new(1, 3)));

        let s = arc(s3());
        let t = character_table(&s).unwrap();
        let all: Vec<_> = t.characters().iter().map(|c| pci_from_character(&s, t.classes(), c)).collect();
        let rep = idempotent_checks(&all, &s);
        assert!(rep.all_pass() && rep.sum_is_one);
        let e = all[2].clone();
        let pair = vec![e.clone(), GroupAlgebraElement::one(&s).sub(&e)];
        let rep = idempotent_checks(&pair, &s);
        assert!(rep.all_pass() && rep.sum_is_one);
        let bad = e.add(&GroupAlgebraElement::basis(&s, 0));
        assert!(!idempotent_checks(&[bad], &s).idempotent[0]);
    }

    #[test]
    fn central_values() {
        let d4 = arc(perm_group(4, &[&[2, 3, 4, 1], &[1, 4, 3, 2]]));
        let r = d4.find_permutation(&[2, 3, 4, 1]).unwrap();
        let h = Subgroup::generated(&d4, &[r]).unwrap();
        let ht = character_table(h.group()).unwrap();
        let rp = h.position(r).unwrap();
        let eta = (0..4).find(|&i| ht.character(i).value(ht.classes().class_of(rp)) == &int(-1)).unwrap();
        let r2 = h.position(d4.pow(r, 2)).unwrap();
        let z = GroupAlgebraElement::from_terms(h.group(), [(0, int(2)), (r2, int(2))]);
        assert_eq!(central_character_value(ht.classes(), ht.character(eta), &z).unwrap(), int(4));
        let one = GroupAlgebraElement::one(h.group());
        assert_eq!(central_character_value(ht.classes(), ht.character(eta), &one).unwrap(), int(1));
        let all = GroupAlgebraElement::from_terms(h.group(), (0..4).map(|a| (a, int(1))));
        assert_eq!(central_character_value(ht.classes(), ht.character(0), &all).unwrap(), int(4));
        assert_eq!(central_character_value(ht.classes(), ht.character(eta), &all).unwrap(), int(0));

        let s = arc(s3());
        let t = character_table(&s).unwrap();
        let not_central = GroupAlgebraElement::basis(&s, s.find_permutation(&[2, 1, 3]).unwrap());
        assert_eq!(
            central_character_value(t.classes(), t.character(0), &not_central),
            Err(IdempotentError::NotCentral)
        );
    }

    fn stable_nontrivial(ctx: &IndexPContext, ht: &CharacterTable, value_at: usize, value: &CycNumber) -> usize {
        let c = ht.classes().class_of(ctx.h().position(value_at).unwrap());
        (0..ht.len()).find(|&i| ht.character(i).value(c) == value).unwrap()
    }

    #[test]
    fn lambda_examples() {
        let c4 = arc(perm_group(4, &[&[2, 3, 4, 1]]));
        let x = c4.generators()[0];
        let h = Subgroup::generated(&c4, &[c4.pow(x, 2)]).unwrap();
        let ctx = IndexPContext::new(h, Some(x)).unwrap();
        let ht = character_table(ctx.h().group()).unwrap();
        assert_eq!(lambda_of(&ctx, ht.character(1)).unwrap(), int(-1));
        assert_eq!(mu_test(&int(-1), 2, FieldSpec::rationals()).unwrap().mu, None);

        let c3c3 = arc(perm_group(6, &[&[2, 3, 1, 4, 5, 6], &[1, 2, 3, 5, 6, 4]]));
        let (a, b) = (c3c3.generators()[0], c3c3.generators()[1]);
        let h = Subgroup::generated(&c3c3, &[a]).unwrap();
        let ctx = IndexPContext::new(h, Some(b)).unwrap();
        let ht = character_table(ctx.h().group()).unwrap();
        assert_eq!(lambda_of(&ctx, ht.character(1)).unwrap(), int(1));
        assert_eq!(mu_test(&int(1), 3, FieldSpec::rationals()).unwrap().mu, Some(int(1)));
        assert_eq!(mu_test(&int(4), 2, FieldSpec::rationals()).unwrap().mu, Some(int(2)));
    }

    #[test]
    fn d4_extensions_match_classical() {
        let d4 = arc(perm_group(4, &[&[2, 3, 4, 1], &[1, 4, 3, 2]]));
        let r = d4.find_permutation(&[2, 3, 4, 1]).unwrap();
        let s = d4.find_permutation(&[1, 4, 3, 2]).unwrap();
        let h = Subgroup::generated(&d4, &[r]).unwrap();
        let ctx = IndexPContext::new(h, Some(s)).unwrap();
        let ht = character_table(ctx.h().group()).unwrap();
        let gt = character_table(&d4).unwrap();
        let eta = stable_nontrivial(&ctx, &ht, r, &int(-1));
        let lambda = lambda_of(&ctx, ht.character(eta)).unwrap();
        assert_eq!(lambda, int(4));
        let mu = mu_test(&lambda, 2, FieldSpec::rationals()).unwrap().mu.unwrap();
        assert_eq!(mu, int(2));
        let e_eta = embed_from_h(&ctx, &pci_from_character(ctx.h().group(), ht.classes(), ht.character(eta)));
        let ext = extension_idempotents(&ctx, &e_eta, &mu).unwrap();
        let classical: Vec<_> = (0..gt.len())
            .filter(|&i| {
                let res = restrict_character(gt.character(i), ctx.h(), ht.classes(), gt.classes());
                !inner_product(ht.classes(), 4, &res, ht.character(eta)).is_zero()
            })
            .map(|i| pci_from_character(&d4, gt.classes(), gt.character(i)))
            .collect();
        assert_eq!(classical.len(), 2);
        assert!(ext.iter().all(|e| classical.contains(e)));
        assert!(classical.iter().all(|e| ext.contains(e)));
    }

    #[test]
    fn fused_examples() {
        let s = arc(s3());
        let rot = s.find_permutation(&[2, 3, 1]).unwrap();
        let h = Subgroup::generated(&s, &[rot]).unwrap();
        let ctx = IndexPContext::new(h, None).unwrap();
        let ht = character_table(ctx.h().group()).unwrap();
        let gt = character_table(&s).unwrap();
        let w = stable_nontrivial(&ctx, &ht, rot, &CycNumber::zeta(3));
        let fused = fused_idempotent(&ctx, &ht, ht.character(w)).unwrap();
        assert_eq!(fused, pci_from_character(&s, gt.classes(), gt.character(2)));
        assert_eq!(fused_idempotent(&ctx, &ht, ht.character(0)), Err(IdempotentError::Stable));

        let q = arc(q8());
        let (i, j) = (q.generators()[0], q.generators()[1]);
        let h = Subgroup::generated(&q, &[i]).unwrap();
        let ctx = IndexPContext::new(h, Some(j)).unwrap();
        let ht = character_table(ctx.h().group()).unwrap();
        let gt = character_table(&q).unwrap();
        let chi = stable_nontrivial(&ctx, &ht, i, &CycNumber::zeta(4));
        let fused = fused_idempotent(&ctx, &ht, ht.character(chi)).unwrap();
        assert_eq!(fused, pci_from_character(&q, gt.classes(), gt.character(4)));
    }

    #[test]
    fn regular_c2_extension() {
        let c2 = arc(perm_group(2, &[&[2, 1]]));
        let h = Subgroup::generated(&c2, &[]).unwrap();
        let ctx = IndexPContext::new(h, None).unwrap();
        let e = GroupAlgebraElement::one(&c2);
        let ext = extension_idempotents(&ctx, &e, &int(1)).unwrap();
        let half = CycNumber::from_rational(Rational::new(1, 2));
        assert_eq!(ext[0], GroupAlgebraElement::from_terms(&c2, [(0, half.clone()), (1, half.clone())]));
        assert_eq!(ext[1], GroupAlgebraElement::from_terms(&c2, [(0, half.clone()), (1, -half)]));
    }
}
