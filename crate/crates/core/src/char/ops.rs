//! Induction, restriction, inner products and the conjugation and Galois
//! actions on class functions.

use serde::Serialize;

use super::{CharError, Character};
use crate::arith::numtheory::{divisors, normalize_conductor};
use crate::arith::{CycNumber, FieldSpec, Rational};
use crate::group::{power_class_map, ConjClassSet, FiniteGroup, IndexPContext, Subgroup};

/// `(1/|G|) Σ_C |C| α(C) σ_{−1}(β(C))`
pub fn inner_product(classes: &ConjClassSet, order: usize, a: &Character, b: &Character) -> CycNumber {
    let mut acc = CycNumber::zero(1);
    for k in 0..classes.len() {
        let (x, y) = (a.value(k), b.value(k));
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let term = (x * &y.conj()).scale(&Rational::from_integer(classes.size(k) as i64));
        acc = &acc + &term;
    }
    acc.scale(&Rational::new(1, order as i64))
}

/// `Ind_H^G χ(g) = |G| / (|H| |C|) · Σ_{h ∈ C ∩ H} χ(h)`.
pub fn induce_character(
    h: &Subgroup,
    h_classes: &ConjClassSet,
    g_classes: &ConjClassSet,
    chi: &Character,
) -> Character {
    let g = h.parent();
    let mut acc = vec![CycNumber::zero(1); g_classes.len()];
    for d in 0..h_classes.len() {
        let c = g_classes.class_of(h.embed(h_classes.representative(d)));
        let v = chi.value(d).scale(&Rational::from_integer(h_classes.size(d) as i64));
        acc[c] = &acc[c] + &v;
    }
    let values = acc
        .into_iter()
        .enumerate()
        .map(|(c, v)| {
            let denom = (h.order() * g_classes.size(c)) as i64;
            v.scale(&Rational::new(g.order() as i64, denom))
        })
        .collect();
    Character::new(values)
}

/// Values of `χ` on the classes of `H`.
pub fn restrict_character(
    chi: &Character,
    h: &Subgroup,
    h_classes: &ConjClassSet,
    g_classes: &ConjClassSet,
) -> Character {
    Character::new(
        (0..h_classes.len())
            .map(|d| chi.value(g_classes.class_of(h.embed(h_classes.representative(d)))).clone())
            .collect(),
    )
}

/// `χ^x(h) = χ(x h x⁻¹)` for a class function of H.
pub fn conjugate_character(chi: &Character, ctx: &IndexPContext) -> Character {
    let map = ctx.x_class_map();
    Character::new(map.iter().map(|&c| chi.value(c).clone()).collect())
}

/// `χ^{σ_t}(g) = χ(g^t)` through the power map on classes.
pub fn galois_twist(g: &FiniteGroup, classes: &ConjClassSet, chi: &Character, t: i64) -> Result<Character, CharError> {
    let map = power_class_map(g, classes, t)?;
    Ok(Character::new(map.iter().map(|&c| chi.value(c).clone()).collect()))
}

/// Applies `σ_t` to every value.
pub fn class_function_galois(chi: &Character, t: i64) -> Result<Character, CharError> {
    Ok(Character::new(chi.values().iter().map(|v| v.galois(t)).collect::<Result<_, _>>()?))
}

/// Frobenius–Schur indicator `(1/|G|) Σ_g χ(g²)`.
pub fn fs_indicator(g: &FiniteGroup, classes: &ConjClassSet, chi: &Character) -> CycNumber {
    let mut acc = CycNumber::zero(1);
    for k in 0..classes.len() {
        let rep = classes.representative(k);
        let sq = classes.class_of(g.mul(rep, rep));
        acc = &acc + &chi.value(sq).scale(&Rational::from_integer(classes.size(k) as i64));
    }
    acc.scale(&Rational::new(1, g.order() as i64))
}

/// Conductor of `Q(χ)`: the least normalized divisor `m` of `e` such that
/// every value lies in `Q(ζ_m)`.
pub fn character_field_conductor(chi: &Character, e: u64) -> u64 {
    divisors(e)
        .into_iter()
        .filter(|&m| normalize_conductor(m) == m)
        .find(|&m| chi.values().iter().all(|v| v.lies_in(FieldSpec::new(m))))
        .unwrap_or_else(|| normalize_conductor(e))
}

/// Irreducible characters forming one orbit under `Gal(F(ζ_e)/F)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GaloisOrbit {
    #[serde(serialize_with = "ser_field")]
    field: FieldSpec,
    members: Vec<usize>,
    /// units `t mod e`, `t ≡ 1 mod m_F`, fixing the first member
    stabilizer: Vec<u64>,
}

fn ser_field<S: serde::Serializer>(f: &FieldSpec, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(f.conductor())
}

impl GaloisOrbit {
    pub fn new(field: FieldSpec, members: Vec<usize>, stabilizer: Vec<u64>) -> Self {
        GaloisOrbit { field, members, stabilizer }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn stabilizer(&self) -> &[u64] {
        &self.stabilizer
    }
}

/// An irreducible F-representation of H, described by its Galois orbit
/// and an optional Schur index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FIrreducibleSpec {
    pub orbit: GaloisOrbit,
    pub schur_index: Option<u64>,
    pub representative: usize,
}

impl FIrreducibleSpec {
    pub fn new(orbit: GaloisOrbit, schur_index: Option<u64>) -> Self {
        let representative = orbit.members()[0];
        FIrreducibleSpec { orbit, schur_index, representative }
    }

    pub fn k(&self) -> usize {
        self.orbit.size()
    }
}
