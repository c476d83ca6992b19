//! The five-case decision procedure for `η↑` over `F = Q(ζ_m)` and the
//! predicted constituent structure.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::arith::numtheory::{lcm, units_mod};
use crate::arith::{factor_phi_p_over_field, zeta_p_in_field, CycNumber, FieldSpec, Rational};
use crate::char::{
    conjugate_character, inner_product, restrict_character, CharError, Character, CharacterTable, FIrreducibleSpec,
};
use crate::group::IndexPContext;
use crate::idempotents::{lambda_of, mu_test, IdempotentError, LambdaMu};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Idempotent(#[from] IdempotentError),
    #[error("orbit member {0} is not an irreducible character of H")]
    BadOrbit(usize),
    #[error("x-stability differs between Galois conjugates ({0} vs {1})")]
    MixedStability(usize, usize),
    #[error("p-th roots differ between Galois conjugates")]
    MixedRoots,
    #[error("non-integral or negative multiplicity {0}")]
    BadMultiplicity(String),
    #[error("Galois conjugate constituents have different multiplicities")]
    UnevenOrbit,
}

#[derive(Debug, Clone, Serialize)]
pub struct InductionCase {
    pub case: u8,
    pub p: u64,
    pub k: usize,
    pub field: u64,
    /// the orbit of η (indices into the table of H)
    pub eta_orbit: Vec<usize>,
    /// the orbit of η^x
    pub conjugate_orbit: Vec<usize>,
    pub lambda: Option<CycNumber>,
    pub mu: Option<CycNumber>,
    pub lambda_mu: Option<LambdaMu>,
    /// p-th roots computed independently for every Galois conjugate agree
    pub mu_consistent: Option<bool>,
    pub zeta_p_in_f: bool,
    pub predicted_count: usize,
    /// `1 + (number of irreducible factors of Φ_p over F)`, reported for
    /// case 5 only
    pub phi_factor_reading: Option<usize>,
    /// `1 + (number of irreducible factors of Φ_p over F(η))`, case 5 only
    pub eta_field_reading: Option<usize>,
}

/// The multiplicity of an F-constituent in `η↑`, `c · m_η / m_ρ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FMultiplicity {
    pub complex: u64,
    pub symbolic: String,
    pub value: Option<Rational>,
}

impl FMultiplicity {
    pub fn new(complex: u64, eta_schur: Option<u64>, own_schur: Option<u64>, label: usize) -> Self {
        let eta = eta_schur.map_or_else(|| "m_eta".to_string(), |m| m.to_string());
        let own = own_schur.map_or_else(|| format!("m_{label}"), |m| m.to_string());
        let symbolic = format!("{complex}*{eta}/{own}");
        let value = match (eta_schur, own_schur) {
            (Some(a), Some(b)) => Some(Rational::new((complex * a) as i64, b as i64)),
            _ => None,
        };
        FMultiplicity { complex, symbolic, value }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constituent {
    /// Galois orbit over F of irreducible characters of G
    pub orbit: Vec<usize>,
    pub orbit_size: usize,
    pub complex_multiplicity: u64,
    /// degree of the orbit sum
    pub degree: u64,
    pub f_multiplicity: FMultiplicity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub constituents: Vec<Constituent>,
    pub actual_count: usize,
    pub predicted_count: Option<usize>,
    #[serde(rename = "match")]
    pub matches: Option<bool>,
    /// `Σ multiplicity × degree`
    pub total_degree: u64,
    /// `p × (degree of the orbit sum of η)`
    pub expected_degree: u64,
    pub degree_ok: bool,
}

impl DecompositionReport {
    /// Builds a report from complex multiplicities of every irreducible of G.
    pub fn from_multiplicities(
        mults: &[u64],
        g_table: &CharacterTable,
        field: FieldSpec,
        eta_degree: u64,
        p: u64,
        schur: &SchurData,
    ) -> Result<Self, ClassifyError> {
        let degrees = g_table.degrees();
        let mut constituents = Vec::new();
        for orbit in g_table.galois_orbits(field)? {
            let m = mults[orbit.members()[0]];
            if orbit.members().iter().any(|&i| mults[i] != m) {
                return Err(ClassifyError::UnevenOrbit);
            }
            if m == 0 {
                continue;
            }
            let degree: u64 = orbit.members().iter().map(|&i| degrees[i]).sum();
            let label = orbit.members()[0];
            let own = schur.constituents.iter().find(|(i, _)| orbit.members().contains(i)).map(|&(_, s)| s);
            constituents.push(Constituent {
                orbit_size: orbit.size(),
                complex_multiplicity: m,
                degree,
                f_multiplicity: FMultiplicity::new(m, schur.eta, own, label),
                orbit: orbit.members().to_vec(),
            });
        }
        let total_degree = constituents.iter().map(|c| c.complex_multiplicity * c.degree).sum();
        let expected_degree = p * eta_degree;
        Ok(DecompositionReport {
            actual_count: constituents.len(),
            constituents,
            predicted_count: None,
            matches: None,
            total_degree,
            expected_degree,
            degree_ok: total_degree == expected_degree,
        })
    }

    pub fn with_prediction(mut self, predicted: usize) -> Self {
        self.predicted_count = Some(predicted);
        self.matches = Some(predicted == self.actual_count);
        self
    }

    /// Constituent orbits as a sorted list, for structural comparison.
    pub fn orbit_set(&self) -> Vec<(Vec<usize>, u64)> {
        let mut v: Vec<_> = self.constituents.iter().map(|c| (c.orbit.clone(), c.complex_multiplicity)).collect();
        v.sort();
        v
    }
}

/// Optional Schur indices: of η, and of constituents (keyed by any G-table
/// index inside the constituent orbit).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SchurData {
    pub eta: Option<u64>,
    pub constituents: Vec<(usize, u64)>,
}

impl fmt::Display for InductionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "case {} (p = {}, k = {}, predicted {} constituent(s))",
            self.case, self.p, self.k, self.predicted_count
        )
    }
}

fn conj_index(ctx: &IndexPContext, h_table: &CharacterTable, i: usize) -> Result<usize, ClassifyError> {
    let c = conjugate_character(h_table.character(i), ctx);
    h_table.index_of(&c).ok_or(ClassifyError::BadOrbit(i))
}

/// Decides which of the five cases `η↑` falls in.
pub fn classify(
    ctx: &IndexPContext,
    h_table: &CharacterTable,
    eta: &FIrreducibleSpec,
    field: FieldSpec,
) -> Result<InductionCase, ClassifyError> {
    let p = ctx.p();
    let members = eta.orbit.members().to_vec();
    for &i in &members {
        if i >= h_table.len() {
            return Err(ClassifyError::BadOrbit(i));
        }
    }
    let k = members.len();
    let mut conjugates: Vec<usize> = members.iter().map(|&i| conj_index(ctx, h_table, i)).collect::<Result<_, _>>()?;
    conjugates.sort_unstable();
    let zeta_p = zeta_p_in_field(p, field);
    let mut out = InductionCase {
        case: 0,
        p,
        k,
        field: field.conductor(),
        eta_orbit: members.clone(),
        conjugate_orbit: conjugates.clone(),
        lambda: None,
        mu: None,
        lambda_mu: None,
        mu_consistent: None,
        zeta_p_in_f: zeta_p,
        predicted_count: 1,
        phi_factor_reading: None,
        eta_field_reading: None,
    };
    if conjugates != members {
        out.case = 1;
        return Ok(out);
    }
    let rep = eta.representative;
    let stable: Vec<bool> =
        members.iter().map(|&i| conj_index(ctx, h_table, i).map(|j| j == i)).collect::<Result<_, _>>()?;
    let rep_stable = stable[members.iter().position(|&i| i == rep).ok_or(ClassifyError::BadOrbit(rep))?];
    if let Some(pos) = stable.iter().position(|&s| s != rep_stable) {
        return Err(ClassifyError::MixedStability(rep, members[pos]));
    }
    if !rep_stable {
        out.case = 2;
        return Ok(out);
    }

    let lambda = lambda_of(ctx, h_table.character(rep))?;
    let lm = mu_test(&lambda, p, field)?;
    // every conjugate independently
    let mut consistent = true;
    for &i in &members {
        let li = lambda_of(ctx, h_table.character(i))?;
        let mi = mu_test(&li, p, field)?;
        consistent &= mi.mu.is_some() == lm.mu.is_some();
        if let (Some(a), Some(b)) = (&mi.mu, &lm.mu) {
            // roots agree up to a p-th root of unity in F
            consistent &= a.pow(p as u32) == b.pow(p as u32) || a == b;
        }
    }
    if !consistent {
        return Err(ClassifyError::MixedRoots);
    }
    out.mu_consistent = Some(consistent);
    out.lambda = Some(lambda);
    out.mu = lm.mu.clone();
    out.case = match (&lm.mu, zeta_p) {
        (None, _) => 3,
        (Some(_), true) => 4,
        (Some(_), false) => 5,
    };
    out.predicted_count = match out.case {
        4 => p as usize,
        5 => 1 + k,
        _ => 1,
    };
    if out.case == 5 {
        out.phi_factor_reading = Some(1 + factor_phi_p_over_field(p, field).map_err(IdempotentError::from)?.len());
        out.eta_field_reading = Some(1 + phi_factors_over_character_field(h_table, rep, p, field)?);
    }
    out.lambda_mu = Some(lm);
    Ok(out)
}

/// Number of irreducible factors of `Φ_p` over `F(η)`: `(p − 1)` divided
/// by the image mod p of the units fixing both F and η.
pub fn phi_factors_over_character_field(
    h_table: &CharacterTable,
    eta: usize,
    p: u64,
    field: FieldSpec,
) -> Result<usize, ClassifyError> {
    let e = h_table.exponent();
    let mf = field.conductor();
    let n = lcm(lcm(e, mf), p);
    let mut image = BTreeSet::new();
    for t in units_mod(n) {
        if t % mf == 1 % mf && h_table.twist_index(eta, (t % e) as i64)? == eta {
            image.insert(t % p);
        }
    }
    Ok((p as usize - 1) / image.len())
}

/// Orbit-sum character of η on H.
pub fn orbit_sum(h_table: &CharacterTable, members: &[usize]) -> Character {
    Character::sum(h_table.classes().len(), members.iter().map(|&i| h_table.character(i)))
}

pub(crate) fn to_multiplicity(z: &CycNumber) -> Result<u64, ClassifyError> {
    let r = z.to_rational().ok_or_else(|| ClassifyError::BadMultiplicity(z.to_string()))?;
    if !r.is_integer() || r.is_negative() {
        return Err(ClassifyError::BadMultiplicity(r.to_string()));
    }
    Ok(r.to_i64().expect("small") as u64)
}

/// Constituents of `η↑` obtained by restricting every irreducible of G to
/// H and pairing with the orbit sum of η (Frobenius reciprocity), then
/// grouping into Galois orbits over F.
pub fn predict_decomposition(
    case: &InductionCase,
    ctx: &IndexPContext,
    h_table: &CharacterTable,
    g_table: &CharacterTable,
    field: FieldSpec,
    schur: &SchurData,
) -> Result<DecompositionReport, ClassifyError> {
    let eta_sum = orbit_sum(h_table, &case.eta_orbit);
    let h_order = ctx.h().order();
    let mults = g_table
        .characters()
        .iter()
        .map(|psi| {
            let res = restrict_character(psi, ctx.h(), h_table.classes(), g_table.classes());
            to_multiplicity(&inner_product(h_table.classes(), h_order, &eta_sum, &res))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let eta_degree = to_multiplicity(eta_sum.value(0))?;
    Ok(DecompositionReport::from_multiplicities(&mults, g_table, field, eta_degree, ctx.p(), schur)?
        .with_prediction(case.predicted_count))
}
