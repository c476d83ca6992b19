//! Brute-force decomposition of `η↑` by induction and orthogonality, and
//! the cross-checks run against the classifier.
//!
//! Nothing here looks at `λ`, `μ` or idempotents except the explicitly
//! named Berman and equivariance checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::numtheory::{divisors, is_prime, lcm};
use crate::arith::{pth_root_in_field, CycNumber, FieldSpec};
use crate::char::{
    character_table, class_function_galois, conjugate_character, field_units_mod, galois_twist, induce_character,
    inner_product, restrict_character, CharError, Character, CharacterTable, FIrreducibleSpec,
};
use crate::classifier::{
    classify, predict_decomposition, ClassifyError, Constituent, DecompositionReport, FMultiplicity, InductionCase,
    SchurData,
};
use crate::group::{index_p_normal_subgroups, FiniteGroup, GroupError, IndexPContext};
use crate::idempotents::{
    compositum_conductor, embed_from_h, extension_idempotents, fused_idempotent, lambda_of, pci_from_character,
    IdempotentError,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Idempotent(#[from] IdempotentError),
}

/// An index-p context together with the character tables of H and G.
pub struct Setting {
    pub ctx: IndexPContext,
    pub h_table: CharacterTable,
    pub g_table: Arc<CharacterTable>,
}

impl Setting {
    pub fn new(ctx: IndexPContext) -> Result<Self, OracleError> {
        let g_table = Arc::new(character_table(ctx.g())?);
        Self::with_g_table(ctx, g_table)
    }

    pub fn with_g_table(ctx: IndexPContext, g_table: Arc<CharacterTable>) -> Result<Self, OracleError> {
        let h_table = character_table(ctx.h().group())?;
        Ok(Setting { ctx, h_table, g_table })
    }

    /// The same H and tables with another element of G − H as x.
    pub fn with_x(&self, x: usize) -> Result<Self, OracleError> {
        Ok(Setting { ctx: self.ctx.with_x(x)?, h_table: self.h_table.clone(), g_table: self.g_table.clone() })
    }

    pub fn eta_spec(&self, i: usize, field: FieldSpec, schur: Option<u64>) -> Result<FIrreducibleSpec, OracleError> {
        Ok(FIrreducibleSpec::new(self.h_table.orbit_of(i, field)?, schur))
    }

    fn induce(&self, chi: &Character) -> Character {
        induce_character(self.ctx.h(), self.h_table.classes(), self.g_table.classes(), chi)
    }

    fn g_product(&self, a: &Character, b: &Character) -> CycNumber {
        inner_product(self.g_table.classes(), self.ctx.g().order(), a, b)
    }
}

fn nonnegative_integer(z: &CycNumber) -> Result<u64, OracleError> {
    match z.to_rational() {
        Some(r) if r.is_integer() && !r.is_negative() => Ok(r.to_i64().expect("small") as u64),
        _ => Err(ClassifyError::BadMultiplicity(z.to_string()).into()),
    }
}

/// Induces the orbit sum of η and pairs it with every irreducible of G.
pub fn oracle_decompose(
    s: &Setting,
    eta: &FIrreducibleSpec,
    field: FieldSpec,
    schur: &SchurData,
) -> Result<DecompositionReport, OracleError> {
    let members = eta.orbit.members();
    let mut induced = Character::zero(s.g_table.classes().len());
    let mut eta_degree = 0u64;
    for &i in members {
        let chi = s.h_table.character(i);
        induced = induced.add(&s.induce(chi));
        eta_degree += nonnegative_integer(chi.value(0))?;
    }
    let mults = s
        .g_table
        .characters()
        .iter()
        .map(|psi| nonnegative_integer(&s.g_product(&induced, psi)))
        .collect::<Result<Vec<_>, _>>()?;

    let degrees = s.g_table.degrees();
    let mut seen = vec![false; mults.len()];
    let mut constituents = Vec::new();
    for i in 0..mults.len() {
        if mults[i] == 0 || seen[i] {
            continue;
        }
        let orbit = s.g_table.orbit_of(i, field)?;
        for &j in orbit.members() {
            seen[j] = true;
            if mults[j] != mults[i] {
                return Err(ClassifyError::UnevenOrbit.into());
            }
        }
        let own = schur.constituents.iter().find(|(j, _)| orbit.members().contains(j)).map(|&(_, m)| m);
        constituents.push(Constituent {
            orbit: orbit.members().to_vec(),
            orbit_size: orbit.size(),
            complex_multiplicity: mults[i],
            degree: orbit.members().iter().map(|&j| degrees[j]).sum(),
            f_multiplicity: FMultiplicity::new(mults[i], schur.eta, own, i),
        });
    }
    let total_degree = constituents.iter().map(|c| c.complex_multiplicity * c.degree).sum();
    let expected_degree = s.ctx.p() * eta_degree;
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

#[derive(Debug, Clone, Serialize)]
pub struct VerificationOutcome {
    pub key: String,
    pub case: u8,
    pub p: u64,
    pub k: usize,
    pub predicted_count: usize,
    pub oracle_count: usize,
    /// classifier-side and oracle-side constituents agree exactly
    pub constituents_equal: bool,
    pub degree_ok: bool,
    /// case 1: the conjugate orbit induces the same character
    pub case_check: Option<bool>,
    /// `1 + #(factors of Φ_p over F)` in case 5
    pub phi_factor_reading: Option<usize>,
    pub phi_reading_matches: Option<bool>,
    /// `1 + #(factors of Φ_p over F(η))` in case 5
    pub eta_field_reading: Option<usize>,
    #[serde(rename = "match")]
    pub matches: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dump: Option<serde_json::Value>,
}

pub fn compare_verify(
    s: &Setting,
    eta: &FIrreducibleSpec,
    field: FieldSpec,
    schur: &SchurData,
    key: String,
) -> Result<VerificationOutcome, OracleError> {
    let case = classify(&s.ctx, &s.h_table, eta, field)?;
    let predicted = predict_decomposition(&case, &s.ctx, &s.h_table, &s.g_table, field, schur)?;
    let oracle = oracle_decompose(s, eta, field, schur)?;
    Ok(outcome(s, &case, &predicted, &oracle, key))
}

fn outcome(
    s: &Setting,
    case: &InductionCase,
    predicted: &DecompositionReport,
    oracle: &DecompositionReport,
    key: String,
) -> VerificationOutcome {
    let constituents_equal = predicted.orbit_set() == oracle.orbit_set();
    let degree_ok = predicted.degree_ok && oracle.degree_ok;
    let case_check = (case.case == 1).then(|| {
        let sum = |orbit: &[usize]| {
            orbit
                .iter()
                .fold(Character::zero(s.g_table.classes().len()), |acc, &i| acc.add(&s.induce(s.h_table.character(i))))
        };
        sum(&case.eta_orbit) == sum(&case.conjugate_orbit)
    });
    let matches =
        case.predicted_count == oracle.actual_count && constituents_equal && degree_ok && case_check.unwrap_or(true);
    let dump = (!matches).then(|| {
        serde_json::json!({
            "classification": case,
            "prediction": predicted,
            "oracle": oracle,
        })
    });
    VerificationOutcome {
        key,
        case: case.case,
        p: case.p,
        k: case.k,
        predicted_count: case.predicted_count,
        oracle_count: oracle.actual_count,
        constituents_equal,
        degree_ok,
        case_check,
        phi_factor_reading: case.phi_factor_reading,
        phi_reading_matches: case.phi_factor_reading.map(|n| n == oracle.actual_count),
        eta_field_reading: case.eta_field_reading,
        matches,
        dump,
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct PropertyReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn merge(&mut self, other: PropertyReport) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
    }
}

/// Induction commutes with Galois twists (through the power map and
/// value-wise), and induces orbit sums term by term. Every irreducible of H
/// against every unit `t` mod `exp(G)`; orbit sums over each conductor.
pub fn induction_galois_check(s: &Setting, conductors: &[u64]) -> Result<PropertyReport, OracleError> {
    let g = s.ctx.g();
    let h = s.ctx.h().group();
    let e = g.exponent();
    let mut report = PropertyReport::default();
    for (i, chi) in s.h_table.characters().iter().enumerate() {
        let induced = s.induce(chi);
        for t in crate::arith::numtheory::units_mod(e) {
            let t = t as i64;
            let lhs = s.induce(&galois_twist(h, s.h_table.classes(), chi, t)?);
            let rhs = galois_twist(g, s.g_table.classes(), &induced, t)?;
            let values = class_function_galois(&induced, t)?;
            report.record(lhs == rhs && rhs == values, || format!("twist t={t} of H-character {i}"));
        }
    }
    for &m in conductors {
        let field = FieldSpec::new(m);
        for orbit in s.h_table.galois_orbits(field)? {
            let sum =
                Character::sum(s.h_table.classes().len(), orbit.members().iter().map(|&i| s.h_table.character(i)));
            let lhs = s.induce(&sum);
            let rhs = orbit
                .members()
                .iter()
                .fold(Character::zero(s.g_table.classes().len()), |acc, &i| acc.add(&s.induce(s.h_table.character(i))));
            report.record(lhs == rhs, || format!("orbit sum {:?} over Q(zeta_{m})", orbit.members()));
        }
    }
    Ok(report)
}

/// x-orbits on the irreducibles of H have size 1 or p; size-p orbits induce
/// irreducibly, fixed points induce p distinct constituents of multiplicity 1.
pub fn clifford_check(s: &Setting) -> Result<PropertyReport, OracleError> {
    let p = s.ctx.p() as usize;
    let mut report = PropertyReport::default();
    for i in 0..s.h_table.len() {
        let mut size = 1;
        let mut cur = conjugate_character(s.h_table.character(i), &s.ctx);
        while cur != *s.h_table.character(i) && size <= p {
            cur = conjugate_character(&cur, &s.ctx);
            size += 1;
        }
        let induced = s.induce(s.h_table.character(i));
        let mults = s
            .g_table
            .characters()
            .iter()
            .map(|psi| nonnegative_integer(&s.g_product(&induced, psi)))
            .collect::<Result<Vec<_>, _>>()?;
        let ok = if size == p {
            mults.iter().sum::<u64>() == 1
        } else if size == 1 {
            mults.iter().all(|&m| m <= 1) && mults.iter().sum::<u64>() == p as u64
        } else {
            false
        };
        report.record(ok, || format!("H-character {i}: x-orbit size {size}, multiplicities {mults:?}"));
    }
    Ok(report)
}

/// `⟨Ind χ, ψ⟩_G = ⟨χ, Res ψ⟩_H` for every pair of irreducibles.
pub fn frobenius_check(s: &Setting) -> PropertyReport {
    let mut report = PropertyReport::default();
    let h_order = s.ctx.h().order();
    for (i, chi) in s.h_table.characters().iter().enumerate() {
        let induced = s.induce(chi);
        for (j, psi) in s.g_table.characters().iter().enumerate() {
            let res = restrict_character(psi, s.ctx.h(), s.h_table.classes(), s.g_table.classes());
            let ok = s.g_product(&induced, psi) == inner_product(s.h_table.classes(), h_order, chi, &res);
            report.record(ok, || format!("H-character {i} against G-character {j}"));
        }
    }
    report
}

#[derive(Debug, Clone, Serialize)]
pub struct BermanOutcome {
    pub eta: usize,
    /// "extension" or "fused"
    pub kind: &'static str,
    pub count: usize,
    pub equal: bool,
}

/// Compares the Berman idempotents of one irreducible η of H with the
/// classical idempotents of G. A stable η needs a p-th root of `λ` in a
/// cyclotomic field; `None` when the compositum contains none.
pub fn berman_check(s: &Setting, eta: usize) -> Result<Option<BermanOutcome>, OracleError> {
    let chi = s.h_table.character(eta);
    let g = s.ctx.g();
    let classical = |i: usize| pci_from_character(g, s.g_table.classes(), s.g_table.character(i));
    let induced = s.induce(chi);
    let constituents: Vec<usize> =
        (0..s.g_table.len()).filter(|&j| !s.g_product(&induced, s.g_table.character(j)).is_zero()).collect();
    if conjugate_character(chi, &s.ctx) != *chi {
        let fused = fused_idempotent(&s.ctx, &s.h_table, chi)?;
        let equal = constituents.len() == 1 && fused == classical(constituents[0]);
        return Ok(Some(BermanOutcome { eta, kind: "fused", count: 1, equal }));
    }
    let lambda = lambda_of(&s.ctx, chi)?;
    let e = compositum_conductor(&s.ctx, FieldSpec::new(lambda.conductor()));
    let Some(mu) = pth_root_in_field(&lambda, s.ctx.p(), FieldSpec::new(e)).map_err(IdempotentError::from)? else {
        return Ok(None);
    };
    let e_eta = embed_from_h(&s.ctx, &pci_from_character(s.ctx.h().group(), s.h_table.classes(), chi));
    let ext = extension_idempotents(&s.ctx, &e_eta, &mu)?;
    let mut expected: Vec<_> = constituents.iter().map(|&j| classical(j)).collect();
    let mut equal = ext.len() == expected.len();
    for x in &ext {
        match expected.iter().position(|y| y == x) {
            Some(pos) => {
                expected.swap_remove(pos);
            }
            None => equal = false,
        }
    }
    Ok(Some(BermanOutcome { eta, kind: "extension", count: ext.len(), equal }))
}

/// For `σ_t` fixing F: `σ_t(e_{η_1}) = e_{η_j}` and `σ_t(λ_1) = λ_j` where
/// `η_j = η_1^{σ_t}`. Applies only to x-stable η.
pub fn galois_equivariance_check(
    s: &Setting,
    eta: &FIrreducibleSpec,
    field: FieldSpec,
) -> Result<PropertyReport, OracleError> {
    let mut report = PropertyReport::default();
    let rep = eta.representative;
    let chi = s.h_table.character(rep);
    if conjugate_character(chi, &s.ctx) != *chi {
        return Ok(report);
    }
    let h = s.ctx.h().group();
    let lambda = lambda_of(&s.ctx, chi)?;
    let e_rep = pci_from_character(h, s.h_table.classes(), chi);
    let e = lcm(h.exponent(), field.conductor());
    for t in field_units_mod(e, field) {
        let j = s.h_table.twist_index(rep, t as i64)?;
        let e_j = pci_from_character(h, s.h_table.classes(), s.h_table.character(j));
        let lambda_j = lambda_of(&s.ctx, s.h_table.character(j))?;
        let ok = e_rep.galois(t as i64).map_err(IdempotentError::from)? == e_j
            && lambda.galois(t as i64).map_err(IdempotentError::from)? == lambda_j;
        report.record(ok, || format!("sigma_{t} on H-character {rep}"));
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftReport {
    pub key: String,
    /// case obtained with each G-class representative outside H as x
    pub cases: BTreeMap<usize, u8>,
    pub verdict_invariant: bool,
    /// lifts whose prediction agrees with the oracle count
    pub agreeing: usize,
    pub oracle_count: usize,
}

/// Classifies η with every lift x (one per G-class outside H; `C̄(x)` only
/// depends on the class). Reported, not asserted.
pub fn lift_sweep(
    s: &Setting,
    eta: &FIrreducibleSpec,
    field: FieldSpec,
    key: String,
) -> Result<LiftReport, OracleError> {
    let oracle_count = oracle_decompose(s, eta, field, &SchurData::default())?.actual_count;
    let classes = s.g_table.classes();
    let mut cases = BTreeMap::new();
    let mut agreeing = 0;
    for c in 0..classes.len() {
        let x = classes.representative(c);
        if s.ctx.h().contains(x) {
            continue;
        }
        let lifted = s.with_x(x)?;
        let case = classify(&lifted.ctx, &lifted.h_table, eta, field)?;
        if case.predicted_count == oracle_count {
            agreeing += 1;
        }
        cases.insert(x, case.case);
    }
    let verdict_invariant = cases.values().collect::<std::collections::BTreeSet<_>>().len() <= 1;
    Ok(LiftReport { key, cases, verdict_invariant, agreeing, oracle_count })
}

/// One swept instance: a context, a field and an F-orbit of H.
pub struct SweepInstance {
    pub key: String,
    pub setting: Arc<Setting>,
    pub field: FieldSpec,
    pub eta: FIrreducibleSpec,
}

/// Every index-p normal subgroup of `g` (default x), and every F-orbit of
/// its irreducibles, for every conductor.
pub fn sweep_settings(label: &str, g: &Arc<FiniteGroup>) -> Result<Vec<(String, Arc<Setting>)>, OracleError> {
    let g_table = Arc::new(character_table(g)?);
    let mut out = Vec::new();
    for p in divisors(g.order() as u64).into_iter().filter(|&d| is_prime(d)) {
        for (n, h) in index_p_normal_subgroups(g, p).into_iter().enumerate() {
            let ctx = IndexPContext::new(h, None)?;
            out.push((format!("{label}/p{p}/H{n}"), Arc::new(Setting::with_g_table(ctx, g_table.clone())?)));
        }
    }
    Ok(out)
}

pub fn sweep_instances(
    settings: &[(String, Arc<Setting>)],
    conductors: &[u64],
) -> Result<Vec<SweepInstance>, OracleError> {
    let mut out = Vec::new();
    for (key, s) in settings {
        for &m in conductors {
            let field = FieldSpec::new(m);
            for orbit in s.h_table.galois_orbits(field)? {
                let eta = FIrreducibleSpec::new(orbit, None);
                out.push(SweepInstance {
                    key: format!("{key}/m{m}/eta{:?}", eta.orbit.members()),
                    setting: s.clone(),
                    field,
                    eta,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SweepReport {
    pub instances: usize,
    pub mismatches: Vec<VerificationOutcome>,
    pub errors: Vec<String>,
    pub histogram: BTreeMap<u8, usize>,
    /// case-5 instances and how many agree with `1 + #Φ_p-factors`
    pub case5: usize,
    pub phi_reading_disagreements: Vec<String>,
    /// case-5 instances where `1 + #(factors of Φ_p over F(η))` misses
    pub eta_field_reading_disagreements: Vec<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.errors.is_empty()
    }
}

/// Runs `compare_verify` on every instance (in parallel, reported in input
/// order).
pub fn run_sweep(instances: &[SweepInstance]) -> SweepReport {
    let results: Vec<_> = instances
        .par_iter()
        .map(|i| compare_verify(&i.setting, &i.eta, i.field, &SchurData::default(), i.key.clone()))
        .collect();
    let mut report = SweepReport { instances: instances.len(), ..Default::default() };
    for (inst, r) in instances.iter().zip(results) {
        match r {
            Ok(o) => {
                *report.histogram.entry(o.case).or_default() += 1;
                if o.case == 5 {
                    report.case5 += 1;
                    if o.phi_reading_matches == Some(false) {
                        report.phi_reading_disagreements.push(o.key.clone());
                    }
                    if o.eta_field_reading != Some(o.oracle_count) {
                        report.eta_field_reading_disagreements.push(o.key.clone());
                    }
                }
                if !o.matches {
                    report.mismatches.push(o);
                }
            }
            Err(e) => report.errors.push(format!("{}: {e}", inst.key)),
        }
    }
    report
}
