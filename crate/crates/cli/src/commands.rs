//! The four subcommands. Each returns the text to print and an exit code;
//! errors are input errors (exit 2).

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use anyhow::{Context, Result};
use indexp::arith::CycNumber;
use indexp::char::character_table;
use indexp::classifier::{classify, predict_decomposition, Constituent, DecompositionReport, InductionCase};
use indexp::oracle::{
    berman_check, compare_verify, frobenius_check, galois_equivariance_check, induction_galois_check, lift_sweep,
    oracle_decompose, run_sweep, sweep_instances, sweep_settings, BermanOutcome, LiftReport, PropertyReport, Setting,
    SweepReport, VerificationOutcome,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::format::{read_corpus, read_json, CorpusEntry, ExpectedConstituent, GroupSpec, Instance, InstanceFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;

pub struct Output {
    pub text: String,
    pub code: i32,
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn chartab(input: &Path, output: Option<&Path>) -> Result<Output> {
    let spec: GroupSpec = read_json(input)?;
    let g = Arc::new(spec.build()?);
    // construction verifies orthogonality exactly
    let table = character_table(&g)?;
    let text = json(&table);
    if let Some(out) = output {
        std::fs::write(out, &text).with_context(|| format!("writing {}", out.display()))?;
        return Ok(Output { text: String::new(), code: EXIT_OK });
    }
    Ok(Output { text, code: EXIT_OK })
}

#[derive(Serialize)]
struct ClassifyOutput<'a> {
    case: u8,
    p: u64,
    k: usize,
    lambda: &'a Option<CycNumber>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mu: &'a Option<CycNumber>,
    zeta_p_in_f: bool,
    constituents: &'a [Constituent],
    predicted_count: usize,
    actual_count: usize,
    #[serde(rename = "match")]
    matches: bool,
    total_degree: u64,
    expected_degree: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi_factor_reading: Option<usize>,
    eta_orbit: &'a [usize],
}

fn classify_output<'a>(case: &'a InductionCase, report: &'a DecompositionReport) -> ClassifyOutput<'a> {
    ClassifyOutput {
        case: case.case,
        p: case.p,
        k: case.k,
        lambda: &case.lambda,
        mu: &case.mu,
        zeta_p_in_f: case.zeta_p_in_f,
        constituents: &report.constituents,
        predicted_count: case.predicted_count,
        actual_count: report.actual_count,
        matches: report.matches.unwrap_or(false),
        total_degree: report.total_degree,
        expected_degree: report.expected_degree,
        phi_factor_reading: case.phi_factor_reading,
        eta_orbit: &case.eta_orbit,
    }
}

fn load_instance(input: &Path) -> Result<Instance> {
    let file: InstanceFile = read_json(input)?;
    file.load()
}

pub fn classify_cmd(input: &Path) -> Result<Output> {
    let inst = load_instance(input)?;
    let s = &inst.setting;
    let case = classify(&s.ctx, &s.h_table, &inst.eta, inst.field)?;
    let report = predict_decomposition(&case, &s.ctx, &s.h_table, &s.g_table, inst.field, &inst.schur)?;
    Ok(Output { text: json(&classify_output(&case, &report)), code: EXIT_OK })
}

pub fn decompose_cmd(input: &Path) -> Result<Output> {
    let inst = load_instance(input)?;
    let report = oracle_decompose(&inst.setting, &inst.eta, inst.field, &inst.schur)?;
    Ok(Output { text: json(&report), code: EXIT_OK })
}

pub struct VerifyOptions {
    pub conductors: Vec<u64>,
    pub max_order: usize,
    pub jobs: Option<usize>,
    pub report: Option<std::path::PathBuf>,
}

pub const DEFAULT_CONDUCTORS: [u64; 8] = [1, 3, 4, 5, 7, 8, 9, 12];

#[derive(Debug, Serialize)]
pub struct EntryResult {
    pub name: String,
    pub outcome: VerificationOutcome,
    pub expectation_failures: Vec<String>,
    pub berman: Vec<BermanOutcome>,
    pub equivariance: PropertyReport,
    pub lifts: LiftReport,
    pub passed: bool,
}

#[derive(Debug, Default, Serialize)]
pub struct PropertySummary {
    pub induction_galois: PropertyReport,
    pub clifford: PropertyReport,
    pub frobenius: PropertyReport,
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub entries: Vec<EntryResult>,
    pub sweep: SweepReport,
    pub properties: PropertySummary,
    /// sweep contexts skipped by the order bound
    pub skipped_groups: Vec<String>,
    pub passed: bool,
}

fn check_entry(entry: &CorpusEntry) -> Result<EntryResult> {
    let inst = entry.instance.load().with_context(|| format!("corpus entry {}", entry.name))?;
    let s = &inst.setting;
    let outcome = compare_verify(s, &inst.eta, inst.field, &inst.schur, entry.name.clone())?;
    let case = classify(&s.ctx, &s.h_table, &inst.eta, inst.field)?;
    let oracle = oracle_decompose(s, &inst.eta, inst.field, &inst.schur)?;
    let exp = &entry.expected;
    let mut failures = Vec::new();
    if case.case != exp.case {
        failures.push(format!("case {} (expected {})", case.case, exp.case));
    }
    if case.lambda != exp.lambda {
        failures.push(format!("lambda {:?} (expected {:?})", case.lambda, exp.lambda));
    }
    if case.mu != exp.mu {
        failures.push(format!("mu {:?} (expected {:?})", case.mu, exp.mu));
    }
    if oracle.actual_count != exp.count {
        failures.push(format!("{} constituents (expected {})", oracle.actual_count, exp.count));
    }
    let mut got: Vec<ExpectedConstituent> = oracle
        .constituents
        .iter()
        .map(|c| ExpectedConstituent { orbit: c.orbit.clone(), multiplicity: c.complex_multiplicity })
        .collect();
    let mut want = exp.constituents.clone();
    got.sort_by(|a, b| a.orbit.cmp(&b.orbit));
    want.sort_by(|a, b| a.orbit.cmp(&b.orbit));
    if got != want {
        failures.push(format!("constituents {got:?} (expected {want:?})"));
    }

    let mut berman = Vec::new();
    if matches!(case.case, 1 | 2 | 4) {
        for &i in inst.eta.orbit.members() {
            match berman_check(s, i)? {
                Some(b) => {
                    if !b.equal {
                        failures.push(format!("Berman idempotents differ from classical ones for H-character {i}"));
                    }
                    berman.push(b);
                }
                None => failures.push(format!("no cyclotomic p-th root for H-character {i}")),
            }
        }
    }
    let equivariance = galois_equivariance_check(s, &inst.eta, inst.field)?;
    failures.extend(equivariance.failures.iter().cloned());
    let lifts = lift_sweep(s, &inst.eta, inst.field, entry.name.clone())?;
    let passed = outcome.matches && failures.is_empty();
    Ok(EntryResult {
        name: entry.name.clone(),
        outcome,
        expectation_failures: failures,
        berman,
        equivariance,
        lifts,
        passed,
    })
}

fn property_summary(settings: &[(String, Arc<Setting>)], conductors: &[u64]) -> Result<PropertySummary> {
    let parts = settings
        .par_iter()
        .map(|(_, s)| -> Result<_> {
            Ok((induction_galois_check(s, conductors)?, indexp::oracle::clifford_check(s)?, frobenius_check(s)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = PropertySummary::default();
    for (a, b, c) in parts {
        out.induction_galois.merge(a);
        out.clifford.merge(b);
        out.frobenius.merge(c);
    }
    Ok(out)
}

fn verify_inner(corpus: &Path, opts: &VerifyOptions) -> Result<VerifyReport> {
    let entries = read_corpus(corpus)?;
    let results = entries.par_iter().map(check_entry).collect::<Result<Vec<_>>>()?;

    // one sweep per distinct group
    let mut groups: BTreeMap<String, (String, GroupSpec)> = BTreeMap::new();
    for e in &entries {
        let key = serde_json::to_string(&e.instance.group)?;
        groups.entry(key).or_insert_with(|| (e.name.clone(), e.instance.group.clone()));
    }
    let mut labelled: Vec<(String, GroupSpec)> = groups.into_values().collect();
    labelled.sort_by(|a, b| a.0.cmp(&b.0));
    let mut settings = Vec::new();
    let mut skipped = Vec::new();
    for (label, spec) in labelled {
        let g = Arc::new(spec.build()?);
        if g.order() > opts.max_order {
            skipped.push(label);
            continue;
        }
        settings.extend(sweep_settings(&label, &g)?);
    }
    let instances = sweep_instances(&settings, &opts.conductors)?;
    let sweep = run_sweep(&instances);
    let properties = property_summary(&settings, &opts.conductors)?;
    let passed = results.iter().all(|r| r.passed)
        && sweep.passed()
        && properties.induction_galois.passed()
        && properties.clifford.passed()
        && properties.frobenius.passed();
    Ok(VerifyReport { entries: results, sweep, properties, skipped_groups: skipped, passed })
}

pub fn verify(corpus: &Path, opts: &VerifyOptions) -> Result<(VerifyReport, Output)> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = opts.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build()?;
    let report = pool.install(|| verify_inner(corpus, opts))?;
    let text = json(&report);
    if let Some(path) = &opts.report {
        std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
    }
    let code = if report.passed { EXIT_OK } else { EXIT_MISMATCH };
    Ok((report, Output { text, code }))
}
