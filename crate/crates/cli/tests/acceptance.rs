//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; the process fails if any
//! criterion fails.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use indexp::arith::{
    cyclotomic_poly, factor_phi_p_over_field, pth_root_in_field, CycNumber, CycPoly, FieldSpec, Rational,
};
use indexp::char::{character_table, CharacterTable};
use indexp::classifier::SchurData;
use indexp::group::FiniteGroup;
use indexp::oracle::{
    berman_check, clifford_check, compare_verify, frobenius_check, induction_galois_check, oracle_decompose, run_sweep,
    sweep_instances, sweep_settings, Setting,
};
use indexp_cli::commands::{verify, VerifyOptions, DEFAULT_CONDUCTORS, EXIT_OK};
use indexp_cli::format::{read_corpus, read_json, CorpusEntry, GroupSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn group_settings(entries: &[CorpusEntry]) -> Vec<(String, Arc<Setting>)> {
    let mut groups: BTreeMap<String, (String, GroupSpec)> = BTreeMap::new();
    for e in entries {
        let key = serde_json::to_string(&e.instance.group).unwrap();
        groups.entry(key).or_insert_with(|| (e.name.clone(), e.instance.group.clone()));
    }
    let mut out = Vec::new();
    for (label, spec) in groups.into_values() {
        let g = Arc::new(spec.build().unwrap());
        out.extend(sweep_settings(&label, &g).unwrap());
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn counterexample_entries() -> Vec<CorpusEntry> {
    let dir = corpus_dir().join("counterexamples");
    let mut paths: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    paths.iter().map(|p| read_json(p).unwrap()).collect()
}

fn corpus_exactness() -> Check {
    let start = Instant::now();
    let opts = VerifyOptions { conductors: DEFAULT_CONDUCTORS.to_vec(), max_order: 200, jobs: None, report: None };
    let (report, out) = verify(&corpus_dir(), &opts).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let failed: Vec<_> = report.entries.iter().filter(|e| !e.passed).map(|e| e.name.clone()).collect();
    if !failed.is_empty() || out.code != EXIT_OK {
        return Err(format!("entries failing: {failed:?}, exit {}", out.code));
    }
    let mut cases: Vec<u8> = report.entries.iter().map(|e| e.outcome.case).collect();
    cases.sort_unstable();
    cases.dedup();
    if cases != [1, 2, 3, 4, 5] {
        return Err(format!("corpus covers cases {cases:?} only"));
    }
    if elapsed > Duration::from_secs(60) {
        return Err(format!("verify took {elapsed:?}"));
    }
    Ok(format!("{} entries, cases 1-5 covered, {:.2?}", report.entries.len(), elapsed))
}

fn berman_agreement() -> Check {
    let entries = read_corpus(&corpus_dir()).map_err(|e| e.to_string())?;
    let settings = group_settings(&entries);
    let (mut equal, mut no_root) = (0, 0);
    let mut kinds: BTreeMap<&str, usize> = BTreeMap::new();
    let mut bad = Vec::new();
    for (key, s) in &settings {
        for i in 0..s.h_table.len() {
            match berman_check(s, i).map_err(|e| e.to_string())? {
                Some(b) if b.equal => {
                    equal += 1;
                    *kinds.entry(b.kind).or_default() += 1;
                }
                Some(_) => bad.push(format!("{key}/eta{i}")),
                None => no_root += 1,
            }
        }
    }
    if !bad.is_empty() {
        return Err(format!("idempotents differ at {bad:?}"));
    }
    if kinds.len() < 2 {
        return Err(format!("only {kinds:?} exercised"));
    }
    Ok(format!("{equal} irreducibles agree {kinds:?}, {no_root} without cyclotomic root"))
}

/// Points are `1..=degree`; `f` maps 0-based to 0-based.
fn perm(degree: usize, f: impl Fn(usize) -> usize) -> Vec<usize> {
    (0..degree).map(|i| f(i) + 1).collect()
}

/// `C_n ⋊ <a>` acting affinely on `Z/n`.
fn affine(n: usize, a: usize) -> (usize, Vec<Vec<usize>>) {
    (n, vec![perm(n, |i| (i + 1) % n), perm(n, |i| i * a % n)])
}

fn cyclic(n: usize) -> (usize, Vec<Vec<usize>>) {
    (n, vec![perm(n, |i| (i + 1) % n)])
}

fn direct(a: &(usize, Vec<Vec<usize>>), b: &(usize, Vec<Vec<usize>>)) -> (usize, Vec<Vec<usize>>) {
    let d = a.0 + b.0;
    let mut gens = Vec::new();
    for g in &a.1 {
        gens.push(perm(d, |i| if i < a.0 { g[i] - 1 } else { i }));
    }
    for g in &b.1 {
        gens.push(perm(d, |i| if i < a.0 { i } else { g[i - a.0] - 1 + a.0 }));
    }
    (d, gens)
}

fn small_factors() -> Vec<(&'static str, usize, (usize, Vec<Vec<usize>>))> {
    vec![
        ("C2", 2, cyclic(2)),
        ("C3", 3, cyclic(3)),
        ("C4", 4, cyclic(4)),
        ("C5", 5, cyclic(5)),
        ("C6", 6, cyclic(6)),
        ("S3", 6, affine(3, 2)),
        ("D4", 8, affine(4, 3)),
        ("Q8", 8, (8, vec![vec![2, 3, 4, 1, 6, 7, 8, 5], vec![5, 8, 7, 6, 3, 2, 1, 4]])),
        ("F20", 20, affine(5, 2)),
        ("A4", 12, (4, vec![vec![2, 3, 1, 4], vec![1, 3, 4, 2]])),
        ("S4", 24, (4, vec![vec![2, 1, 3, 4], vec![2, 3, 4, 1]])),
        ("C7:C3", 21, affine(7, 2)),
    ]
}

/// Independent check of both orthogonality relations and `Σ d² = |G|`.
fn table_integrity(t: &CharacterTable) -> Result<(), String> {
    let g = t.group();
    let n = g.order() as i64;
    let classes = t.classes();
    let r = t.len();
    if r != classes.len() {
        return Err(format!("{} characters for {} classes", r, classes.len()));
    }
    let d2: u64 = t.degrees().iter().map(|d| d * d).sum();
    if d2 != n as u64 {
        return Err(format!("sum of squared degrees {d2} != {n}"));
    }
    for i in 0..r {
        for j in 0..r {
            let mut acc = CycNumber::zero(1);
            for k in 0..classes.len() {
                let term = t.character(i).value(k) * &t.character(j).value(k).conj();
                acc = &acc + &term.scale(&Rational::from_integer(classes.size(k) as i64));
            }
            let want = CycNumber::from_integer(if i == j { n } else { 0 });
            if acc != want {
                return Err(format!("row relation fails for ({i},{j})"));
            }
        }
    }
    for a in 0..classes.len() {
        for b in 0..classes.len() {
            let mut acc = CycNumber::zero(1);
            for chi in t.characters() {
                acc = &acc + &(chi.value(a) * &chi.value(b).conj());
            }
            let want = if a == b { Rational::new(n, classes.size(a) as i64) } else { Rational::zero() };
            if acc != CycNumber::from_rational(want) {
                return Err(format!("column relation fails for ({a},{b})"));
            }
        }
    }
    Ok(())
}

fn character_tables() -> Check {
    let mut groups: Vec<(String, (usize, Vec<Vec<usize>>))> = vec![
        ("C25:C5".into(), affine(25, 6)),
        ("C13:C12".into(), affine(13, 2)),
        ("C11:C10".into(), affine(11, 2)),
        ("C9:C6".into(), affine(9, 2)),
        ("C19:C3".into(), affine(19, 7)),
        ("C16:C4".into(), affine(16, 3)),
    ];
    let pool = small_factors();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    while groups.len() < 16 {
        let a = &pool[rng.gen_range(0..pool.len())];
        let b = &pool[rng.gen_range(0..pool.len())];
        if a.1 * b.1 <= 200 {
            groups.push((format!("{}x{}", a.0, b.0), direct(&a.2, &b.2)));
        }
    }
    let entries = read_corpus(&corpus_dir()).map_err(|e| e.to_string())?;
    for e in &entries {
        if let GroupSpec::Perm { degree, generators } = &e.instance.group {
            groups.push((e.name.clone(), (*degree, generators.clone())));
        }
    }
    let mut slowest = Duration::ZERO;
    let mut largest = 0;
    for (name, (degree, gens)) in &groups {
        let start = Instant::now();
        let g = Arc::new(FiniteGroup::from_perm_generators(*degree, gens).map_err(|e| format!("{name}: {e}"))?);
        if g.order() > 200 {
            return Err(format!("{name} has order {}", g.order()));
        }
        let t = character_table(&g).map_err(|e| format!("{name}: {e}"))?;
        let took = start.elapsed();
        table_integrity(&t).map_err(|e| format!("{name}: {e}"))?;
        if took > Duration::from_secs(10) {
            return Err(format!("{name} took {took:?}"));
        }
        slowest = slowest.max(took);
        largest = largest.max(g.order());
    }
    Ok(format!("{} groups up to order {largest}, slowest table {slowest:.2?}", groups.len()))
}

fn theorem_sweep() -> Check {
    let entries = read_corpus(&corpus_dir()).map_err(|e| e.to_string())?;
    let settings = group_settings(&entries);
    let instances = sweep_instances(&settings, &DEFAULT_CONDUCTORS).map_err(|e| e.to_string())?;
    let report = run_sweep(&instances);
    if !report.passed() {
        return Err(format!("{} mismatches, errors {:?}", report.mismatches.len(), report.errors));
    }
    let c3xc3 = report.phi_reading_disagreements.iter().filter(|k| k.contains("c3xc3")).count();
    if c3xc3 == 0 {
        return Err("the C3xC3 case-5 instance no longer separates the two readings of k".into());
    }
    Ok(format!(
        "{} instances, histogram {:?}, Phi_p-factor reading of k disagrees on {} ({} on C3xC3)",
        report.instances,
        report.histogram,
        report.phi_reading_disagreements.len(),
        c3xc3
    ))
}

fn structural_properties() -> Check {
    let entries = read_corpus(&corpus_dir()).map_err(|e| e.to_string())?;
    let settings = group_settings(&entries);
    let mut counts = [0usize; 3];
    for (key, s) in &settings {
        let reports = [
            induction_galois_check(s, &DEFAULT_CONDUCTORS).map_err(|e| e.to_string())?,
            clifford_check(s).map_err(|e| e.to_string())?,
            frobenius_check(s),
        ];
        for (c, r) in counts.iter_mut().zip(&reports) {
            if !r.passed() {
                return Err(format!("{key}: {:?}", r.failures));
            }
            *c += r.checked;
        }
    }
    if counts.iter().any(|&c| c == 0) {
        return Err(format!("nothing checked: {counts:?}"));
    }
    Ok(format!(
        "induction/Galois {} checks, conjugation {} checks, reciprocity {} checks",
        counts[0], counts[1], counts[2]
    ))
}

fn phi_factorization() -> Check {
    let mut total = 0;
    for p in [3u64, 5, 7, 11] {
        for m in [1u64, 3, 4, 5, 8, 9, 12, 15] {
            let field = FieldSpec::new(m);
            let factors = factor_phi_p_over_field(p, field).map_err(|e| e.to_string())?;
            let mf = field.conductor();
            let product = factors.iter().fold(CycPoly::one(mf), |acc, f| acc.mul(&f.poly));
            if product != CycPoly::from_ratpoly(mf, &cyclotomic_poly(p)) {
                return Err(format!("p={p} m={m}: product is not Phi_p"));
            }
            // Q(ζ_m) ∩ Q(ζ_p) is Q unless p | m
            let want = if m % p == 0 { p as usize - 1 } else { 1 };
            if factors.len() != want {
                return Err(format!("p={p} m={m}: {} factors, expected {want}", factors.len()));
            }
            let d = factors[0].poly.degree();
            if factors.iter().any(|f| f.poly.degree() != d) {
                return Err(format!("p={p} m={m}: unequal degrees"));
            }
            let ratios = factors[0].exponent_ratios(p);
            if factors.iter().any(|f| f.exponent_ratios(p) != ratios) {
                return Err(format!("p={p} m={m}: exponent structure differs between factors"));
            }
            for f in &factors {
                for &e in &f.exponents {
                    let z = CycNumber::root_of_unity(p, e as i64);
                    if !f.poly.embed_eval(&z).is_zero() {
                        return Err(format!("p={p} m={m}: zeta^{e} is not a root of its factor"));
                    }
                }
            }
            total += factors.len();
        }
    }
    Ok(format!("32 (p, F) pairs, {total} factors"))
}

trait EmbedEval {
    fn embed_eval(&self, z: &CycNumber) -> CycNumber;
}

impl EmbedEval for CycPoly {
    fn embed_eval(&self, z: &CycNumber) -> CycNumber {
        self.coeffs().iter().rev().fold(CycNumber::zero(1), |acc, c| &(&acc * z) + c)
    }
}

fn random_element(rng: &mut ChaCha8Rng, m: u64, bound: i64) -> CycNumber {
    loop {
        let terms: Vec<(i64, Rational)> =
            (0..m as i64).map(|e| (e, Rational::from_integer(rng.gen_range(-bound..=bound)))).collect();
        let z = CycNumber::from_terms(m, terms);
        if !z.is_zero() {
            return z;
        }
    }
}

fn integer_root(n: i64, p: u32) -> Option<i64> {
    if n < 0 {
        return if p % 2 == 1 { integer_root(-n, p).map(|r| -r) } else { None };
    }
    let guess = (n as f64).powf(1.0 / p as f64).round() as i64;
    (guess.saturating_sub(1)..=guess + 1).find(|&r| r >= 0 && (r as i128).pow(p) == n as i128)
}

/// Whether `N(λ)` is a rational p-th power; `None` if the norm is too large
/// to decide here.
fn norm_is_pth_power(lambda: &CycNumber, p: u64) -> Option<bool> {
    let (n, d) = lambda.norm().as_small()?;
    Some(integer_root(n, p as u32).is_some() && integer_root(d, p as u32).is_some())
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Every p-th root of `ζ_w^b` is a `pw`-th root of unity; checks each one for
/// membership in `Q(ζ_m)`.
fn unity_has_root_in_field(w: u64, b: u64, p: u64, m: u64) -> bool {
    let field_roots = if m % 2 == 0 { m } else { 2 * m };
    let n = p * w;
    (0..n).filter(|c| c * p % n == b * p % n).any(|c| {
        let order = n / gcd(c, n);
        field_roots % order == 0
    })
}

fn pth_roots() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut positives, mut negatives, mut structured) = (0, 0, 0);
    for p in [2u64, 3, 5] {
        for m in [1u64, 3, 4, 5, 8, 12] {
            let field = FieldSpec::new(m);
            for _ in 0..200 {
                let mu = random_element(&mut rng, m, 3);
                let lambda = mu.pow(p as u32);
                match pth_root_in_field(&lambda, p, field).map_err(|e| e.to_string())? {
                    Some(r) if r.pow(p as u32) == lambda && field.contains(&r) => positives += 1,
                    other => return Err(format!("p={p} m={m}: {lambda} gave {other:?}")),
                }
            }
            let mut found = 0;
            while found < 200 {
                let lambda = random_element(&mut rng, m, 5);
                if norm_is_pth_power(&lambda, p) != Some(false) {
                    continue;
                }
                if let Some(r) = pth_root_in_field(&lambda, p, field).map_err(|e| e.to_string())? {
                    return Err(format!("p={p} m={m}: {lambda} has no p-th root but got {r}"));
                }
                found += 1;
            }
            negatives += found;
            // unit multiples of p-th powers: the norm cannot tell these apart
            let w = if m % 2 == 0 { m } else { 2 * m };
            for b in 0..w {
                let mu = random_element(&mut rng, m, 2);
                let lambda = &mu.pow(p as u32) * &CycNumber::root_of_unity(w, b as i64);
                let got = pth_root_in_field(&lambda, p, field).map_err(|e| e.to_string())?;
                let want = unity_has_root_in_field(w, b, p, m);
                match got {
                    Some(r) if want && r.pow(p as u32) == lambda => {}
                    None if !want => {}
                    other => return Err(format!("p={p} m={m} b={b}: {lambda} gave {other:?}, root exists: {want}")),
                }
                structured += 1;
            }
        }
    }
    Ok(format!(
        "{positives} powers recovered, {negatives} certified non-powers rejected, {structured} unit-twisted cases"
    ))
}

fn degree_bookkeeping() -> Check {
    let mut entries = read_corpus(&corpus_dir()).map_err(|e| e.to_string())?;
    entries.extend(counterexample_entries());
    let mut checked = 0;
    for e in &entries {
        let inst = e.instance.load().map_err(|err| format!("{}: {err}", e.name))?;
        let report =
            oracle_decompose(&inst.setting, &inst.eta, inst.field, &inst.schur).map_err(|err| err.to_string())?;
        if !report.degree_ok {
            return Err(format!("{}: total degree {} != {}", e.name, report.total_degree, report.expected_degree));
        }
        checked += 1;
    }
    let settings = group_settings(&entries);
    let instances = sweep_instances(&settings, &DEFAULT_CONDUCTORS).map_err(|e| e.to_string())?;
    for i in &instances {
        let o = compare_verify(&i.setting, &i.eta, i.field, &SchurData::default(), i.key.clone())
            .map_err(|e| e.to_string())?;
        if !o.degree_ok {
            return Err(format!("{}: degree bookkeeping fails", o.key));
        }
        checked += 1;
    }
    Ok(format!("{checked} decompositions balance"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("1 corpus exactness", corpus_exactness),
        ("2 Berman idempotents match classical", berman_agreement),
        ("3 character-table integrity", character_tables),
        ("4 decomposition theorem sweep", theorem_sweep),
        ("5 induction and conjugation properties", structural_properties),
        ("6 Phi_p factorization structure", phi_factorization),
        ("7 p-th root correctness", pth_roots),
        ("8 degree bookkeeping", degree_bookkeeping),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{:.2?}]", start.elapsed()),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{:.2?}]", start.elapsed());
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
