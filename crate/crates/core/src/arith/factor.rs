//! Factorization of rational polynomials.
//!
//! Classical Zassenhaus pipeline: squarefree decomposition over Q, modular
//! factorization (distinct-degree + Cantor–Zassenhaus), linear Hensel lifting
//! and factor recombination by subset search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::numtheory::{inv_mod_prime, is_prime};
use super::poly::RatPoly;
use super::rational::Rational;

/// `f = content · Π factors`, factors primitive with positive leading
/// coefficient, repeated according to multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFactorization {
    pub content: Rational,
    pub factors: Vec<RatPoly>,
}

impl QFactorization {
    pub fn product(&self) -> RatPoly {
        self.factors.iter().fold(RatPoly::constant(self.content.clone()), |acc, f| &acc * f)
    }
}

/// Complete factorization of a nonzero polynomial into irreducibles over Q.
pub fn factor_over_q(f: &RatPoly) -> QFactorization {
    factor_impl(f, usize::MAX)
}

/// Irreducible factors of degree at most `max_degree` (with multiplicity);
/// the content and higher-degree factors are not reported.
pub fn small_factors_over_q(f: &RatPoly, max_degree: usize) -> Vec<RatPoly> {
    factor_impl(f, max_degree).factors.into_iter().filter(|g| g.degree().unwrap_or(0) <= max_degree).collect()
}

fn factor_impl(f: &RatPoly, max_degree: usize) -> QFactorization {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let (content, _) = f.primitive_part();
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(f) {
        let (_, prim) = part.primitive_part();
        for g in factor_squarefree(prim, max_degree) {
            let g = RatPoly::from_bigints(&g);
            for _ in 0..mult {
                factors.push(g.clone());
            }
        }
    }
    factors.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
    QFactorization { content, factors }
}

/// Yun's algorithm: `f = c · Π a_i^i` with each `a_i` squarefree and monic.
pub fn squarefree_decomposition(f: &RatPoly) -> Vec<(RatPoly, u32)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let fp = f.derivative();
    let a0 = f.gcd(&fp);
    let mut b = f.exact_div(&a0).expect("gcd divides").monic();
    let mut c = fp.exact_div(&a0).expect("gcd divides").scale(&f.leading().recip());
    let mut d = &c - &b.derivative();
    let mut i = 1;
    loop {
        let a = b.gcd(&d);
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.clone(), i));
        }
        b = b.exact_div(&a).expect("gcd divides");
        if b.degree().unwrap_or(0) == 0 {
            break;
        }
        c = d.exact_div(&a).expect("gcd divides");
        d = &c - &b.derivative();
        i += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// Integer polynomials (lowest degree first, trimmed).

type ZPoly = Vec<BigInt>;

fn ztrim(mut v: ZPoly) -> ZPoly {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out)
}

/// Exact division over Z, `None` if `d` does not divide `f`.
fn zdiv_exact(f: &[BigInt], d: &[BigInt]) -> Option<ZPoly> {
    let dd = d.len() - 1;
    if f.len() < d.len() {
        return if f.is_empty() { Some(Vec::new()) } else { None };
    }
    let lc = &d[dd];
    let mut rem = f.to_vec();
    let mut q = vec![BigInt::zero(); f.len() - dd];
    for i in (dd..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let (qi, r) = rem[i].div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        for (j, dc) in d.iter().enumerate() {
            rem[i - dd + j] -= &qi * dc;
        }
        q[i - dd] = qi;
    }
    rem.iter().all(Zero::is_zero).then(|| ztrim(q))
}

fn zprimitive(v: ZPoly) -> ZPoly {
    let mut g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return v;
    }
    if v.last().is_some_and(Signed::is_negative) {
        g = -g;
    }
    v.into_iter().map(|c| c / &g).collect()
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

// ---------------------------------------------------------------------------
// Polynomials over F_q (q < 2^31), lowest degree first, trimmed.

type MPoly = Vec<u64>;

fn mtrim(mut v: MPoly) -> MPoly {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn mreduce(f: &[BigInt], q: u64) -> MPoly {
    let qb = BigInt::from(q);
    mtrim(f.iter().map(|c| c.mod_floor(&qb).to_u64().unwrap()).collect())
}

fn msub(a: &[u64], b: &[u64], q: u64) -> MPoly {
    let n = a.len().max(b.len());
    mtrim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + q - y) % q
            })
            .collect(),
    )
}

fn mmul(a: &[u64], b: &[u64], q: u64) -> MPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % q;
        }
    }
    mtrim(out)
}

fn mdivrem(a: &[u64], d: &[u64], q: u64) -> (MPoly, MPoly) {
    let dd = d.len() - 1;
    let mut rem = a.to_vec();
    if rem.len() <= dd {
        return (Vec::new(), mtrim(rem));
    }
    let inv = inv_mod_prime(d[dd], q);
    let mut quot = vec![0u64; rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        if rem[i] == 0 {
            continue;
        }
        let c = rem[i] * inv % q;
        for (j, &dc) in d.iter().enumerate() {
            rem[i - dd + j] = (rem[i - dd + j] + q - c * dc % q) % q;
        }
        quot[i - dd] = c;
    }
    rem.truncate(dd);
    (mtrim(quot), mtrim(rem))
}

fn mmonic(a: &[u64], q: u64) -> MPoly {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = inv_mod_prime(lc, q);
            a.iter().map(|&c| c * inv % q).collect()
        }
    }
}

fn mgcd(a: &[u64], b: &[u64], q: u64) -> MPoly {
    let (mut a, mut b) = (mtrim(a.to_vec()), mtrim(b.to_vec()));
    while !b.is_empty() {
        let r = mdivrem(&a, &b, q).1;
        a = b;
        b = r;
    }
    mmonic(&a, q)
}

/// `(g, s, t)` with `s a + t b = g` monic.
fn mext_gcd(a: &[u64], b: &[u64], q: u64) -> (MPoly, MPoly, MPoly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (qt, r) = mdivrem(&r0, &r1, q);
        r0 = std::mem::replace(&mut r1, r);
        let s = msub(&s0, &mmul(&qt, &s1, q), q);
        s0 = std::mem::replace(&mut s1, s);
        let t = msub(&t0, &mmul(&qt, &t1, q), q);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = inv_mod_prime(*r0.last().expect("coprime inputs"), q);
    let sc = |v: &[u64]| mtrim(v.iter().map(|&c| c * inv % q).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn mpowmod(base: &[u64], mut e: u128, modulus: &[u64], q: u64) -> MPoly {
    let mut acc = vec![1u64];
    let mut b = mdivrem(base, modulus, q).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mdivrem(&mmul(&acc, &b, q), modulus, q).1;
        }
        e >>= 1;
        if e > 0 {
            b = mdivrem(&mmul(&b, &b, q), modulus, q).1;
        }
    }
    acc
}

fn mderivative(a: &[u64], q: u64) -> MPoly {
    mtrim(a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % q) * c % q).collect())
}

/// Monic irreducible factors of a monic squarefree polynomial over `F_q`.
fn factor_mod(f: &[u64], q: u64, rng: &mut ChaCha8Rng) -> Vec<MPoly> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 1;
    while rest.len() - 1 >= 2 * d {
        h = mpowmod(&h, q as u128, &rest, q);
        let g = mgcd(&rest, &msub(&h, &x, q), q);
        if g.len() > 1 {
            equal_degree(&g, d, q, rng, &mut out);
            rest = mdivrem(&rest, &g, q).0;
            h = mdivrem(&h, &rest, q).1;
        }
        d += 1;
    }
    if rest.len() > 1 {
        out.push(rest);
    }
    out.sort();
    out
}

fn equal_degree(f: &[u64], d: usize, q: u64, rng: &mut ChaCha8Rng, out: &mut Vec<MPoly>) {
    let n = f.len() - 1;
    if n == d {
        out.push(f.to_vec());
        return;
    }
    let e = ((q as u128).pow(d as u32) - 1) / 2;
    loop {
        let a: MPoly = mtrim((0..n).map(|_| rng.gen_range(0..q)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = msub(&mpowmod(&a, e, f, q), &[1], q);
        let g = mgcd(f, &b, q);
        if g.len() > 1 && g.len() < f.len() {
            let other = mdivrem(f, &g, q).0;
            equal_degree(&g, d, q, rng, out);
            equal_degree(&other, d, q, rng, out);
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Hensel lifting.

fn to_big(v: &[u64]) -> ZPoly {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts `f ≡ a · b (mod q)` (`a` monic) to `f ≡ A · B (mod q^k)` with
/// `q^k ≥ bound`. Returns `(A, B, q^k)`.
fn hensel_two(f: &[BigInt], a: &[u64], b: &[u64], q: u64, bound: &BigInt) -> (ZPoly, ZPoly, BigInt) {
    let (_, _, t) = mext_gcd(a, b, q);
    let qb = BigInt::from(q);
    let mut big_a = to_big(a);
    let mut big_b = to_big(b);
    let mut modulus = qb.clone();
    while &modulus < bound {
        let prod = zmul(&big_a, &big_b);
        let n = f.len().max(prod.len());
        let err: ZPoly = (0..n)
            .map(|i| {
                let x = f.get(i).cloned().unwrap_or_default();
                let y = prod.get(i).cloned().unwrap_or_default();
                let diff = x - y;
                debug_assert!((&diff % &modulus).is_zero());
                diff / &modulus
            })
            .collect();
        let e = mreduce(&err, q);
        if !e.is_empty() {
            let da = mdivrem(&mmul(&e, &t, q), a, q).1;
            let db = mdivrem(&msub(&e, &mmul(b, &da, q), q), a, q).0;
            for (i, c) in da.iter().enumerate() {
                big_a[i] += &modulus * c;
            }
            if big_b.len() < db.len() {
                big_b.resize(db.len(), BigInt::zero());
            }
            for (i, c) in db.iter().enumerate() {
                big_b[i] += &modulus * c;
            }
        }
        modulus *= &qb;
    }
    let reduce = |v: ZPoly| -> ZPoly { v.iter().map(|c| c.mod_floor(&modulus)).collect() };
    (reduce(big_a), reduce(big_b), modulus)
}

/// Lifts the monic modular factors of `f` (leading coefficient folded into
/// the last factor) to monic factors modulo `q^k ≥ bound`.
fn hensel_multi(f: &[BigInt], factors: &[MPoly], q: u64, bound: &BigInt) -> (Vec<ZPoly>, BigInt) {
    if factors.len() == 1 {
        let modulus = {
            let mut m = BigInt::from(q);
            while &m < bound {
                m *= q;
            }
            m
        };
        let lc = f.last().unwrap();
        let inv = lc.modinv(&modulus).expect("leading coefficient is a unit");
        let lifted: ZPoly = f.iter().map(|c| (c * &inv).mod_floor(&modulus)).collect();
        return (vec![lifted], modulus);
    }
    let half = factors.len() / 2;
    let a = factors[..half].iter().fold(vec![1u64], |acc, g| mmul(&acc, g, q));
    let lc_mod = mreduce(&[f.last().unwrap().clone()], q);
    let b = factors[half..].iter().fold(lc_mod, |acc, g| mmul(&acc, g, q));
    let (big_a, big_b, modulus) = hensel_two(f, &a, &b, q, bound);
    let (mut left, _) = hensel_multi(&big_a, &factors[..half], q, bound);
    let (right, _) = hensel_multi(&big_b, &factors[half..], q, bound);
    left.extend(right);
    (left, modulus)
}

// ---------------------------------------------------------------------------

fn factor_bound(f: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    let norm2 = f.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let lc = f.last().unwrap().abs();
    (BigInt::one() << n) * norm2 * lc * 2
}

fn choose_prime(f: &[BigInt], rng: &mut ChaCha8Rng) -> (u64, Vec<MPoly>) {
    let lc = f.last().unwrap();
    let mut best: Option<(u64, Vec<MPoly>)> = None;
    let mut tried = 0;
    let mut q = 2;
    while tried < 5 {
        q += 1;
        if !is_prime(q) || (lc % q).is_zero() {
            continue;
        }
        let fm = mmonic(&mreduce(f, q), q);
        if mgcd(&fm, &mderivative(&fm, q), q).len() != 1 {
            continue;
        }
        tried += 1;
        let facs = factor_mod(&fm, q, rng);
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((q, facs));
        }
        if best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    best.expect("some prime keeps the polynomial squarefree")
}

/// Irreducible factors of a squarefree primitive integer polynomial, or only
/// those of degree `≤ max_degree` when that is smaller than the degree.
fn factor_squarefree(f: ZPoly, max_degree: usize) -> Vec<ZPoly> {
    let f = zprimitive(ztrim(f));
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d_e4_u64);
    let (q, modular) = choose_prime(&f, &mut rng);
    if modular.len() == 1 {
        return vec![f];
    }
    let bound = factor_bound(&f);
    let (lifted, modulus) = hensel_multi(&f, &modular, q, &bound);
    let degs: Vec<usize> = lifted.iter().map(|g| g.len() - 1).collect();

    // Of any split A·B one side has at most half the degree, so complete
    // factorization only needs subsets within that budget; the restricted
    // search caps the degree instead.
    let restricted = max_degree < n;
    let mut found = Vec::new();
    let mut remaining: Vec<usize> = (0..lifted.len()).collect();
    let mut current = f;
    let mut size = 1;
    'outer: while size <= remaining.len() {
        let cur_deg = current.len() - 1;
        let budget = if restricted { max_degree } else { cur_deg / 2 };
        let lc = current.last().unwrap().clone();
        for subset in combinations_within(&remaining, &degs, size, budget) {
            let cand = subset.iter().fold(vec![lc.clone()], |acc, &i| {
                zmul(&acc, &lifted[i]).iter().map(|c| c.mod_floor(&modulus)).collect()
            });
            let cand: ZPoly = cand.iter().map(|c| symmetric_mod(c, &modulus)).collect();
            let cand = zprimitive(ztrim(cand));
            // Constant-term screen before the full division.
            if !current[0].is_zero() && !cand[0].is_zero() && !(&current[0] % &cand[0]).is_zero() {
                continue;
            }
            if let Some(quot) = zdiv_exact(&current, &cand) {
                found.push(cand);
                current = zprimitive(quot);
                remaining.retain(|i| !subset.contains(i));
                continue 'outer;
            }
        }
        size += 1;
    }
    if current.len() > 1 {
        found.push(current);
    }
    found
}

/// `k`-subsets of `items` whose degrees sum to at most `budget`.
fn combinations_within(items: &[usize], degs: &[usize], k: usize, budget: usize) -> Vec<Vec<usize>> {
    fn rec(
        items: &[usize],
        degs: &[usize],
        k: usize,
        budget: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            let d = degs[items[i]];
            if d > budget {
                continue;
            }
            cur.push(items[i]);
            rec(items, degs, k, budget - d, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, degs, k, budget, 0, &mut Vec::new(), &mut out);
    out
}
