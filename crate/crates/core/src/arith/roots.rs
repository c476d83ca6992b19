//! Roots of unity and p-th roots inside a cyclotomic field.

use num_traits::{Signed, ToPrimitive};

use super::cyclotomic::{CycNumber, FieldSpec};
use super::cycpoly::CycPoly;
use super::factor::small_factors_over_q;
use super::numtheory::{inv_mod_prime, is_prime, lcm, pow_mod, primes_one_mod, primitive_root, units_mod};
use super::rational::Rational;
use super::ArithError;

/// Number of primes used by the residue pre-screen in [`pth_root_in_field`].
pub const RESIDUE_FILTER_PRIMES: usize = 5;

/// True iff a primitive p-th root of unity lies in `field`.
pub fn zeta_p_in_field(p: u64, field: FieldSpec) -> bool {
    p == 2 || field.conductor() % p == 0
}

/// One irreducible factor of `Φ_p` over F together with the exponents `r`
/// of its roots `ζ_p^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiFactor {
    pub poly: CycPoly,
    pub exponents: Vec<u64>,
}

impl PhiFactor {
    /// `{ r / r_1 mod p }` for the roots of this factor, sorted.
    pub fn exponent_ratios(&self, p: u64) -> Vec<u64> {
        let r1 = self.exponents[0];
        let inv = inv_mod_prime(r1, p);
        let mut out: Vec<u64> = self.exponents.iter().map(|&r| r * inv % p).collect();
        out.sort_unstable();
        out
    }
}

/// Irreducible factors of `Φ_p` over `field`, one per orbit of
/// `S = {t ≡ 1 mod m_F}` acting on `(Z/p)^*`. Coefficients are returned at
/// the conductor of `field`.
pub fn factor_phi_p_over_field(p: u64, field: FieldSpec) -> Result<Vec<PhiFactor>, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    let mf = field.conductor();
    let big = lcm(p, mf);
    let stab = field.fixing_units(p);
    let mut seen = vec![false; p as usize];
    let mut out = Vec::new();
    for r in 1..p {
        if seen[r as usize] {
            continue;
        }
        let mut orbit: Vec<u64> = stab.iter().map(|&s| s * r % p).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &e in &orbit {
            seen[e as usize] = true;
        }
        let poly = orbit
            .iter()
            .fold(CycPoly::one(big), |acc, &e| acc.mul(&CycPoly::linear(big, &CycNumber::root_of_unity(p, e as i64))));
        let coeffs: Vec<CycNumber> =
            poly.coeffs().iter().map(|c| c.descend(mf).expect("orbit product has coefficients in F")).collect();
        out.push(PhiFactor { poly: CycPoly::new(mf, coeffs), exponents: orbit });
    }
    Ok(out)
}

/// A p-th root of `lambda` lying in `field`, if one exists.
///
/// Decision route: membership of `lambda` in F, a p-th power residue screen
/// at primes splitting completely in `F(ζ_p)`, then an exact search for
/// linear factors of `X^p − λ` over F via the norm of a shifted polynomial
/// (Trager's method).
pub fn pth_root_in_field(lambda: &CycNumber, p: u64, field: FieldSpec) -> Result<Option<CycNumber>, ArithError> {
    if lambda.is_zero() {
        return Err(ArithError::ZeroRadicand);
    }
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    let mf = field.conductor();
    let Some(lam) = lambda.descend(mf) else {
        return Ok(None);
    };
    if mf == 1 && p == 2 {
        return Ok(rational_sqrt(&lam.to_rational().expect("conductor 1 is rational")).map(CycNumber::from_rational));
    }
    if let Some(decided) = scaled_root_of_unity_root(&lam, p, mf) {
        return Ok(decided);
    }
    if residue_screen_rejects(&lam, p, mf) {
        return Ok(None);
    }
    Ok(trager_linear_root(&lam, p, mf))
}

/// Decides `λ = r·ζ_w^b` with `r = s^p` for a positive rational `s`, where
/// `w` is the number of roots of unity in `Q(ζ_m)`. Any root is then `s`
/// times a root of unity of the field; the one with the smallest exponent is
/// returned. `None` when λ does not have this shape.
fn scaled_root_of_unity_root(lam: &CycNumber, p: u64, m: u64) -> Option<Option<CycNumber>> {
    let w = lcm(2, m);
    let (b, r) = (0..w).find_map(|b| {
        let r = (lam * &CycNumber::root_of_unity(w, -(b as i64))).to_rational()?;
        (!r.is_negative()).then_some((b, r))
    })?;
    let s = rational_pth_root(&r, p)?;
    let c = (0..w).find(|&c| (c * p) % w == b);
    Some(c.map(|c| CycNumber::root_of_unity(w, c as i64).scale(&s)))
}

fn rational_pth_root(r: &Rational, p: u64) -> Option<Rational> {
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.nth_root(p as u32), d.nth_root(p as u32));
    ((&sn).pow(p as u32) == n && (&sd).pow(p as u32) == d)
        .then(|| Rational::from_bigint(sn) / Rational::from_bigint(sd))
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == n && &sd * &sd == d).then(|| Rational::from_bigint(sn) / Rational::from_bigint(sd))
}

/// Evaluates `z` at `ζ_m ↦ root` in `F_q`; `None` if a denominator vanishes mod q.
fn eval_mod_q(z: &CycNumber, root: u64, q: u64) -> Option<u64> {
    let mut acc = 0u64;
    let mut pw = 1u64;
    for c in z.coeffs() {
        if !c.is_zero() {
            let qb = num_bigint::BigInt::from(q);
            let n = c.numer().mod_floor_u64(&qb);
            let d = c.denom().mod_floor_u64(&qb);
            if d == 0 {
                return None;
            }
            acc = (acc + n * inv_mod_prime(d, q) % q * pw) % q;
        }
        pw = pw * root % q;
    }
    Some(acc)
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, q: &num_bigint::BigInt) -> u64;
}

impl ModFloorU64 for num_bigint::BigInt {
    fn mod_floor_u64(&self, q: &num_bigint::BigInt) -> u64 {
        let r = self % q;
        let r = if r.is_negative() { r + q } else { r };
        r.to_u64().expect("residue fits")
    }
}

/// True if some prime `q ≡ 1 (mod lcm(m, p))` certifies that `lam` is not a
/// p-th power in `Q(ζ_m)`.
fn residue_screen_rejects(lam: &CycNumber, p: u64, m: u64) -> bool {
    let modulus = lcm(m, p);
    let mut used = 0;
    for q in primes_one_mod(modulus, 2 * modulus) {
        if used == RESIDUE_FILTER_PRIMES {
            break;
        }
        let g = primitive_root(q);
        let root = pow_mod(g, (q - 1) / m, q);
        let Some(v) = eval_mod_q(lam, root, q) else {
            continue;
        };
        if v == 0 {
            continue;
        }
        used += 1;
        if pow_mod(v, (q - 1) / p, q) != 1 {
            return true;
        }
    }
    false
}

/// Linear factors of `X^p − λ` over `Q(ζ_m)`: shift until the norm is
/// squarefree, factor it over Q, and take gcds over the field.
fn trager_linear_root(lam: &CycNumber, p: u64, m: u64) -> Option<CycNumber> {
    let mut f_coeffs = vec![CycNumber::zero(m); p as usize + 1];
    f_coeffs[0] = -lam;
    f_coeffs[p as usize] = CycNumber::one(m);
    let f = CycPoly::new(m, f_coeffs);
    let zeta = CycNumber::zeta(m);
    let max_deg = units_mod(m).len();
    for s in shifts() {
        let alpha = zeta.scale(&Rational::from_integer(s));
        // roots of f_s are μ + sα
        let f_s = f.shift(&-&alpha);
        let norm =
            units_mod(m).into_iter().fold(CycPoly::one(m), |acc, t| acc.mul(&f_s.galois(t as i64).expect("unit")));
        let norm = norm.to_ratpoly().expect("norm has rational coefficients");
        if !norm.is_squarefree() {
            continue;
        }
        let mut roots = Vec::new();
        for g in small_factors_over_q(&norm, max_deg) {
            let h = f_s.gcd(&CycPoly::from_ratpoly(m, &g));
            if h.degree() == Some(1) {
                let beta = -&h.coeffs()[0];
                let mu = &beta - &alpha;
                debug_assert!(mu.pow(p as u32) == *lam);
                roots.push(mu);
            }
        }
        return roots.into_iter().next();
    }
    unreachable!("some shift makes the norm squarefree")
}

fn shifts() -> impl Iterator<Item = i64> {
    std::iter::once(0).chain((1..).flat_map(|k| [k, -k]))
}
