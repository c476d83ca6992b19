//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! Elements are stored in the power basis `ζ_m^0 … ζ_m^{φ(m)−1}`, reduced
//! modulo `Φ_m`, with the conductor normalized so that `m ≢ 2 (mod 4)`.
//! Binary operations work in `Q(ζ_lcm)`; results are not descended to a
//! smaller field unless asked for explicitly.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::numtheory::{
    divisors, euler_phi, gcd, gcd_signed, lcm, moebius, normalize_conductor, rem_euclid, units_mod,
};
use super::poly::RatPoly;
use super::rational::Rational;
use super::ArithError;

fn phi_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_coeffs(n: u64) -> Arc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic polynomial index must be positive");
    if let Some(c) = phi_cache().lock().unwrap().get(&n) {
        return c.clone();
    }
    let coeffs = if n == 1 {
        vec![-1, 1]
    } else {
        // Φ_n = Π_{d|n} (1 − X^d)^{μ(n/d)} for n > 1, expanded as a power
        // series truncated at degree φ(n).
        let deg = euler_phi(n) as usize;
        let mut a = vec![0i128; deg + 1];
        a[0] = 1;
        let divs = divisors(n);
        for &d in &divs {
            if moebius(n / d) == 1 {
                let d = d as usize;
                for i in (d..=deg).rev() {
                    a[i] -= a[i - d];
                }
            }
        }
        for &d in &divs {
            if moebius(n / d) == -1 {
                let d = d as usize;
                for i in d..=deg {
                    a[i] += a[i - d];
                }
            }
        }
        a.into_iter().map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow")).collect()
    };
    let coeffs = Arc::new(coeffs);
    phi_cache().lock().unwrap().insert(n, coeffs.clone());
    coeffs
}

/// `Φ_n` as a rational polynomial.
pub fn cyclotomic_poly(n: u64) -> RatPoly {
    RatPoly::from_ints(&cyclotomic_coeffs(n))
}

/// Reduces a coefficient vector indexed by powers of `ζ_m` (any length)
/// to the power basis of `Q(ζ_m)`; `m` must be normalized.
fn reduce(mut v: Vec<Rational>, m: u64) -> Vec<Rational> {
    let m_us = m as usize;
    if v.len() > m_us {
        let tail = v.split_off(m_us);
        for (i, c) in tail.into_iter().enumerate() {
            if !c.is_zero() {
                v[i % m_us] += c;
            }
        }
    }
    let phi = cyclotomic_coeffs(m);
    let d = phi.len() - 1;
    let nz: Vec<(usize, Rational)> =
        phi[..d].iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, &c)| (j, Rational::from_integer(c))).collect();
    for i in (d..v.len()).rev() {
        if v[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut v[i]);
        for (j, p) in &nz {
            v[i - d + j] -= &c * p;
        }
    }
    v.resize(d, Rational::zero());
    v
}

/// Exact element of `Q(ζ_m)`.
#[derive(Clone)]
pub struct CycNumber {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl CycNumber {
    /// Reduces coefficients of `ζ_m^0 … ζ_m^{len−1}` to the canonical form,
    /// normalizing a conductor `m ≡ 2 (mod 4)` to `m / 2`.
    pub fn from_raw(raw: Vec<Rational>, m: u64) -> Self {
        assert!(m >= 1, "conductor must be positive");
        if m % 4 == 2 {
            // ζ_{2n} = −ζ_n^{(n+1)/2} for odd n.
            let n = m / 2;
            let half = (n + 1) / 2;
            let mut out = vec![Rational::zero(); n as usize];
            for (j, c) in raw.into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let j = j as u64 % m;
                let idx = ((j * half) % n) as usize;
                if j % 2 == 0 {
                    out[idx] += c;
                } else {
                    out[idx] -= c;
                }
            }
            return CycNumber { conductor: n, coeffs: reduce(out, n) };
        }
        CycNumber { conductor: m, coeffs: reduce(raw, m) }
    }

    /// Builds `Σ c · ζ_m^e` from `(exponent, coefficient)` terms.
    pub fn from_terms(m: u64, terms: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut raw = vec![Rational::zero(); m as usize];
        for (e, c) in terms {
            raw[rem_euclid(e, m) as usize] += c;
        }
        Self::from_raw(raw, m)
    }

    /// Constructs directly from power-basis coordinates.
    pub fn from_coeffs(m: u64, coeffs: Vec<Rational>) -> Result<Self, ArithError> {
        if m == 0 || normalize_conductor(m) != m {
            return Err(ArithError::BadConductor(m));
        }
        if coeffs.len() as u64 != euler_phi(m) {
            return Err(ArithError::CoordinateCount {
                conductor: m,
                expected: euler_phi(m) as usize,
                got: coeffs.len(),
            });
        }
        Ok(CycNumber { conductor: m, coeffs })
    }

    pub fn zero(m: u64) -> Self {
        let m = normalize_conductor(m);
        CycNumber { conductor: m, coeffs: vec![Rational::zero(); euler_phi(m) as usize] }
    }

    pub fn one(m: u64) -> Self {
        Self::from_rational_at(Rational::one(), m)
    }

    pub fn from_rational(r: Rational) -> Self {
        CycNumber { conductor: 1, coeffs: vec![r] }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    /// A rational number stored at conductor `m`.
    pub fn from_rational_at(r: Rational, m: u64) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = r;
        z
    }

    /// `ζ_n^k`.
    pub fn root_of_unity(n: u64, k: i64) -> Self {
        Self::from_terms(n, [(k, Rational::one())])
    }

    pub fn zeta(n: u64) -> Self {
        Self::root_of_unity(n, 1)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Rational::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Rational::is_zero)
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    /// Re-expresses `self` in `Q(ζ_target)`; `target` must be a normalized
    /// multiple of the current conductor.
    pub fn embed(&self, target: u64) -> Self {
        if target == self.conductor {
            return self.clone();
        }
        assert!(
            target % self.conductor == 0 && normalize_conductor(target) == target,
            "cannot embed conductor {} into {}",
            self.conductor,
            target
        );
        let step = (target / self.conductor) as usize;
        let mut raw = vec![Rational::zero(); target as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[i * step] = c.clone();
        }
        CycNumber { conductor: target, coeffs: reduce(raw, target) }
    }

    fn common(a: &Self, b: &Self) -> (Self, Self) {
        if a.conductor == b.conductor {
            return (a.clone(), b.clone());
        }
        let l = lcm(a.conductor, b.conductor);
        (a.embed(l), b.embed(l))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycNumber { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    fn mul_same(a: &Self, b: &Self) -> Self {
        let m = a.conductor;
        let n = a.coeffs.len();
        if a.is_rational() {
            return b.scale(&a.coeffs[0]);
        }
        if b.is_rational() {
            return a.scale(&b.coeffs[0]);
        }
        let mut raw = vec![Rational::zero(); 2 * n - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        CycNumber { conductor: m, coeffs: reduce(raw, m) }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ArithError> {
        Ok(self * &other.inverse()?)
    }

    /// Multiplicative inverse via the extended gcd with `Φ_m`.
    pub fn inverse(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if let Some(r) = self.to_rational() {
            return Ok(Self::from_rational_at(r.recip(), self.conductor));
        }
        let f = RatPoly::new(self.coeffs.clone());
        let (g, s, _) = f.ext_gcd(&cyclotomic_poly(self.conductor));
        debug_assert_eq!(g, RatPoly::one());
        let mut coeffs = s.coeffs().to_vec();
        coeffs.resize(self.coeffs.len(), Rational::zero());
        Ok(CycNumber { conductor: self.conductor, coeffs })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.conductor);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `σ_t : ζ_m ↦ ζ_m^t`.
    pub fn galois(&self, t: i64) -> Result<Self, ArithError> {
        let m = self.conductor;
        if m > 1 && gcd_signed(t, m) != 1 {
            return Err(ArithError::NonUnitGalois { t, modulus: m });
        }
        if m == 1 || self.is_rational() {
            return Ok(self.clone());
        }
        let t = rem_euclid(t, m);
        let mut raw = vec![Rational::zero(); m as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[((i as u64 * t) % m) as usize] = c.clone();
            }
        }
        Ok(CycNumber { conductor: m, coeffs: reduce(raw, m) })
    }

    /// Complex conjugate (`σ_{−1}`).
    pub fn conj(&self) -> Self {
        self.galois(-1).expect("-1 is a unit")
    }

    /// True iff `self ∈ field`.
    pub fn lies_in(&self, field: FieldSpec) -> bool {
        if self.is_rational() {
            return true;
        }
        let mf = field.conductor();
        if self.conductor == mf {
            return true;
        }
        let l = lcm(self.conductor, mf);
        let z = self.embed(l);
        units_mod(l).into_iter().filter(|&s| s % mf == 1 % mf).all(|s| z.galois(s as i64).expect("unit") == z)
    }

    /// Coordinates of `self` at conductor `target`, if it lies in `Q(ζ_target)`.
    pub fn descend(&self, target: u64) -> Option<Self> {
        let target = normalize_conductor(target);
        if target == self.conductor {
            return Some(self.clone());
        }
        if self.is_rational() {
            return Some(Self::from_rational_at(self.coeffs[0].clone(), target));
        }
        if target % self.conductor == 0 {
            return Some(self.embed(target));
        }
        if !self.lies_in(FieldSpec::new(target)) {
            return None;
        }
        let l = lcm(self.conductor, target);
        let z = self.embed(l);
        let dim = euler_phi(target) as usize;
        let basis: Vec<Vec<Rational>> =
            (0..dim).map(|i| Self::root_of_unity(target, i as i64).embed(l).coeffs).collect();
        let sol = solve_columns(&basis, &z.coeffs)?;
        Some(CycNumber { conductor: target, coeffs: sol })
    }

    /// Smallest normalized conductor of a cyclotomic field containing `self`.
    pub fn minimal_conductor(&self) -> u64 {
        divisors(self.conductor)
            .into_iter()
            .filter(|&d| normalize_conductor(d) == d)
            .find(|&d| self.lies_in(FieldSpec::new(d)))
            .unwrap_or(self.conductor)
    }

    /// Descends to the minimal conductor.
    pub fn canonical(&self) -> Self {
        self.descend(self.minimal_conductor()).expect("descent to own minimal field")
    }

    /// `N_{Q(ζ_m)/Q}(self)`.
    pub fn norm(&self) -> Rational {
        let prod = units_mod(self.conductor)
            .into_iter()
            .fold(Self::one(self.conductor), |acc, t| &acc * &self.galois(t as i64).expect("unit"));
        prod.to_rational().expect("norm is rational")
    }

    /// Fingerprint suitable for hashing: coordinates at a fixed conductor.
    pub fn key_at(&self, m: u64) -> Vec<Rational> {
        self.embed(m).coeffs
    }
}

/// Solves `Σ_i x_i · cols[i] = rhs` over Q when a solution exists.
fn solve_columns(cols: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let rows = rhs.len();
    let n = cols.len();
    let mut a: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=n {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][n].clone();
    }
    Some(x)
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = Self::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycNumber {}

impl Add for &CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &CycNumber) -> CycNumber {
        let (a, b) = CycNumber::common(self, rhs);
        CycNumber { conductor: a.conductor, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect() }
    }
}

impl Sub for &CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &CycNumber) -> CycNumber {
        let (a, b) = CycNumber::common(self, rhs);
        CycNumber { conductor: a.conductor, coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect() }
    }
}

impl Mul for &CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &CycNumber) -> CycNumber {
        if self.conductor == rhs.conductor {
            return CycNumber::mul_same(self, rhs);
        }
        if self.is_rational() {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.is_rational() {
            return self.scale(&rhs.coeffs[0]);
        }
        let (a, b) = CycNumber::common(self, rhs);
        CycNumber::mul_same(&a, &b)
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber { (&self).$m(&rhs) }
        }
        impl $tr<&CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: &CycNumber) -> CycNumber { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -&self
    }
}

impl fmt::Display for CycNumber {
    /// GAP-style notation: `E(m)^i` stands for `ζ_m^i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let this = self.canonical();
        let mut first = true;
        for (i, c) in this.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 {
                        write!(f, "E({})", this.conductor)?;
                    } else {
                        write!(f, "E({})^{}", this.conductor, i)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct CycRecord {
    conductor: u64,
    coeffs: Vec<Rational>,
}

impl Serialize for CycNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let c = self.canonical();
        CycRecord { conductor: c.conductor, coeffs: c.coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rec = CycRecord::deserialize(d)?;
        CycNumber::from_coeffs(rec.conductor, rec.coeffs).map_err(serde::de::Error::custom)
    }
}

/// The field `Q(ζ_m)`; `m = 1` is Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldSpec {
    conductor: u64,
}

impl FieldSpec {
    /// `Q(ζ_m)`, with `m ≡ 2 (mod 4)` normalized to `m / 2`.
    pub fn new(m: u64) -> Self {
        assert!(m >= 1, "field conductor must be positive");
        FieldSpec { conductor: normalize_conductor(m) }
    }

    pub fn rationals() -> Self {
        Self::new(1)
    }

    pub fn conductor(self) -> u64 {
        self.conductor
    }

    /// `[F : Q]`
    pub fn degree(self) -> u64 {
        euler_phi(self.conductor)
    }

    pub fn contains(self, z: &CycNumber) -> bool {
        z.lies_in(self)
    }

    /// Units `t mod l` with `t ≡ 1 (mod m_F)`: the Galois group of
    /// `Q(ζ_l)` over `F ∩ Q(ζ_l)`, for any `l`.
    pub fn fixing_units(self, l: u64) -> Vec<u64> {
        let big = lcm(l, self.conductor);
        let mut out: Vec<u64> = units_mod(big)
            .into_iter()
            .filter(|&t| t % self.conductor == 1 % self.conductor)
            .map(|t| if l == 1 { 1 } else { t % l })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conductor == 1 {
            write!(f, "Q")
        } else {
            write!(f, "Q(E({}))", self.conductor)
        }
    }
}

/// `gcd(t, m) == 1` for the Galois action modulo `m`.
pub fn is_unit(t: i64, m: u64) -> bool {
    m == 1 || gcd(t.unsigned_abs(), m) == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(1), RatPoly::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(4), RatPoly::from_ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(12), RatPoly::from_ints(&[1, 0, -1, 0, 1]));
        // Φ_105 is the first with a coefficient outside {−1, 0, 1}.
        assert!(cyclotomic_coeffs(105).iter().any(|&c| c == -2));
    }

    #[test]
    fn phi12_divides_out_of_x12_minus_1() {
        // Oracle: (X^12 − 1) / (Φ1 Φ2 Φ3 Φ4 Φ6) by plain long division.
        let x12 = RatPoly::monomial(q(1), 12);
        let x12m1 = &x12 - &RatPoly::one();
        let others = [1u64, 2, 3, 4, 6].iter().fold(RatPoly::one(), |acc, &d| &acc * &cyclotomic_poly(d));
        assert_eq!(x12m1.exact_div(&others), Some(RatPoly::from_ints(&[1, 0, -1, 0, 1])));
    }

    #[test]
    fn product_of_cyclotomics_up_to_60() {
        for n in 1..=60u64 {
            let prod = divisors(n).into_iter().fold(RatPoly::one(), |acc, d| &acc * &cyclotomic_poly(d));
            let xn = &RatPoly::monomial(q(1), n as usize) - &RatPoly::one();
            assert_eq!(prod, xn, "n = {n}");
        }
    }

    #[test]
    fn normalize_examples() {
        // ζ_4^2 = −1, descended to conductor 1.
        let z = CycNumber::from_raw(vec![q(0), q(0), q(1), q(0)], 4).canonical();
        assert_eq!(z.conductor(), 1);
        assert_eq!(z, CycNumber::from_integer(-1));
        // 1 + ζ_3 + ζ_3^2 = 0
        assert!(CycNumber::from_raw(vec![q(1), q(1), q(1)], 3).is_zero());
        // ζ_6 lands at conductor 3 as 1 + ζ_3.
        let z6 = CycNumber::from_raw(vec![q(0), q(1), q(0), q(0), q(0), q(0)], 6);
        assert_eq!(z6.conductor(), 3);
        assert_eq!(z6.coeffs(), &[q(1), q(1)]);
        // and satisfies Φ_6(y) = y^2 − y + 1
        let check = &(&(&z6 * &z6) - &z6) + &CycNumber::one(3);
        assert!(check.is_zero());
        assert_eq!(CycNumber::zeta(2), CycNumber::from_integer(-1));
    }

    #[test]
    fn arithmetic_examples() {
        let z8 = CycNumber::zeta(8);
        assert_eq!(&z8 * &z8, CycNumber::zeta(4));
        let s2 = &z8 + &CycNumber::root_of_unity(8, 7);
        assert_eq!(&s2 * &s2, CycNumber::from_integer(2));
        let a = &CycNumber::one(3) + &CycNumber::zeta(3);
        let inv = a.inverse().unwrap();
        assert_eq!(&inv * &a, CycNumber::one(1));
        // 1 + ζ_3 = −ζ_3^2, so its inverse is −ζ_3.
        assert_eq!(inv, -CycNumber::zeta(3));
        assert_eq!(CycNumber::zero(5).inverse().unwrap_err(), ArithError::DivisionByZero);
    }

    #[test]
    fn galois_examples() {
        assert_eq!(CycNumber::zeta(5).galois(2).unwrap(), CycNumber::root_of_unity(5, 2));
        let a = &CycNumber::one(3) + &CycNumber::zeta(3);
        assert_eq!(a.galois(2).unwrap(), -CycNumber::zeta(3));
        let r = CycNumber::from_rational(Rational::new(3, 7));
        assert_eq!(r.galois(5).unwrap(), r);
        assert!(CycNumber::zeta(6).galois(3).is_err());
    }

    #[test]
    fn membership_examples() {
        let q_field = FieldSpec::rationals();
        assert!(!CycNumber::zeta(3).lies_in(q_field));
        let s = &CycNumber::zeta(3) + &CycNumber::root_of_unity(3, 2);
        assert!(s.lies_in(q_field));
        assert_eq!(s, CycNumber::from_integer(-1));
        let r = &CycNumber::zeta(8) + &CycNumber::root_of_unity(8, -1);
        assert!(r.lies_in(FieldSpec::new(8)));
        assert!(!r.lies_in(FieldSpec::new(4)));
        // √−3 = 2ζ_3 + 1 lies in Q(ζ_3) ⊂ Q(ζ_12)
        let sqrt_m3 = &CycNumber::zeta(3).scale(&q(2)) + &CycNumber::one(3);
        let lifted = sqrt_m3.embed(12);
        assert_eq!(lifted.minimal_conductor(), 3);
        assert_eq!(lifted.descend(3).unwrap().coeffs(), sqrt_m3.coeffs());
        assert!(lifted.descend(4).is_none());
        assert_eq!(FieldSpec::new(6), FieldSpec::new(3));
    }

    #[test]
    fn fixing_units_over_q_zeta4_act_transitively_mod_5() {
        let mut images = FieldSpec::new(4).fixing_units(5);
        images.sort();
        assert_eq!(images, vec![1, 2, 3, 4]);
        assert_eq!(FieldSpec::new(3).fixing_units(3), vec![1]);
    }

    #[test]
    fn serde_record() {
        let z = &CycNumber::zeta(8).scale(&Rational::new(1, 2)) + &CycNumber::one(8);
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"conductor":8,"coeffs":["1","1/2","0","0"]}"#);
        let back: CycNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
        assert!(serde_json::from_str::<CycNumber>(r#"{"conductor":8,"coeffs":["1"]}"#).is_err());
        assert!(serde_json::from_str::<CycNumber>(r#"{"conductor":6,"coeffs":["1","0"]}"#).is_err());
    }

    fn conductor() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![1u64, 3, 4, 5, 7, 8, 9, 12, 15])
    }

    fn element(m: u64) -> impl Strategy<Value = CycNumber> {
        let n = euler_phi(m) as usize;
        prop::collection::vec((-9i64..10, 1i64..5), n).prop_map(move |v| {
            CycNumber::from_coeffs(m, v.into_iter().map(|(a, b)| Rational::new(a, b)).collect()).unwrap()
        })
    }

    fn pair() -> impl Strategy<Value = (CycNumber, CycNumber, CycNumber)> {
        (conductor(), conductor()).prop_flat_map(|(m1, m2)| (element(m1), element(m2), element(m1)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn field_axioms((a, b, c) in pair()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !b.is_zero() {
                prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a.clone());
            }
        }

        #[test]
        fn galois_is_automorphism((a, b, _) in pair(), t in 1i64..60, s in 1i64..60) {
            let l = lcm(a.conductor(), b.conductor());
            prop_assume!(is_unit(t, l) && is_unit(s, l));
            let (x, y) = (a.embed(l), b.embed(l));
            prop_assert_eq!((&x * &y).galois(t).unwrap(), &x.galois(t).unwrap() * &y.galois(t).unwrap());
            prop_assert_eq!((&x + &y).galois(t).unwrap(), &x.galois(t).unwrap() + &y.galois(t).unwrap());
            prop_assert_eq!(x.galois(s).unwrap().galois(t).unwrap(), x.galois(t * s % l as i64).unwrap());
        }
    }
}
