//! Polynomials with coefficients in a fixed cyclotomic field.

use std::fmt;

use super::cyclotomic::CycNumber;
use super::numtheory::normalize_conductor;
use super::poly::RatPoly;
use super::rational::Rational;
use super::ArithError;

#[derive(Clone, PartialEq, Eq)]
pub struct CycPoly {
    conductor: u64,
    coeffs: Vec<CycNumber>,
}

impl CycPoly {
    /// Coefficients lowest degree first; every coefficient is embedded at
    /// conductor `m`.
    pub fn new(m: u64, coeffs: Vec<CycNumber>) -> Self {
        let m = normalize_conductor(m);
        let mut coeffs: Vec<CycNumber> = coeffs.into_iter().map(|c| c.embed(m)).collect();
        while coeffs.last().is_some_and(CycNumber::is_zero) {
            coeffs.pop();
        }
        CycPoly { conductor: m, coeffs }
    }

    pub fn from_ratpoly(m: u64, f: &RatPoly) -> Self {
        Self::new(m, f.coeffs().iter().map(|c| CycNumber::from_rational_at(c.clone(), m)).collect())
    }

    pub fn zero(m: u64) -> Self {
        Self::new(m, Vec::new())
    }

    pub fn one(m: u64) -> Self {
        Self::new(m, vec![CycNumber::one(m)])
    }

    /// `X − a`
    pub fn linear(m: u64, root: &CycNumber) -> Self {
        Self::new(m, vec![-root, CycNumber::one(m)])
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[CycNumber] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> CycNumber {
        self.coeffs.last().cloned().unwrap_or_else(|| CycNumber::zero(self.conductor))
    }

    fn coeff(&self, i: usize) -> CycNumber {
        self.coeffs.get(i).cloned().unwrap_or_else(|| CycNumber::zero(self.conductor))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(self.conductor, (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(self.conductor, (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.conductor);
        }
        let m = self.conductor;
        let mut out = vec![CycNumber::zero(m); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Self::new(m, out)
    }

    pub fn scale(&self, c: &CycNumber) -> Self {
        Self::new(self.conductor, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading().inverse().expect("nonzero leading coefficient");
        self.scale(&inv)
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), ArithError> {
        let dd = d.degree().ok_or(ArithError::DivisionByZero)?;
        let m = self.conductor;
        let inv = d.leading().inverse()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(m), self.clone()));
        }
        let mut quot = vec![CycNumber::zero(m); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = &rem[i] * &inv;
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[i - dd + j] = &rem[i - dd + j] - &(&q * dc);
                }
            }
            quot[i - dd] = q;
        }
        rem.truncate(dd);
        Ok((Self::new(m, quot), Self::new(m, rem)))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &CycNumber) -> CycNumber {
        self.coeffs.iter().rev().fold(CycNumber::zero(self.conductor), |acc, c| &(&acc * x) + c)
    }

    /// Applies `σ_t` to every coefficient.
    pub fn galois(&self, t: i64) -> Result<Self, ArithError> {
        let coeffs = self.coeffs.iter().map(|c| c.galois(t)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(self.conductor, coeffs))
    }

    /// `f(X + a)`
    pub fn shift(&self, a: &CycNumber) -> Self {
        let m = self.conductor;
        let lin = Self::new(m, vec![a.clone(), CycNumber::one(m)]);
        self.coeffs.iter().rev().fold(Self::zero(m), |acc, c| acc.mul(&lin).add(&Self::new(m, vec![c.clone()])))
    }

    /// The same polynomial as a rational one, if all coefficients are rational.
    pub fn to_ratpoly(&self) -> Option<RatPoly> {
        let coeffs: Option<Vec<Rational>> = self.coeffs.iter().map(CycNumber::to_rational).collect();
        coeffs.map(RatPoly::new)
    }
}

impl fmt::Debug for CycPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})*X^{i}"))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_over_q_zeta4() {
        // X^2 + 1 = (X − i)(X + i); gcd with (X − i)(X − 2) is X − i.
        let m = 4;
        let i = CycNumber::zeta(4);
        let f = CycPoly::from_ratpoly(m, &RatPoly::from_ints(&[1, 0, 1]));
        let two = CycNumber::from_integer(2);
        let g = CycPoly::linear(m, &i).mul(&CycPoly::linear(m, &two));
        assert_eq!(f.gcd(&g), CycPoly::linear(m, &i));
        assert!(f.eval(&i).is_zero());
        let shifted = f.shift(&i);
        assert!(shifted.eval(&CycNumber::zero(4)).is_zero());
    }
}
