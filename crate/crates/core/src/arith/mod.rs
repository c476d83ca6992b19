//! Exact arithmetic: rationals, polynomials over Q, cyclotomic fields and
//! the root-finding machinery built on them.

pub mod cyclotomic;
pub mod cycpoly;
pub mod factor;
pub mod numtheory;
pub mod poly;
pub mod rational;
pub mod roots;

pub use cyclotomic::{cyclotomic_poly, CycNumber, FieldSpec};
pub use cycpoly::CycPoly;
pub use factor::{factor_over_q, QFactorization};
pub use poly::RatPoly;
pub use rational::Rational;
pub use roots::{factor_phi_p_over_field, pth_root_in_field, zeta_p_in_field, PhiFactor};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("sigma_{t} is not defined modulo {modulus}: gcd({t}, {modulus}) != 1")]
    NonUnitGalois { t: i64, modulus: u64 },
    #[error("conductor {0} is not normalized (must be positive and not 2 mod 4)")]
    BadConductor(u64),
    #[error("conductor {conductor} needs {expected} coordinates, got {got}")]
    CoordinateCount { conductor: u64, expected: usize, got: usize },
    #[error("p-th root of zero requested")]
    ZeroRadicand,
    #[error("{0} is not prime")]
    NotPrime(u64),
}
