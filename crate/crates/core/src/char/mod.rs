//! Complex characters with exact cyclotomic values.
//!
//! Class functions and characters share one type; irreducibility is a
//! property checked through inner products.

mod dixon;
mod ops;

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::cyclotomic::cyclotomic_coeffs;
use crate::arith::numtheory::{lcm, units_mod};
use crate::arith::{ArithError, CycNumber, FieldSpec, Rational};
use crate::group::{power_class_map, ConjClassSet, FiniteGroup, GroupError};

pub use dixon::choose_prime;
pub use ops::{
    character_field_conductor, class_function_galois, conjugate_character, fs_indicator, galois_twist,
    induce_character, inner_product, restrict_character, FIrreducibleSpec, GaloisOrbit,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("character table verification failed: {0}")]
    Internal(String),
    #[error("class function has {got} values, expected {expected}")]
    Length { expected: usize, got: usize },
}

/// A class function, indexed by conjugacy class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Character {
    values: Vec<CycNumber>,
}

impl Character {
    pub fn new(values: Vec<CycNumber>) -> Self {
        Character { values }
    }

    pub fn values(&self) -> &[CycNumber] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &CycNumber {
        &self.values[class]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at the identity class.
    pub fn degree(&self) -> Rational {
        self.values[0].to_rational().expect("degree is rational")
    }

    pub fn add(&self, other: &Self) -> Self {
        Character { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &CycNumber) -> Self {
        Character { values: self.values.iter().map(|a| a * c).collect() }
    }

    pub fn zero(len: usize) -> Self {
        Character { values: vec![CycNumber::zero(1); len] }
    }

    pub fn sum<'a>(len: usize, chars: impl IntoIterator<Item = &'a Character>) -> Self {
        chars.into_iter().fold(Self::zero(len), |acc, c| acc.add(c))
    }
}

/// Verified table of irreducible characters, sorted by degree and then by
/// eigenvalue multiplicities (the trivial character comes first).
#[derive(Debug, Clone)]
pub struct CharacterTable {
    group: Arc<FiniteGroup>,
    classes: ConjClassSet,
    exponent: u64,
    ell: u64,
    root: u64,
    chars: Vec<Character>,
    modular: Vec<Vec<u64>>,
    lookup: HashMap<Vec<u64>, usize>,
}

impl CharacterTable {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn classes(&self) -> &ConjClassSet {
        &self.classes
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// The prime used for the modular eigenvector computation.
    pub fn prime(&self) -> u64 {
        self.ell
    }

    pub fn characters(&self) -> &[Character] {
        &self.chars
    }

    pub fn character(&self, i: usize) -> &Character {
        &self.chars[i]
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.chars.iter().map(|c| c.degree().to_i64().expect("small degree") as u64).collect()
    }

    /// Index of the twist `χ_i^{σ_t}` in the table.
    pub fn twist_index(&self, i: usize, t: i64) -> Result<usize, CharError> {
        let pm = power_class_map(&self.group, &self.classes, t)?;
        let key: Vec<u64> = pm.iter().map(|&k| self.modular[i][k]).collect();
        self.lookup
            .get(&key)
            .copied()
            .ok_or_else(|| CharError::Internal(format!("twist of character {i} by {t} is not in the table")))
    }

    /// Table index of an irreducible class function, if it is one.
    pub fn index_of(&self, chi: &Character) -> Option<usize> {
        let key = self.reduce_values(chi)?;
        let i = *self.lookup.get(&key)?;
        (self.chars[i] == *chi).then_some(i)
    }

    fn reduce_values(&self, chi: &Character) -> Option<Vec<u64>> {
        chi.values.iter().map(|v| self.reduce_mod_ell(v)).collect()
    }

    /// Image of a value in `F_ℓ` under `ζ_e ↦ root`.
    fn reduce_mod_ell(&self, z: &CycNumber) -> Option<u64> {
        use crate::arith::numtheory::{inv_mod_prime, mul_mod, pow_mod};
        let m = z.conductor();
        if self.exponent % m != 0 {
            return None;
        }
        let zm = pow_mod(self.root, self.exponent / m, self.ell);
        let mut acc = 0u64;
        let mut w = 1u64;
        let ell = num_bigint::BigInt::from(self.ell);
        for c in z.coeffs() {
            if !c.is_zero() {
                let num = ((c.numer() % &ell + &ell) % &ell).try_into().ok()?;
                let den: u64 = ((c.denom() % &ell + &ell) % &ell).try_into().ok()?;
                if den == 0 {
                    return None;
                }
                acc = (acc + mul_mod(mul_mod(num, inv_mod_prime(den, self.ell), self.ell), w, self.ell)) % self.ell;
            }
            w = mul_mod(w, zm, self.ell);
        }
        Some(acc)
    }

    /// Galois orbits of the irreducibles under `{σ_t : t ≡ 1 mod m_F}`.
    pub fn galois_orbits(&self, field: FieldSpec) -> Result<Vec<GaloisOrbit>, CharError> {
        let units = field_units_mod(self.exponent, field);
        let mut assigned = vec![false; self.len()];
        let mut orbits = Vec::new();
        for i in 0..self.len() {
            if assigned[i] {
                continue;
            }
            let mut members = Vec::new();
            let mut stabilizer = Vec::new();
            for &t in &units {
                let j = self.twist_index(i, t as i64)?;
                if j == i {
                    stabilizer.push(t);
                }
                members.push(j);
            }
            members.sort_unstable();
            members.dedup();
            for &j in &members {
                assigned[j] = true;
            }
            orbits.push(GaloisOrbit::new(field, members, stabilizer));
        }
        Ok(orbits)
    }

    /// The orbit containing character `i`.
    pub fn orbit_of(&self, i: usize, field: FieldSpec) -> Result<GaloisOrbit, CharError> {
        Ok(self
            .galois_orbits(field)?
            .into_iter()
            .find(|o| o.members().contains(&i))
            .expect("orbits partition the table"))
    }
}

/// `{t mod e : t ≡ 1 (mod m_F), gcd(t, e) = 1}`, sorted.
pub fn field_units_mod(e: u64, field: FieldSpec) -> Vec<u64> {
    let mf = field.conductor();
    let big = lcm(e, mf);
    let mut out: Vec<u64> = units_mod(big)
        .into_iter()
        .filter(|&t| t % mf == 1 % mf)
        .map(|t| t % e.max(1))
        .map(|t| if e == 1 { 1 } else { t })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Computes and verifies the character table of `g`.
pub fn character_table(g: &Arc<FiniteGroup>) -> Result<CharacterTable, CharError> {
    let classes = g.conjugacy_classes();
    let e = g.exponent();
    let r = classes.len();
    let modular = dixon::modular_table(g, &classes, e)?;

    let orders: Vec<u64> = (0..r).map(|k| g.element_order(classes.representative(k))).collect();
    let mut rows: Vec<(u64, Vec<Vec<u32>>, Vec<u64>)> =
        modular.chars.into_iter().map(|c| (c.degree, c.mults, c.values)).collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)));

    // root sums at exponent e: per class, (exponent mod e, multiplicity)
    let root_sums: Vec<Vec<Vec<(u64, i64)>>> = rows
        .iter()
        .map(|(_, mults, _)| {
            (0..r)
                .map(|k| {
                    let step = e / orders[k];
                    mults[k]
                        .iter()
                        .enumerate()
                        .filter(|(_, &m)| m > 0)
                        .map(|(a, &m)| (a as u64 * step, m as i64))
                        .collect()
                })
                .collect()
        })
        .collect();
    verify_orthogonality(g, &classes, e, &root_sums)?;

    let chars: Vec<Character> = root_sums
        .iter()
        .map(|row| {
            Character::new(
                row.iter()
                    .map(|terms| {
                        CycNumber::from_terms(e, terms.iter().map(|&(a, m)| (a as i64, Rational::from_integer(m))))
                    })
                    .collect(),
            )
        })
        .collect();
    let modular_values: Vec<Vec<u64>> = rows.into_iter().map(|(_, _, v)| v).collect();
    let lookup = modular_values.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect::<HashMap<_, _>>();
    if lookup.len() != r {
        return Err(CharError::Internal("characters coincide modulo the chosen prime".into()));
    }
    Ok(CharacterTable {
        group: g.clone(),
        classes,
        exponent: e,
        ell: modular.ell,
        root: modular.root,
        chars,
        modular: modular_values,
        lookup,
    })
}

/// Checks that a vector of `Z[C_e]` maps to zero in `Q(ζ_e)`.
fn vanishes_in_cyclotomic(mut v: Vec<i64>, e: u64) -> bool {
    let phi = cyclotomic_coeffs(e);
    let d = phi.len() - 1;
    for i in (d..v.len()).rev() {
        let c = v[i];
        if c == 0 {
            continue;
        }
        v[i] = 0;
        for (j, &p) in phi[..d].iter().enumerate() {
            if p != 0 {
                v[i - d + j] -= c * p;
            }
        }
    }
    v.iter().all(|&c| c == 0)
}

/// Exact first and second orthogonality on the root-sum representation.
fn verify_orthogonality(
    g: &FiniteGroup,
    classes: &ConjClassSet,
    e: u64,
    rs: &[Vec<Vec<(u64, i64)>>],
) -> Result<(), CharError> {
    let n = g.order() as i64;
    let r = classes.len();
    let eu = e as usize;
    if rs.iter().map(|row| row[0][0].1 * row[0][0].1).sum::<i64>() != n {
        return Err(CharError::Internal("squared degrees do not sum to the group order".into()));
    }
    for i in 0..r {
        for j in i..r {
            let mut acc = vec![0i64; eu];
            for k in 0..r {
                let size = classes.size(k) as i64;
                for &(a, ma) in &rs[i][k] {
                    for &(b, mb) in &rs[j][k] {
                        acc[((a + e - b) % e) as usize] += size * ma * mb;
                    }
                }
            }
            if i == j {
                acc[0] -= n;
            }
            if !vanishes_in_cyclotomic(acc, e) {
                return Err(CharError::Internal(format!("rows {i} and {j} violate orthogonality")));
            }
        }
    }
    for k in 0..r {
        let centralizer = n / classes.size(k) as i64;
        for l in k..r {
            let mut acc = vec![0i64; eu];
            for row in rs {
                for &(a, ma) in &row[k] {
                    for &(b, mb) in &row[l] {
                        acc[((a + e - b) % e) as usize] += ma * mb;
                    }
                }
            }
            if k == l {
                acc[0] -= centralizer;
            }
            if !vanishes_in_cyclotomic(acc, e) {
                return Err(CharError::Internal(format!("columns {k} and {l} violate orthogonality")));
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ClassJson {
    size: usize,
    representative: usize,
    order: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    permutation: Option<Vec<u32>>,
}

#[derive(Serialize)]
struct TableJson<'a> {
    order: usize,
    exponent: u64,
    prime: u64,
    classes: Vec<ClassJson>,
    characters: &'a [Character],
}

impl Serialize for CharacterTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let perms = self.group.permutations();
        let classes = (0..self.classes.len())
            .map(|k| {
                let rep = self.classes.representative(k);
                ClassJson {
                    size: self.classes.size(k),
                    representative: rep,
                    order: self.group.element_order(rep),
                    permutation: perms.map(|(_, p)| p[rep].iter().map(|&v| v + 1).collect()),
                }
            })
            .collect();
        TableJson {
            order: self.group.order(),
            exponent: self.exponent,
            prime: self.ell,
            classes,
            characters: &self.chars,
        }
        .serialize(s)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::group::tests::{perm_group, q8, s3};

    pub fn table(g: FiniteGroup) -> CharacterTable {
        character_table(&Arc::new(g)).unwrap()
    }

    #[test]
    fn small_tables() {
        let t = table(s3());
        assert_eq!(t.degrees(), vec![1, 1, 2]);
        // trivial first
        assert!(t.character(0).values().iter().all(CycNumber::is_one));
        let t = table(q8());
        assert_eq!(t.degrees(), vec![1, 1, 1, 1, 2]);
        let c3 = table(perm_group(3, &[&[2, 3, 1]]));
        assert_eq!(c3.degrees(), vec![1, 1, 1]);
        let w = CycNumber::zeta(3);
        let g = c3.classes().class_of(c3.group().generators()[0]);
        let mut vals: Vec<CycNumber> = (0..3).map(|i| c3.character(i).value(g).clone()).collect();
        vals.sort_by_key(|v| v.key_at(3));
        let mut expected = vec![CycNumber::one(1), w.clone(), w.pow(2)];
        expected.sort_by_key(|v| v.key_at(3));
        assert_eq!(vals, expected);
    }

    #[test]
    fn larger_tables() {
        let s4 = table(perm_group(4, &[&[2, 3, 4, 1], &[2, 1, 3, 4]]));
        assert_eq!(s4.degrees(), vec![1, 1, 2, 3, 3]);
        let a5 = table(perm_group(5, &[&[2, 3, 1, 4, 5], &[1, 2, 4, 5, 3], &[2, 3, 4, 5, 1]]));
        assert_eq!(a5.degrees(), vec![1, 3, 3, 4, 5]);
        let c8 = table(perm_group(8, &[&[2, 3, 4, 5, 6, 7, 8, 1]]));
        assert_eq!(c8.len(), 8);
    }

    #[test]
    fn cyclotomic_vanishing() {
        assert!(vanishes_in_cyclotomic(vec![1, 1, 1], 3));
        assert!(!vanishes_in_cyclotomic(vec![1, 1, 0], 3));
        assert!(vanishes_in_cyclotomic(vec![1, 0, 1, 0], 4));
    }
}
