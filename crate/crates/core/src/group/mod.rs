//! Finite groups given by permutation generators or a Cayley table.
//!
//! Elements are labelled `0..n` in breadth-first discovery order with the
//! identity at 0. For permutations, `a * b` means "apply `a`, then `b`".

mod algebra;
mod classes;
mod subgroup;

use std::collections::{HashMap, VecDeque};
use std::fmt;

pub use algebra::{algebra_mul, class_sum, class_sum_pth_power, GroupAlgebraElement};
pub use classes::{power_class_map, ConjClassSet};
pub use subgroup::{index_p_normal_subgroups, IndexPContext, Subgroup};

/// Default bound on the group order; overridden by `INDEXP_MAX_ORDER`.
pub const DEFAULT_ORDER_CAP: usize = 5000;
pub const ORDER_CAP_ENV: &str = "INDEXP_MAX_ORDER";

pub fn order_cap() -> usize {
    std::env::var(ORDER_CAP_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_ORDER_CAP)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("group order exceeds the cap of {cap} elements")]
    OrderCap { cap: usize },
    #[error("generator {index} is not a permutation of 1..{degree}")]
    NotBijective { index: usize, degree: usize },
    #[error("cayley table is not square or has out-of-range entries")]
    MalformedTable,
    #[error("cayley table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("cayley table has no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("element index {0} is out of range")]
    BadElement(usize),
    #[error("subgroup is not normal: conjugating {h} by {g} leaves it")]
    NotNormal { g: usize, h: usize },
    #[error("index {0} is not prime")]
    IndexNotPrime(usize),
    #[error("coset generator {0} lies in the subgroup")]
    XInSubgroup(usize),
    #[error("power {t} is not coprime to the exponent {exponent}")]
    NotCoprime { t: i64, exponent: u64 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// Enumerated finite group with full multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    gens: Vec<usize>,
    perms: Option<(usize, Vec<Vec<u32>>)>,
}

impl FiniteGroup {
    /// Closes the given permutations (1-based images) under composition.
    pub fn from_perm_generators(degree: usize, generators: &[Vec<usize>]) -> Result<Self, GroupError> {
        Self::from_perm_generators_capped(degree, generators, order_cap())
    }

    pub fn from_perm_generators_capped(
        degree: usize,
        generators: &[Vec<usize>],
        cap: usize,
    ) -> Result<Self, GroupError> {
        let mut gens0: Vec<Vec<u32>> = Vec::with_capacity(generators.len());
        for (index, g) in generators.iter().enumerate() {
            let mut seen = vec![false; degree];
            if g.len() != degree {
                return Err(GroupError::NotBijective { index, degree });
            }
            for &v in g {
                if v == 0 || v > degree || seen[v - 1] {
                    return Err(GroupError::NotBijective { index, degree });
                }
                seen[v - 1] = true;
            }
            gens0.push(g.iter().map(|&v| (v - 1) as u32).collect());
        }

        let id: Vec<u32> = (0..degree as u32).collect();
        let mut elems = vec![id.clone()];
        let mut lookup: HashMap<Vec<u32>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for g in &gens0 {
                let prod = compose(&elems[e], g);
                if !lookup.contains_key(&prod) {
                    if elems.len() == cap {
                        return Err(GroupError::OrderCap { cap });
                    }
                    lookup.insert(prod.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(prod);
                }
            }
        }

        let n = elems.len();
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = lookup[&compose(&elems[a], &elems[b])] as u32;
            }
        }
        let gens = gens0.iter().map(|g| lookup[g]).collect();
        let mut group = FiniteGroup { n, table, inv: Vec::new(), gens, perms: Some((degree, elems)) };
        group.fill_inverses()?;
        Ok(group)
    }

    /// Builds a group from a multiplication table, validating the group
    /// axioms. The identity is relabelled to 0 if necessary.
    pub fn from_cayley_table(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        Self::from_cayley_table_opts(table, true)
    }

    pub fn from_cayley_table_opts(rows: &[Vec<usize>], check_associative: bool) -> Result<Self, GroupError> {
        let n = rows.len();
        let cap = order_cap();
        if n > cap {
            return Err(GroupError::OrderCap { cap });
        }
        if n == 0 || rows.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(GroupError::MalformedTable);
        }
        let e = (0..n).find(|&e| (0..n).all(|a| rows[e][a] == a && rows[a][e] == a)).ok_or(GroupError::NoIdentity)?;
        // swap labels 0 and e
        let relabel = |v: usize| {
            if v == e {
                0
            } else if v == 0 {
                e
            } else {
                v
            }
        };
        let mut table = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                table[relabel(a) * n + relabel(b)] = relabel(rows[a][b]) as u32;
            }
        }
        let mut group = FiniteGroup { n, table, inv: Vec::new(), gens: Vec::new(), perms: None };
        group.fill_inverses()?;
        if check_associative {
            for a in 0..n {
                for b in 0..n {
                    let ab = group.mul(a, b);
                    for c in 0..n {
                        if group.mul(ab, c) != group.mul(a, group.mul(b, c)) {
                            return Err(GroupError::NotAssociative { a: relabel(a), b: relabel(b), c: relabel(c) });
                        }
                    }
                }
            }
        }
        group.gens = group.greedy_generators();
        Ok(group)
    }

    /// Trusted constructor for tables produced internally.
    pub(crate) fn from_trusted_table(
        n: usize,
        table: Vec<u32>,
        gens: Vec<usize>,
        perms: Option<(usize, Vec<Vec<u32>>)>,
    ) -> Self {
        let mut group = FiniteGroup { n, table, inv: Vec::new(), gens, perms };
        group.fill_inverses().expect("trusted table is a group");
        group
    }

    fn fill_inverses(&mut self) -> Result<(), GroupError> {
        let n = self.n;
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if self.table[a * n + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
            if inv[a] == u32::MAX || self.table[inv[a] as usize * n + a] != 0 {
                return Err(GroupError::NoInverse(a));
            }
        }
        self.inv = inv;
        Ok(())
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        let mut inside = vec![false; self.n];
        inside[0] = true;
        for g in 1..self.n {
            if !inside[g] {
                gens.push(g);
                span = self.closure(&gens);
                for &s in &span {
                    inside[s] = true;
                }
            }
            if span.len() == self.n {
                break;
            }
        }
        gens
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Permutation degree and images (0-based), when built from permutations.
    pub fn permutations(&self) -> Option<(usize, &[Vec<u32>])> {
        self.perms.as_ref().map(|(d, p)| (*d, p.as_slice()))
    }

    pub fn check_element(&self, a: usize) -> Result<usize, GroupError> {
        if a < self.n {
            Ok(a)
        } else {
            Err(GroupError::BadElement(a))
        }
    }

    /// Element index of a 1-based permutation, if it belongs to the group.
    pub fn find_permutation(&self, images: &[usize]) -> Option<usize> {
        let (_, perms) = self.permutations()?;
        let target: Vec<u32> = images.iter().map(|&v| v.wrapping_sub(1) as u32).collect();
        perms.iter().position(|p| *p == target)
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut e = k.unsigned_abs();
        let (mut acc, mut b) = (0usize, base);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// `g a g⁻¹`
    pub fn conj(&self, g: usize, a: usize) -> usize {
        self.mul(self.mul(g, a), self.inv(g))
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut k = 1;
        let mut b = a;
        while b != 0 {
            b = self.mul(b, a);
            k += 1;
        }
        k
    }

    pub fn element_orders(&self) -> Vec<u64> {
        (0..self.n).map(|a| self.element_order(a)).collect()
    }

    /// Least common multiple of the element orders.
    pub fn exponent(&self) -> u64 {
        self.element_orders().into_iter().fold(1, crate::arith::numtheory::lcm)
    }

    /// Sorted closure of `gens` under multiplication.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.n];
        inside[0] = true;
        let mut members = vec![0usize];
        let mut i = 0;
        while i < members.len() {
            let a = members[i];
            for &g in gens {
                let b = self.mul(a, g);
                if !inside[b] {
                    inside[b] = true;
                    members.push(b);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        members
    }

    pub fn conjugacy_classes(&self) -> ConjClassSet {
        ConjClassSet::new(self)
    }
}

fn compose(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().map(|&i| b[i as usize]).collect()
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("order", &self.n).field("generators", &self.gens).finish()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn perm_group(degree: usize, gens: &[&[usize]]) -> FiniteGroup {
        let gens: Vec<Vec<usize>> = gens.iter().map(|g| g.to_vec()).collect();
        FiniteGroup::from_perm_generators(degree, &gens).unwrap()
    }

    pub fn s3() -> FiniteGroup {
        perm_group(3, &[&[2, 3, 1], &[2, 1, 3]])
    }

    /// Left-regular representation of Q8 = {±1, ±i, ±j, ±k}; points
    /// 1..8 = 1, i, j, k, −1, −i, −j, −k. Generators i, j.
    pub fn q8() -> FiniteGroup {
        perm_group(8, &[&[2, 5, 4, 7, 6, 1, 8, 3], &[3, 8, 5, 2, 7, 4, 1, 6]])
    }

    fn census(g: &FiniteGroup) -> Vec<u64> {
        let mut o = g.element_orders();
        o.sort_unstable();
        o
    }

    #[test]
    fn perm_examples() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.exponent(), 6);
        let c4 = perm_group(4, &[&[2, 3, 4, 1]]);
        assert_eq!(census(&c4), vec![1, 2, 4, 4]);
        let q = q8();
        assert_eq!(q.order(), 8);
        assert_eq!(census(&q), vec![1, 2, 4, 4, 4, 4, 4, 4]);
        assert_eq!(q.exponent(), 4);
        let triv = FiniteGroup::from_perm_generators(3, &[]).unwrap();
        assert_eq!(triv.order(), 1);
        assert_eq!(triv.exponent(), 1);
    }

    #[test]
    fn perm_errors() {
        assert!(matches!(
            FiniteGroup::from_perm_generators(3, &[vec![1, 1, 2]]),
            Err(GroupError::NotBijective { index: 0, degree: 3 })
        ));
        let s5 = vec![vec![2, 3, 4, 5, 1], vec![2, 1, 3, 4, 5]];
        assert_eq!(FiniteGroup::from_perm_generators_capped(5, &s5, 100), Err(GroupError::OrderCap { cap: 100 }));
        assert_eq!(FiniteGroup::from_perm_generators_capped(5, &s5, 120).unwrap().order(), 120);
    }

    fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    #[test]
    fn cayley_examples() {
        let klein: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        let k = FiniteGroup::from_cayley_table(&klein).unwrap();
        assert_eq!(k.order(), 4);
        assert_eq!(k.exponent(), 2);
        let c6 = FiniteGroup::from_cayley_table(&cyclic_table(6)).unwrap();
        assert_eq!(census(&c6), vec![1, 2, 3, 3, 6, 6]);
        // identity stored at label 2 gets moved to 0
        let shifted: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (a + b + 1) % 3).collect()).collect();
        let g = FiniteGroup::from_cayley_table(&shifted).unwrap();
        assert_eq!(g.mul(0, 1), 1);
    }

    #[test]
    fn non_associative_latin_square() {
        // a loop of order 5 with 1·1 = 0, impossible in C5
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        for i in 0..5 {
            let mut r = t[i].clone();
            let mut c: Vec<usize> = (0..5).map(|j| t[j][i]).collect();
            r.sort_unstable();
            c.sort_unstable();
            assert_eq!(r, (0..5).collect::<Vec<_>>());
            assert_eq!(c, (0..5).collect::<Vec<_>>());
        }
        let err = FiniteGroup::from_cayley_table(&t).unwrap_err();
        assert!(matches!(err, GroupError::NotAssociative { .. }), "{err}");
        assert!(FiniteGroup::from_cayley_table_opts(&t, false).is_ok());
    }
}
