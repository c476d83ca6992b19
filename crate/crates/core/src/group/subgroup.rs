//! Subgroups and the index-p setting `(G, H, x)`.

use std::sync::Arc;

use super::{ConjClassSet, FiniteGroup, GroupError};
use crate::arith::numtheory::is_prime;

/// A subgroup with its own enumerated structure. Own index `i` corresponds
/// to parent element `members[i]`; members are sorted, so the identity
/// stays at 0.
#[derive(Debug, Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
    position: Vec<Option<u32>>,
    group: Arc<FiniteGroup>,
}

impl Subgroup {
    /// The subgroup generated by the given parent elements.
    pub fn generated(parent: &Arc<FiniteGroup>, gens: &[usize]) -> Result<Self, GroupError> {
        for &g in gens {
            parent.check_element(g)?;
        }
        let members = parent.closure(gens);
        Ok(Self::build(parent, members, gens))
    }

    /// A subgroup given by its full member list; closure is checked.
    pub fn from_members(parent: &Arc<FiniteGroup>, members: Vec<usize>) -> Result<Self, GroupError> {
        let mut members = members;
        members.sort_unstable();
        members.dedup();
        let mut inside = vec![false; parent.order()];
        for &a in &members {
            inside[parent.check_element(a)?] = true;
        }
        if !inside[0] || members.iter().any(|&a| members.iter().any(|&b| !inside[parent.mul(a, b)])) {
            return Err(GroupError::Internal("member list is not closed under multiplication".into()));
        }
        let mut sub = Self::build(parent, members, &[]);
        // a small generating set for the own structure
        let own = sub.group.clone();
        let mut chosen = Vec::new();
        let mut span_len = 1;
        for a in 1..own.order() {
            if span_len == own.order() {
                break;
            }
            let mut trial = chosen.clone();
            trial.push(a);
            let len = own.closure(&trial).len();
            if len > span_len {
                chosen = trial;
                span_len = len;
            }
        }
        sub.group =
            Arc::new(FiniteGroup::from_trusted_table(own.order(), own.table.clone(), chosen, own.perms.clone()));
        Ok(sub)
    }

    fn build(parent: &Arc<FiniteGroup>, members: Vec<usize>, parent_gens: &[usize]) -> Self {
        let mut position = vec![None; parent.order()];
        for (i, &a) in members.iter().enumerate() {
            position[a] = Some(i as u32);
        }
        let k = members.len();
        let mut table = vec![0u32; k * k];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                table[i * k + j] = position[parent.mul(a, b)].expect("closed");
            }
        }
        let gens = parent_gens.iter().map(|&g| position[g].expect("generator inside") as usize).collect();
        let perms = parent.perms.as_ref().map(|(d, p)| (*d, members.iter().map(|&a| p[a].clone()).collect()));
        let group = Arc::new(FiniteGroup::from_trusted_table(k, table, gens, perms));
        Subgroup { parent: parent.clone(), members, position, group }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    /// The subgroup as a group in its own right.
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, a: usize) -> bool {
        self.position[a].is_some()
    }

    /// Own index of a parent element.
    pub fn position(&self, a: usize) -> Option<usize> {
        self.position[a].map(|i| i as usize)
    }

    /// Parent element of an own index.
    pub fn embed(&self, i: usize) -> usize {
        self.members[i]
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order()
    }

    pub fn is_normal(&self) -> bool {
        self.non_normal_witness().is_none()
    }

    fn non_normal_witness(&self) -> Option<(usize, usize)> {
        for &g in self.parent.generators() {
            for &h in &self.members {
                if !self.contains(self.parent.conj(g, h)) {
                    return Some((g, h));
                }
            }
        }
        None
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && (Arc::ptr_eq(&self.parent, &other.parent) || self.parent == other.parent)
    }
}

/// `H ⊴ G` of prime index `p` with a chosen coset generator `x`.
#[derive(Debug, Clone)]
pub struct IndexPContext {
    g: Arc<FiniteGroup>,
    h: Subgroup,
    p: u64,
    x: usize,
    transversal: Vec<usize>,
    g_classes: ConjClassSet,
    h_classes: ConjClassSet,
}

impl IndexPContext {
    pub fn new(h: Subgroup, x_hint: Option<usize>) -> Result<Self, GroupError> {
        let g = h.parent().clone();
        let index = h.index();
        if !is_prime(index as u64) {
            return Err(GroupError::IndexNotPrime(index));
        }
        if let Some((a, b)) = h.non_normal_witness() {
            return Err(GroupError::NotNormal { g: a, h: b });
        }
        let x = match x_hint {
            Some(x) => {
                g.check_element(x)?;
                if h.contains(x) {
                    return Err(GroupError::XInSubgroup(x));
                }
                x
            }
            None => (0..g.order()).find(|&a| !h.contains(a)).expect("proper subgroup"),
        };
        let p = index as u64;
        let transversal = (0..p as i64).map(|i| g.pow(x, i)).collect();
        let g_classes = g.conjugacy_classes();
        let h_classes = h.group().conjugacy_classes();
        Ok(IndexPContext { g, h, p, x, transversal, g_classes, h_classes })
    }

    pub fn g(&self) -> &Arc<FiniteGroup> {
        &self.g
    }

    pub fn h(&self) -> &Subgroup {
        &self.h
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn x(&self) -> usize {
        self.x
    }

    pub fn transversal(&self) -> &[usize] {
        &self.transversal
    }

    pub fn g_classes(&self) -> &ConjClassSet {
        &self.g_classes
    }

    pub fn h_classes(&self) -> &ConjClassSet {
        &self.h_classes
    }

    /// The same context with a different coset generator.
    pub fn with_x(&self, x: usize) -> Result<Self, GroupError> {
        self.g.check_element(x)?;
        if self.h.contains(x) {
            return Err(GroupError::XInSubgroup(x));
        }
        let mut ctx = self.clone();
        ctx.x = x;
        ctx.transversal = (0..self.p as i64).map(|i| self.g.pow(x, i)).collect();
        Ok(ctx)
    }

    /// H-class map `C_H(h) ↦ C_H(x h x⁻¹)`.
    pub fn x_class_map(&self) -> Vec<usize> {
        (0..self.h_classes.len())
            .map(|i| {
                let h = self.h.embed(self.h_classes.representative(i));
                let c = self.h.position(self.g.conj(self.x, h)).expect("H is normal");
                self.h_classes.class_of(c)
            })
            .collect()
    }

    /// For each H-class, the G-class containing it.
    pub fn fusion_map(&self) -> Vec<usize> {
        (0..self.h_classes.len())
            .map(|i| self.g_classes.class_of(self.h.embed(self.h_classes.representative(i))))
            .collect()
    }

    /// Checks that each G-class meeting H is the union of the H-classes
    /// `C_H(x^i h x^{−i})`.
    pub fn check_class_fusion(&self) -> bool {
        let xmap = self.x_class_map();
        for i in 0..self.h_classes.len() {
            let mut orbit = vec![i];
            let mut j = xmap[i];
            while j != i {
                orbit.push(j);
                j = xmap[j];
            }
            let mut union: Vec<usize> =
                orbit.iter().flat_map(|&c| self.h_classes.class(c).iter().map(|&a| self.h.embed(a))).collect();
            union.sort_unstable();
            union.dedup();
            let g_class = self.g_classes.class(self.g_classes.class_of(self.h.embed(self.h_classes.representative(i))));
            if union != g_class {
                return false;
            }
        }
        true
    }
}

/// All normal subgroups of index `p`, as kernels of maps onto `C_p`.
/// They are the hyperplanes of the elementary abelian quotient by the
/// subgroup generated by commutators and p-th powers.
pub fn index_p_normal_subgroups(g: &Arc<FiniteGroup>, p: u64) -> Vec<Subgroup> {
    if !is_prime(p) || g.order() as u64 % p != 0 {
        return Vec::new();
    }
    let n = g.order();
    let mut gens: Vec<usize> = Vec::new();
    let mut seen = vec![false; n];
    for a in 0..n {
        let pw = g.pow(a, p as i64);
        if !seen[pw] {
            seen[pw] = true;
            gens.push(pw);
        }
        for b in 0..a {
            let c = g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b));
            if !seen[c] {
                seen[c] = true;
                gens.push(c);
            }
        }
    }
    let n_sub = g.closure(&gens);

    let mut basis = Vec::new();
    let mut span = n_sub.clone();
    let mut inside = vec![false; n];
    for &a in &span {
        inside[a] = true;
    }
    for a in 0..n {
        if !inside[a] {
            basis.push(a);
            let mut all = gens.clone();
            all.extend(&basis);
            span = g.closure(&all);
            for &b in &span {
                inside[b] = true;
            }
        }
    }
    let r = basis.len();
    if r == 0 {
        return Vec::new();
    }

    let mut coords: Vec<Vec<u64>> = vec![Vec::new(); n];
    let total = (p as usize).pow(r as u32);
    for code in 0..total {
        let mut v = Vec::with_capacity(r);
        let mut c = code;
        let mut w = 0usize;
        for &b in &basis {
            let d = (c % p as usize) as u64;
            c /= p as usize;
            v.push(d);
            w = g.mul(w, g.pow(b, d as i64));
        }
        for &m in &n_sub {
            coords[g.mul(m, w)] = v.clone();
        }
    }

    let mut out = Vec::new();
    for code in 1..total {
        let mut f = Vec::with_capacity(r);
        let mut c = code;
        for _ in 0..r {
            f.push((c % p as usize) as u64);
            c /= p as usize;
        }
        // one functional per line: leading nonzero coordinate equal to 1
        if f.iter().find(|&&d| d != 0) != Some(&1) {
            continue;
        }
        let members: Vec<usize> =
            (0..n).filter(|&a| coords[a].iter().zip(&f).map(|(x, y)| x * y).sum::<u64>() % p == 0).collect();
        out.push(Subgroup::from_members(g, members).expect("kernel is a subgroup"));
    }
    out.sort_by(|a, b| a.members().cmp(b.members()));
    out
}
