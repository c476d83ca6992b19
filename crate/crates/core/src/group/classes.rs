//! Conjugacy classes and the power maps on them.

use super::{FiniteGroup, GroupError};
use crate::arith::numtheory::gcd_signed;

/// Conjugacy classes sorted by `(size, least member)`; the representative
/// of each class is its least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjClassSet {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl ConjClassSet {
    pub fn new(g: &FiniteGroup) -> Self {
        let n = g.order();
        let mut assigned = vec![false; n];
        let mut classes = Vec::new();
        // orbits under conjugation by the generators
        for a in 0..n {
            if assigned[a] {
                continue;
            }
            let mut class = Vec::new();
            let mut stack = vec![a];
            assigned[a] = true;
            while let Some(b) = stack.pop() {
                class.push(b);
                for &s in g.generators() {
                    let c = g.conj(s, b);
                    if !assigned[c] {
                        assigned[c] = true;
                        stack.push(c);
                    }
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes.sort_by_key(|c| (c.len(), c[0]));
        let mut class_of = vec![0; n];
        for (i, c) in classes.iter().enumerate() {
            for &a in c {
                class_of[a] = i;
            }
        }
        ConjClassSet { classes, class_of }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn representative(&self, i: usize) -> usize {
        self.classes[i][0]
    }

    pub fn size(&self, i: usize) -> usize {
        self.classes[i].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    /// Index of the class of inverses.
    pub fn inverse_class(&self, g: &FiniteGroup, i: usize) -> usize {
        self.class_of(g.inv(self.representative(i)))
    }
}

/// The map `class(g) ↦ class(g^t)`, verified on every class member.
pub fn power_class_map(g: &FiniteGroup, classes: &ConjClassSet, t: i64) -> Result<Vec<usize>, GroupError> {
    let e = g.exponent();
    if gcd_signed(t, e) != 1 {
        return Err(GroupError::NotCoprime { t, exponent: e });
    }
    let mut map = Vec::with_capacity(classes.len());
    for (i, class) in classes.classes().iter().enumerate() {
        let target = classes.class_of(g.pow(class[0], t));
        if class.iter().any(|&a| classes.class_of(g.pow(a, t)) != target) {
            return Err(GroupError::Internal(format!("power map by {t} is not constant on class {i}")));
        }
        map.push(target);
    }
    Ok(map)
}
