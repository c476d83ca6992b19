//! Dixon–Schneider: simultaneous eigenvectors of the class matrices over
//! `F_ℓ`, followed by an exact lift of the character values.

use crate::arith::numtheory::{inv_mod_prime, mul_mod, pow_mod, primes_one_mod, primitive_root};
use crate::group::{ConjClassSet, FiniteGroup};

use super::CharError;

/// Smallest prime `ℓ ≡ 1 (mod e)` with `ℓ > 2|G|`.
pub fn choose_prime(order: u64, exponent: u64) -> u64 {
    primes_one_mod(exponent, 2 * order).next().expect("infinitely many primes")
}

/// One irreducible character reduced mod ℓ, with its eigenvalue
/// multiplicities: for class `k` with representative of order `o`,
/// `mults[k][a]` is the multiplicity of `ζ_o^a`.
pub(super) struct ModularCharacter {
    pub degree: u64,
    pub values: Vec<u64>,
    pub mults: Vec<Vec<u32>>,
}

pub(super) struct ModularTable {
    pub ell: u64,
    /// image of `ζ_e` in `F_ℓ`
    pub root: u64,
    pub chars: Vec<ModularCharacter>,
}

struct Field {
    p: u64,
}

impl Field {
    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }
    fn inv(&self, a: u64) -> u64 {
        inv_mod_prime(a, self.p)
    }
}

/// Row-reduces `rows` in place and returns the pivot columns.
fn rref(f: &Field, rows: &mut Vec<Vec<u64>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]);
        for v in rows[r].iter_mut() {
            *v = f.mul(*v, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let k = rows[i][c];
                for j in c..ncols {
                    let t = f.mul(k, rows[r][j]);
                    rows[i][j] = f.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of the right nullspace of the square matrix `a`.
fn nullspace(f: &Field, a: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = a.len();
    let mut rows = a.to_vec();
    let pivots = rref(f, &mut rows);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; n];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.sub(0, rows[i][fc]);
            }
            v
        })
        .collect()
}

/// Characteristic polynomial (lowest degree first) via reduction to upper
/// Hessenberg form.
fn charpoly(f: &Field, mut a: Vec<Vec<u64>>) -> Vec<u64> {
    let n = a.len();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| a[i][m - 1] != 0) else {
            continue;
        };
        if i != m {
            a.swap(i, m);
            for row in a.iter_mut() {
                row.swap(i, m);
            }
        }
        let inv = f.inv(a[m][m - 1]);
        for j in m + 1..n {
            let u = f.mul(a[j][m - 1], inv);
            if u == 0 {
                continue;
            }
            for c in 0..n {
                let t = f.mul(u, a[m][c]);
                a[j][c] = f.sub(a[j][c], t);
            }
            for row in a.iter_mut() {
                let t = f.mul(u, row[j]);
                row[m] = f.add(row[m], t);
            }
        }
    }
    // p_k = char poly of the leading k×k block
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let prev = &polys[k];
        let mut next = vec![0u64; k + 2];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = f.add(next[i + 1], c);
            next[i] = f.sub(next[i], f.mul(a[k][k], c));
        }
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = f.mul(prod, a[i + 1][i]);
            let coef = f.mul(prod, a[i][k]);
            if coef == 0 {
                continue;
            }
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = f.sub(next[d], f.mul(coef, c));
            }
        }
        polys.push(next);
    }
    polys.pop().expect("nonempty")
}

fn roots(f: &Field, poly: &[u64]) -> Vec<u64> {
    (0..f.p).filter(|&x| poly.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c)) == 0).collect()
}

/// Class structure constants `a[j][k] = #{y ∈ C_i : y⁻¹ g_k ∈ C_j}`.
fn class_matrix(g: &FiniteGroup, classes: &ConjClassSet, i: usize, p: u64) -> Vec<Vec<u64>> {
    let r = classes.len();
    let mut a = vec![vec![0u64; r]; r];
    for k in 0..r {
        let gk = classes.representative(k);
        for &y in classes.class(i) {
            let j = classes.class_of(g.mul(g.inv(y), gk));
            a[j][k] += 1;
        }
    }
    for row in a.iter_mut() {
        for v in row.iter_mut() {
            *v %= p;
        }
    }
    a
}

pub(super) fn modular_table(g: &FiniteGroup, classes: &ConjClassSet, exponent: u64) -> Result<ModularTable, CharError> {
    let n = g.order() as u64;
    let r = classes.len();
    let ell = choose_prime(n, exponent);
    let f = Field { p: ell };

    // Each space is kept in reduced row echelon form; coordinates of a
    // vector inside it are its entries at the pivot columns.
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r)
        .map(|i| {
            let mut v = vec![0u64; r];
            v[i] = 1;
            v
        })
        .collect()];
    for i in 1..r {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let a = class_matrix(g, classes, i, ell);
        let mut next = Vec::new();
        for mut basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            let pivots = rref(&f, &mut basis);
            let d = basis.len();
            let images: Vec<Vec<u64>> = basis
                .iter()
                .map(|b| (0..r).map(|j| (0..r).fold(0, |acc, k| f.add(acc, f.mul(a[j][k], b[k])))).collect())
                .collect();
            // restricted[t][s] = coordinate t of A·b_s
            let restricted: Vec<Vec<u64>> = (0..d).map(|t| (0..d).map(|s| images[s][pivots[t]]).collect()).collect();
            let lambdas = roots(&f, &charpoly(&f, restricted.clone()));
            let mut covered = 0;
            let mut parts = Vec::new();
            for lam in lambdas {
                let mut shifted = restricted.clone();
                for (t, row) in shifted.iter_mut().enumerate() {
                    row[t] = f.sub(row[t], lam);
                }
                let ns = nullspace(&f, &shifted);
                covered += ns.len();
                let vecs: Vec<Vec<u64>> = ns
                    .iter()
                    .map(|u| (0..r).map(|c| (0..d).fold(0, |acc, s| f.add(acc, f.mul(u[s], basis[s][c])))).collect())
                    .collect();
                parts.push(vecs);
            }
            if covered != d {
                return Err(CharError::Internal(format!("class matrix {i} is not diagonalizable mod {ell}")));
            }
            next.extend(parts);
        }
        spaces = next;
    }
    if spaces.len() != r || spaces.iter().any(|s| s.len() != 1) {
        return Err(CharError::Internal("class matrices do not separate the characters".into()));
    }

    let z = pow_mod(primitive_root(ell), (ell - 1) / exponent, ell);
    let orders: Vec<u64> = (0..r).map(|k| g.element_order(classes.representative(k))).collect();
    // power_classes[k][j] = class of g_k^j
    let power_classes: Vec<Vec<usize>> = (0..r)
        .map(|k| {
            let rep = classes.representative(k);
            (0..orders[k] as i64).map(|j| classes.class_of(g.pow(rep, j))).collect()
        })
        .collect();

    let mut chars = Vec::with_capacity(r);
    for space in spaces {
        let v = &space[0];
        if v[0] == 0 {
            return Err(CharError::Internal("eigenvector vanishes at the identity".into()));
        }
        let inv0 = f.inv(v[0]);
        let omega: Vec<u64> = v.iter().map(|&c| f.mul(c, inv0)).collect();
        let mut s = 0u64;
        for k in 0..r {
            let kinv = classes.inverse_class(g, k);
            let term = f.mul(f.mul(omega[k], omega[kinv]), f.inv(classes.size(k) as u64 % ell));
            s = f.add(s, term);
        }
        let d2 = f.mul(n % ell, f.inv(s));
        let degree = (d2 as f64).sqrt().round() as u64;
        if degree * degree != d2 || degree == 0 || n % degree != 0 {
            return Err(CharError::Internal(format!("degree square {d2} mod {ell} is not a valid degree")));
        }
        let values: Vec<u64> =
            (0..r).map(|k| f.mul(f.mul(omega[k], degree), f.inv(classes.size(k) as u64 % ell))).collect();
        let mut mults = Vec::with_capacity(r);
        for k in 0..r {
            let o = orders[k];
            let zo = pow_mod(z, exponent / o, ell);
            let inv_o = f.inv(o % ell);
            let mut m = Vec::with_capacity(o as usize);
            let mut total = 0u64;
            for a in 0..o {
                // (1/o) Σ_j χ(g^j) ζ_o^{−ja}
                let step = pow_mod(zo, (o - a % o) % o, ell);
                let mut w = 1u64;
                let mut acc = 0u64;
                for j in 0..o as usize {
                    acc = f.add(acc, f.mul(values[power_classes[k][j]], w));
                    w = f.mul(w, step);
                }
                let ma = f.mul(acc, inv_o);
                if ma > degree {
                    return Err(CharError::Internal(format!("eigenvalue multiplicity {ma} exceeds degree {degree}")));
                }
                total += ma;
                m.push(ma as u32);
            }
            if total != degree {
                return Err(CharError::Internal("eigenvalue multiplicities do not sum to the degree".into()));
            }
            mults.push(m);
        }
        chars.push(ModularCharacter { degree, values, mults });
    }
    Ok(ModularTable { ell, root: z, chars })
}
