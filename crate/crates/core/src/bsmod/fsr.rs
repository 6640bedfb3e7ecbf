//! The braid morphism `f_sr : X_sr → X_rs` from the Demazure formula, and
//! the submodule tests used to certify its inclusion properties.

use std::collections::HashMap;
use std::sync::Arc;

use super::{BSModule, BSMorphism, PolyMatrix};
use crate::coxeter::CoxeterSystem;
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::linalg::Matrix;
use crate::poly::{Mono, Poly};
use crate::polyring::{monomials, Ring};

/// Unnormalized `Ψ∘Φ`: `b_ε ↦ Σ_w ∂_{s_1}(e_1 ∂_{s_2}(⋯ ∂_{s_m}(e_m ∂_w(d)))) · (1⊗⋯⊗1⊗∂_w(d)*)`.
pub fn psi_phi(ring: &Arc<Ring>, s: usize, r: usize) -> Result<BSMorphism> {
    let data = ring.dihedral_data(s, r)?;
    let m = data.m;
    let src = CoxeterSystem::alternating(s, r, m);
    let tgt = CoxeterSystem::alternating(r, s, m);
    let tmod = BSModule::new(ring, &tgt);
    let tails: Vec<Vec<Poly>> = data.dual.iter().map(|q| super::densify(&tmod.right_mul(0, q), tmod.dim())).collect();
    let n = 1usize << m;
    let mut mat = PolyMatrix::zeros(n, n);
    for eps in 0..n {
        for (w, dw) in data.basis.iter().enumerate() {
            let mut c = dw.clone();
            for k in (0..m).rev() {
                if eps >> k & 1 == 1 {
                    c = ring.x(src[k]).mul(&c);
                }
                c = ring.demazure(src[k], &c);
                if c.is_zero() {
                    break;
                }
            }
            if c.is_zero() {
                continue;
            }
            for (row, t) in tails[w].iter().enumerate() {
                if !t.is_zero() {
                    let v = mat.get(row, eps).add(&c.mul(t));
                    mat.set(row, eps, v);
                }
            }
        }
    }
    BSMorphism::new(ring, &src, &tgt, 0, mat)
}

/// `f_sr`, normalized so that `b_{1…1} ↦ b_{1…1} + R_+X_rs`.
pub fn f_sr(ring: &Arc<Ring>, s: usize, r: usize) -> Result<BSMorphism> {
    let raw = psi_phi(ring, s, r)?;
    let top = raw.mat.rows - 1;
    let c = raw.mat.get(top, top).constant_term();
    let inv = c.inv().ok_or(Error::ZeroNormalizer)?;
    Ok(raw.scale(&inv))
}

/// Memoized `f_sr` per ring.
#[derive(Default)]
pub struct FsrCache {
    map: parking_lot::Mutex<HashMap<(usize, usize), Arc<BSMorphism>>>,
}

impl FsrCache {
    pub fn get(&self, ring: &Arc<Ring>, s: usize, r: usize) -> Result<Arc<BSMorphism>> {
        if let Some(f) = self.map.lock().get(&(s, r)) {
            return Ok(f.clone());
        }
        let f = Arc::new(f_sr(ring, s, r)?);
        self.map.lock().insert((s, r), f.clone());
        Ok(f)
    }
}

/// The normalization condition: the `b_{1…1}` column has constant part
/// `b_{1…1}` (entries of degree 0 in that column are only on the diagonal).
pub fn normalization_holds(f: &BSMorphism) -> bool {
    let top = f.mat.cols - 1;
    (0..f.mat.rows).all(|row| {
        let c = f.mat.get(row, top).constant_term();
        if row == top {
            c.is_one()
        } else {
            c.is_zero()
        }
    })
}

/// Membership in `1 ⊗_{R^{s_1}} θ_{s_2}⋯`: every left coefficient is
/// `s_1`-invariant.
pub fn one_from_left(ring: &Ring, first: usize, z: &[Poly]) -> bool {
    z.iter().all(|p| ring.act_gen(first, p) == *p)
}

/// Membership in `R^{a} ⊗ 1 ⊗ ⋯ ⊗ 1 ⊗ R` inside `θ_word`, tested degree by
/// degree up to `budget`.
pub fn bottom_tensor(ring: &Arc<Ring>, word: &[usize], a: usize, z: &[Poly], budget: usize) -> Result<bool> {
    let module = BSModule::new(ring, word);
    let mut degrees: Vec<usize> = Vec::new();
    for (eps, p) in z.iter().enumerate() {
        for (m, _) in p.terms() {
            let d = 2 * m.total() as usize + BSModule::basis_degree(eps);
            if !degrees.contains(&d) {
                degrees.push(d);
            }
        }
    }
    for deg in degrees {
        if deg > budget {
            return Err(Error::TruncationInsufficient(budget));
        }
        let target: Vec<Poly> = z
            .iter()
            .enumerate()
            .map(|(eps, p)| {
                let b = BSModule::basis_degree(eps);
                if b > deg {
                    Poly::zero()
                } else {
                    p.component(deg - b)
                }
            })
            .collect();
        // Spanning set a·(b_0·q) with a ∈ R^a of degree i and q a monomial.
        let mut gens: Vec<Vec<Poly>> = Vec::new();
        for i in (0..=deg).step_by(2) {
            let inv = ring.invariant_slice(&[a], i);
            if inv.is_empty() {
                continue;
            }
            for q in monomials(ring.nvars(), ((deg - i) / 2) as u32) {
                let tail = super::densify(&module.right_mul(0, &Poly::monomial(q, Fe::one())), module.dim());
                for p in &inv {
                    gens.push(tail.iter().map(|t| p.mul(t)).collect());
                }
            }
        }
        if !in_span(&gens, &target) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Is `target` an `F`-linear combination of `gens` (vectors of polynomials)?
pub(crate) fn in_span(gens: &[Vec<Poly>], target: &[Poly]) -> bool {
    let mut coords: HashMap<(usize, Mono), usize> = HashMap::new();
    let key = |e: usize, m: Mono, coords: &mut HashMap<(usize, Mono), usize>| {
        let n = coords.len();
        *coords.entry((e, m)).or_insert(n)
    };
    let mut cols: Vec<Vec<(usize, Fe)>> = Vec::new();
    for g in gens.iter().chain(std::iter::once(&target.to_vec())) {
        let mut col = Vec::new();
        for (e, p) in g.iter().enumerate() {
            for (m, c) in p.terms() {
                col.push((key(e, *m, &mut coords), c.clone()));
            }
        }
        cols.push(col);
    }
    let rows = coords.len();
    if rows == 0 {
        return true;
    }
    let mut a = Matrix::zeros(rows, gens.len());
    let mut b = vec![Fe::zero(); rows];
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col {
            if j == gens.len() {
                b[*i] = c.clone();
            } else {
                a.set(*i, j, c.clone());
            }
        }
    }
    a.solve(&b).is_some()
}

/// Inclusion check: `f_sr(1 ⊗_{R^s} θ_r θ_s ⋯) ⊆ R^s ⊗_{R^r} 1 ⊗ ⋯ ⊗ 1 ⊗ R`.
pub fn inclusion_holds(f: &BSMorphism, budget: usize) -> Result<bool> {
    let s = f.src[0];
    for eps in 0..f.mat.cols {
        let z: Vec<Poly> = (0..f.mat.rows).map(|r| f.mat.get(r, eps).clone()).collect();
        if !bottom_tensor(&f.ring, &f.tgt, s, &z, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fsr_m4_basic() {
        let ring = Ring::new(CoxeterSystem::dihedral(4).unwrap());
        let f = f_sr(&ring, 0, 1).unwrap();
        assert_eq!(f.degree, 0);
        assert!(f.is_homogeneous());
        assert!(normalization_holds(&f));
        // b_{0…0} ↦ ∂_{w0}(d)·b_{0…0} up to the normalizer.
        let raw = psi_phi(&ring, 0, 1).unwrap();
        let data = ring.dihedral_data(0, 1).unwrap();
        assert_eq!(raw.mat.get(0, 0), &Poly::constant(data.top.clone()));
        assert!((1..raw.mat.rows).all(|r| raw.mat.get(r, 0).is_zero()));
    }

    #[test]
    fn membership_examples() {
        let ring = Ring::new(CoxeterSystem::dihedral(4).unwrap());
        let z = vec![ring.x(0).clone(), Poly::zero()];
        assert!(!one_from_left(&ring, 0, &z));
        assert!(one_from_left(&ring, 0, &[Poly::zero(), Poly::one()]));
    }
}
