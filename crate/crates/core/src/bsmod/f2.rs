//! The idempotent `f²_sr(n)` on `θ_s θ_r θ_s ⋯` (`n` letters) factoring
//! through `B'_{sr(n)}`.
//!
//! Selection works inside `End_0`. Let `χ(a)` be the scalar by which `a` acts
//! on the `K_{sr(n)}` summand over the fraction field (that summand occurs
//! once). `f²` is the unique `e ∈ End_0` with `χ(e) = 1` and `e∘j = 0` for
//! every `j ∈ ker χ`: since `Hom_0(θ, B')` is spanned by the projection, `e∘j`
//! is a multiple of `e` and that multiple is `χ(j) = 0`.

use std::collections::HashMap;
use std::sync::Arc;

use super::hom::end0;
use super::localize::{eigenbasis_at, generic_point};
use super::BSMorphism;
use crate::coxeter::CoxeterSystem;
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::linalg::Matrix;
use crate::polyring::Ring;

pub fn f2(ring: &Arc<Ring>, s: usize, r: usize, n: usize) -> Result<BSMorphism> {
    let m = ring.system().bond(s, r) as usize;
    if n == 0 || n > m {
        return Err(Error::Invalid(format!("f2 needs 1 ≤ n ≤ {m}, got {n}")));
    }
    let word = CoxeterSystem::alternating(s, r, n);
    let basis = end0(ring, &word)?;
    let pt = generic_point(ring.nvars());
    let (v, vi) = eigenbasis_at(ring, &word, &pt)?;
    let top = (1usize << n) - 1;
    let vals: Vec<Matrix> = basis.iter().map(|b| b.eval(&pt)).collect();
    let chi: Vec<Fe> = vals.iter().map(|a| vi.mul(a).mul(&v).get(top, top).clone()).collect();

    // ker χ inside the coefficient space.
    let kernel = Matrix::from_rows(vec![chi.clone()]).nullspace();
    let kvals: Vec<Matrix> = kernel
        .iter()
        .map(|k| {
            let mut acc = Matrix::zeros(1 << n, 1 << n);
            for (c, a) in k.iter().zip(&vals) {
                if !c.is_zero() {
                    acc = acc.add(&a.scale(c));
                }
            }
            acc
        })
        .collect();

    // Unknowns λ_i; equations χ(e) = 1 and (Σ λ_i b_i)(pt)·j(pt) = 0.
    let d = basis.len();
    let mut rows: Vec<Vec<Fe>> = vec![chi];
    let mut rhs = vec![Fe::one()];
    for j in &kvals {
        let prods: Vec<Matrix> = vals.iter().map(|a| a.mul(j)).collect();
        for idx in 0..(1usize << (2 * n)) {
            let (rr, cc) = (idx >> n, idx & top);
            let row: Vec<Fe> = prods.iter().map(|p| p.get(rr, cc).clone()).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
                rhs.push(Fe::zero());
            }
        }
    }
    let a = Matrix::from_rows(rows);
    let lambda = a.solve(&rhs).ok_or(Error::SelectionAmbiguous(0))?;
    let free = d - a.rank();
    if free != 0 {
        return Err(Error::SelectionAmbiguous(free + 1));
    }
    let mut e = BSMorphism::zero(ring, &word, &word, 0);
    for (c, b) in lambda.iter().zip(&basis) {
        if !c.is_zero() {
            e = e.add(&b.scale(c))?;
        }
    }
    if !e.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    Ok(e)
}

/// `id − 1/(2∂_s(x_r)) (id⊗m_r⊗id²)∘(id⊗α_r⊗id)∘(id⊗j_s)∘(α_s⊗id)∘j_s∘(id⊗m_r⊗id)`
/// on `θ_sθ_rθ_s`.
pub fn f2_three(ring: &Arc<Ring>, s: usize, r: usize) -> Result<BSMorphism> {
    let steps = [
        BSMorphism::m(ring, r).tensor(&[s], &[s]),
        BSMorphism::j(ring, s),
        BSMorphism::alpha(ring, s).tensor(&[], &[s]),
        BSMorphism::j(ring, s).tensor(&[s], &[]),
        BSMorphism::alpha(ring, r).tensor(&[s], &[s]),
        BSMorphism::m(ring, r).tensor(&[s], &[r, s]),
    ];
    let mut acc = steps[0].clone();
    for st in &steps[1..] {
        acc = st.compose(&acc)?;
    }
    let d = ring.demazure(s, ring.x(r)).constant_term();
    let c = d.add(&d).inv().ok_or(Error::ZeroNormalizer)?;
    BSMorphism::identity(ring, &[s, r, s]).sub(&acc.scale(&c))
}

/// Does `f` preserve `1 ⊗_{R^{s_1}} θ_{s_2}⋯`? Each column must have
/// `s_1`-invariant coefficients.
pub fn preserves_one_from_left(f: &BSMorphism) -> bool {
    let s = f.src[0];
    (0..f.mat.cols).all(|c| {
        let col: Vec<_> = (0..f.mat.rows).map(|r| f.mat.get(r, c).clone()).collect();
        super::fsr::one_from_left(&f.ring, s, &col)
    })
}

/// Memoized `f2` per ring.
#[derive(Default)]
pub struct F2Cache {
    map: parking_lot::Mutex<HashMap<(usize, usize, usize), Arc<BSMorphism>>>,
}

impl F2Cache {
    pub fn get(&self, ring: &Arc<Ring>, s: usize, r: usize, n: usize) -> Result<Arc<BSMorphism>> {
        if let Some(f) = self.map.lock().get(&(s, r, n)) {
            return Ok(f.clone());
        }
        let f = Arc::new(f2(ring, s, r, n)?);
        self.map.lock().insert((s, r, n), f.clone());
        Ok(f)
    }
}


#[cfg(test)]
mod m5 {
    use super::*;
    use crate::bsmod::fsr::f_sr;
    use crate::bsmod::localize::k_blocks;

    #[test]
    fn f2_m5() {
        let ring = Ring::new(CoxeterSystem::dihedral(5).unwrap());
        let e = f2(&ring, 0, 1, 4).unwrap();
        assert_eq!(e.degree, 0);
        assert!(e.verify_bimodule());
        assert!(preserves_one_from_left(&e));
        let k = k_blocks(&ring, &e.src, &e.mat).unwrap();
        let sys = ring.system();
        let srsr = sys.element(&[0, 1, 0, 1]);
        let below: Vec<_> = sys.elements_up_to(4).into_iter().filter(|y| sys.bruhat_leq(y, &srsr)).collect();
        assert_eq!(k.len(), below.len());
        assert!(below.iter().all(|y| k.get(y) == Some(&1)));
        let top = f2(&ring, 0, 1, 5).unwrap();
        let rt = f_sr(&ring, 1, 0).unwrap().compose(&f_sr(&ring, 0, 1).unwrap()).unwrap();
        assert_eq!(top, rt);
    }
}
