//! Splitting over the fraction field: `K ⊗_R θ_{s̄} ≅ ⊕_ε K_{w_ε}` with
//! `w_ε = s_1^{ε_1}⋯s_n^{ε_n}`, evaluated at a generic point.

use std::collections::BTreeMap;

use super::PolyMatrix;
use crate::coxeter::GroupElement;
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::polyring::Ring;

/// Labels `w_ε` of the eigenvectors `v_ε`.
pub fn labels(ring: &Ring, word: &[usize]) -> Vec<GroupElement> {
    let sys = ring.system();
    (0..1usize << word.len())
        .map(|eps| {
            let mut w = sys.identity();
            for (i, &s) in word.iter().enumerate() {
                if eps >> i & 1 == 1 {
                    w = sys.mul_gen_right(&w, s);
                }
            }
            w
        })
        .collect()
}

/// `β_i(ε) = (s_1^{ε_1}⋯s_{i−1}^{ε_{i−1}})·x_{s_i}` for every `i`.
fn betas(ring: &Ring, word: &[usize], eps: usize) -> Vec<Poly> {
    let sys = ring.system();
    let mut w = sys.identity();
    let mut out = Vec::with_capacity(word.len());
    for (i, &s) in word.iter().enumerate() {
        out.push(ring.act(&w, ring.x(s)));
        if eps >> i & 1 == 1 {
            w = sys.mul_gen_right(&w, s);
        }
    }
    out
}

/// Columns are the eigenvectors `v_ε = Σ_η V[η,ε] b_η`, with
/// `V[η,ε] = Π_i (η_i = 0 ? β_i(ε) : (−1)^{ε_i})`.
pub fn eigenbasis(ring: &Ring, word: &[usize]) -> PolyMatrix {
    let n = 1usize << word.len();
    let mut v = PolyMatrix::zeros(n, n);
    for eps in 0..n {
        let b = betas(ring, word, eps);
        for eta in 0..n {
            let mut p = Poly::one();
            for (i, bi) in b.iter().enumerate() {
                if eta >> i & 1 == 0 {
                    p = p.mul(bi);
                } else if eps >> i & 1 == 1 {
                    p = p.neg();
                }
            }
            v.set(eta, eps, p);
        }
    }
    v
}

/// `V(pt)` and `V(pt)⁻¹`; the inverse is
/// `V⁻¹[ε,η] = Π_i ½ (η_i = 0 ? 1/β_i(ε) : (−1)^{ε_i})`.
pub fn eigenbasis_at(ring: &Ring, word: &[usize], pt: &[Fe]) -> Result<(Matrix, Matrix)> {
    let n = 1usize << word.len();
    let half = Fe::from_ratio(1, 2);
    let mut v = Matrix::zeros(n, n);
    let mut vi = Matrix::zeros(n, n);
    for eps in 0..n {
        let b: Vec<Fe> = betas(ring, word, eps).iter().map(|p| p.eval(pt)).collect();
        let binv: Vec<Fe> = b
            .iter()
            .map(|x| x.inv().ok_or_else(|| Error::Invalid("evaluation point lies on a reflection hyperplane".into())))
            .collect::<Result<_>>()?;
        for eta in 0..n {
            let (mut p, mut q) = (Fe::one(), Fe::one());
            for i in 0..word.len() {
                if eta >> i & 1 == 0 {
                    p = p.mul(&b[i]);
                    q = q.mul(&binv[i]);
                } else if eps >> i & 1 == 1 {
                    p = p.neg();
                    q = q.neg();
                }
                q = q.mul(&half);
            }
            v.set(eta, eps, p);
            vi.set(eps, eta, q);
        }
    }
    Ok((v, vi))
}

/// A deterministic point off every reflection hyperplane of the words used
/// here (checked by callers through [`eigenbasis_at`]).
pub fn generic_point(nvars: usize) -> Vec<Fe> {
    const NUM: [i64; 8] = [3, 5, 11, 17, 23, 31, 41, 47];
    const DEN: [i64; 8] = [7, 13, 19, 29, 37, 43, 53, 59];
    (0..nvars).map(|i| Fe::from_ratio(NUM[i] * (i as i64 + 2), DEN[i])).collect()
}

/// Multiplicity of each `K_x` in the image of an idempotent (given by its
/// value at `pt`), read off the trace of each label block.
pub fn k_blocks_at(ring: &Ring, word: &[usize], e: &Matrix, pt: &[Fe]) -> Result<BTreeMap<GroupElement, i64>> {
    let (v, vi) = eigenbasis_at(ring, word, pt)?;
    let big = vi.mul(e).mul(&v);
    let labs = labels(ring, word);
    let mut out: BTreeMap<GroupElement, Fe> = BTreeMap::new();
    for i in 0..big.rows {
        for j in 0..big.cols {
            let c = big.get(i, j);
            if labs[i] != labs[j] && !c.is_zero() {
                return Err(Error::NotBimoduleMap);
            }
        }
        let t = out.entry(labs[i].clone()).or_insert_with(Fe::zero);
        *t = t.add(big.get(i, i));
    }
    out.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(x, c)| {
            let r = c.as_rational().filter(|r| r.is_integer()).ok_or(Error::NotIdempotent)?;
            let n: i64 = r.to_integer().try_into().map_err(|_| Error::NotIdempotent)?;
            Ok((x, n))
        })
        .collect()
}

/// [`k_blocks_at`] at the default generic point.
pub fn k_blocks(ring: &Ring, word: &[usize], e: &PolyMatrix) -> Result<BTreeMap<GroupElement, i64>> {
    let pt = generic_point(ring.nvars());
    k_blocks_at(ring, word, &e.eval(&pt), &pt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bsmod::BSModule;
    use crate::coxeter::CoxeterSystem;

    #[test]
    fn eigenvectors_twist_the_right_action() {
        let ring = Ring::new(CoxeterSystem::dihedral(4).unwrap());
        let word = [0, 1, 0];
        let v = eigenbasis(&ring, &word);
        let module = BSModule::new(&ring, &word);
        let labs = labels(&ring, &word);
        for eps in 0..8 {
            let col = v.column(eps);
            for j in 0..2 {
                let y = Poly::var(j);
                let lhs = crate::bsmod::densify(&module.right_mul_vec(&col, &y), 8);
                let wy = ring.act(&labs[eps], &y);
                let rhs: Vec<Poly> = (0..8).map(|r| v.get(r, eps).mul(&wy)).collect();
                assert_eq!(lhs, rhs, "eps={eps}");
            }
        }
    }

    #[test]
    fn inverse_formula() {
        let ring = Ring::new(CoxeterSystem::dihedral(5).unwrap());
        let word = [0, 1, 0, 1];
        let pt = generic_point(2);
        let (v, vi) = eigenbasis_at(&ring, &word, &pt).unwrap();
        assert_eq!(vi.mul(&v), Matrix::identity(16));
    }

    #[test]
    fn blocks_of_identity() {
        let ring = Ring::new(CoxeterSystem::dihedral(4).unwrap());
        let sys = ring.system().clone();
        let k = k_blocks(&ring, &[0], &PolyMatrix::identity(2)).unwrap();
        assert_eq!(k.len(), 2);
        assert!(k.values().all(|&c| c == 1));
        let k = k_blocks(&ring, &[0, 0], &PolyMatrix::identity(4)).unwrap();
        assert_eq!(k[&sys.identity()], 2);
        assert_eq!(k[&sys.generator(0)], 2);
    }
}
