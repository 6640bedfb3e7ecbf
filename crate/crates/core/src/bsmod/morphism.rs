//! Morphisms between Bott–Samelson bimodules as polynomial matrices.

use std::sync::Arc;

use serde::Serialize;

use super::{BSModule, PolyMatrix};
use crate::coxeter::Word;
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::polyring::Ring;

/// A left-`R`-linear map `θ_src → θ_tgt` of degree `degree`; rows index the
/// target basis, columns the source basis.
#[derive(Clone, Debug)]
pub struct BSMorphism {
    pub ring: Arc<Ring>,
    pub src: Word,
    pub tgt: Word,
    pub degree: i64,
    pub mat: PolyMatrix,
}

impl PartialEq for BSMorphism {
    fn eq(&self, o: &Self) -> bool {
        self.src == o.src && self.tgt == o.tgt && self.mat == o.mat
    }
}

#[derive(Serialize)]
pub struct MorphismJson {
    pub source: String,
    pub target: String,
    pub degree: i64,
    /// `[row, column, entry]` for nonzero entries.
    pub entries: Vec<(usize, usize, String)>,
}

impl BSMorphism {
    pub fn new(ring: &Arc<Ring>, src: &[usize], tgt: &[usize], degree: i64, mat: PolyMatrix) -> Result<BSMorphism> {
        if mat.rows != 1 << tgt.len() || mat.cols != 1 << src.len() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix for {} → {} letters",
                mat.rows,
                mat.cols,
                src.len(),
                tgt.len()
            )));
        }
        Ok(BSMorphism { ring: ring.clone(), src: src.to_vec(), tgt: tgt.to_vec(), degree, mat })
    }

    pub fn identity(ring: &Arc<Ring>, word: &[usize]) -> BSMorphism {
        BSMorphism { ring: ring.clone(), src: word.to_vec(), tgt: word.to_vec(), degree: 0, mat: PolyMatrix::identity(1 << word.len()) }
    }

    pub fn zero(ring: &Arc<Ring>, src: &[usize], tgt: &[usize], degree: i64) -> BSMorphism {
        BSMorphism {
            ring: ring.clone(),
            src: src.to_vec(),
            tgt: tgt.to_vec(),
            degree,
            mat: PolyMatrix::zeros(1 << tgt.len(), 1 << src.len()),
        }
    }

    /// `m_s : θ_s → R`, `p⊗q ↦ pq`.
    pub fn m(ring: &Arc<Ring>, s: usize) -> BSMorphism {
        let mut mat = PolyMatrix::zeros(1, 2);
        mat.set(0, 0, Poly::one());
        mat.set(0, 1, ring.x(s).clone());
        BSMorphism { ring: ring.clone(), src: vec![s], tgt: vec![], degree: 0, mat }
    }

    /// `j_s : θ_sθ_s → θ_s`, `p⊗q⊗r ↦ p∂_s(q)⊗r`, degree −2.
    pub fn j(ring: &Arc<Ring>, s: usize) -> BSMorphism {
        let mut mat = PolyMatrix::zeros(2, 4);
        mat.set(0, 1, Poly::one());
        mat.set(1, 3, Poly::one());
        BSMorphism { ring: ring.clone(), src: vec![s, s], tgt: vec![s], degree: -2, mat }
    }

    /// `α_s : R → θ_sθ_s`, `1 ↦ x_s⊗1⊗1 + 1⊗1⊗x_s`, degree 2.
    pub fn alpha(ring: &Arc<Ring>, s: usize) -> BSMorphism {
        let mut mat = PolyMatrix::zeros(4, 1);
        mat.set(0, 0, ring.x(s).clone());
        mat.set(2, 0, Poly::one());
        BSMorphism { ring: ring.clone(), src: vec![], tgt: vec![s, s], degree: 2, mat }
    }

    /// `self ∘ h`.
    pub fn compose(&self, h: &BSMorphism) -> Result<BSMorphism> {
        if h.tgt != self.src {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose: target {} vs source {}",
                self.ring.system().format_word(&h.tgt),
                self.ring.system().format_word(&self.src)
            )));
        }
        Ok(BSMorphism {
            ring: self.ring.clone(),
            src: h.src.clone(),
            tgt: self.tgt.clone(),
            degree: self.degree + h.degree,
            mat: self.mat.mul(&h.mat),
        })
    }

    pub fn add(&self, o: &BSMorphism) -> Result<BSMorphism> {
        if self.src != o.src || self.tgt != o.tgt {
            return Err(Error::ShapeMismatch("sum of morphisms with different shapes".into()));
        }
        Ok(BSMorphism { mat: self.mat.add(&o.mat), ..self.clone() })
    }

    pub fn sub(&self, o: &BSMorphism) -> Result<BSMorphism> {
        self.add(&o.scale(&Fe::from_int(-1)))
    }

    pub fn scale(&self, c: &Fe) -> BSMorphism {
        BSMorphism { mat: self.mat.scale(c), ..self.clone() }
    }

    /// `id_left ⊗ self ⊗ id_right`. `self` must be right `R`-linear so its
    /// entries can slide through the left factor.
    pub fn tensor(&self, left: &[usize], right: &[usize]) -> BSMorphism {
        let a = left.len();
        let (ls, lt) = (self.src.len(), self.tgt.len());
        let lmod = BSModule::new(&self.ring, left);
        let src: Word = left.iter().chain(&self.src).chain(right).copied().collect();
        let tgt: Word = left.iter().chain(&self.tgt).chain(right).copied().collect();
        let mut mat = PolyMatrix::zeros(1 << tgt.len(), 1 << src.len());
        for beta in 0..(1usize << ls) {
            for beta2 in 0..(1usize << lt) {
                let p = self.mat.get(beta2, beta);
                if p.is_zero() {
                    continue;
                }
                for alpha in 0..(1usize << a) {
                    let col = lmod.rmul_prefix(a, &[(alpha, Poly::one())], p);
                    for gamma in 0..(1usize << right.len()) {
                        let c = alpha | beta << a | gamma << (a + ls);
                        for (alpha2, q) in &col {
                            let r = alpha2 | beta2 << a | gamma << (a + lt);
                            let v = mat.get(r, c).add(q);
                            mat.set(r, c, v);
                        }
                    }
                }
            }
        }
        BSMorphism { ring: self.ring.clone(), src, tgt, degree: self.degree, mat }
    }

    /// `id^i ⊗ self ⊗ id^…` inside a word: the letters left and right of
    /// the window are taken from `word`.
    pub fn at(&self, word: &[usize], pos: usize) -> Result<BSMorphism> {
        let end = pos + self.src.len();
        if end > word.len() || word[pos..end] != self.src[..] {
            return Err(Error::ShapeMismatch(format!(
                "window {} does not occur at offset {pos} of {}",
                self.ring.system().format_word(&self.src),
                self.ring.system().format_word(word)
            )));
        }
        Ok(self.tensor(&word[..pos], &word[end..]))
    }

    /// Every nonzero entry `M[ε',ε]` is homogeneous of degree
    /// `2|ε| − 2|ε'| + degree`.
    pub fn is_homogeneous(&self) -> bool {
        (0..self.mat.rows).all(|r| {
            (0..self.mat.cols).all(|c| {
                let p = self.mat.get(r, c);
                if p.is_zero() {
                    return true;
                }
                let want = 2 * c.count_ones() as i64 - 2 * r.count_ones() as i64 + self.degree;
                p.degree().map(|d| d as i64) == Some(want)
            })
        })
    }

    /// Right linearity `M·ρ_src(y_j) = ρ_tgt(y_j)·M` for every variable, plus
    /// homogeneity.
    pub fn verify_bimodule(&self) -> bool {
        if !self.is_homogeneous() {
            return false;
        }
        let smod = BSModule::new(&self.ring, &self.src);
        let tmod = BSModule::new(&self.ring, &self.tgt);
        (0..self.ring.nvars()).all(|j| {
            let y = Poly::var(j);
            self.mat.mul(&smod.rho(&y)) == tmod.rho(&y).mul(&self.mat)
        })
    }

    pub fn require_bimodule(&self) -> Result<()> {
        if self.verify_bimodule() {
            Ok(())
        } else {
            Err(Error::NotBimoduleMap)
        }
    }

    pub fn is_endomorphism(&self) -> bool {
        self.src == self.tgt
    }

    pub fn is_idempotent(&self) -> bool {
        self.is_endomorphism() && self.mat.mul(&self.mat) == self.mat
    }

    pub fn eval(&self, pt: &[Fe]) -> Matrix {
        self.mat.eval(pt)
    }

    /// Image of a sparse vector.
    pub fn apply(&self, v: &[(usize, Poly)]) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.mat.rows];
        for (c, p) in v {
            for (r, o) in out.iter_mut().enumerate() {
                let e = self.mat.get(r, *c);
                if !e.is_zero() {
                    *o = o.add(&e.mul(p));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> MorphismJson {
        let sys = self.ring.system();
        let mut entries = Vec::new();
        for r in 0..self.mat.rows {
            for c in 0..self.mat.cols {
                let p = self.mat.get(r, c);
                if !p.is_zero() {
                    entries.push((r, c, self.ring.format(p)));
                }
            }
        }
        MorphismJson { source: sys.format_word(&self.src), target: sys.format_word(&self.tgt), degree: self.degree, entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::CoxeterSystem;
    use crate::polyring::Ring;

    fn ring(m: u32) -> Arc<Ring> {
        Ring::new(CoxeterSystem::dihedral(m).unwrap())
    }

    #[test]
    fn generators_are_bimodule_maps() {
        let r = ring(4);
        for s in 0..2 {
            for g in [BSMorphism::m(&r, s), BSMorphism::j(&r, s), BSMorphism::alpha(&r, s)] {
                assert!(g.verify_bimodule(), "{:?}", g.to_json().source);
            }
        }
    }

    #[test]
    fn corrupted_entry_is_rejected() {
        let r = ring(4);
        let mut g = BSMorphism::m(&r, 0);
        g.mat.set(0, 1, r.x(1).clone());
        assert!(!g.verify_bimodule());
    }

    #[test]
    fn tensor_and_compose() {
        let r = ring(5);
        let m = BSMorphism::m(&r, 0);
        let t = m.tensor(&[], &[]);
        assert_eq!(t, m);
        let big = m.tensor(&[1], &[0]);
        assert_eq!(big.src, vec![1, 0, 0]);
        assert!(big.verify_bimodule());
        let id = BSMorphism::identity(&r, &[1, 0, 0]);
        assert_eq!(big.compose(&id).unwrap(), big);
        // j_s ∘ α_s = 0, while m_s ∘ (id ⊗ m_s) ∘ α_s is multiplication by 2x_s.
        let a = BSMorphism::alpha(&r, 0);
        assert!(BSMorphism::j(&r, 0).compose(&a).unwrap().mat.is_zero());
        let c = m.compose(&m.tensor(&[0], &[])).unwrap().compose(&a).unwrap();
        assert_eq!(c.degree, 2);
        assert_eq!(c.mat.get(0, 0), &r.x(0).scale(&Fe::from_int(2)));
    }
}
