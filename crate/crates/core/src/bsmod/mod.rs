//! Bott–Samelson bimodules in the 01-basis and their morphisms.
//!
//! `θ_{s_1}⋯θ_{s_n}` is free as a left `R`-module on
//! `b_ε = 1⊗e_1⊗…⊗e_n` with `e_i = x_{s_i}` when bit `i−1` of `ε` is set and
//! `e_i = 1` otherwise. The right action is computed by sliding polynomials
//! leftwards through `R = R^s ⊕ x_s R^s`.

pub mod f2;
pub mod fsr;
pub mod hom;
pub mod leaves;
pub mod localize;
pub mod morphism;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use parking_lot::Mutex;
use rayon::prelude::*;

use crate::coxeter::Word;
use crate::field::Fe;
use crate::linalg::Matrix;
use crate::poly::{Mono, Poly};
use crate::polyring::Ring;

pub use morphism::BSMorphism;

/// Sparse vector over a 01-basis.
pub type SparseVec = Vec<(usize, Poly)>;

type RmulKey = (usize, usize, Mono);

/// `θ_{s_1}⋯θ_{s_n}` over a fixed ring. Caches the right action of
/// monomials on every prefix module.
pub struct BSModule {
    ring: Arc<Ring>,
    word: Word,
    cache: Mutex<HashMap<RmulKey, Arc<SparseVec>>>,
}

impl std::fmt::Debug for BSModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BSModule({})", self.ring.system().format_word(&self.word))
    }
}

fn accumulate(acc: &mut BTreeMap<usize, Poly>, idx: usize, p: Poly) {
    if p.is_zero() {
        return;
    }
    match acc.get_mut(&idx) {
        Some(q) => {
            *q = q.add(&p);
            if q.is_zero() {
                acc.remove(&idx);
            }
        }
        None => {
            acc.insert(idx, p);
        }
    }
}

impl BSModule {
    pub fn new(ring: &Arc<Ring>, word: &[usize]) -> Arc<BSModule> {
        Arc::new(BSModule { ring: ring.clone(), word: word.to_vec(), cache: Mutex::new(HashMap::new()) })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.word.len()
    }

    /// Degree of `b_ε`.
    pub fn basis_degree(eps: usize) -> usize {
        2 * eps.count_ones() as usize
    }

    /// `b_ε · m` in the prefix module of length `k` (only the low `k` bits
    /// of `eps` are used).
    fn rmul_mono(&self, k: usize, eps: usize, m: Mono) -> Arc<SparseVec> {
        let eps = eps & ((1usize << k) - 1);
        if k == 0 {
            return Arc::new(vec![(0, Poly::monomial(m, Fe::one()))]);
        }
        let key = (k, eps, m);
        if let Some(v) = self.cache.lock().get(&key) {
            return v.clone();
        }
        let s = self.word[k - 1];
        let mut p = Poly::monomial(m, Fe::one());
        let hi = 1usize << (k - 1);
        if eps & hi != 0 {
            p = self.ring.x(s).mul(&p);
        }
        let (inv, quo) = self.ring.invariant_decompose(s, &p);
        let mut acc = BTreeMap::new();
        for (part, bit) in [(inv, 0usize), (quo, hi)] {
            for (idx, c) in self.rmul_prefix(k - 1, &[(eps & (hi - 1), Poly::one())], &part) {
                accumulate(&mut acc, idx | bit, c);
            }
        }
        let out = Arc::new(acc.into_iter().collect::<SparseVec>());
        self.cache.lock().insert(key, out.clone());
        out
    }

    /// `v · q` for `v` in the prefix module of length `k`.
    pub fn rmul_prefix(&self, k: usize, v: &[(usize, Poly)], q: &Poly) -> SparseVec {
        let mut acc = BTreeMap::new();
        for (eps, c) in v {
            for (m, a) in q.terms() {
                for (idx, d) in self.rmul_mono(k, *eps, *m).iter() {
                    accumulate(&mut acc, *idx, c.mul(d).scale(a));
                }
            }
        }
        acc.into_iter().collect()
    }

    /// `b_ε · q`.
    pub fn right_mul(&self, eps: usize, q: &Poly) -> SparseVec {
        self.rmul_prefix(self.len(), &[(eps, Poly::one())], q)
    }

    /// Right action of an arbitrary element given as a sparse vector.
    pub fn right_mul_vec(&self, v: &[(usize, Poly)], q: &Poly) -> SparseVec {
        self.rmul_prefix(self.len(), v, q)
    }

    /// Matrix of right multiplication by `q`: column `ε` is `b_ε · q`.
    pub fn rho(&self, q: &Poly) -> PolyMatrix {
        let n = self.dim();
        let cols: Vec<SparseVec> = (0..n).into_par_iter().map(|e| self.right_mul(e, q)).collect();
        let mut m = PolyMatrix::zeros(n, n);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, p) in col {
                m.set(i, j, p);
            }
        }
        m
    }

    /// Same as [`BSModule::rho`] for a prefix of the word.
    pub fn rho_prefix(&self, k: usize, q: &Poly) -> PolyMatrix {
        let n = 1usize << k;
        let mut m = PolyMatrix::zeros(n, n);
        for e in 0..n {
            for (i, p) in self.rmul_prefix(k, &[(e, Poly::one())], q) {
                m.set(i, e, p);
            }
        }
        m
    }

    /// Left coefficients of `p_0 ⊗ p_1 ⊗ … ⊗ p_n` in the 01-basis.
    pub fn normal_form(&self, slots: &[Poly]) -> crate::Result<Vec<Poly>> {
        if slots.len() != self.len() + 1 {
            return Err(crate::Error::ShapeMismatch(format!(
                "{} slots for a word of length {}",
                slots.len(),
                self.len()
            )));
        }
        let mut v: SparseVec = vec![(0, slots[0].clone())];
        for (k, p) in slots.iter().enumerate().skip(1) {
            // Embedding into the longer prefix keeps indices (new bit is 0).
            v = self.rmul_prefix(k, &v, p);
        }
        Ok(densify(&v, self.dim()))
    }
}

pub fn densify(v: &[(usize, Poly)], n: usize) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); n];
    for (i, p) in v {
        out[*i] = out[*i].add(p);
    }
    out
}

/// Dense matrix over the polynomial ring.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix { rows, cols, data: vec![Poly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Poly::one());
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Poly) {
        self.data[r * self.cols + c] = p;
    }

    pub fn column(&self, c: usize) -> SparseVec {
        (0..self.rows).filter(|&r| !self.get(r, c).is_zero()).map(|r| (r, self.get(r, c).clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|p| !p.is_zero()).count()
    }

    pub fn add(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "matrix shape mismatch");
        PolyMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &PolyMatrix) -> PolyMatrix {
        self.add(&o.scale(&Fe::from_int(-1)))
    }

    pub fn scale(&self, c: &Fe) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn mul(&self, o: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        // Sparse rows of `o` to skip the many structural zeros.
        let orows: Vec<Vec<(usize, &Poly)>> = (0..o.rows)
            .map(|k| (0..o.cols).filter_map(|j| { let p = o.get(k, j); (!p.is_zero()).then_some((j, p)) }).collect())
            .collect();
        let data: Vec<Vec<Poly>> = (0..self.rows)
            .into_par_iter()
            .map(|i| {
                let mut acc: Vec<Poly> = vec![Poly::zero(); o.cols];
                for (k, orow) in orows.iter().enumerate() {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in orow {
                        acc[*j] = acc[*j].add(&a.mul(b));
                    }
                }
                acc
            })
            .collect();
        PolyMatrix { rows: self.rows, cols: o.cols, data: data.into_iter().flatten().collect() }
    }

    /// Evaluate every entry at a point.
    pub fn eval(&self, pt: &[Fe]) -> Matrix {
        let data: Vec<Fe> = self.data.par_iter().map(|p| if p.is_zero() { Fe::zero() } else { p.eval(pt) }).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// Degree-0 part of every entry.
    pub fn constant_part(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Poly::constant_term).collect() }
    }
}
