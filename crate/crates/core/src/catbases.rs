//! Idempotents `f_s̄` and `Gf_s̄`, the bimodules `E_w` and `D_w` they cut
//! out, and the Hecke algebra elements `e_w` and `d_w`.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::bsmod::f2::F2Cache;
use crate::bsmod::fsr::FsrCache;
use crate::bsmod::leaves::{decategorify_image, standard_homs, Pruning};
use crate::bsmod::localize::{generic_point, k_blocks};
use crate::bsmod::BSMorphism;
use crate::cores::{f_tuple_variant, gf_tuple_variant, Move, MoveTuple};
use crate::coxeter::{CoxeterSystem, GroupElement, Word};
use crate::error::{Error, Result};
use crate::hecke::{Hecke, HeckeElement, LaurentPoly};
use crate::polyring::Ring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Kind {
    E,
    D,
}

#[derive(Clone, Debug)]
pub struct IdempotentBundle {
    pub word: Word,
    pub tuple: MoveTuple,
    pub e: BSMorphism,
    pub kind: Kind,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tuple: MoveTuple,
    pub truncation: usize,
    pub millis: u128,
}

#[derive(Clone, Debug)]
pub struct BasisElement {
    pub w: GroupElement,
    pub kind: Kind,
    pub h: HeckeElement,
    pub provenance: Provenance,
}

/// Default degree budget for truncation-dependent checks.
pub fn default_truncation(len: usize) -> usize {
    2 * len + 8
}

/// Everything needed to build idempotents over one Coxeter system, with
/// memoized `f_sr` and `f²_sr(n)`.
pub struct Engine {
    pub ring: Arc<Ring>,
    pub hecke: Hecke,
    fsr: FsrCache,
    f2: F2Cache,
    truncation: Option<usize>,
}

impl Engine {
    pub fn new(sys: Arc<CoxeterSystem>) -> Result<Engine> {
        if !sys.is_extra_large() {
            for s in 0..sys.rank() {
                for r in s + 1..sys.rank() {
                    if sys.bond(s, r) <= 3 {
                        return Err(Error::NotExtraLarge(s, r, sys.bond(s, r)));
                    }
                }
            }
        }
        Ok(Engine { ring: Ring::new(sys.clone()), hecke: Hecke::new(sys), fsr: FsrCache::default(), f2: F2Cache::default(), truncation: None })
    }

    /// Overrides [`default_truncation`] for every word.
    pub fn with_truncation(mut self, budget: usize) -> Engine {
        self.truncation = Some(budget);
        self
    }

    pub fn truncation(&self, len: usize) -> usize {
        self.truncation.unwrap_or_else(|| default_truncation(len))
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        self.ring.system()
    }

    pub fn fsr(&self, s: usize, r: usize) -> Result<Arc<BSMorphism>> {
        self.fsr.get(&self.ring, s, r)
    }

    pub fn f2(&self, s: usize, r: usize, n: usize) -> Result<Arc<BSMorphism>> {
        self.f2.get(&self.ring, s, r, n)
    }

    /// Composite of the moves of `tuple`, read left to right, starting at
    /// `word`. Returns the morphism and the final word.
    pub fn realize(&self, word: &[usize], tuple: &[Move]) -> Result<(BSMorphism, Word)> {
        let mut cur = word.to_vec();
        let mut acc = BSMorphism::identity(&self.ring, word);
        for mv in tuple {
            let pos = mv.pos();
            let step = match *mv {
                Move::Braid { .. } => self.fsr.get(&self.ring, cur[pos], cur[pos + 1])?,
                Move::Jw { n, .. } if n <= 2 => continue,
                Move::Jw { n, .. } => self.f2.get(&self.ring, cur[pos], cur[pos + 1], n)?,
            };
            let g = step.at(&cur, pos)?;
            acc = g.compose(&acc)?;
            cur = g.tgt;
        }
        Ok((acc, cur))
    }

    /// `f_s̄` (kind E) or `Gf_s̄` (kind D) from the tuple variant `variant`.
    pub fn build_variant(&self, word: &[usize], kind: Kind, variant: usize) -> Result<IdempotentBundle> {
        let sys = self.system();
        sys.require_reduced(word)?;
        let tuple = match kind {
            Kind::E => f_tuple_variant(sys, word, variant)?,
            Kind::D => gf_tuple_variant(sys, word, variant)?,
        };
        let (e, end) = self.realize(word, &tuple)?;
        if end != word || !e.is_idempotent() {
            return Err(Error::NotIdempotent);
        }
        Ok(IdempotentBundle { word: word.to_vec(), tuple, e, kind })
    }

    pub fn build(&self, word: &[usize], kind: Kind) -> Result<IdempotentBundle> {
        self.build_variant(word, kind, 0)
    }

    pub fn build_e(&self, word: &[usize]) -> Result<IdempotentBundle> {
        self.build(word, Kind::E)
    }

    pub fn build_d(&self, word: &[usize]) -> Result<IdempotentBundle> {
        self.build(word, Kind::D)
    }

    /// `η⟨Im e⟩` without any grading shift.
    pub fn image_class(&self, b: &IdempotentBundle) -> Result<HeckeElement> {
        let homs = standard_homs(&self.ring, &b.word, &Pruning::default())?;
        let pt = generic_point(self.ring.nvars());
        let ranks = decategorify_image(&homs, &b.e.eval(&pt), &pt)?;
        Ok(ranks.into_iter().fold(HeckeElement::zero(), |acc, (x, p)| acc.add(&HeckeElement::term(&x, p))))
    }

    /// `e_w = η⟨E_w⟩` or `d_w = v^{ℓ(w)} η⟨Im Gf⟩`, with unitriangularity and
    /// positivity asserted on the unshifted class.
    pub fn decategorify(&self, b: &IdempotentBundle) -> Result<BasisElement> {
        let start = Instant::now();
        let sys = self.system();
        let w = sys.element(&b.word);
        let h = self.image_class(b)?;
        let name = sys.format_word(&b.word);
        if !h.is_positive() {
            return Err(Error::NegativeCoefficient(name));
        }
        if !h.is_unitriangular(sys, &w) {
            return Err(Error::TriangularityViolation(name));
        }
        let h = match b.kind {
            Kind::E => h,
            Kind::D => h.shift(w.length() as i32),
        };
        let provenance =
            Provenance { tuple: b.tuple.clone(), truncation: self.truncation(b.word.len()), millis: start.elapsed().as_millis() };
        Ok(BasisElement { w, kind: b.kind, h, provenance })
    }

    /// Several covering circuits give the same idempotent.
    pub fn tuple_independence_check(&self, word: &[usize], kind: Kind, trials: usize) -> Result<bool> {
        let base = self.build_variant(word, kind, 0)?;
        for v in 1..trials.max(1) {
            if self.build_variant(word, kind, v)?.e != base.e {
                return Ok(false);
            }
        }
        // A redundant braid round trip at the end is absorbed.
        let sys = self.system();
        if let Some(mv) = (0..word.len()).find_map(|p| sys.braid_at(word, p)) {
            let mut t = base.tuple.clone();
            t.push(Move::Braid { pos: mv.pos, len: mv.len });
            t.push(Move::Braid { pos: mv.pos, len: mv.len });
            let (e, _) = self.realize(word, &t)?;
            if e != base.e {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Braid moves leading from `from` to `to` (breadth-first in the rex graph).
    pub fn braid_path(&self, from: &[usize], to: &[usize]) -> Result<MoveTuple> {
        let sys = self.system();
        let x = sys.element(from);
        if sys.element(to) != x {
            return Err(Error::DifferentElements);
        }
        let g = sys.rex_graph(&x);
        let find = |w: &[usize]| g.vertices.iter().position(|v| v.as_slice() == w);
        let (a, b) = (find(from).ok_or(Error::NotReduced(sys.format_word(from)))?, find(to).ok_or(Error::NotReduced(sys.format_word(to)))?);
        let mut prev: Vec<Option<(usize, Move)>> = vec![None; g.vertices.len()];
        let mut seen = vec![false; g.vertices.len()];
        seen[a] = true;
        let mut queue = VecDeque::from([a]);
        while let Some(u) = queue.pop_front() {
            for (v, mv) in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    prev[v] = Some((u, Move::Braid { pos: mv.pos, len: mv.len }));
                    queue.push_back(v);
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = b;
        while cur != a {
            let (u, mv) = prev[cur].ok_or(Error::DifferentElements)?;
            path.push(mv);
            cur = u;
        }
        path.reverse();
        Ok(path)
    }

    /// `f_s̄ ∘ F_{t̄,s̄} ∘ f_t̄ ∘ F_{s̄,t̄} ∘ f_s̄ = f_s̄`.
    pub fn iso_check(&self, s: &[usize], t: &[usize], kind: Kind) -> Result<bool> {
        let fs = self.build(s, kind)?.e;
        let ft = self.build(t, kind)?.e;
        let (fst, _) = self.realize(s, &self.braid_path(s, t)?)?;
        let (fts, _) = self.realize(t, &self.braid_path(t, s)?)?;
        let lhs = fs.compose(&fts)?.compose(&ft)?.compose(&fst)?.compose(&fs)?;
        Ok(lhs == fs)
    }

    /// `q = 1` specialization of the (unshifted) class equals the fraction
    /// field block multiplicities of the image.
    pub fn q1_crosscheck(&self, b: &IdempotentBundle, el: &BasisElement) -> Result<bool> {
        let k = k_blocks(&self.ring, &b.word, &b.e.mat)?;
        Ok(el.h.specialize_q1() == k)
    }

    /// Change-of-basis data and summand-chain flags for computed `e_w`, `d_w`.
    pub fn basis_report(&self, es: &[BasisElement], ds: &[BasisElement]) -> Result<BasisReport> {
        let sys = self.system();
        let mut index: Vec<GroupElement> = es.iter().chain(ds).map(|b| b.w.clone()).collect();
        index.sort();
        index.dedup();
        for w in &index {
            for y in sys.bruhat_interval(w).iter() {
                if !index.contains(y) {
                    return Err(Error::IndexNotBruhatClosed(sys.format_word(y.word())));
                }
            }
        }
        let fmt = |m: BTreeMap<GroupElement, LaurentPoly>| -> BTreeMap<String, String> {
            m.into_iter().map(|(x, p)| (sys.format_word(x.word()), p.to_string())).collect()
        };
        let mut rows = Vec::new();
        for w in &index {
            let e = es.iter().find(|b| &b.w == w);
            let d = ds.iter().find(|b| &b.w == w);
            let kl = self.hecke.kl(w);
            let ell = w.length() as i32;
            let e_minus_d = match (e, d) {
                (Some(e), Some(d)) => Some(kl_positive(&self.hecke, &e.h.shift(ell).sub(&d.h))),
                _ => None,
            };
            let d_minus_kl = d.map(|d| kl_positive(&self.hecke, &d.h.sub(&kl)));
            rows.push(ReportRow {
                w: sys.format_word(w.word()),
                e_in_kl: e.map(|b| fmt(self.hecke.in_kl_basis(&b.h))),
                e_in_y: e.map(|b| fmt(self.hecke.in_y_basis(&b.h))),
                d_in_kl: d.map(|b| fmt(self.hecke.in_kl_basis(&b.h))),
                d_in_y: d.map(|b| fmt(self.hecke.in_y_basis(&b.h))),
                e_minus_d_positive: e_minus_d,
                d_minus_kl_positive: d_minus_kl,
            });
        }
        Ok(BasisReport { rows })
    }
}

/// All coordinates in the KL basis lie in `ℕ[v, v⁻¹]`.
pub fn kl_positive(hecke: &Hecke, h: &HeckeElement) -> bool {
    hecke.in_kl_basis(h).values().all(|p| p.is_nonnegative())
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportRow {
    pub w: String,
    pub e_in_kl: Option<BTreeMap<String, String>>,
    pub e_in_y: Option<BTreeMap<String, String>>,
    pub d_in_kl: Option<BTreeMap<String, String>>,
    pub d_in_y: Option<BTreeMap<String, String>>,
    /// `v^{ℓ(w)}e_w − d_w` is KL-positive.
    pub e_minus_d_positive: Option<bool>,
    /// `d_w − C'_w` is KL-positive.
    pub d_minus_kl_positive: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BasisReport {
    pub rows: Vec<ReportRow>,
}

impl BasisReport {
    pub fn chain_positive(&self) -> bool {
        self.rows.iter().all(|r| r.e_minus_d_positive != Some(false) && r.d_minus_kl_positive != Some(false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e_examples_m4() {
        let eng = Engine::new(CoxeterSystem::dihedral(4).unwrap()).unwrap();
        let h = &eng.hecke;
        let srs = eng.build_e(&[0, 1, 0]).unwrap();
        assert_eq!(srs.e, BSMorphism::identity(&eng.ring, &[0, 1, 0]));
        let el = eng.decategorify(&srs).unwrap();
        let y = h.mul(&h.mul(&h.c_gen(0), &h.c_gen(1)), &h.c_gen(0));
        assert_eq!(el.h, y.shift(-3));
        assert!(eng.q1_crosscheck(&srs, &el).unwrap());

        let srsr = eng.build_e(&[0, 1, 0, 1]).unwrap();
        let el = eng.decategorify(&srsr).unwrap();
        let w = eng.system().element(&[0, 1, 0, 1]);
        assert_eq!(el.h, h.kl(&w).shift(-4));
        assert!(eng.q1_crosscheck(&srsr, &el).unwrap());
    }

    #[test]
    fn braid_path_and_iso_m4() {
        let eng = Engine::new(CoxeterSystem::dihedral(4).unwrap()).unwrap();
        let p = eng.braid_path(&[0, 1, 0, 1], &[1, 0, 1, 0]).unwrap();
        assert_eq!(p, vec![Move::Braid { pos: 0, len: 4 }]);
        assert!(eng.iso_check(&[0, 1, 0, 1], &[1, 0, 1, 0], Kind::E).unwrap());
        assert_eq!(eng.braid_path(&[0, 1], &[1, 0]), Err(Error::DifferentElements));
    }
}

#[cfg(test)]
mod d_basis {
    use super::*;

    #[test]
    fn d_equals_kl_off_length_three() {
        for m in [4, 5] {
            let eng = Engine::new(CoxeterSystem::dihedral(m).unwrap()).unwrap();
            let sys = eng.system().clone();
            for x in sys.elements_up_to(m as usize) {
                let b = eng.build_d(x.word()).unwrap();
                let d = eng.decategorify(&b).unwrap();
                assert!(eng.q1_crosscheck(&b, &d).unwrap());
                let kl = eng.hecke.kl(&x);
                if x.length() == 3 {
                    let y = x.word().iter().fold(eng.hecke.one(), |acc, &s| eng.hecke.mul(&acc, &eng.hecke.c_gen(s)));
                    assert_eq!(d.h, y, "m={m} x={:?}", x.word());
                    assert_ne!(d.h, kl);
                } else {
                    assert_eq!(d.h, kl, "m={m} x={:?}", x.word());
                }
            }
        }
    }
}
