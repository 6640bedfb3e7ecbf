//! Random instances and property checks shared by the property suite and
//! the acceptance run. Every instance is derived from a `u64` seed.

#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use soergel_core::bsmod::f2::preserves_one_from_left;
use soergel_core::bsmod::fsr::FsrCache;
use soergel_core::bsmod::hom::hom_dense;
use soergel_core::bsmod::{BSModule, BSMorphism};
use soergel_core::poly::Mono;
use soergel_core::{CoxeterSystem, Fe, Poly, Ring};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn dihedral_ring(m: u32) -> Arc<Ring> {
    Ring::new(CoxeterSystem::dihedral(m).unwrap())
}

/// The rank-3 system with all bonds 4, with a shared `f_sr` cache.
pub fn rank3() -> &'static (Arc<Ring>, FsrCache) {
    static CELL: OnceLock<(Arc<Ring>, FsrCache)> = OnceLock::new();
    CELL.get_or_init(|| {
        let sys = CoxeterSystem::build(&[vec![1, 4, 4], vec![4, 1, 4], vec![4, 4, 1]], true).unwrap();
        (Ring::new(sys), FsrCache::default())
    })
}

/// Random polynomial of total degree ≤ `maxdeg` with small integer coefficients.
pub fn random_poly(r: &mut ChaCha8Rng, nvars: usize, maxdeg: u32) -> Poly {
    let mut terms = Vec::new();
    for _ in 0..r.gen_range(1..5) {
        let exps: Vec<u32> = (0..nvars).map(|_| r.gen_range(0..=maxdeg)).collect();
        if exps.iter().sum::<u32>() > maxdeg {
            continue;
        }
        terms.push((Mono::from_exps(&exps), Fe::from_int(r.gen_range(-3..=3))));
    }
    Poly::from_terms(terms)
}

/// `∂_s∂_r⋯ = ∂_r∂_s⋯` (m factors each) on a random polynomial.
pub fn demazure_braid(seed: u64) -> bool {
    let mut r = rng(seed);
    let m = r.gen_range(4..=5);
    let ring = dihedral_ring(m);
    let p = random_poly(&mut r, 2, 6);
    let a = CoxeterSystem::alternating(0, 1, m as usize);
    let b = CoxeterSystem::alternating(1, 0, m as usize);
    ring.demazure_word(&a, &p).unwrap() == ring.demazure_word(&b, &p).unwrap()
}

/// `∂_s(fg) = ∂_s(f)g + s(f)∂_s(g)`.
pub fn leibniz(seed: u64) -> bool {
    let mut r = rng(seed);
    let ring = dihedral_ring(r.gen_range(4..=5));
    let s = r.gen_range(0..2);
    let f = random_poly(&mut r, 2, 4);
    let g = random_poly(&mut r, 2, 4);
    let lhs = ring.demazure(s, &f.mul(&g));
    let rhs = ring.demazure(s, &f).mul(&g).add(&ring.act_gen(s, &f).mul(&ring.demazure(s, &g)));
    lhs == rhs
}

pub fn random_word(r: &mut ChaCha8Rng, rank: usize, len: usize) -> Vec<usize> {
    (0..len).map(|_| r.gen_range(0..rank)).collect()
}

/// `φ_ε(p_0⊗⋯⊗p_n) = p_0·σ_1(p_1·σ_2(p_2⋯σ_n(p_n)))` with `σ_i = s_i^{ε_i}`.
fn twisted_product(ring: &Ring, word: &[usize], eps: usize, slots: &[Poly]) -> Poly {
    let mut acc = slots[word.len()].clone();
    for i in (0..word.len()).rev() {
        if eps >> i & 1 == 1 {
            acc = ring.act_gen(word[i], &acc);
        }
        acc = slots[i].mul(&acc);
    }
    acc
}

/// The normal form reassembles to the original tensor: all twisted products
/// agree (they separate points over the fraction field).
pub fn normal_form_reassembly(seed: u64) -> bool {
    let mut r = rng(seed);
    let ring = dihedral_ring(4);
    let len = r.gen_range(1..=3);
    let word = random_word(&mut r, 2, len);
    let slots: Vec<Poly> = (0..=len).map(|_| random_poly(&mut r, 2, 3)).collect();
    let module = BSModule::new(&ring, &word);
    let coeffs = module.normal_form(&slots).unwrap();
    (0..1usize << len).all(|eps| {
        let lhs = twisted_product(&ring, &word, eps, &slots);
        let rhs = coeffs.iter().enumerate().fold(Poly::zero(), |acc, (eta, c)| {
            let basis: Vec<Poly> = (0..=len)
                .map(|i| if i > 0 && eta >> (i - 1) & 1 == 1 { ring.x(word[i - 1]).clone() } else { Poly::one() })
                .collect();
            acc.add(&c.mul(&twisted_product(&ring, &word, eps, &basis)))
        });
        lhs == rhs
    })
}

/// A random composite of generators (`m`, `j`, `α`, and braid morphisms)
/// starting from a random word of length ≤ 3.
pub fn random_composite(seed: u64) -> BSMorphism {
    let (ring, cache) = rank3();
    let mut r = rng(seed);
    let sys = ring.system().clone();
    let len = r.gen_range(1..=3);
    let start = random_word(&mut r, sys.rank(), len);
    let mut acc = BSMorphism::identity(ring, &start);
    for _ in 0..r.gen_range(1..=4) {
        let cur = acc.tgt.clone();
        let mut options: Vec<BSMorphism> = Vec::new();
        for pos in 0..cur.len() {
            options.push(BSMorphism::m(ring, cur[pos]).at(&cur, pos).unwrap());
            if pos + 1 < cur.len() && cur[pos] == cur[pos + 1] {
                options.push(BSMorphism::j(ring, cur[pos]).at(&cur, pos).unwrap());
            }
            if let Some(mv) = sys.braid_at(&cur, pos) {
                options.push(cache.get(ring, mv.first, mv.second).unwrap().at(&cur, pos).unwrap());
            }
        }
        if cur.len() <= 3 {
            let s = r.gen_range(0..sys.rank());
            let pos = r.gen_range(0..=cur.len());
            options.push(BSMorphism::alpha(ring, s).tensor(&cur[..pos], &cur[pos..]));
        }
        let pick = options.swap_remove(r.gen_range(0..options.len()));
        acc = pick.compose(&acc).unwrap();
    }
    acc
}

pub fn composite_is_bimodule(seed: u64) -> bool {
    let f = random_composite(seed);
    f.verify_bimodule()
}

/// A random walk of braid morphisms from a random reduced word; the composite
/// preserves the one-from-left submodule whenever source and target start
/// with the same letter. Returns `None` when the endpoints differ there.
pub fn one_from_left_preserved(seed: u64) -> Option<bool> {
    let mut r = rng(seed);
    let (ring, cache) = rank3();
    let sys = ring.system().clone();
    let x = sys.elements_up_to(5);
    let x = &x[r.gen_range(0..x.len())];
    let mut cur = x.word().clone();
    let mut acc = BSMorphism::identity(ring, &cur);
    for _ in 0..r.gen_range(1..=4) {
        let moves: Vec<_> = (0..cur.len()).filter_map(|p| sys.braid_at(&cur, p)).collect();
        if moves.is_empty() {
            break;
        }
        let mv = moves[r.gen_range(0..moves.len())];
        let g = cache.get(ring, mv.first, mv.second).unwrap().at(&cur, mv.pos).unwrap();
        cur = g.tgt.clone();
        acc = g.compose(&acc).unwrap();
    }
    if acc.src.is_empty() || acc.src[0] != acc.tgt[0] {
        return None;
    }
    Some(preserves_one_from_left(&acc))
}

/// `dim Hom_k(Mθ_s, N) = dim Hom_{k+2}(M, Nθ_s)` on small words.
pub fn adjunction_dimension(seed: u64) -> bool {
    let mut r = rng(seed);
    let ring = dihedral_ring(4);
    let (lm, ln) = (r.gen_range(0..=2), r.gen_range(0..=2));
    let m = random_word(&mut r, 2, lm);
    let n = random_word(&mut r, 2, ln);
    let s = r.gen_range(0..2);
    let k = 2 * r.gen_range(-2i64..=1);
    let ms: Vec<usize> = m.iter().copied().chain([s]).collect();
    let ns: Vec<usize> = n.iter().copied().chain([s]).collect();
    hom_dense(&ring, &ms, &n, k).len() == hom_dense(&ring, &m, &ns, k + 2).len()
}
