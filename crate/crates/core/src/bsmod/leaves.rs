//! Bases of `Hom(θ_{s̄}, R_x)` for every `x`, built one letter at a time.
//!
//! Adding a letter `s` uses `Hom(Mθ_s, R_x) ≅ Hom(M, R_xθ_s)` and the
//! description `R_xθ_s ≅ {(f, g) ∈ R_x ⊕ R_{xs} : f ≡ g mod ℓ}` with
//! `ℓ = x(x_s)`. A pair `(φ0, φ1)` gives `φ(b_{η,0}) = (φ0 − φ1)(b_η)/ℓ` and
//! `φ(b_{η,1}) = (φ0 − φ1)(b_η)` (up to the harmless factor ½). One of the two
//! filtrations of the pair module splits with explicit lifts, found by
//! solving the congruence modulo `ℓ`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::coxeter::{GroupElement, Word};
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::hecke::LaurentPoly;
use crate::linalg::Matrix;
use crate::poly::{Mono, Poly};
use crate::polyring::{monomials, Ring};

/// A homogeneous `φ ∈ Hom(θ, R_x)` given by its values on the 01-basis;
/// `φ(b_ε)` has degree `2|ε| + degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomGen {
    pub degree: i64,
    pub values: Vec<Poly>,
}

/// Free bases of `Hom(θ_word, R_x)` keyed by `x`.
#[derive(Clone, Debug)]
pub struct StandardHoms {
    pub word: Word,
    pub by_label: BTreeMap<GroupElement, Vec<HomGen>>,
}

/// Restricts the recursion to what can still contribute to generators of
/// degree `≤ max_degree` at the labels in `labels`.
#[derive(Clone, Debug, Default)]
pub struct Pruning {
    pub max_degree: Option<i64>,
    pub labels: Option<Vec<GroupElement>>,
}

impl StandardHoms {
    pub fn get(&self, x: &GroupElement) -> &[HomGen] {
        self.by_label.get(x).map_or(&[], |v| v.as_slice())
    }

    /// `Σ v^{deg}` over the generators at `x`.
    pub fn graded_rank(&self, x: &GroupElement) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for g in self.get(x) {
            out = out.add(&LaurentPoly::monomial(g.degree as i32, 1));
        }
        out
    }
}

/// Reduction modulo the linear form `ℓ`: eliminate one variable.
struct ModLinear {
    pivot: usize,
    images: Vec<Poly>,
}

impl ModLinear {
    fn new(ell: &Poly, nvars: usize) -> ModLinear {
        let coeffs: Vec<Fe> = (0..nvars).map(|i| ell.coeff(Mono::var(i))).collect();
        let pivot = coeffs.iter().position(|c| !c.is_zero()).expect("ℓ is a nonzero linear form");
        let cinv = coeffs[pivot].inv().unwrap().neg();
        let rest = Poly::linear(&(0..nvars).map(|i| if i == pivot { Fe::zero() } else { coeffs[i].mul(&cinv) }).collect::<Vec<_>>());
        let images = (0..nvars).map(|i| if i == pivot { rest.clone() } else { Poly::var(i) }).collect();
        ModLinear { pivot, images }
    }

    fn reduce(&self, p: &Poly) -> Poly {
        if p.is_zero() {
            Poly::zero()
        } else {
            p.substitute(&self.images)
        }
    }

    /// Monomials of degree `2e` avoiding the pivot variable.
    fn monomials(&self, nvars: usize, e: u32) -> Vec<Mono> {
        monomials(nvars, e).into_iter().filter(|m| m.exp(self.pivot) == 0).collect()
    }
}

/// For each target, some `Σ a_i g_i ≡ target (mod ℓ)` with homogeneous
/// `a_i`, or `None` when no lift exists.
fn lift_all(ring: &Ring, gens: &[HomGen], targets: &[HomGen], ell: &Poly) -> Vec<Option<HomGen>> {
    let nv = ring.nvars();
    let red = ModLinear::new(ell, nv);
    let reduced: Vec<Vec<Poly>> = gens.iter().map(|g| g.values.iter().map(|p| red.reduce(p)).collect()).collect();
    let mut out = vec![None; targets.len()];
    // Targets of equal degree share one elimination.
    let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (t, k) in targets.iter().enumerate() {
        by_degree.entry(k.degree).or_default().push(t);
    }
    for (deg, ts) in by_degree {
        let mut unknowns: Vec<(usize, Mono)> = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let diff = deg - g.degree;
            if diff >= 0 && diff % 2 == 0 {
                for u in red.monomials(nv, (diff / 2) as u32) {
                    unknowns.push((i, u));
                }
            }
        }
        let mut rows: HashMap<(usize, Mono), usize> = HashMap::new();
        let mut entries: Vec<(usize, usize, Fe)> = Vec::new();
        let mut row_of = |eta: usize, m: Mono| {
            let n = rows.len();
            *rows.entry((eta, m)).or_insert(n)
        };
        for (col, (i, u)) in unknowns.iter().enumerate() {
            for (eta, p) in reduced[*i].iter().enumerate() {
                for (m, c) in p.terms() {
                    entries.push((row_of(eta, m.mul(*u)), col, c.clone()));
                }
            }
        }
        let mut rhs_entries: Vec<Vec<(usize, Fe)>> = Vec::new();
        for &t in &ts {
            let mut v = Vec::new();
            for (eta, p) in targets[t].values.iter().enumerate() {
                for (m, c) in red.reduce(p).terms() {
                    v.push((row_of(eta, *m), c.clone()));
                }
            }
            rhs_entries.push(v);
        }
        let nrows = rows.len();
        let mut a = Matrix::zeros(nrows, unknowns.len());
        for (r, c, v) in entries {
            let cur = a.get(r, c).add(&v);
            a.set(r, c, cur);
        }
        let bs: Vec<Vec<Fe>> = rhs_entries
            .iter()
            .map(|v| {
                let mut b = vec![Fe::zero(); nrows];
                for (r, c) in v {
                    b[*r] = b[*r].add(c);
                }
                b
            })
            .collect();
        let sols = if unknowns.is_empty() {
            bs.iter().map(|b| b.iter().all(Fe::is_zero).then(Vec::new)).collect()
        } else {
            a.solve_many(&bs)
        };
        for (&t, sol) in ts.iter().zip(sols) {
            out[t] = sol.map(|x| {
                let n = targets[t].values.len();
                let mut values = vec![Poly::zero(); n];
                for ((i, u), c) in unknowns.iter().zip(&x) {
                    if c.is_zero() {
                        continue;
                    }
                    for (eta, p) in gens[*i].values.iter().enumerate() {
                        if !p.is_zero() {
                            values[eta] = values[eta].add(&p.mul_mono(*u, c));
                        }
                    }
                }
                HomGen { degree: deg, values }
            });
        }
    }
    out
}

/// The new generator built from a pair `(φ0, φ1)` with `φ0 ≡ φ1 mod ℓ`.
fn from_pair(phi0: &[Poly], phi1: &[Poly], ell: &Poly, degree: i64) -> Result<HomGen> {
    let n = phi0.len();
    let mut values = vec![Poly::zero(); 2 * n];
    for eta in 0..n {
        let d = phi0[eta].sub(&phi1[eta]);
        if d.is_zero() {
            continue;
        }
        let a = d.div_exact(ell).ok_or_else(|| Error::InternalDivisionFailure("pair is not congruent mod ℓ".into()))?;
        values[eta + n] = d;
        values[eta] = a;
    }
    Ok(HomGen { degree, values })
}

fn zeros(n: usize) -> Vec<Poly> {
    vec![Poly::zero(); n]
}

/// One direction of the splitting: `sub` generators are `ℓ·(basis of H_sub)`
/// placed on the `sub` side, and every generator of the other side is lifted.
fn extend_direction(ring: &Ring, ell: &Poly, h_sub: &[HomGen], h_quo: &[HomGen], sub_is_first: bool, n: usize) -> Result<Option<Vec<HomGen>>> {
    let lifts = lift_all(ring, h_sub, h_quo, ell);
    if lifts.iter().any(Option::is_none) {
        return Ok(None);
    }
    let mut out = Vec::new();
    for g in h_sub {
        // (ℓg, 0) or (0, ℓg): A = ±g, new degree d_g.
        let scaled: Vec<Poly> = g.values.iter().map(|p| p.mul(ell)).collect();
        let gen = if sub_is_first {
            from_pair(&scaled, &zeros(n), ell, g.degree)?
        } else {
            from_pair(&zeros(n), &scaled, ell, g.degree)?
        };
        out.push(gen);
    }
    for (k, lift) in h_quo.iter().zip(lifts) {
        let lift = lift.unwrap();
        let gen = if sub_is_first {
            from_pair(&lift.values, &k.values, ell, k.degree - 2)?
        } else {
            from_pair(&k.values, &lift.values, ell, k.degree - 2)?
        };
        out.push(gen);
    }
    Ok(Some(out))
}

/// Bases of `Hom(θ_word, R_x)` for all `x`, optionally pruned.
pub fn standard_homs(ring: &Arc<Ring>, word: &[usize], pruning: &Pruning) -> Result<StandardHoms> {
    let sys = ring.system().clone();
    let mut cur: BTreeMap<GroupElement, Vec<HomGen>> = BTreeMap::new();
    cur.insert(sys.identity(), vec![HomGen { degree: 0, values: vec![Poly::one()] }]);
    for (k, &s) in word.iter().enumerate() {
        let n = 1usize << k;
        let remaining = (word.len() - k - 1) as i64;
        let mut labels: Vec<GroupElement> = Vec::new();
        for x in cur.keys() {
            for y in [x.clone(), sys.mul_gen_right(x, s)] {
                if !labels.contains(&y) {
                    labels.push(y);
                }
            }
        }
        if let Some(targets) = &pruning.labels {
            labels.retain(|x| targets.iter().any(|y| sys.mul(&sys.inverse(x), y).length() as i64 <= remaining));
        }
        let mut next = BTreeMap::new();
        for x in labels {
            let xs = sys.mul_gen_right(&x, s);
            let ell = ring.act(&x, ring.x(s));
            let hx = cur.get(&x).cloned().unwrap_or_default();
            let hxs = cur.get(&xs).cloned().unwrap_or_default();
            let prefer_x_sub = xs.length() > x.length();
            let first = if prefer_x_sub {
                extend_direction(ring, &ell, &hx, &hxs, true, n)?
            } else {
                extend_direction(ring, &ell, &hxs, &hx, false, n)?
            };
            let gens = match first {
                Some(g) => g,
                None => {
                    let second = if prefer_x_sub {
                        extend_direction(ring, &ell, &hxs, &hx, false, n)?
                    } else {
                        extend_direction(ring, &ell, &hx, &hxs, true, n)?
                    };
                    second.ok_or_else(|| Error::Invalid(format!("no split lift at {:?}", x.word())))?
                }
            };
            let mut gens = gens;
            if let Some(maxd) = pruning.max_degree {
                gens.retain(|g| g.degree <= maxd + 2 * remaining);
            }
            if !gens.is_empty() {
                next.insert(x, gens);
            }
        }
        cur = next;
    }
    Ok(StandardHoms { word: word.to_vec(), by_label: cur })
}

/// Graded rank of `Hom(Im e, R_x)` from a basis of `Hom(θ, R_x)` and the
/// value of the idempotent `e` at a generic point: writes each `φ_j ∘ e` in
/// the basis and keeps the degree-preserving (constant) coefficients.
pub fn image_rank(gens: &[HomGen], e: &Matrix, pt: &[Fe]) -> Result<LaurentPoly> {
    if gens.is_empty() {
        return Ok(LaurentPoly::zero());
    }
    let n = e.rows;
    let r = gens.len();
    let g = Matrix::from_rows((0..n).map(|eta| gens.iter().map(|h| h.values[eta].eval(pt)).collect()).collect());
    let et = e.transpose();
    let targets: Vec<Vec<Fe>> = (0..r).map(|j| et.mul_vec(&g.data.chunks(r).map(|row| row[j].clone()).collect::<Vec<_>>())).collect();
    let sols = g.solve_many(&targets);
    let mut blocks: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, h) in gens.iter().enumerate() {
        blocks.entry(h.degree).or_default().push(i);
    }
    let mut p = vec![vec![Fe::zero(); r]; r];
    for (j, sol) in sols.into_iter().enumerate() {
        let sol = sol.ok_or(Error::NotBimoduleMap)?;
        for i in 0..r {
            if gens[i].degree > gens[j].degree && !sol[i].is_zero() {
                return Err(Error::NotBimoduleMap);
            }
            p[i][j] = sol[i].clone();
        }
    }
    let mut out = LaurentPoly::zero();
    for (deg, idx) in blocks {
        let block = Matrix::from_rows(idx.iter().map(|&i| idx.iter().map(|&j| p[i][j].clone()).collect()).collect());
        let rk = block.rank();
        if rk > 0 {
            out = out.add(&LaurentPoly::monomial(deg as i32, rk as i64));
        }
    }
    Ok(out)
}

/// `η⟨Im e⟩ = Σ_x rk̄ Hom(Im e, R_x) T_x` over the labels of `homs`.
pub fn decategorify_image(homs: &StandardHoms, e: &Matrix, pt: &[Fe]) -> Result<BTreeMap<GroupElement, LaurentPoly>> {
    let mut out = BTreeMap::new();
    for (x, gens) in &homs.by_label {
        let p = image_rank(gens, e, pt)?;
        if !p.is_zero() {
            out.insert(x.clone(), p);
        }
    }
    Ok(out)
}

/// Check that a generator really is a bimodule map into `R_x`.
pub fn is_twisted_linear(ring: &Arc<Ring>, word: &[usize], x: &GroupElement, g: &HomGen) -> bool {
    let module = super::BSModule::new(ring, word);
    (0..ring.nvars()).all(|j| {
        let y = Poly::var(j);
        let xy = ring.act(x, &y);
        (0..module.dim()).all(|eps| {
            let lhs = module.right_mul(eps, &y).iter().fold(Poly::zero(), |acc, (i, c)| acc.add(&c.mul(&g.values[*i])));
            lhs == g.values[eps].mul(&xy)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bsmod::localize::generic_point;
    use crate::coxeter::CoxeterSystem;
    use crate::hecke::Hecke;

    #[test]
    fn theta_s() {
        let ring = Ring::new(CoxeterSystem::dihedral(4).unwrap());
        let sys = ring.system().clone();
        let h = standard_homs(&ring, &[0], &Pruning::default()).unwrap();
        assert_eq!(h.get(&sys.identity()).len(), 1);
        assert_eq!(h.get(&sys.generator(0)).len(), 1);
        for (x, gens) in &h.by_label {
            for g in gens {
                assert_eq!(g.degree, 0);
                assert!(is_twisted_linear(&ring, &[0], x, g));
            }
        }
    }

    #[test]
    fn ranks_match_bott_samelson_classes() {
        let ring = Ring::new(CoxeterSystem::dihedral(4).unwrap());
        let sys = ring.system().clone();
        let hecke = Hecke::new(sys.clone());
        for word in [vec![0, 0], vec![0, 1, 0], vec![0, 1, 0, 1], vec![0, 1, 1, 0]] {
            let h = standard_homs(&ring, &word, &Pruning::default()).unwrap();
            let class = hecke.bs_class(&word);
            for x in sys.elements_up_to(4) {
                assert_eq!(h.graded_rank(&x), class.coeff(&x), "word {word:?} x {:?}", x.word());
                for g in h.get(&x) {
                    assert!(is_twisted_linear(&ring, &word, &x, g));
                }
            }
        }
        let pt = generic_point(2);
        let h = standard_homs(&ring, &[0, 1, 0], &Pruning::default()).unwrap();
        let id = Matrix::identity(8);
        let d = decategorify_image(&h, &id, &pt).unwrap();
        assert_eq!(d.len(), 6);
    }
}
