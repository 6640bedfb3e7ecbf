//! The graded polynomial ring `R = S(V*)` with its W-action, Demazure
//! operators, and the dihedral data `d`, `∂_w(d)`, `∂_w(d)*`, `t̂`.
//!
//! Variables `y_s` are the coordinates dual to the simple roots, so a linear
//! form `f` is `Σ f(α_r) y_r` and `x_s = 2B(α_s, ·)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::coxeter::{CoxeterSystem, GroupElement, Word};
use crate::error::{Error, Result};
use crate::field::{big, Fe};
use crate::linalg::Matrix;
use crate::poly::{Mono, Poly};

pub struct Ring {
    sys: Arc<CoxeterSystem>,
    xs: Vec<Poly>,
    /// `gen_images[s][j] = s·y_j`.
    gen_images: Vec<Vec<Poly>>,
    elem_images: Mutex<HashMap<usize, Arc<Vec<Poly>>>>,
    dihedral: Mutex<HashMap<(usize, usize), Arc<DihedralData>>>,
}

impl std::fmt::Debug for Ring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Ring").field("system", &self.sys).finish()
    }
}

/// All monomials of total exponent `total` in `n` variables, in decreasing order.
pub fn monomials(n: usize, total: u32) -> Vec<Mono> {
    fn rec(i: usize, n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if i + 1 == n {
            cur.push(left);
            out.push(Mono::from_exps(cur));
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(i + 1, n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if total == 0 {
            out.push(Mono::ONE);
        }
        return out;
    }
    rec(0, n, total, &mut Vec::new(), &mut out);
    out
}

impl Ring {
    pub fn new(sys: Arc<CoxeterSystem>) -> Arc<Ring> {
        let n = sys.rank();
        let two = big(2);
        let xs: Vec<Poly> = (0..n)
            .map(|s| Poly::linear(&(0..n).map(|r| sys.bilinear(s, r).scale(&two)).collect::<Vec<_>>()))
            .collect();
        let gen_images = (0..n)
            .map(|s| {
                (0..n)
                    .map(|j| if j == s { Poly::var(s).sub(&xs[s]) } else { Poly::var(j) })
                    .collect()
            })
            .collect();
        Arc::new(Ring {
            sys,
            xs,
            gen_images,
            elem_images: Mutex::new(HashMap::new()),
            dihedral: Mutex::new(HashMap::new()),
        })
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    pub fn nvars(&self) -> usize {
        self.sys.rank()
    }

    /// The linear form `x_s` with kernel the hyperplane fixed by `s`.
    pub fn x(&self, s: usize) -> &Poly {
        &self.xs[s]
    }

    pub fn var_names(&self) -> Vec<String> {
        self.sys.names().iter().map(|n| format!("y_{n}")).collect()
    }

    pub fn format(&self, p: &Poly) -> String {
        p.to_string_with(&self.var_names())
    }

    pub fn parse(&self, s: &str) -> Result<Poly> {
        crate::expr::parse_poly(s, self.sys.field(), &self.var_names())
    }

    pub fn act_gen(&self, s: usize, p: &Poly) -> Poly {
        p.substitute(&self.gen_images[s])
    }

    fn images(&self, w: &GroupElement) -> Arc<Vec<Poly>> {
        if let Some(v) = self.elem_images.lock().unwrap().get(&w.id()) {
            return v.clone();
        }
        let n = self.nvars();
        let mut imgs: Vec<Poly> = (0..n).map(Poly::var).collect();
        // w·p = s_1·(s_2·(…(s_k·p))); build images right to left.
        for &s in w.word().iter().rev() {
            imgs = imgs.iter().map(|p| self.act_gen(s, p)).collect();
        }
        let imgs = Arc::new(imgs);
        self.elem_images.lock().unwrap().insert(w.id(), imgs.clone());
        imgs
    }

    /// The ring automorphism `p ↦ w·p`.
    pub fn act(&self, w: &GroupElement, p: &Poly) -> Poly {
        if w.is_identity() {
            return p.clone();
        }
        p.substitute(&self.images(w))
    }

    /// `∂_s(p) = (p − s·p) / (2 x_s)`.
    pub fn demazure(&self, s: usize, p: &Poly) -> Poly {
        let num = p.sub(&self.act_gen(s, p));
        if num.is_zero() {
            return Poly::zero();
        }
        let den = self.xs[s].scale(&Fe::from_int(2));
        num.div_exact(&den)
            .ok_or_else(|| Error::InternalDivisionFailure(self.format(p)))
            .expect("Demazure quotient is always exact")
    }

    /// `∂_{s_1}⋯∂_{s_n}(p)` for a reduced word.
    pub fn demazure_word(&self, word: &[usize], p: &Poly) -> Result<Poly> {
        self.sys.require_reduced(word)?;
        Ok(self.demazure_word_unchecked(word, p))
    }

    pub(crate) fn demazure_word_unchecked(&self, word: &[usize], p: &Poly) -> Poly {
        let mut q = p.clone();
        for &s in word.iter().rev() {
            if q.is_zero() {
                break;
            }
            q = self.demazure(s, &q);
        }
        q
    }

    /// `(P_s(p), ∂_s(p))` with `p = P_s(p) + x_s ∂_s(p)` and `P_s(p)` s-invariant.
    pub fn invariant_decompose(&self, s: usize, p: &Poly) -> (Poly, Poly) {
        let sp = self.act_gen(s, p);
        let half = Fe::from_ratio(1, 2);
        let inv = p.add(&sp).scale(&half);
        let d = p.sub(&sp);
        let d = if d.is_zero() {
            Poly::zero()
        } else {
            d.div_exact(&self.xs[s].scale(&Fe::from_int(2))).expect("Demazure quotient is always exact")
        };
        (inv, d)
    }

    /// Basis (as polynomials) of the degree-`deg` slice invariant under all
    /// generators in `gens`.
    pub fn invariant_slice(&self, gens: &[usize], deg: usize) -> Vec<Poly> {
        if deg % 2 == 1 {
            return Vec::new();
        }
        let monos = monomials(self.nvars(), (deg / 2) as u32);
        let index: HashMap<Mono, usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut rows: Vec<Vec<Fe>> = Vec::new();
        let cols: Vec<Vec<Poly>> = gens
            .iter()
            .map(|&s| monos.iter().map(|&m| self.act_gen(s, &Poly::monomial(m, Fe::one())).sub(&Poly::monomial(m, Fe::one()))).collect())
            .collect();
        for img in &cols {
            let mut block = vec![vec![Fe::zero(); monos.len()]; monos.len()];
            for (j, p) in img.iter().enumerate() {
                for (m, c) in p.terms() {
                    block[index[m]][j] = c.clone();
                }
            }
            rows.extend(block);
        }
        if rows.is_empty() {
            return monos.into_iter().map(|m| Poly::monomial(m, Fe::one())).collect();
        }
        Matrix::from_rows(rows)
            .nullspace()
            .into_iter()
            .map(|v| Poly::from_terms(monos.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (*m, c)).collect()))
            .collect()
    }

    pub fn dihedral_data(&self, s: usize, r: usize) -> Result<Arc<DihedralData>> {
        if let Some(d) = self.dihedral.lock().unwrap().get(&(s, r)) {
            return Ok(d.clone());
        }
        let data = Arc::new(DihedralData::build(self, s, r, None)?);
        self.dihedral.lock().unwrap().insert((s, r), data.clone());
        Ok(data)
    }

    /// Dihedral data with `x_t` rescaled by `scales` (indexed like
    /// [`DihedralData::reflections`]); not memoized.
    pub fn dihedral_data_scaled(&self, s: usize, r: usize, scales: &[Fe]) -> Result<DihedralData> {
        DihedralData::build(self, s, r, Some(scales))
    }
}

/// The parabolic `⟨s, r⟩` together with `d`, the basis `∂_w(d)` and its dual.
#[derive(Debug)]
pub struct DihedralData {
    pub s: usize,
    pub r: usize,
    pub m: usize,
    /// Elements of the parabolic, sorted by length then word.
    pub elements: Vec<GroupElement>,
    /// `(t, x_t)` in discovery order.
    pub reflections: Vec<(GroupElement, Poly)>,
    pub d: Poly,
    /// `∂_w(d)` indexed like `elements`.
    pub basis: Vec<Poly>,
    /// `∂_w(d)*` indexed like `elements`.
    pub dual: Vec<Poly>,
    pub w0: Word,
    /// The nonzero constant `∂_{w0}(d)`.
    pub top: Fe,
    ring: Arc<RingHandle>,
    inv_memo: Mutex<HashMap<usize, Vec<Poly>>>,
}

/// Minimal data needed to run Demazure operators without a back-pointer to
/// the owning [`Ring`].
#[derive(Debug)]
struct RingHandle {
    gens: [usize; 2],
    xs: [Poly; 2],
    images: [Vec<Poly>; 2],
    nvars: usize,
}

impl RingHandle {
    fn act_gen(&self, k: usize, p: &Poly) -> Poly {
        p.substitute(&self.images[k])
    }

    fn demazure(&self, k: usize, p: &Poly) -> Poly {
        let num = p.sub(&self.act_gen(k, p));
        if num.is_zero() {
            return Poly::zero();
        }
        num.div_exact(&self.xs[k].scale(&Fe::from_int(2))).expect("Demazure quotient is always exact")
    }

    fn demazure_word(&self, word: &[usize], p: &Poly) -> Poly {
        let mut q = p.clone();
        for &g in word.iter().rev() {
            if q.is_zero() {
                break;
            }
            let k = if g == self.gens[0] { 0 } else { 1 };
            q = self.demazure(k, &q);
        }
        q
    }
}

impl DihedralData {
    fn build(ring: &Ring, s: usize, r: usize, scales: Option<&[Fe]>) -> Result<DihedralData> {
        let sys = ring.system();
        if s == r {
            return Err(Error::Invalid("dihedral data needs two distinct generators".into()));
        }
        let m = sys.bond(s, r) as usize;
        let mut elements: Vec<GroupElement> = Vec::new();
        for len in 0..=m {
            for first in [s, r] {
                let w = CoxeterSystem::alternating(first, if first == s { r } else { s }, len);
                let e = sys.element(&w);
                if !elements.contains(&e) {
                    elements.push(e);
                }
            }
        }
        elements.sort();
        let w0: Word = CoxeterSystem::alternating(s, r, m);
        // x_t = w·x_c for the first (shortest, then lexicographically least) w.
        let mut reflections: Vec<(GroupElement, Poly)> = Vec::new();
        for w in &elements {
            for c in [s.min(r), s.max(r)] {
                let t = sys.mul(&sys.mul(w, &sys.generator(c)), &sys.inverse(w));
                if reflections.iter().all(|(u, _)| *u != t) {
                    reflections.push((t, ring.act(w, ring.x(c))));
                }
            }
        }
        if reflections.len() != m {
            return Err(Error::Invalid(format!("found {} reflections, expected {m}", reflections.len())));
        }
        if let Some(sc) = scales {
            for ((_, x), c) in reflections.iter_mut().zip(sc) {
                *x = x.scale(c);
            }
        }
        let d = reflections.iter().fold(Poly::one(), |acc, (_, x)| acc.mul(x));
        let handle = Arc::new(RingHandle {
            gens: [s, r],
            xs: [ring.x(s).clone(), ring.x(r).clone()],
            images: [ring.gen_images[s].clone(), ring.gen_images[r].clone()],
            nvars: ring.nvars(),
        });
        let basis: Vec<Poly> = elements.iter().map(|w| handle.demazure_word(w.word(), &d)).collect();
        let top_poly = handle.demazure_word(&w0, &d);
        if !top_poly.is_constant() || top_poly.is_zero() {
            return Err(Error::SingularPairing);
        }
        let top = top_poly.constant_term();
        let mut data = DihedralData {
            s,
            r,
            m,
            elements,
            reflections,
            d,
            basis,
            dual: Vec::new(),
            w0,
            top,
            ring: handle,
            inv_memo: Mutex::new(HashMap::new()),
        };
        data.dual = data.solve_dual()?;
        Ok(data)
    }

    /// `t̂(p) = ∂_{w0}(p) / ∂_{w0}(d)`: only the `w = e` summand of
    /// `p = Σ λ_w ∂_w(d)` survives `∂_{w0}`.
    pub fn t_hat_fast(&self, p: &Poly) -> Poly {
        let inv = self.top.inv().unwrap();
        self.ring.demazure_word(&self.w0, p).scale(&inv)
    }

    fn solve_dual(&self) -> Result<Vec<Poly>> {
        let n = self.ring.nvars;
        let mut dual = Vec::with_capacity(self.elements.len());
        for (k, w) in self.elements.iter().enumerate() {
            let monos = monomials(n, w.length() as u32);
            // Equations: coefficients of t̂(∂_v(d)·q) against δ_{v,w}.
            let mut eq_index: HashMap<(usize, Mono), usize> = HashMap::new();
            let mut cols: Vec<Vec<(usize, Fe)>> = Vec::new();
            for &mono in &monos {
                let q = Poly::monomial(mono, Fe::one());
                let mut col = Vec::new();
                for (v, b) in self.basis.iter().enumerate() {
                    let t = self.t_hat_fast(&b.mul(&q));
                    for (tm, tc) in t.terms() {
                        let len = eq_index.len();
                        let row = *eq_index.entry((v, *tm)).or_insert(len);
                        col.push((row, tc.clone()));
                    }
                }
                cols.push(col);
            }
            let key = (k, Mono::ONE);
            let len = eq_index.len();
            let target_row = *eq_index.entry(key).or_insert(len);
            let mut a = Matrix::zeros(eq_index.len(), monos.len());
            for (j, col) in cols.iter().enumerate() {
                for (row, c) in col {
                    a.set(*row, j, c.clone());
                }
            }
            let mut rhs = vec![Fe::zero(); eq_index.len()];
            rhs[target_row] = Fe::one();
            let sol = a.solve(&rhs).ok_or(Error::SingularPairing)?;
            if a.rank() != monos.len() {
                // The dual element is unique; a kernel would mean a degenerate form.
                return Err(Error::SingularPairing);
            }
            dual.push(Poly::from_terms(monos.iter().zip(sol).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (*m, c)).collect()));
        }
        Ok(dual)
    }

    fn invariants(&self, deg: usize) -> Vec<Poly> {
        if let Some(v) = self.inv_memo.lock().unwrap().get(&deg) {
            return v.clone();
        }
        let monos = monomials(self.ring.nvars, (deg / 2) as u32);
        let index: HashMap<Mono, usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mut rows = Vec::new();
        for k in 0..2 {
            let mut block = vec![vec![Fe::zero(); monos.len()]; monos.len()];
            for (j, &m) in monos.iter().enumerate() {
                let p = Poly::monomial(m, Fe::one());
                for (tm, tc) in self.ring.act_gen(k, &p).sub(&p).terms() {
                    block[index[tm]][j] = tc.clone();
                }
            }
            rows.extend(block);
        }
        let out: Vec<Poly> = Matrix::from_rows(rows)
            .nullspace()
            .into_iter()
            .map(|v| Poly::from_terms(monos.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(m, c)| (*m, c)).collect()))
            .collect();
        self.inv_memo.lock().unwrap().insert(deg, out.clone());
        out
    }

    /// The coefficient `λ_e` of `p = Σ λ_w ∂_w(d)` over the invariants,
    /// found by degree-wise linear solving. Degrees above `budget` are
    /// refused.
    pub fn t_hat(&self, p: &Poly, budget: usize) -> Result<Poly> {
        let mut out = Poly::zero();
        let max_deg = 2 * p.max_total() as usize;
        for deg in (0..=max_deg).step_by(2) {
            let comp = p.component(deg);
            if comp.is_zero() {
                continue;
            }
            if deg > budget {
                return Err(Error::TruncationInsufficient(budget));
            }
            // Unknown blocks: invariants of degree deg − deg(∂_w d) times ∂_w(d).
            let mut gens: Vec<(usize, Poly)> = Vec::new();
            for (k, w) in self.elements.iter().enumerate() {
                let bdeg = 2 * self.m - 2 * w.length();
                if deg < bdeg {
                    continue;
                }
                for inv in self.invariants(deg - bdeg) {
                    gens.push((k, inv.mul(&self.basis[k])));
                }
            }
            let monos = monomials(self.ring.nvars, (deg / 2) as u32);
            let index: HashMap<Mono, usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
            let mut a = Matrix::zeros(monos.len(), gens.len());
            for (j, (_, g)) in gens.iter().enumerate() {
                for (m, c) in g.terms() {
                    a.set(index[m], j, c.clone());
                }
            }
            let mut rhs = vec![Fe::zero(); monos.len()];
            for (m, c) in comp.terms() {
                rhs[index[m]] = c.clone();
            }
            let sol = a.solve(&rhs).ok_or(Error::TruncationInsufficient(budget))?;
            let e_index = 0;
            for ((k, g), c) in gens.iter().zip(sol) {
                if *k == e_index && !c.is_zero() {
                    out = out.add(&g.div_exact(&self.basis[e_index]).unwrap().scale(&c));
                }
            }
        }
        Ok(out)
    }

    pub fn index_of(&self, w: &GroupElement) -> Option<usize> {
        self.elements.iter().position(|e| e == w)
    }

    pub fn act_gen(&self, which: usize, p: &Poly) -> Poly {
        let k = if which == self.s { 0 } else { 1 };
        self.ring.act_gen(k, p)
    }

    pub fn demazure_word(&self, word: &[usize], p: &Poly) -> Poly {
        self.ring.demazure_word(word, p)
    }
}
