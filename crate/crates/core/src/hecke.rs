//! The Hecke algebra over `Z[v, v⁻¹]` with `T_s² = q + (q − 1)T_s`, `q = v⁻²`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::coxeter::{CoxeterSystem, GroupElement};

/// An integer Laurent polynomial in `v`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LaurentPoly(BTreeMap<i32, i64>);

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly(BTreeMap::new())
    }
    pub fn one() -> Self {
        LaurentPoly::monomial(0, 1)
    }
    /// `c·v^k`.
    pub fn monomial(k: i32, c: i64) -> Self {
        let mut m = BTreeMap::new();
        if c != 0 {
            m.insert(k, c);
        }
        LaurentPoly(m)
    }
    /// `q^k = v^{-2k}`.
    pub fn q_pow(k: i32) -> Self {
        LaurentPoly::monomial(-2 * k, 1)
    }
    pub fn from_terms(t: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (k, c) in t {
            p.add_term(k, c);
        }
        p
    }
    fn add_term(&mut self, k: i32, c: i64) {
        if c == 0 {
            return;
        }
        let e = self.0.entry(k).or_insert(0);
        *e += c;
        if *e == 0 {
            self.0.remove(&k);
        }
    }
    pub fn terms(&self) -> &BTreeMap<i32, i64> {
        &self.0
    }
    pub fn coeff(&self, k: i32) -> i64 {
        self.0.get(&k).copied().unwrap_or(0)
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (&k, &c) in &o.0 {
            p.add_term(k, c);
        }
        p
    }
    pub fn neg(&self) -> Self {
        LaurentPoly(self.0.iter().map(|(&k, &c)| (k, -c)).collect())
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Self) -> Self {
        let mut p = LaurentPoly::zero();
        for (&a, &ca) in &self.0 {
            for (&b, &cb) in &o.0 {
                p.add_term(a + b, ca * cb);
            }
        }
        p
    }
    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (e + k, c)).collect())
    }
    /// `v ↦ v⁻¹`.
    pub fn bar(&self) -> Self {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (-e, c)).collect())
    }
    pub fn eval_at_one(&self) -> i64 {
        self.0.values().sum()
    }
    pub fn is_nonnegative(&self) -> bool {
        self.0.values().all(|&c| c > 0)
    }
    pub fn min_degree(&self) -> Option<i32> {
        self.0.keys().next().copied()
    }
    pub fn max_degree(&self) -> Option<i32> {
        self.0.keys().next_back().copied()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (&k, &c)) in self.0.iter().enumerate() {
            let sign = if c < 0 { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            let a = c.abs();
            match (k, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "v")?,
                (1, _) => write!(f, "{a}v")?,
                (_, 1) => write!(f, "v^{k}")?,
                _ => write!(f, "{a}v^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A finitely supported combination `Σ p_x T_x`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct HeckeElement(BTreeMap<GroupElement, LaurentPoly>);

impl HeckeElement {
    pub fn zero() -> Self {
        HeckeElement(BTreeMap::new())
    }
    pub fn basis(x: &GroupElement) -> Self {
        HeckeElement::term(x, LaurentPoly::one())
    }
    pub fn term(x: &GroupElement, p: LaurentPoly) -> Self {
        let mut h = HeckeElement::zero();
        h.add_term(x, &p);
        h
    }
    fn add_term(&mut self, x: &GroupElement, p: &LaurentPoly) {
        if p.is_zero() {
            return;
        }
        let e = self.0.entry(x.clone()).or_default();
        *e = e.add(p);
        if e.is_zero() {
            self.0.remove(x);
        }
    }
    pub fn coeff(&self, x: &GroupElement) -> LaurentPoly {
        self.0.get(x).cloned().unwrap_or_default()
    }
    pub fn support(&self) -> impl Iterator<Item = (&GroupElement, &LaurentPoly)> {
        self.0.iter()
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn add(&self, o: &Self) -> Self {
        let mut h = self.clone();
        for (x, p) in &o.0 {
            h.add_term(x, p);
        }
        h
    }
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&LaurentPoly::monomial(0, -1)))
    }
    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut h = HeckeElement::zero();
        for (x, p) in &self.0 {
            h.add_term(x, &p.mul(c));
        }
        h
    }
    pub fn shift(&self, k: i32) -> Self {
        HeckeElement(self.0.iter().map(|(x, p)| (x.clone(), p.shift(k))).collect())
    }
    /// The coefficient of `T_e`.
    pub fn tau(&self) -> LaurentPoly {
        self.0.iter().find(|(x, _)| x.is_identity()).map(|(_, p)| p.clone()).unwrap_or_default()
    }
    /// Coefficients evaluated at `v = 1`.
    pub fn specialize_q1(&self) -> BTreeMap<GroupElement, i64> {
        self.0
            .iter()
            .map(|(x, p)| (x.clone(), p.eval_at_one()))
            .filter(|(_, c)| *c != 0)
            .collect()
    }
    pub fn is_positive(&self) -> bool {
        self.0.values().all(|p| p.is_nonnegative())
    }
    /// The support lies in `{y ≤ w}` and the coefficient of `T_w` is 1.
    pub fn is_unitriangular(&self, sys: &CoxeterSystem, w: &GroupElement) -> bool {
        self.coeff(w) == LaurentPoly::one() && self.0.keys().all(|y| sys.bruhat_leq(y, w))
    }
    pub fn to_json(&self, sys: &CoxeterSystem) -> serde_json::Value {
        serde_json::Value::Array(
            self.0
                .iter()
                .map(|(x, p)| {
                    let coeffs: serde_json::Map<String, serde_json::Value> =
                        p.terms().iter().map(|(k, c)| (k.to_string(), (*c).into())).collect();
                    serde_json::json!({ "word": sys.format_word(x.word()), "coeffs": coeffs })
                })
                .collect(),
        )
    }
    pub fn display(&self, sys: &CoxeterSystem) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        self.0
            .iter()
            .map(|(x, p)| format!("({p})T_{}", sys.format_word(x.word())))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter().map(|(x, p)| (x.word().clone(), p.to_string()))).finish()
    }
}

/// Hecke algebra of a Coxeter system with a memoized KL table.
pub struct Hecke {
    sys: Arc<CoxeterSystem>,
    kl_memo: Mutex<HashMap<usize, HeckeElement>>,
}

impl Hecke {
    pub fn new(sys: Arc<CoxeterSystem>) -> Self {
        Hecke { sys, kl_memo: Mutex::new(HashMap::new()) }
    }

    pub fn system(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    pub fn one(&self) -> HeckeElement {
        HeckeElement::basis(&self.sys.identity())
    }

    pub fn t(&self, word: &[usize]) -> HeckeElement {
        let mut h = self.one();
        for &s in word {
            h = self.mul(&h, &HeckeElement::basis(&self.sys.generator(s)));
        }
        h
    }

    /// `T_s · h`.
    pub fn left_mul_gen(&self, s: usize, h: &HeckeElement) -> HeckeElement {
        let q = LaurentPoly::q_pow(1);
        let q1 = q.sub(&LaurentPoly::one());
        let mut out = HeckeElement::zero();
        for (x, p) in &h.0 {
            let sx = self.sys.mul_gen_left(s, x);
            if sx.length() > x.length() {
                out.add_term(&sx, p);
            } else {
                out.add_term(&sx, &p.mul(&q));
                out.add_term(x, &p.mul(&q1));
            }
        }
        out
    }

    pub fn mul(&self, a: &HeckeElement, b: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (x, p) in &a.0 {
            let mut cur = b.clone();
            for &s in x.word().iter().rev() {
                cur = self.left_mul_gen(s, &cur);
            }
            out = out.add(&cur.scale(p));
        }
        out
    }

    pub fn bar(&self, h: &HeckeElement) -> HeckeElement {
        // bar(T_s) = v²T_s + (v² − 1)
        let mut out = HeckeElement::zero();
        for (x, p) in &h.0 {
            let mut cur = HeckeElement::term(&self.sys.identity(), p.bar());
            for &s in x.word().iter().rev() {
                let ts = self.left_mul_gen(s, &cur).shift(2);
                let rest = cur.scale(&LaurentPoly::from_terms([(2, 1), (0, -1)]));
                cur = ts.add(&rest);
            }
            out = out.add(&cur);
        }
        out
    }

    /// `C'_s = v(1 + T_s)`.
    pub fn c_gen(&self, s: usize) -> HeckeElement {
        self.one().add(&HeckeElement::basis(&self.sys.generator(s))).shift(1)
    }

    /// The Kazhdan–Lusztig element `C'_x`.
    pub fn kl(&self, x: &GroupElement) -> HeckeElement {
        if let Some(h) = self.kl_memo.lock().unwrap().get(&x.id()) {
            return h.clone();
        }
        let out = if x.is_identity() {
            self.one()
        } else {
            let s = x.word()[0];
            let y = self.sys.mul_gen_left(s, x);
            let mut p = self.mul(&self.c_gen(s), &self.kl(&y));
            // Remove bar-invariant corrections below x, longest first.
            let mut zs: Vec<GroupElement> = p.0.keys().filter(|z| **z != *x).cloned().collect();
            zs.sort();
            for z in zs.into_iter().rev() {
                let h = p.coeff(&z).shift(-(z.length() as i32));
                let low: Vec<(i32, i64)> = h.terms().iter().filter(|(&k, _)| k <= 0).map(|(&k, &c)| (k, c)).collect();
                if low.is_empty() {
                    continue;
                }
                let c = LaurentPoly::from_terms(low.iter().copied());
                let c0 = LaurentPoly::monomial(0, c.coeff(0));
                let sym = c.add(&c.bar()).sub(&c0);
                p = p.sub(&self.kl(&z).scale(&sym));
            }
            p
        };
        self.kl_memo.lock().unwrap().insert(x.id(), out.clone());
        out
    }

    /// `Π (1 + T_{s_i})`.
    pub fn bs_class(&self, word: &[usize]) -> HeckeElement {
        let mut h = self.one();
        for &s in word {
            let ts = HeckeElement::basis(&self.sys.generator(s));
            h = self.mul(&h, &self.one().add(&ts));
        }
        h
    }

    /// `C'_{s_1}⋯C'_{s_n}` for the stored reduced word of `x`.
    pub fn y_basis(&self, x: &GroupElement) -> HeckeElement {
        x.word().iter().fold(self.one(), |acc, &s| self.mul(&acc, &self.c_gen(s)))
    }

    /// Coordinates of `h` in a unitriangular basis whose element at `z` has
    /// leading term `v^{ℓ(z)} T_z`.
    fn triangular_coords(&self, h: &HeckeElement, basis: impl Fn(&GroupElement) -> HeckeElement) -> BTreeMap<GroupElement, LaurentPoly> {
        let mut rest = h.clone();
        let mut out = BTreeMap::new();
        while let Some(z) = rest.0.keys().next_back().cloned() {
            let c = rest.coeff(&z).shift(-(z.length() as i32));
            rest = rest.sub(&basis(&z).scale(&c));
            out.insert(z, c);
        }
        out
    }

    pub fn in_kl_basis(&self, h: &HeckeElement) -> BTreeMap<GroupElement, LaurentPoly> {
        self.triangular_coords(h, |z| self.kl(z))
    }

    pub fn in_y_basis(&self, h: &HeckeElement) -> BTreeMap<GroupElement, LaurentPoly> {
        self.triangular_coords(h, |z| self.y_basis(z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(m: u32) -> (Arc<CoxeterSystem>, Hecke) {
        let sys = CoxeterSystem::dihedral(m).unwrap();
        (sys.clone(), Hecke::new(sys))
    }

    #[test]
    fn quadratic_relation() {
        let (sys, h) = setup(4);
        let ts = h.t(&[0]);
        let sq = h.mul(&ts, &ts);
        let q = LaurentPoly::q_pow(1);
        let expect = h.one().scale(&q).add(&ts.scale(&q.sub(&LaurentPoly::one())));
        assert_eq!(sq, expect);
        assert_eq!(h.mul(&ts, &h.t(&[1])), HeckeElement::basis(&sys.element(&[0, 1])));
    }

    #[test]
    fn bar_of_generator() {
        let (_, h) = setup(4);
        let ts = h.t(&[0]);
        let expect = ts.shift(2).add(&h.one().scale(&LaurentPoly::from_terms([(2, 1), (0, -1)])));
        assert_eq!(h.bar(&ts), expect);
        assert_eq!(h.bar(&h.bar(&ts)), ts);
        assert_eq!(h.bar(&h.c_gen(0)), h.c_gen(0));
    }

    #[test]
    fn dihedral_kl_is_full_interval_sum() {
        for m in [4u32, 5, 6] {
            let (sys, h) = setup(m);
            for w in sys.elements_up_to(m as usize) {
                let c = h.kl(&w);
                let mut expect = HeckeElement::zero();
                for y in sys.bruhat_interval(&w).iter() {
                    expect = expect.add(&HeckeElement::basis(y));
                }
                assert_eq!(c, expect.shift(w.length() as i32), "m={m} w={w:?}");
            }
        }
    }

    #[test]
    fn tau_of_products() {
        let (sys, h) = setup(5);
        let x = sys.element(&[0, 1, 0]);
        let xinv = sys.inverse(&x);
        let p = h.mul(&HeckeElement::basis(&x), &HeckeElement::basis(&xinv));
        assert_eq!(p.tau(), LaurentPoly::q_pow(3));
        let y = sys.element(&[1, 0]);
        let p2 = h.mul(&HeckeElement::basis(&x), &HeckeElement::basis(&sys.inverse(&y)));
        assert!(p2.tau().is_zero());
    }

    #[test]
    fn specialization() {
        let (sys, h) = setup(4);
        let ss = h.bs_class(&[0, 0]);
        let q1 = ss.specialize_q1();
        assert_eq!(q1[&sys.identity()], 2);
        assert_eq!(q1[&sys.generator(0)], 2);
    }
}
