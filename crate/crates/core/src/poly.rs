//! Sparse multivariate polynomials over [`Fe`].
//!
//! Monomials pack up to [`MAX_VARS`] exponents of at most 255 into a `u64`
//! with variable 0 in the most significant byte, so integer order on the
//! packed word is lexicographic order on exponent vectors.

use std::fmt;

use crate::field::Fe;

pub const MAX_VARS: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Mono(u64);

impl Mono {
    pub const ONE: Mono = Mono(0);

    fn shift(i: usize) -> u32 {
        assert!(i < MAX_VARS, "variable index out of range");
        (56 - 8 * i) as u32
    }

    pub fn var(i: usize) -> Mono {
        Mono(1u64 << Mono::shift(i))
    }

    pub fn from_exps(e: &[u32]) -> Mono {
        let mut m = 0u64;
        for (i, &x) in e.iter().enumerate() {
            assert!(x < 256, "exponent overflow");
            m |= (x as u64) << Mono::shift(i);
        }
        Mono(m)
    }

    pub fn exp(self, i: usize) -> u32 {
        ((self.0 >> Mono::shift(i)) & 0xff) as u32
    }

    pub fn exps(self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.exp(i)).collect()
    }

    pub fn total(self) -> u32 {
        self.0.to_le_bytes().iter().map(|&b| b as u32).sum()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, o: Mono) -> Mono {
        debug_assert!((0..MAX_VARS).all(|i| self.exp(i) + o.exp(i) < 256));
        Mono(self.0 + o.0)
    }

    pub fn divides(self, o: Mono) -> bool {
        (0..MAX_VARS).all(|i| self.exp(i) <= o.exp(i))
    }

    /// `o / self`, assuming `self` divides `o`.
    pub fn quotient_of(self, o: Mono) -> Mono {
        Mono(o.0 - self.0)
    }

    pub fn raw(self) -> u64 {
        self.0
    }
}

/// A polynomial as terms sorted by strictly decreasing monomial.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, Fe)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Fe::one())
    }

    pub fn constant(c: Fe) -> Poly {
        Poly::monomial(Mono::ONE, c)
    }

    pub fn monomial(m: Mono, c: Fe) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(i: usize) -> Poly {
        Poly::monomial(Mono::var(i), Fe::one())
    }

    /// Builds a polynomial from unsorted terms, merging duplicates.
    pub fn from_terms(mut t: Vec<(Mono, Fe)>) -> Poly {
        t.sort_unstable_by_key(|a| std::cmp::Reverse(a.0));
        let mut out: Vec<(Mono, Fe)> = Vec::with_capacity(t.len());
        for (m, c) in t {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add(&c),
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if out.last().is_some_and(|(_, c)| c.is_zero()) {
            out.pop();
        }
        Poly { terms: out }
    }

    /// Linear form `Σ c_i y_i`.
    pub fn linear(coeffs: &[Fe]) -> Poly {
        Poly::from_terms(
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (Mono::var(i), c.clone()))
                .collect(),
        )
    }

    pub fn terms(&self) -> &[(Mono, Fe)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| *m == Mono::ONE)
    }

    pub fn constant_term(&self) -> Fe {
        match self.terms.last() {
            Some((m, c)) if *m == Mono::ONE => c.clone(),
            _ => Fe::zero(),
        }
    }

    pub fn coeff(&self, m: Mono) -> Fe {
        self.terms
            .binary_search_by(|(k, _)| m.cmp(k))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Fe::zero())
    }

    /// Grading degree `2·(total exponent)` if homogeneous; `None` for zero or
    /// inhomogeneous polynomials.
    pub fn degree(&self) -> Option<usize> {
        let first = self.terms.first()?.0.total();
        self.terms
            .iter()
            .all(|(m, _)| m.total() == first)
            .then_some(2 * first as usize)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn max_total(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.total()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (a, b) = (&self.terms[i], &o.terms[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = a.1.add(&b.1);
                    if !c.is_zero() {
                        out.push((a.0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Poly { terms: out }
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Fe) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (*m, x.mul(c))).collect() }
    }

    pub fn mul_mono(&self, m: Mono, c: &Fe) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(k, x)| (k.mul(m), x.mul(c))).collect() }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return o.mul_mono(*m, c);
        }
        if o.terms.len() == 1 {
            let (m, c) = &o.terms[0];
            return self.mul_mono(*m, c);
        }
        let mut t = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                t.push((ma.mul(*mb), ca.mul(cb)));
            }
        }
        Poly::from_terms(t)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.terms.first()?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut q = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            if !lm.divides(m) {
                return None;
            }
            let qm = lm.quotient_of(m);
            let qc = c.mul(&lc_inv);
            rem = rem.sub(&d.mul_mono(qm, &qc));
            q.push((qm, qc));
        }
        Some(Poly::from_terms(q))
    }

    /// Substitutes `y_i ↦ images[i]`.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        let n = images.len();
        let mut cache: Vec<Vec<Poly>> = vec![vec![Poly::one()]; n];
        let mut acc = Vec::new();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for (i, img) in images.iter().enumerate() {
                let e = m.exp(i) as usize;
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e {
                    let next = cache[i].last().unwrap().mul(img);
                    cache[i].push(next);
                }
                term = term.mul(&cache[i][e]);
            }
            acc.extend(term.terms);
        }
        Poly::from_terms(acc)
    }

    pub fn eval(&self, point: &[Fe]) -> Fe {
        let mut acc = Fe::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    t = t.mul(&x.pow(e));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Homogeneous component of grading degree `deg`.
    pub fn component(&self, deg: usize) -> Poly {
        Poly {
            terms: self.terms.iter().filter(|(m, _)| 2 * m.total() as usize == deg).cloned().collect(),
        }
    }

    /// Canonical string in the given variable names.
    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = (0..MAX_VARS)
                .filter(|&i| m.exp(i) > 0)
                .map(|i| {
                    let name = names.get(i).cloned().unwrap_or_else(|| format!("y{}", i + 1));
                    match m.exp(i) {
                        1 => name,
                        e => format!("{name}^{e}"),
                    }
                })
                .collect();
            let (neg, coef) = if c.is_rational() {
                let r = c.as_rational().unwrap();
                (r < num_rational::BigRational::from_integer(0.into()), Fe::from_rational(num_traits::Signed::abs(&r)))
            } else {
                (false, c.clone())
            };
            if k > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            let cs = if coef.is_rational() { coef.to_string() } else { format!("({coef})") };
            if mono.is_empty() {
                s.push_str(&cs);
            } else {
                if !coef.is_one() {
                    s.push_str(&cs);
                    s.push('*');
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(&[]))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(&[]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(i: usize) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn mono_order_is_lex() {
        assert!(Mono::var(0) > Mono::var(1).mul(Mono::var(1)));
        assert_eq!(Mono::from_exps(&[2, 1]).total(), 3);
    }

    #[test]
    fn division_roundtrip() {
        let a = y(0).add(&y(1).scale(&Fe::from_int(3)));
        let b = y(0).mul(&y(2)).sub(&Poly::constant(Fe::from_ratio(1, 2)));
        let p = a.mul(&b);
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert!(p.add(&Poly::one()).div_exact(&a).is_none());
    }

    #[test]
    fn substitution_and_degree() {
        let p = y(0).mul(&y(0)).add(&y(1));
        let q = p.substitute(&[y(1), y(0)]);
        assert_eq!(q, y(1).mul(&y(1)).add(&y(0)));
        assert_eq!(y(0).mul(&y(1)).degree(), Some(4));
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = y(0).add(&y(1));
        assert!(p.sub(&p).is_zero());
        assert!(Poly::from_terms(vec![(Mono::ONE, Fe::one()), (Mono::ONE, Fe::from_int(-1))]).is_zero());
    }

    #[test]
    fn canonical_string() {
        let p = y(0).scale(&Fe::from_int(-2)).add(&Poly::constant(Fe::from_ratio(1, 3)));
        assert_eq!(p.to_string_with(&["a".into(), "b".into()]), "-2*a + 1/3");
    }
}
