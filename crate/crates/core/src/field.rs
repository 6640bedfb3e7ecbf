//! Exact arithmetic in a simple real algebraic extension `Q[θ]/(p(θ))`.
//!
//! Every [`NumberField`] is interned for the lifetime of the process, so
//! elements carry a `&'static` handle and stay `Copy`-cheap to tag. Elements
//! whose coordinates are purely rational carry no handle and combine freely
//! with elements of any field.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A monic irreducible minimal polynomial together with a designated real root.
#[derive(Debug)]
pub struct NumberField {
    /// Coefficients of the monic minimal polynomial, constant term first.
    minpoly: Vec<BigRational>,
    /// Isolating interval of the designated real root.
    lo: BigRational,
    hi: BigRational,
    approx: f64,
    /// Integer coefficients exactly as declared.
    declared: Vec<i64>,
}

static REGISTRY: Mutex<Vec<&'static NumberField>> = Mutex::new(Vec::new());

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rat_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

fn eval_rat(poly: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in poly.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn eval_f64(poly: &[i64], x: f64) -> f64 {
    poly.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
}

/// Approximate real roots of an integer polynomial by sign-change scanning and
/// bisection. Adequate for the small, well-separated minimal polynomials used
/// for Coxeter cosines.
fn real_roots(poly: &[i64]) -> Vec<f64> {
    let lead = *poly.last().unwrap() as f64;
    let bound = 1.0 + poly.iter().map(|&c| (c as f64 / lead).abs()).fold(0.0, f64::max);
    let steps = 200_000;
    let h = 2.0 * bound / steps as f64;
    let mut roots = Vec::new();
    let mut x0 = -bound;
    let mut f0 = eval_f64(poly, x0);
    for i in 1..=steps {
        let x1 = -bound + i as f64 * h;
        let f1 = eval_f64(poly, x1);
        if f1 == 0.0 {
            roots.push(x1);
        } else if f0 != 0.0 && (f0 < 0.0) != (f1 < 0.0) {
            let (mut a, mut b) = (x0, x1);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                let fm = eval_f64(poly, m);
                if (fm < 0.0) == (eval_f64(poly, a) < 0.0) {
                    a = m;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

impl NumberField {
    /// Interns the field `Q[θ]/(p)` for a monic integer polynomial `p`
    /// (constant term first). `root_in` is an interval holding exactly one
    /// real root, which selects the embedding; by default the largest real
    /// root is used.
    pub fn intern(minpoly: &[i64], root_in: Option<[f64; 2]>) -> Result<&'static NumberField> {
        if minpoly.len() < 3 {
            return Err(Error::InvalidField("minimal polynomial must have degree at least 2".into()));
        }
        if *minpoly.last().unwrap() != 1 {
            return Err(Error::InvalidField("minimal polynomial must be monic".into()));
        }
        check_no_rational_root(minpoly)?;
        let roots = real_roots(minpoly);
        let root = match root_in {
            Some([a, b]) => {
                let inside: Vec<f64> = roots.iter().copied().filter(|r| a <= *r && *r <= b).collect();
                if inside.len() > 1 {
                    return Err(Error::InvalidField("root interval holds several real roots".into()));
                }
                inside.first().copied()
            }
            None => roots.iter().copied().fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r)))),
        }
        .ok_or_else(|| Error::InvalidField("no real root matches the requested embedding".into()))?;
        let mut reg = REGISTRY.lock().unwrap();
        if let Some(nf) = reg.iter().find(|nf| nf.declared == minpoly && (nf.approx - root).abs() < 1e-9) {
            return Ok(nf);
        }
        let coeffs: Vec<BigRational> = minpoly.iter().map(|&c| ratio(c, 1)).collect();
        let delta = 1e-7;
        let lo = rat_from_f64(root - delta);
        let hi = rat_from_f64(root + delta);
        let (flo, fhi) = (eval_rat(&coeffs, &lo), eval_rat(&coeffs, &hi));
        if flo.is_zero() || fhi.is_zero() || flo.is_positive() == fhi.is_positive() {
            return Err(Error::InvalidField("could not isolate the real root".into()));
        }
        let nf: &'static NumberField = Box::leak(Box::new(NumberField {
            minpoly: coeffs,
            lo,
            hi,
            approx: root,
            declared: minpoly.to_vec(),
        }));
        reg.push(nf);
        Ok(nf)
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn declared_minpoly(&self) -> &[i64] {
        &self.declared
    }

    pub fn root_approx(&self) -> f64 {
        self.approx
    }

    /// The generator θ.
    pub fn theta(&'static self) -> Fe {
        Fe::from_coords(vec![BigRational::zero(), BigRational::one()], Some(self))
    }
}

fn check_no_rational_root(p: &[i64]) -> Result<()> {
    // Monic: rational roots are integer divisors of the constant term.
    let c0 = p[0];
    if c0 == 0 {
        return Err(Error::InvalidField("minimal polynomial has root 0".into()));
    }
    let n = c0.unsigned_abs();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            for cand in [d, n / d] {
                for sign in [1i64, -1] {
                    let x = sign * cand as i64;
                    let coeffs: Vec<BigRational> = p.iter().map(|&c| ratio(c, 1)).collect();
                    if eval_rat(&coeffs, &ratio(x, 1)).is_zero() {
                        return Err(Error::InvalidField(format!("minimal polynomial is reducible (root {x})")));
                    }
                }
            }
        }
        d += 1;
    }
    Ok(())
}

/// An element of a number field (or of Q when no field handle is attached).
#[derive(Clone)]
pub struct Fe {
    c: Vec<BigRational>,
    nf: Option<&'static NumberField>,
}

impl Fe {
    fn from_coords(mut c: Vec<BigRational>, nf: Option<&'static NumberField>) -> Fe {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        let nf = if c.len() > 1 { nf } else { None };
        Fe { c, nf }
    }

    /// Builds an element from coordinates in the power basis `1, θ, θ², …`.
    pub fn from_power_basis(c: Vec<BigRational>, nf: &'static NumberField) -> Fe {
        assert!(c.len() <= nf.degree(), "coordinate vector longer than field degree");
        Fe::from_coords(c, Some(nf))
    }

    pub fn zero() -> Fe {
        Fe { c: Vec::new(), nf: None }
    }

    pub fn one() -> Fe {
        Fe::from_int(1)
    }

    pub fn from_int(n: i64) -> Fe {
        Fe::from_coords(vec![ratio(n, 1)], None)
    }

    pub fn from_ratio(n: i64, d: i64) -> Fe {
        Fe::from_coords(vec![ratio(n, d)], None)
    }

    pub fn from_rational(r: BigRational) -> Fe {
        Fe::from_coords(vec![r], None)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.c.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.c[0].clone()),
            _ => None,
        }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.c
    }

    pub fn field(&self) -> Option<&'static NumberField> {
        self.nf
    }

    fn join(a: Option<&'static NumberField>, b: Option<&'static NumberField>) -> Option<&'static NumberField> {
        match (a, b) {
            (Some(x), Some(y)) => {
                assert!(std::ptr::eq(x, y), "mixing elements of different number fields");
                Some(x)
            }
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn add(&self, o: &Fe) -> Fe {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            match (self.c.get(i), o.c.get(i)) {
                (Some(a), Some(b)) => c.push(a + b),
                (Some(a), None) => c.push(a.clone()),
                (None, Some(b)) => c.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        Fe::from_coords(c, Fe::join(self.nf, o.nf))
    }

    pub fn neg(&self) -> Fe {
        Fe { c: self.c.iter().map(|x| -x).collect(), nf: self.nf }
    }

    pub fn sub(&self, o: &Fe) -> Fe {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Fe) -> Fe {
        if self.is_zero() || o.is_zero() {
            return Fe::zero();
        }
        if self.c.len() == 1 {
            return o.scale(&self.c[0]);
        }
        if o.c.len() == 1 {
            return self.scale(&o.c[0]);
        }
        let nf = Fe::join(self.nf, o.nf).expect("non-rational element without field");
        let mut prod = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let d = nf.degree();
        for k in (d..prod.len()).rev() {
            let lead = std::mem::replace(&mut prod[k], BigRational::zero());
            if lead.is_zero() {
                continue;
            }
            for (j, m) in nf.minpoly.iter().enumerate().take(d) {
                prod[k - d + j] -= &lead * m;
            }
        }
        prod.truncate(d);
        Fe::from_coords(prod, Some(nf))
    }

    pub fn scale(&self, r: &BigRational) -> Fe {
        if r.is_zero() {
            return Fe::zero();
        }
        Fe { c: self.c.iter().map(|x| x * r).collect(), nf: self.nf }
    }

    pub fn inv(&self) -> Option<Fe> {
        if self.is_zero() {
            return None;
        }
        if self.c.len() == 1 {
            return Some(Fe::from_rational(self.c[0].recip()));
        }
        let nf = self.nf.unwrap();
        let d = nf.degree();
        // Columns: self * θ^j in the power basis; solve M y = e_0.
        let mut cols = Vec::with_capacity(d);
        let mut cur = self.clone();
        let theta = nf.theta();
        for _ in 0..d {
            let mut v = cur.c.clone();
            v.resize(d, BigRational::zero());
            cols.push(v);
            cur = cur.mul(&theta);
        }
        let mut aug: Vec<Vec<BigRational>> = (0..d)
            .map(|r| {
                let mut row: Vec<BigRational> = (0..d).map(|c| cols[c][r].clone()).collect();
                row.push(if r == 0 { BigRational::one() } else { BigRational::zero() });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(col, piv);
            let p = aug[col][col].clone();
            for x in aug[col].iter_mut() {
                *x /= &p;
            }
            for r in 0..d {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for k in 0..=d {
                        let t = &f * &aug[col][k];
                        aug[r][k] -= t;
                    }
                }
            }
        }
        Some(Fe::from_coords(aug.into_iter().map(|r| r[d].clone()).collect(), Some(nf)))
    }

    pub fn div(&self, o: &Fe) -> Fe {
        self.mul(&o.inv().expect("division by zero in number field"))
    }

    pub fn pow(&self, mut e: u32) -> Fe {
        let mut base = self.clone();
        let mut acc = Fe::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Exact sign under the designated real embedding.
    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if self.c.len() == 1 {
            return self.c[0].cmp(&BigRational::zero());
        }
        let nf = self.nf.unwrap();
        let (mut lo, mut hi) = (nf.lo.clone(), nf.hi.clone());
        let flo_pos = eval_rat(&nf.minpoly, &lo).is_positive();
        loop {
            let (a, b) = interval_eval(&self.c, &lo, &hi);
            if a.is_positive() {
                return Ordering::Greater;
            }
            if b.is_negative() {
                return Ordering::Less;
            }
            let mid = (&lo + &hi) / BigRational::from_integer(2.into());
            let fm = eval_rat(&nf.minpoly, &mid);
            if fm.is_zero() {
                let v = eval_rat(&self.c, &mid);
                return v.cmp(&BigRational::zero());
            }
            if fm.is_positive() == flo_pos {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        let x = self.nf.map_or(0.0, |n| n.approx);
        self.c.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Parses an expression in θ such as `θ/2` or `(1+θ)/4`.
    pub fn parse(s: &str, nf: Option<&'static NumberField>) -> Result<Fe> {
        crate::expr::parse_constant(s, nf)
    }
}

/// Bounds of `Σ c_i x^i` for `x ∈ [lo, hi]` by termwise interval arithmetic.
fn interval_eval(c: &[BigRational], lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for (i, ci) in c.iter().enumerate() {
        let (plo, phi) = pow_interval(lo, hi, i as u32);
        let (t1, t2) = (ci * &plo, ci * &phi);
        if t1 <= t2 {
            a += t1;
            b += t2;
        } else {
            a += t2;
            b += t1;
        }
    }
    (a, b)
}

fn pow_interval(lo: &BigRational, hi: &BigRational, e: u32) -> (BigRational, BigRational) {
    if e == 0 {
        return (BigRational::one(), BigRational::one());
    }
    let pl = num_traits::pow(lo.clone(), e as usize);
    let ph = num_traits::pow(hi.clone(), e as usize);
    if e % 2 == 1 || !lo.is_negative() {
        (pl.clone().min(ph.clone()), pl.max(ph))
    } else if !hi.is_positive() {
        (ph.clone().min(pl.clone()), pl.max(ph))
    } else {
        (BigRational::zero(), pl.max(ph))
    }
}

impl PartialEq for Fe {
    fn eq(&self, o: &Fe) -> bool {
        self.c == o.c
    }
}
impl Eq for Fe {}

impl Hash for Fe {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.c.hash(h);
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    write!(f, "θ")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Minimal polynomials and cosine expressions for the default field of a set
/// of bond labels, when a single quadratic field (or Q) suffices.
/// A minimal polynomial (`None` for Q) and the expression of each cos(π/m).
pub type DefaultField = (Option<Vec<i64>>, Vec<(u32, String)>);

pub fn default_field_for(bonds: &[u32]) -> Option<DefaultField> {
    let mut need: Option<i64> = None;
    let mut cos = Vec::new();
    for &m in bonds {
        let (d, expr) = match m {
            2 => (None, "0"),
            3 => (None, "1/2"),
            4 => (Some(2), "θ/2"),
            5 => (Some(5), "(1+θ)/4"),
            6 => (Some(3), "θ/2"),
            _ => return None,
        };
        if let Some(d) = d {
            if need.is_some_and(|n| n != d) {
                return None;
            }
            need = Some(d);
        }
        cos.push((m, expr.to_string()));
    }
    Some((need.map(|d| vec![-d, 0, 1]), cos))
}

/// Checks that `c` is the real number cos(π/m) under the embedding: exact
/// Chebyshev identity `T_m(c) = -1` plus a numeric tie-break between the
/// roots of `T_m + 1`.
pub fn is_cos_pi_over(c: &Fe, m: u32) -> bool {
    // T_0 = 1, T_1 = x, T_{k+1} = 2x T_k - T_{k-1}
    let mut prev = Fe::one();
    let mut cur = c.clone();
    for _ in 1..m {
        let next = Fe::from_int(2).mul(c).mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    if cur != Fe::from_int(-1) {
        return false;
    }
    (c.to_f64() - (std::f64::consts::PI / m as f64).cos()).abs() < 1e-9
}

pub(crate) fn big(n: i64) -> BigRational {
    ratio(n, 1)
}


#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> &'static NumberField {
        NumberField::intern(&[-2, 0, 1], None).unwrap()
    }

    #[test]
    fn theta_squares_to_two() {
        let t = sqrt2().theta();
        assert_eq!(t.mul(&t), Fe::from_int(2));
    }

    #[test]
    fn inverse_roundtrip() {
        let nf = NumberField::intern(&[-5, 0, 1], None).unwrap();
        let a = Fe::from_int(3).add(&nf.theta().scale(&ratio(7, 2)));
        assert!(a.mul(&a.inv().unwrap()).is_one());
    }

    #[test]
    fn signs_are_exact() {
        let t = sqrt2().theta();
        // 140/99 < √2 < 99/70
        assert_eq!(t.sub(&Fe::from_ratio(140, 99)).signum(), Ordering::Greater);
        assert_eq!(t.sub(&Fe::from_ratio(99, 70)).signum(), Ordering::Less);
        assert_eq!(t.neg().signum(), Ordering::Less);
    }

    #[test]
    fn reducible_minpoly_rejected() {
        assert!(NumberField::intern(&[-4, 0, 1], None).is_err());
    }

    #[test]
    fn root_interval_selects_embedding() {
        // θ⁴ − 4θ² + 2 has roots ±2cos(π/8), ±2cos(3π/8).
        let p = [2, 0, -4, 0, 1];
        let nf = NumberField::intern(&p, Some([1.8, 1.9])).unwrap();
        assert!(is_cos_pi_over(&Fe::parse("θ/2", Some(nf)).unwrap(), 8));
        assert!(NumberField::intern(&p, Some([0.0, 2.0])).is_err());
        assert!(NumberField::intern(&p, Some([1.0, 1.5])).is_err());
    }

    #[test]
    fn cosines_validate() {
        let nf = sqrt2();
        let c4 = Fe::parse("θ/2", Some(nf)).unwrap();
        assert!(is_cos_pi_over(&c4, 4));
        assert!(!is_cos_pi_over(&c4.neg(), 4));
        let nf5 = NumberField::intern(&[-5, 0, 1], None).unwrap();
        let c5 = Fe::parse("(1+θ)/4", Some(nf5)).unwrap();
        assert!(is_cos_pi_over(&c5, 5));
        assert!(is_cos_pi_over(&Fe::from_ratio(1, 2), 3));
        assert!(is_cos_pi_over(&Fe::zero(), 2));
    }

    #[test]
    fn display_is_readable() {
        let t = sqrt2().theta();
        assert_eq!(Fe::from_ratio(1, 2).add(&t.neg()).to_string(), "1/2 - θ");
    }
}
