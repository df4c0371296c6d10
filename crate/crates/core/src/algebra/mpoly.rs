//! Sparse polynomials over the rationals in the four variables `a, b, x, y`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exact rational value of a finite float.
pub fn q_from_f64(v: f64) -> Q {
    Q::from_float(v).expect("finite float")
}

pub fn q_to_f64(v: &Q) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    A,
    B,
    X,
    Y,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::A, Var::B, Var::X, Var::Y];

    fn idx(self) -> usize {
        self as usize
    }

    fn name(self) -> &'static str {
        ["a", "b", "x", "y"][self.idx()]
    }
}

type Exps = [u32; 4];

/// Terms are keyed by exponent vectors; the map order is lex with `a > b > x > y`,
/// so the last entry is the leading term.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Exps, Q>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert([0; 4], c);
        }
        p
    }

    pub fn var(v: Var) -> Self {
        MPoly::monomial(Q::one(), v, 1)
    }

    pub fn monomial(c: Q, v: Var, k: u32) -> Self {
        let mut e = [0; 4];
        e[v.idx()] = k;
        let mut p = MPoly::zero();
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// `c0 + c_a a + c_b b + c_x x + c_y y` with float coefficients taken exactly.
    pub fn affine(coeffs: &[f64; 5]) -> Self {
        let mut p = MPoly::constant(q_from_f64(coeffs[0]));
        for (v, &c) in Var::ALL.iter().zip(&coeffs[1..]) {
            p = &p + &MPoly::monomial(q_from_f64(c), *v, 1);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == [0; 4])
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.is_zero() {
            Some(Q::zero())
        } else if self.is_constant() {
            self.terms.get(&[0; 4]).cloned()
        } else {
            None
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 4], &Q)> {
        self.terms.iter()
    }

    pub fn has_var(&self, v: Var) -> bool {
        self.terms.keys().any(|e| e[v.idx()] > 0)
    }

    pub fn vars(&self) -> Vec<Var> {
        Var::ALL.into_iter().filter(|&v| self.has_var(v)).collect()
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.terms.keys().map(|e| e[v.idx()]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn leading_coefficient(&self) -> Option<&Q> {
        self.terms.values().next_back()
    }

    fn insert_add(&mut self, e: Exps, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    /// Scaled so that the leading coefficient is one; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            Some(lc) => self.scale(&lc.recip()),
            None => MPoly::zero(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = MPoly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn derivative(&self, v: Var) -> Self {
        let i = v.idx();
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                out.insert_add(f, c * q(e[i] as i64));
            }
        }
        out
    }

    /// Coefficients with respect to `v`, index `k` holding the coefficient of `v^k`.
    pub fn coeffs_in(&self, v: Var) -> Vec<MPoly> {
        let i = v.idx();
        let mut out = vec![MPoly::zero(); self.degree(v) as usize + 1];
        for (e, c) in &self.terms {
            let mut f = *e;
            let k = f[i] as usize;
            f[i] = 0;
            out[k].insert_add(f, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: Var, coeffs: &[MPoly]) -> Self {
        let mut out = MPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, val) in &c.terms {
                let mut f = *e;
                f[v.idx()] += k as u32;
                out.insert_add(f, val.clone());
            }
        }
        out
    }

    pub fn substitute(&self, v: Var, val: &Q) -> Self {
        let i = v.idx();
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let mut f = *e;
            let k = f[i];
            f[i] = 0;
            out.insert_add(f, c * num_traits::pow(val.clone(), k as usize));
        }
        out
    }

    pub fn substitute_poly(&self, v: Var, val: &MPoly) -> Self {
        let coeffs = self.coeffs_in(v);
        let mut out = MPoly::zero();
        for c in coeffs.iter().rev() {
            out = &(&out * val) + c;
        }
        out
    }

    pub fn eval(&self, point: &[Q; 4]) -> Q {
        let mut s = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, &p) in e.iter().enumerate() {
                if p > 0 {
                    t *= num_traits::pow(point[k].clone(), p as usize);
                }
            }
            s += t;
        }
        s
    }

    pub fn eval_f64(&self, point: [f64; 4]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = q_to_f64(c);
                for (k, &p) in e.iter().enumerate() {
                    t *= point[k].powi(p as i32);
                }
                t
            })
            .sum()
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (&de, dc) = d.terms.iter().next_back()?;
        let mut r = self.clone();
        let mut quo = MPoly::zero();
        while let Some((&re, rc)) = r.terms.iter().next_back() {
            if !(0..4).all(|k| re[k] >= de[k]) {
                return None;
            }
            let mut e = [0; 4];
            for k in 0..4 {
                e[k] = re[k] - de[k];
            }
            let c = rc / dc;
            let mut t = MPoly::zero();
            t.terms.insert(e, c);
            r = &r - &(&t * d);
            quo = &quo + &t;
        }
        Some(quo)
    }

    /// Pseudo-remainder of `self` by `g` with respect to `v`.
    pub fn prem(&self, g: &MPoly, v: Var) -> MPoly {
        let dg = g.degree(v);
        let lg = g.coeffs_in(v).pop().expect("nonzero divisor");
        let mut r = self.clone();
        while !r.is_zero() && r.degree(v) >= dg {
            let dr = r.degree(v);
            let lr = r.coeffs_in(v).pop().expect("nonzero");
            let shift = &lr * &MPoly::monomial(Q::one(), v, dr - dg);
            r = &(&r * &lg) - &(&shift * g);
        }
        r
    }

    /// Greatest common divisor of the coefficients with respect to `v`.
    pub fn content_in(&self, v: Var) -> MPoly {
        let mut c = MPoly::zero();
        for k in self.coeffs_in(v) {
            if !k.is_zero() {
                c = gcd(&c, &k);
                if c.is_constant() {
                    return MPoly::one();
                }
            }
        }
        c
    }

    pub fn primitive_part_in(&self, v: Var) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    /// `self / gcd(self, d self / dv)`: drops repeated factors that involve `v`.
    pub fn squarefree_part_in(&self, v: Var) -> MPoly {
        let d = self.derivative(v);
        if d.is_zero() {
            return self.clone();
        }
        let g = gcd(self, &d);
        self.div_exact(&g).expect("gcd divides")
    }
}

/// Monic gcd (up to a rational unit) via primitive pseudo-remainder sequences.
pub fn gcd(f: &MPoly, g: &MPoly) -> MPoly {
    if f.is_zero() {
        return g.monic();
    }
    if g.is_zero() {
        return f.monic();
    }
    if f.is_constant() || g.is_constant() {
        return MPoly::one();
    }
    let v = *Var::ALL.iter().rev().find(|&&v| f.has_var(v) || g.has_var(v)).expect("non-constant");
    if !f.has_var(v) {
        return gcd(f, &g.content_in(v));
    }
    if !g.has_var(v) {
        return gcd(&f.content_in(v), g);
    }
    let cf = f.content_in(v);
    let cg = g.content_in(v);
    let c = gcd(&cf, &cg);
    let mut p = f.div_exact(&cf).expect("content divides");
    let mut s = g.div_exact(&cg).expect("content divides");
    if p.degree(v) < s.degree(v) {
        std::mem::swap(&mut p, &mut s);
    }
    loop {
        let r = p.prem(&s, v);
        if r.is_zero() {
            break;
        }
        if r.degree(v) == 0 {
            s = MPoly::one();
            break;
        }
        p = s;
        s = r.primitive_part_in(v).monic();
    }
    (&c * &s.primitive_part_in(v)).monic()
}

/// Sylvester resultant with respect to `v`, by fraction-free elimination.
pub fn resultant(f: &MPoly, g: &MPoly, v: Var) -> MPoly {
    if f.is_zero() || g.is_zero() {
        return MPoly::zero();
    }
    let m = f.degree(v) as usize;
    let n = g.degree(v) as usize;
    if m == 0 {
        return f.pow(n as u32);
    }
    if n == 0 {
        return g.pow(m as u32);
    }
    let fc = f.coeffs_in(v);
    let gc = g.coeffs_in(v);
    let size = m + n;
    let mut mat = vec![vec![MPoly::zero(); size]; size];
    for r in 0..n {
        for k in 0..=m {
            mat[r][r + k] = fc[m - k].clone();
        }
    }
    for r in 0..m {
        for k in 0..=n {
            mat[n + r][r + k] = gc[n - k].clone();
        }
    }
    bareiss_det(mat)
}

/// Determinant by Bareiss elimination; every division is exact.
pub fn bareiss_det(mut mat: Vec<Vec<MPoly>>) -> MPoly {
    let n = mat.len();
    let mut sign = false;
    let mut prev = MPoly::one();
    for k in 0..n {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&i| !mat[i][k].is_zero()) {
                Some(i) => {
                    mat.swap(k, i);
                    sign = !sign;
                }
                None => return MPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&mat[i][j] * &mat[k][k]) - &(&mat[i][k] * &mat[k][j]);
                mat[i][j] = t.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = mat[k][k].clone();
    }
    let d = mat[n - 1][n - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

/// Distinct non-constant factors of `p`, each monic.  Factors come from
/// squarefree and content splits, so each is squarefree and primitive in
/// every variable but not necessarily irreducible.
pub fn split_factors(p: &MPoly) -> Vec<MPoly> {
    let mut out: Vec<MPoly> = Vec::new();
    split_into(&p.monic(), &mut out);
    out.sort_by(|x, y| format!("{x}").cmp(&format!("{y}")));
    out
}

fn push_unique(out: &mut Vec<MPoly>, f: MPoly) {
    if !out.contains(&f) {
        out.push(f);
    }
}

fn split_into(p: &MPoly, out: &mut Vec<MPoly>) {
    if p.is_constant() {
        return;
    }
    for v in p.vars() {
        let g = gcd(p, &p.derivative(v));
        if !g.is_constant() {
            let rest = p.div_exact(&g).expect("gcd divides").monic();
            split_into(&g, out);
            split_into(&rest, out);
            return;
        }
    }
    for v in p.vars() {
        let c = p.content_in(v);
        if !c.is_constant() {
            let rest = p.div_exact(&c).expect("content divides").monic();
            split_into(&c.monic(), out);
            split_into(&rest, out);
            return;
        }
    }
    push_unique(out, p.monic());
}

/// `Some(c)` when `p = c * r` for a rational constant `c`.
pub fn constant_ratio(p: &MPoly, r: &MPoly) -> Option<Q> {
    if r.is_zero() {
        return None;
    }
    p.div_exact(r)?.constant_value().filter(|c| !c.is_zero())
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(*e, c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(*e, -c);
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                out.insert_add(e, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono: Vec<String> = Var::ALL
                .iter()
                .filter(|v| e[v.idx()] > 0)
                .map(|v| match e[v.idx()] {
                    1 => v.name().to_string(),
                    k => format!("{}^{}", v.name(), k),
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> MPoly {
        MPoly::var(Var::A)
    }
    fn b() -> MPoly {
        MPoly::var(Var::B)
    }
    fn x() -> MPoly {
        MPoly::var(Var::X)
    }
    fn c(n: i64) -> MPoly {
        MPoly::constant(q(n))
    }

    #[test]
    fn arithmetic_and_display() {
        let p = &(&a() + &c(1)) * &(&a() - &c(1));
        assert_eq!(p.to_string(), "a^2 - 1");
        assert_eq!(p.derivative(Var::A).to_string(), "2*a");
        assert_eq!(p.substitute(Var::A, &q(3)), c(8));
        assert_eq!(p.eval_f64([0.5, 0.0, 0.0, 0.0]), -0.75);
    }

    #[test]
    fn exact_division() {
        let f = &(&a() + &b()) * &(&x() - &c(2));
        assert_eq!(f.div_exact(&(&a() + &b())).unwrap(), &x() - &c(2));
        assert!(f.div_exact(&(&a() + &c(1))).is_none());
    }

    #[test]
    fn multivariate_gcd() {
        let common = &(&a() * &x()) + &b();
        let f = &common * &(&x() + &c(3));
        let g = &common * &(&a() - &b());
        let h = gcd(&f, &g);
        assert!(constant_ratio(&h, &common).is_some());
        assert_eq!(gcd(&(&x() + &c(1)), &(&x() + &c(2))), MPoly::one());
    }

    #[test]
    fn resultant_of_lines() {
        // x - a and x - b meet iff a = b
        let r = resultant(&(&x() - &a()), &(&x() - &b()), Var::X);
        assert!(constant_ratio(&r, &(&a() - &b())).is_some());
    }

    #[test]
    fn resultant_detects_common_root() {
        let f = &(&x() - &c(1)) * &(&x() + &a());
        let g = &(&x() - &c(1)) * &(&x() - &b());
        assert!(resultant(&f, &g, Var::X).is_zero());
    }

    #[test]
    fn factor_split() {
        let p = &(&b().pow(3) * &(&a() + &c(1)).pow(6)) * &(&(&a().scale(&q(2)) + &b()) + &c(2)).pow(3);
        let fs = split_factors(&p.scale(&q(-7)));
        assert_eq!(fs.len(), 3);
        for want in [b(), &a() + &c(1), &(&a().scale(&q(2)) + &b()) + &c(2)] {
            assert!(fs.iter().any(|f| constant_ratio(f, &want).is_some()), "{want}");
        }
    }
}
