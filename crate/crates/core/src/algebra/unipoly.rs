//! Univariate rational polynomials with Sturm-sequence root isolation.

use num_traits::{One, Signed, Zero};

use super::mpoly::{q, q_from_f64, q_to_f64, qf, MPoly, Var, Q};
use super::AlgebraError;

/// Coefficients in ascending order, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Q>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// From integer coefficients, highest degree first.
    pub fn from_desc(c: &[i64]) -> Self {
        UniPoly::new(c.iter().rev().map(|&v| q(v)).collect())
    }

    /// `None` if `p` involves any variable other than `v`.
    pub fn from_mpoly(p: &MPoly, v: Var) -> Option<Self> {
        if p.vars().iter().any(|&w| w != v) {
            return None;
        }
        let coeffs =
            p.coeffs_in(v).into_iter().map(|c| c.constant_value().expect("constant coefficient")).collect();
        Some(UniPoly::new(coeffs))
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, t: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + q_to_f64(c))
    }

    fn sign_at(&self, t: &Q) -> i32 {
        let v = self.eval(t);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * q(k as i64)).collect())
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            Some(lc) => {
                let inv = lc.recip();
                UniPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
            None => self.clone(),
        }
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        let mut quo = vec![Q::zero(); r.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().unwrap() / &lc;
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] -= &c * dc;
            }
            quo[k] = c;
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        (UniPoly::new(quo), UniPoly::new(r))
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut f, mut g) = (self.clone(), other.clone());
        while !g.is_zero() {
            let r = f.div_rem(&g).1;
            f = g;
            g = r.monic();
        }
        f.monic()
    }

    pub fn squarefree_part(&self) -> UniPoly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    pub fn sturm_sequence(&self) -> Vec<UniPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(UniPoly::new(r.coeffs.iter().map(|c| -c).collect()));
        }
        seq
    }

    /// Distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_roots(&self, lo: &Q, hi: &Q) -> usize {
        let seq = self.squarefree_part().sturm_sequence();
        count_with(&seq, lo, hi)
    }

    /// Bisects a sign-changing bracket down to width `tol` and returns the
    /// midpoint.  The bracket endpoints must give opposite (or zero) signs.
    pub fn isolate_root(&self, lo: &Q, hi: &Q, tol: f64) -> Result<f64, AlgebraError> {
        let (l, h) = self.refine(lo, hi, tol)?;
        Ok(q_to_f64(&((l + h) / q(2))))
    }

    /// Exact bracket of width at most `tol` around the root in `[lo, hi]`.
    pub fn refine(&self, lo: &Q, hi: &Q, tol: f64) -> Result<(Q, Q), AlgebraError> {
        let (mut l, mut h) = (lo.clone(), hi.clone());
        let sl = self.sign_at(&l);
        let sh = self.sign_at(&h);
        if sl == 0 {
            return Ok((l.clone(), l));
        }
        if sh == 0 {
            return Ok((h.clone(), h));
        }
        if sl == sh {
            return Err(AlgebraError::NoSignChange { lo: q_to_f64(lo), hi: q_to_f64(hi) });
        }
        let tol = q_from_f64(tol);
        let two = q(2);
        while &h - &l > tol {
            let m = (&l + &h) / &two;
            let sm = self.sign_at(&m);
            if sm == 0 {
                return Ok((m.clone(), m));
            }
            if sm == sl {
                l = m;
            } else {
                h = m;
            }
        }
        Ok((l, h))
    }

    /// All distinct real roots in the closed interval `[lo, hi]`, each to
    /// within `tol`.
    pub fn real_roots_in(&self, lo: &Q, hi: &Q, tol: f64) -> Vec<f64> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let p = self.squarefree_part();
        let seq = p.sturm_sequence();
        let mut roots = Vec::new();
        if p.sign_at(lo) == 0 {
            roots.push(q_to_f64(lo));
        }
        let mut stack = vec![(lo.clone(), hi.clone())];
        let two = q(2);
        while let Some((l, h)) = stack.pop() {
            match count_with(&seq, &l, &h) {
                0 => {}
                1 if p.sign_at(&l) == 0 => {
                    // l is a root counted elsewhere; move away from it
                    let m = (&l + &h) / &two;
                    stack.push((l, m.clone()));
                    stack.push((m, h));
                }
                1 => {
                    if p.sign_at(&h) == 0 {
                        roots.push(q_to_f64(&h));
                    } else {
                        // the single root lies strictly inside, so signs differ
                        let r = p.isolate_root(&l, &h, tol).expect("sign change");
                        roots.push(r);
                    }
                }
                _ => {
                    let m = (&l + &h) / &two;
                    stack.push((l, m.clone()));
                    stack.push((m, h));
                }
            }
        }
        roots.sort_by(f64::total_cmp);
        roots.dedup_by(|x, y| (*x - *y).abs() <= tol);
        roots
    }

    /// Exact sign-change check for `value +- eps`.
    pub fn brackets(&self, value: f64, eps: f64) -> bool {
        let lo = q_from_f64(value - eps);
        let hi = q_from_f64(value + eps);
        self.sign_at(&lo) * self.sign_at(&hi) <= 0
    }
}

fn sign_changes(seq: &[UniPoly], t: &Q) -> usize {
    let mut last = 0;
    let mut n = 0;
    for p in seq {
        let s = p.sign_at(t);
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

fn count_with(seq: &[UniPoly], lo: &Q, hi: &Q) -> usize {
    sign_changes(seq, lo).saturating_sub(sign_changes(seq, hi))
}

/// A real algebraic number given by a defining polynomial and an isolating
/// bracket.
#[derive(Debug, Clone)]
pub struct AlgebraicConstant {
    pub name: &'static str,
    pub defining: UniPoly,
    pub bracket: (Q, Q),
    pub value: f64,
}

pub const ROOT_TOL: f64 = 1e-15;

impl AlgebraicConstant {
    fn build(name: &'static str, desc: &[i64], lo: Q, hi: Q) -> Self {
        let defining = UniPoly::from_desc(desc);
        assert_eq!(defining.count_roots(&lo, &hi), 1, "{name} bracket");
        let value = defining.isolate_root(&lo, &hi, ROOT_TOL).expect("sign change");
        AlgebraicConstant { name, defining, bracket: (lo, hi), value }
    }

    pub fn a_prime() -> Self {
        Self::build("a'", &[1, -2, 7, -6, 1], qf(7, 10), qf(85, 100))
    }

    pub fn a_double_prime() -> Self {
        Self::build("a''", &[8, 12, 1, -10, -6, -1], qf(9, 10), qf(95, 100))
    }

    pub fn b_prime() -> Self {
        Self::build("b'", &[4, 0, 3, -6], qf(9, 10), Q::one())
    }

    pub fn b_double_prime() -> Self {
        Self::build("b''", &[6, -7, -12, 7, 8, -1, -2, -1], qf(16, 10), qf(18, 10))
    }

    pub fn b_triple_prime() -> Self {
        Self::build("b'''", &[3, -10, 11, -6, 1], qf(185, 100), q(2))
    }

    pub fn all() -> Vec<AlgebraicConstant> {
        vec![
            Self::a_prime(),
            Self::a_double_prime(),
            Self::b_prime(),
            Self::b_double_prime(),
            Self::b_triple_prime(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_constants() {
        let want = [
            0.7800484328579436,
            0.9274582413100021,
            0.9294445359356209,
            1.720775415963172,
            1.918088669005936,
        ];
        for (c, w) in AlgebraicConstant::all().iter().zip(want) {
            assert!((c.value - w).abs() < 1e-14, "{}: {} vs {}", c.name, c.value, w);
            assert!(c.defining.brackets(c.value, 1e-14), "{}", c.name);
        }
    }

    #[test]
    fn sturm_counts() {
        // (t - 1)(t - 2)(t - 3)
        let p = UniPoly::from_desc(&[1, -6, 11, -6]);
        assert_eq!(p.count_roots(&q(0), &q(4)), 3);
        assert_eq!(p.count_roots(&qf(3, 2), &qf(5, 2)), 1);
        let r = p.real_roots_in(&q(0), &q(3), 1e-14);
        assert_eq!(r.len(), 3);
        assert!((r[2] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn repeated_roots_are_reported_once() {
        // (t - 1/2)^2 (t + 1)
        let p = UniPoly::new(vec![qf(1, 4), qf(-3, 4), q(0), q(1)]);
        let r = p.real_roots_in(&q(-2), &q(2), 1e-14);
        assert_eq!(r, vec![-1.0, 0.5]);
    }

    #[test]
    fn bracket_without_sign_change() {
        let p = UniPoly::from_desc(&[1, 0, 1]);
        assert!(p.isolate_root(&q(-1), &q(1), 1e-14).is_err());
    }
}
