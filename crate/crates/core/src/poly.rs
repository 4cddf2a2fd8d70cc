//! Dense univariate polynomials over the rationals and their fraction field.

use crate::Rat;
use std::fmt;

/// Polynomial with coefficient of u^k at index k. Leading zeros trimmed;
/// the zero polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Poly { coeffs: vec![c] };
        p.trim();
        p
    }

    /// The monomial u.
    pub fn x() -> Self {
        Poly { coeffs: vec![Rat::zero(), Rat::one()] }
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for the zero polynomial by convention of callers that
    /// checked is_zero first.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(&self.coeff(k) + &rhs.coeff(k));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division: self = q * rhs + r with deg r < deg rhs.
    pub fn div_rem(&self, rhs: &Poly) -> (Poly, Poly) {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut q = vec![Rat::zero(); self.coeffs.len().saturating_sub(rhs.coeffs.len() - 1)];
        let lead = rhs.coeffs.last().unwrap().clone();
        while !rem.is_zero() && rem.coeffs.len() >= rhs.coeffs.len() {
            let shift = rem.coeffs.len() - rhs.coeffs.len();
            let f = rem.coeffs.last().unwrap() / &lead;
            q[shift] = f.clone();
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let v = &rem.coeffs[shift + j] - &(&f * b);
                rem.coeffs[shift + j] = v;
            }
            rem.trim();
        }
        (Poly::from_coeffs(q), rem)
    }

    pub fn gcd(&self, rhs: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = std::mem::replace(&mut b, r);
        }
        if let Some(lead) = a.coeffs.last().cloned() {
            a = a.scale(&lead.recip());
        }
        a
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c * &Rat::from_i64(k as i64 + 1))
                .collect(),
        )
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*u")?,
                _ => write!(f, "({c})*u^{k}")?,
            }
        }
        Ok(())
    }
}

/// Reduced fraction of polynomials. Denominator is monic and shares no
/// factor with the numerator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RationalFunction { num: Poly::one(), den: Poly::one() }
    }

    pub fn constant(c: Rat) -> Self {
        RationalFunction { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator polynomial");
        let mut rf = RationalFunction { num, den };
        rf.reduce();
        rf
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree() > 0 || !g.coeff(0).is_one() {
            self.num = self.num.div_rem(&g).0;
            self.den = self.den.div_rem(&g).0;
        }
        // Normalize: denominator constant term 1 when regular at the
        // origin, monic otherwise.
        let d0 = self.den.coeff(0);
        let scale = if d0.is_zero() { self.den.coeffs.last().unwrap().clone() } else { d0 };
        if !scale.is_one() {
            let inv = scale.recip();
            self.den = self.den.scale(&inv);
            self.num = self.num.scale(&inv);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        RationalFunction::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        RationalFunction::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(RationalFunction::new(self.den.clone(), self.num.clone()))
        }
    }

    /// None when the denominator vanishes at x.
    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Taylor coefficients at u = 0 through the given order.
    /// None when the denominator vanishes at the origin.
    pub fn taylor(&self, order: usize) -> Option<Vec<Rat>> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return None;
        }
        let inv_d0 = d0.recip();
        let mut out = Vec::with_capacity(order + 1);
        for k in 0..=order {
            // c_k = (num_k - sum_{j=1..k} den_j c_{k-j}) / den_0
            let mut acc = self.num.coeff(k);
            for j in 1..=k {
                let dj = self.den.coeff(j);
                if dj.is_zero() {
                    continue;
                }
                acc -= &(&dj * &out[k - j]);
            }
            out.push(&acc * &inv_d0);
        }
        Some(out)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly {
        Poly::from_coeffs(cs.iter().map(|&c| Rat::from_i64(c)).collect())
    }

    #[test]
    fn div_rem_identity() {
        let a = p(&[1, 0, 2, 3]);
        let b = p(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < b.degree() || r.is_zero());
    }

    #[test]
    fn gcd_common_factor() {
        let g = p(&[1, 1]);
        let a = g.mul(&p(&[2, 0, 1]));
        let b = g.mul(&p(&[-1, 1]));
        assert_eq!(a.gcd(&b), g);
    }

    #[test]
    fn rational_function_reduces() {
        let rf = RationalFunction::new(p(&[1, 2, 1]), p(&[1, 1]));
        assert_eq!(rf.num, p(&[1, 1]));
        assert_eq!(rf.den, Poly::one());
    }

    #[test]
    fn taylor_of_geometric() {
        // 1/(1-u) = 1 + u + u^2 + ...
        let rf = RationalFunction::new(p(&[1]), p(&[1, -1]));
        let t = rf.taylor(4).unwrap();
        assert!(t.iter().all(|c| c.is_one()));
    }
}
