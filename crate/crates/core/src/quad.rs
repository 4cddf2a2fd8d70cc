//! Elements a + b*sqrt(d) of a quadratic extension of the rationals.
//! The radicand d travels in the `QuadQ` field context, not in elements.

use crate::Rat;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadRat {
    pub a: Rat,
    pub b: Rat,
}

impl QuadRat {
    pub fn zero() -> Self {
        QuadRat { a: Rat::zero(), b: Rat::zero() }
    }

    pub fn one() -> Self {
        QuadRat { a: Rat::one(), b: Rat::zero() }
    }

    pub fn from_rat(a: Rat) -> Self {
        QuadRat { a, b: Rat::zero() }
    }

    /// The generator sqrt(d).
    pub fn root() -> Self {
        QuadRat { a: Rat::zero(), b: Rat::one() }
    }

    pub fn new(a: Rat, b: Rat) -> Self {
        QuadRat { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        QuadRat { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        QuadRat { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }

    pub fn neg(&self) -> Self {
        QuadRat { a: -&self.a, b: -&self.b }
    }

    pub fn conj(&self) -> Self {
        QuadRat { a: self.a.clone(), b: -&self.b }
    }

    pub fn mul(&self, rhs: &Self, d: &Rat) -> Self {
        QuadRat {
            a: &(&self.a * &rhs.a) + &(&(&self.b * &rhs.b) * d),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.a),
        }
    }

    /// Field norm a^2 - d b^2; zero iff the element is zero (d non-square).
    pub fn norm(&self, d: &Rat) -> Rat {
        &(&self.a * &self.a) - &(&(&self.b * &self.b) * d)
    }

    pub fn inv(&self, d: &Rat) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm(d);
        assert!(!n.is_zero(), "zero norm: radicand is a perfect square");
        let ninv = n.recip();
        Some(QuadRat { a: &self.a * &ninv, b: &(-&self.b) * &ninv })
    }

    /// Numeric value with the principal (positive) branch of sqrt(d).
    pub fn to_f64(&self, d: &Rat) -> f64 {
        self.a.to_f64() + self.b.to_f64() * d.to_f64().sqrt()
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "({})*r", self.b)
        } else {
            write!(f, "{} + ({})*r", self.a, self.b)
        }
    }
}

/// Exact integer square root test: Some(s) when n = s^2.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &sn * &sn == n && &sd * &sd == d {
        Some(Rat::from_big(sn, sd))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, QuadQ};

    #[test]
    fn inverse_in_q_sqrt2() {
        let ctx = QuadQ::new(Rat::from_i64(2));
        let x = QuadRat::new(Rat::new(1, 3), Rat::new(-2, 5));
        let xi = ctx.inv(&x).unwrap();
        assert_eq!(ctx.mul(&x, &xi), QuadRat::one());
    }

    #[test]
    fn sqrt_detection() {
        assert_eq!(rat_sqrt(&Rat::new(9, 4)), Some(Rat::new(3, 2)));
        assert_eq!(rat_sqrt(&Rat::new(2, 1)), None);
        assert_eq!(rat_sqrt(&Rat::new(-4, 1)), None);
    }
}
