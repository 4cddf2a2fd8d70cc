//! Truncated power series over the rationals.

use crate::poly::Poly;
use crate::Rat;

/// Coefficients c[k] of u^k, k = 0..=truncation_order. The length is
/// always truncation_order + 1; trailing zeros are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    pub coeffs: Vec<Rat>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant term");
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        PowerSeries { coeffs: vec![Rat::zero(); order + 1] }
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(order + 1);
        c.resize(order + 1, Rat::zero());
        PowerSeries { coeffs: c }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.truncation_order().min(rhs.truncation_order());
        PowerSeries {
            coeffs: (0..=order).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.truncation_order().min(rhs.truncation_order());
        let mut out = vec![Rat::zero(); order + 1];
        for i in 0..=order {
            let a = self.coeff(i);
            if a.is_zero() {
                continue;
            }
            for j in 0..=(order - i) {
                out[i + j] += &(&a * &rhs.coeff(j));
            }
        }
        PowerSeries { coeffs: out }
    }

    /// Multiplicative inverse; None when the constant term vanishes.
    pub fn inv(&self) -> Option<Self> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return None;
        }
        let order = self.truncation_order();
        let inv0 = c0.recip();
        let mut out = vec![Rat::zero(); order + 1];
        out[0] = inv0.clone();
        for k in 1..=order {
            let mut acc = Rat::zero();
            for j in 1..=k {
                acc += &(&self.coeff(j) * &out[k - j]);
            }
            out[k] = &(-acc) * &inv0;
        }
        Some(PowerSeries { coeffs: out })
    }

    /// Formal quotient self / rhs; handles a common zero of order v at the
    /// origin by cancelling u^v first. None when rhs is identically zero
    /// through the truncation order or the quotient is not a power series.
    pub fn div(&self, rhs: &Self) -> Option<Self> {
        let v = rhs.coeffs.iter().position(|c| !c.is_zero())?;
        if self.coeffs.iter().take(v).any(|c| !c.is_zero()) {
            return None;
        }
        let order = self.truncation_order().min(rhs.truncation_order()) - v;
        let num = PowerSeries::new(self.coeffs[v..].to_vec()).truncate(order);
        let den = PowerSeries::new(rhs.coeffs[v..].to_vec()).truncate(order);
        Some(num.mul(&den.inv()?))
    }

    pub fn as_poly(&self) -> Poly {
        Poly::from_coeffs(self.coeffs.clone())
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.as_poly().eval(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inv_of_one_minus_u() {
        let s = PowerSeries::new(vec![Rat::one(), Rat::from_i64(-1), Rat::zero(), Rat::zero()]);
        let i = s.inv().unwrap();
        assert!(i.coeffs.iter().all(|c| c.is_one()));
    }

    #[test]
    fn div_cancels_common_valuation() {
        // u^2 / u = u
        let num = PowerSeries::new(vec![Rat::zero(), Rat::zero(), Rat::one(), Rat::zero()]);
        let den = PowerSeries::new(vec![Rat::zero(), Rat::one(), Rat::zero(), Rat::zero()]);
        let q = num.div(&den).unwrap();
        assert_eq!(q.coeff(1), Rat::one());
        assert_eq!(q.coeff(0), Rat::zero());
    }
}
