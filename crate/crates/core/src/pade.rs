//! Pade approximants of truncated power series.

use crate::field::QQ;
use crate::linsolve::dense_solve;
use crate::poly::{Poly, RationalFunction};
use crate::series::PowerSeries;
use crate::Rat;

/// Why no [m/n] approximant was produced. A failed Pade is a value, not an
/// error: resummation strategies branch on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PadeFailure {
    /// Series carries fewer than m + n + 1 coefficients.
    InsufficientOrder,
    /// The defining linear system is inconsistent.
    Inconsistent,
    /// The solved denominator vanishes at the origin.
    SingularAtOrigin,
}

/// [m/n] Pade approximant: P_m / Q_n with Q_n(0) = 1 whose Taylor expansion
/// matches the series through order m + n.
pub fn pade(series: &PowerSeries, m: usize, n: usize) -> Result<RationalFunction, PadeFailure> {
    if series.truncation_order() < m + n {
        return Err(PadeFailure::InsufficientOrder);
    }
    let c = |k: usize| series.coeff(k);

    // Solve for q_1..q_n from the linear block: for k = m+1 ..= m+n:
    //   c_k + sum_{j=1..n} q_j c_{k-j} = 0   (c_i = 0 for i < 0)
    let q = if n == 0 {
        vec![]
    } else {
        let mut rows = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for k in m + 1..=m + n {
            let mut row = Vec::with_capacity(n);
            for j in 1..=n {
                row.push(if k >= j { c(k - j) } else { Rat::zero() });
            }
            rows.push(row);
            rhs.push(-c(k));
        }
        match dense_solve(&QQ, rows, rhs) {
            Some(sol) => sol.particular,
            None => return Err(PadeFailure::Inconsistent),
        }
    };

    let mut qc = vec![Rat::one()];
    qc.extend(q);
    let qpoly = Poly::from_coeffs(qc);
    if qpoly.coeff(0).is_zero() {
        return Err(PadeFailure::SingularAtOrigin);
    }

    // p_k = sum_{j=0..min(k,n)} q_j c_{k-j}, k = 0..=m
    let mut pc = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let mut acc = Rat::zero();
        for j in 0..=k.min(n) {
            acc += &(&qpoly.coeff(j) * &c(k - j));
        }
        pc.push(acc);
    }
    let rf = RationalFunction::new(Poly::from_coeffs(pc), qpoly);
    if rf.den.coeff(0).is_zero() {
        return Err(PadeFailure::SingularAtOrigin);
    }

    // The linear block can be solvable yet produce an approximant that fails
    // to match (degenerate Hankel data); re-expansion is the arbiter.
    let taylor = rf.taylor(m + n).ok_or(PadeFailure::SingularAtOrigin)?;
    for (k, t) in taylor.iter().enumerate() {
        if *t != c(k) {
            return Err(PadeFailure::Inconsistent);
        }
    }
    Ok(rf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(cs: &[(i64, i64)]) -> PowerSeries {
        PowerSeries::new(cs.iter().map(|&(n, d)| Rat::new(n, d)).collect())
    }

    #[test]
    fn geometric_is_one_over_one_minus_u() {
        let s = series(&[(1, 1), (1, 1), (1, 1), (1, 1)]);
        let rf = pade(&s, 0, 1).unwrap();
        assert_eq!(rf.num, Poly::one());
        assert_eq!(rf.den, Poly::from_coeffs(vec![Rat::one(), Rat::from_i64(-1)]));
    }

    #[test]
    fn exp_1_1() {
        // exp through u^3; [1/1] = (1 + u/2)/(1 - u/2), oracle solved by hand:
        // q1 from c2 + q1 c1 = 0 => q1 = -1/2; p0 = 1, p1 = c1 + q1 c0 = 1/2.
        let s = series(&[(1, 1), (1, 1), (1, 2), (1, 6)]);
        let rf = pade(&s, 1, 1).unwrap();
        assert_eq!(rf.num, Poly::from_coeffs(vec![Rat::one(), Rat::new(1, 2)]));
        assert_eq!(rf.den, Poly::from_coeffs(vec![Rat::one(), Rat::new(-1, 2)]));
    }

    #[test]
    fn polynomial_with_zero_tail_is_itself() {
        let s = series(&[(2, 1), (0, 1), (3, 1), (0, 1), (5, 1), (0, 1), (0, 1), (0, 1), (0, 1)]);
        let rf = pade(&s, 4, 0).unwrap();
        assert_eq!(rf.den, Poly::one());
        assert_eq!(rf.num, s.truncate(4).as_poly());
    }

    #[test]
    fn insufficient_order_is_a_value() {
        let s = series(&[(1, 1), (1, 1)]);
        assert_eq!(pade(&s, 2, 2), Err(PadeFailure::InsufficientOrder));
    }
}
