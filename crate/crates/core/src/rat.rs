//! Arbitrary-precision rationals with an inline `i64` fast path.
//!
//! Values are always stored fully reduced (gcd(num, den) = 1, den > 0).
//! Arithmetic stays in machine words while numerator and denominator fit
//! in `i64` and transparently promotes to `BigInt` otherwise.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

#[derive(Clone, Debug)]
enum Repr {
    /// num/den with den > 0, fully reduced.
    Small(i64, i64),
    /// Reduced, positive denominator. Boxed to keep `Rat` two words wide.
    Big(Box<(BigInt, BigInt)>),
}

/// An exact rational number.
#[derive(Clone, Debug)]
pub struct Rat(Repr);

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    if a == 0 {
        return b as i64;
    }
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i64
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    if a == 0 {
        return b as i128;
    }
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

fn big_reduced(mut n: BigInt, mut d: BigInt) -> (BigInt, BigInt) {
    debug_assert!(!d.is_zero(), "zero denominator");
    if d.sign() == Sign::Minus {
        n = -n;
        d = -d;
    }
    let g = n.gcd(&d);
    if !g.is_one() {
        n /= &g;
        d /= &g;
    }
    (n, d)
}

impl Rat {
    pub fn zero() -> Self {
        Rat(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Rat(Repr::Small(1, 1))
    }

    pub fn from_i64(n: i64) -> Self {
        Rat(Repr::Small(n, 1))
    }

    /// Reduced rational n/d. Panics on d = 0.
    pub fn new(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        let g = gcd_i64(n, d);
        let (mut n, mut d) = (n / g, d / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        Rat(Repr::Small(n, d))
    }

    pub fn from_big(n: BigInt, d: BigInt) -> Self {
        let (n, d) = big_reduced(n, d);
        Self::demote(n, d)
    }

    fn demote(n: BigInt, d: BigInt) -> Self {
        if let (Some(ns), Some(ds)) = (n.to_i64(), d.to_i64()) {
            Rat(Repr::Small(ns, ds))
        } else {
            Rat(Repr::Big(Box::new((n, d))))
        }
    }

    fn from_i128(n: i128, d: i128) -> Self {
        debug_assert!(d > 0);
        let g = gcd_i128(n, d);
        let (n, d) = (n / g, d / g);
        if let (Ok(ns), Ok(ds)) = (i64::try_from(n), i64::try_from(d)) {
            Rat(Repr::Small(ns, ds))
        } else {
            Rat(Repr::Big(Box::new((BigInt::from(n), BigInt::from(d)))))
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.0.clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.1.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n == 0,
            Repr::Big(b) => b.0.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Small(n, d) => *n == 1 && *d == 1,
            Repr::Big(_) => false,
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.1.is_one(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(b) => b.0.sign() == Sign::Minus,
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        match &self.0 {
            Repr::Small(n, d) => {
                if *n < 0 {
                    Rat(Repr::Small(-d, -n))
                } else {
                    Rat(Repr::Small(*d, *n))
                }
            }
            Repr::Big(b) => Rat::from_big(b.1.clone(), b.0.clone()),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Rat::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(b) => {
                // Scale-aware conversion so huge num/den pairs do not both overflow.
                let nb = b.0.bits() as i64;
                let db = b.1.bits() as i64;
                let shift = (nb.max(db) - 900).max(0) as u64;
                let n = (&b.0 >> shift).to_f64().unwrap_or(f64::NAN);
                let d = (&b.1 >> shift).to_f64().unwrap_or(f64::NAN);
                n / d
            }
        }
    }

    /// Decimal digit count of the (reduced, positive) denominator.
    pub fn denom_digits(&self) -> usize {
        match &self.0 {
            Repr::Small(_, d) => d.to_string().len(),
            Repr::Big(b) => b.1.to_string().len(),
        }
    }

    /// Residue num * den^-1 mod p; None when p divides the denominator.
    pub fn mod_p(&self, p: u64) -> Option<u64> {
        let (n, d) = match &self.0 {
            Repr::Small(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (b.0.clone(), b.1.clone()),
        };
        let pb = BigInt::from(p);
        let dm = ((&d % &pb) + &pb) % &pb;
        let dm = dm.to_u64().unwrap();
        if dm == 0 {
            return None;
        }
        let nm = ((&n % &pb) + &pb) % &pb;
        let nm = nm.to_u64().unwrap();
        Some(crate::modular::mul_mod(nm, crate::modular::inv_mod(dm, p), p))
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::zero()
    }
}

impl PartialEq for Rat {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x.0 == y.0 && x.1 == y.1,
            // Mixed representations cannot be equal: Big is only used
            // when the value does not fit in Small.
            _ => false,
        }
    }
}
impl Eq for Rat {}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => (self.numer() * other.denom()).cmp(&(other.numer() * self.denom())),
        }
    }
}

impl std::hash::Hash for Rat {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.numer().hash(state);
        self.denom().hash(state);
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

/// Parse "n", "n/d" or "-n/d".
impl FromStr for Rat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (ns, ds) = match s.split_once('/') {
            Some((a, b)) => (a, b),
            None => (s, "1"),
        };
        let n = BigInt::from_str(ns.trim()).map_err(|e| format!("bad numerator {ns:?}: {e}"))?;
        let d = BigInt::from_str(ds.trim()).map_err(|e| format!("bad denominator {ds:?}: {e}"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(Rat::from_big(n, d))
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_i64(n)
    }
}

impl From<i32> for Rat {
    fn from(n: i32) -> Self {
        Rat::from_i64(n as i64)
    }
}

fn add_impl(a: &Rat, b: &Rat, sub: bool) -> Rat {
    match (&a.0, &b.0) {
        (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
            let bn = if sub { -(*bn as i128) } else { *bn as i128 };
            let n = *an as i128 * *bd as i128 + bn * *ad as i128;
            let d = *ad as i128 * *bd as i128;
            Rat::from_i128(n, d)
        }
        _ => {
            let bn = if sub { -b.numer() } else { b.numer() };
            Rat::from_big(a.numer() * b.denom() + bn * a.denom(), a.denom() * b.denom())
        }
    }
}

fn mul_impl(a: &Rat, b: &Rat) -> Rat {
    match (&a.0, &b.0) {
        (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
            // Cross-reduce first so products rarely leave i64 range.
            let g1 = gcd_i64(*an, *bd);
            let g2 = gcd_i64(*bn, *ad);
            let n = (*an / g1) as i128 * (*bn / g2) as i128;
            let d = (*ad / g2) as i128 * (*bd / g1) as i128;
            Rat::from_i128(n, d)
        }
        _ => Rat::from_big(a.numer() * b.numer(), a.denom() * b.denom()),
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $imp:expr) => {
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                $imp(self, rhs)
            }
        }
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                $imp(&self, &rhs)
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                $imp(&self, rhs)
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                $imp(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| add_impl(a, b, false));
binop!(Sub, sub, |a, b| add_impl(a, b, true));
binop!(Mul, mul, mul_impl);
binop!(Div, div, |a: &Rat, b: &Rat| mul_impl(a, &b.recip()));

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        -&self
    }
}
impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        match &self.0 {
            Repr::Small(n, d) => {
                if *n == i64::MIN {
                    Rat::from_big(-BigInt::from(*n), BigInt::from(*d))
                } else {
                    Rat(Repr::Small(-n, *d))
                }
            }
            Repr::Big(b) => Rat::from_big(-b.0.clone(), b.1.clone()),
        }
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        *self = &*self + rhs;
    }
}
impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        *self = &*self - rhs;
    }
}
impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        *self = &*self * rhs;
    }
}
impl DivAssign<&Rat> for Rat {
    fn div_assign(&mut self, rhs: &Rat) {
        *self = &*self / rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_invariant() {
        let r = Rat::new(6, -4);
        assert_eq!(r, Rat::new(-3, 2));
        assert_eq!(r.to_string(), "-3/2");
        assert!(r.denom() > BigInt::zero());
    }

    #[test]
    fn mul_reduces_before_storage() {
        let a = Rat::new(2, 3);
        let b = Rat::new(3, 2);
        assert!((a * b).is_one());
    }

    #[test]
    fn promotion_round_trip() {
        // (2^40 / 3)^3 overflows i64 and must promote.
        let a = Rat::new(1 << 40, 3);
        let c = a.pow(3);
        assert_eq!(c.denom(), BigInt::from(27));
        let back = &c / &(&a * &a);
        assert_eq!(back, a);
    }

    #[test]
    fn parse_and_display() {
        let r: Rat = "-22/7".parse().unwrap();
        assert_eq!(r, Rat::new(-22, 7));
        assert_eq!(r.denom_digits(), 1);
        assert_eq!("5".parse::<Rat>().unwrap(), Rat::from_i64(5));
        assert!("1/0".parse::<Rat>().is_err());
    }

    #[test]
    fn mod_p_matches_value() {
        let p = 1_000_000_007u64;
        let r = Rat::new(-3, 7);
        let m = r.mod_p(p).unwrap();
        // 7 * m == -3 mod p
        assert_eq!(crate::modular::mul_mod(7, m, p), p - 3);
    }
}
