//! Field contexts: arithmetic carried by a context object so that fields
//! with runtime parameters (prime moduli, quadratic extensions, rational
//! functions) share one set of generic linear-algebra routines.

use crate::poly::{Poly, RationalFunction};
use crate::quad::QuadRat;
use crate::Rat;
use std::fmt::Debug;

pub trait Field {
    type El: Clone + Debug + PartialEq;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    /// None when `a` is zero.
    fn inv(&self, a: &Self::El) -> Option<Self::El>;

    fn div(&self, a: &Self::El, b: &Self::El) -> Self::El {
        self.mul(a, &self.inv(b).expect("division by zero"))
    }
    fn add_assign(&self, a: &mut Self::El, b: &Self::El) {
        *a = self.add(a, b);
    }
    fn mul_sub_assign(&self, a: &mut Self::El, c: &Self::El, b: &Self::El) {
        *a = self.sub(a, &self.mul(c, b));
    }
    fn from_rat(&self, r: &Rat) -> Self::El;
}

/// The rationals.
#[derive(Clone, Copy, Debug, Default)]
pub struct QQ;

impl Field for QQ {
    type El = Rat;
    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn inv(&self, a: &Rat) -> Option<Rat> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_rat(&self, r: &Rat) -> Rat {
        r.clone()
    }
}

/// Prime field Z/p for a word-sized prime.
#[derive(Clone, Copy, Debug)]
pub struct Fp(pub u64);

impl Field for Fp {
    type El = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        crate::modular::add_mod(*a, *b, self.0)
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        crate::modular::sub_mod(*a, *b, self.0)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.0 - *a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        crate::modular::mul_mod(*a, *b, self.0)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(crate::modular::inv_mod(*a, self.0))
        }
    }
    fn from_rat(&self, r: &Rat) -> u64 {
        r.mod_p(self.0).expect("denominator divisible by modulus")
    }
}

/// Real double precision with a zero tolerance, for the numeric paths.
#[derive(Clone, Copy, Debug)]
pub struct RR {
    pub eps: f64,
}

impl Default for RR {
    fn default() -> Self {
        RR { eps: 1e-12 }
    }
}

impl Field for RR {
    type El = f64;
    fn zero(&self) -> f64 {
        0.0
    }
    fn one(&self) -> f64 {
        1.0
    }
    fn is_zero(&self, a: &f64) -> bool {
        a.abs() <= self.eps
    }
    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }
    fn sub(&self, a: &f64, b: &f64) -> f64 {
        a - b
    }
    fn neg(&self, a: &f64) -> f64 {
        -a
    }
    fn mul(&self, a: &f64, b: &f64) -> f64 {
        a * b
    }
    fn inv(&self, a: &f64) -> Option<f64> {
        if self.is_zero(a) {
            None
        } else {
            Some(1.0 / a)
        }
    }
    fn from_rat(&self, r: &Rat) -> f64 {
        r.to_f64()
    }
}

/// Complex double precision with a zero tolerance.
#[derive(Clone, Copy, Debug)]
pub struct CC {
    pub eps: f64,
}

impl Default for CC {
    fn default() -> Self {
        CC { eps: 1e-12 }
    }
}

impl Field for CC {
    type El = num_complex::Complex64;
    fn zero(&self) -> Self::El {
        num_complex::Complex64::new(0.0, 0.0)
    }
    fn one(&self) -> Self::El {
        num_complex::Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self, a: &Self::El) -> bool {
        a.norm_sqr() <= self.eps * self.eps
    }
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El {
        a + b
    }
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El {
        a - b
    }
    fn neg(&self, a: &Self::El) -> Self::El {
        -a
    }
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El {
        a * b
    }
    fn inv(&self, a: &Self::El) -> Option<Self::El> {
        if self.is_zero(a) {
            None
        } else {
            Some(self.one() / a)
        }
    }
    fn from_rat(&self, r: &Rat) -> Self::El {
        num_complex::Complex64::new(r.to_f64(), 0.0)
    }
}

/// Quadratic extension Q(sqrt(d)) for a fixed non-square rational d.
#[derive(Clone, Debug)]
pub struct QuadQ {
    pub d: Rat,
}

impl QuadQ {
    pub fn new(d: Rat) -> Self {
        QuadQ { d }
    }
}

impl Field for QuadQ {
    type El = QuadRat;
    fn zero(&self) -> QuadRat {
        QuadRat::zero()
    }
    fn one(&self) -> QuadRat {
        QuadRat::one()
    }
    fn is_zero(&self, a: &QuadRat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &QuadRat, b: &QuadRat) -> QuadRat {
        a.add(b)
    }
    fn sub(&self, a: &QuadRat, b: &QuadRat) -> QuadRat {
        a.sub(b)
    }
    fn neg(&self, a: &QuadRat) -> QuadRat {
        a.neg()
    }
    fn mul(&self, a: &QuadRat, b: &QuadRat) -> QuadRat {
        a.mul(b, &self.d)
    }
    fn inv(&self, a: &QuadRat) -> Option<QuadRat> {
        a.inv(&self.d)
    }
    fn from_rat(&self, r: &Rat) -> QuadRat {
        QuadRat::from_rat(r.clone())
    }
}

/// Field of univariate rational functions Q(u).
#[derive(Clone, Copy, Debug, Default)]
pub struct FunQ;

impl Field for FunQ {
    type El = RationalFunction;
    fn zero(&self) -> RationalFunction {
        RationalFunction::zero()
    }
    fn one(&self) -> RationalFunction {
        RationalFunction::one()
    }
    fn is_zero(&self, a: &RationalFunction) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.add(b)
    }
    fn sub(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.sub(b)
    }
    fn neg(&self, a: &RationalFunction) -> RationalFunction {
        a.neg()
    }
    fn mul(&self, a: &RationalFunction, b: &RationalFunction) -> RationalFunction {
        a.mul(b)
    }
    fn inv(&self, a: &RationalFunction) -> Option<RationalFunction> {
        a.inv()
    }
    fn from_rat(&self, r: &Rat) -> RationalFunction {
        RationalFunction::constant(r.clone())
    }
}

impl FunQ {
    pub fn from_poly(&self, p: Poly) -> RationalFunction {
        RationalFunction::from_poly(p)
    }
}
