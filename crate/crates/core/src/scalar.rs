//! Scalar values with an explicit numeric domain. Library internals work
//! with concrete types; this wrapper is the interchange representation at
//! module boundaries (files, CLI).

use crate::error::CoreError;
use crate::Rat;
use num_complex::Complex64;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    ExactRational,
    Real64,
    Complex128,
}

impl Domain {
    pub fn name(&self) -> &'static str {
        match self {
            Domain::ExactRational => "exact",
            Domain::Real64 => "real64",
            Domain::Complex128 => "complex128",
        }
    }

    pub fn parse(s: &str) -> Result<Self, CoreError> {
        match s {
            "exact" => Ok(Domain::ExactRational),
            "real64" => Ok(Domain::Real64),
            "complex128" => Ok(Domain::Complex128),
            _ => Err(CoreError::Parse(format!("unknown domain {s:?}"))),
        }
    }

    /// Widest common domain for mixed arithmetic.
    pub fn join(self, other: Domain) -> Domain {
        use Domain::*;
        match (self, other) {
            (ExactRational, ExactRational) => ExactRational,
            (Complex128, _) | (_, Complex128) => Complex128,
            _ => Real64,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rat),
    Real(f64),
    Complex(Complex64),
}

impl Scalar {
    pub fn domain(&self) -> Domain {
        match self {
            Scalar::Exact(_) => Domain::ExactRational,
            Scalar::Real(_) => Domain::Real64,
            Scalar::Complex(_) => Domain::Complex128,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(r) => Complex64::new(r.to_f64(), 0.0),
            Scalar::Real(x) => Complex64::new(*x, 0.0),
            Scalar::Complex(z) => *z,
        }
    }

    pub fn as_exact(&self) -> Option<&Rat> {
        match self {
            Scalar::Exact(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Real(x) => write!(f, "{x:?}"),
            Scalar::Complex(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}
