//! Face weights of the three-site control-control gate family.
//!
//! The middle-site map is f_00 = [[alpha, beta], [gamma, delta]] when both
//! neighbors are empty; f_01 = f_10 = f_11 = X is the fixed flip.

use crate::ModelError;
use dr54_core::Rat;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq)]
pub struct FaceWeights<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub delta: T,
}

pub type ExactWeights = FaceWeights<Rat>;

/// Classification flags; a parameter point may satisfy several.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateClass {
    /// (alpha, delta, beta, gamma) = (1, 1, 0, 0): the deterministic point.
    pub deterministic_rca54: bool,
    /// (beta, gamma, alpha, delta) = (1, 1, 0, 0): f_00 = X.
    pub trivial: bool,
    /// alpha = 1 - gamma, delta = 1 - beta, beta and gamma in [0, 1].
    pub stochastic: bool,
    /// f_00^T f_00 = 1 (real orthogonal; the complex case is checked
    /// numerically by the float pipelines).
    pub unitary: bool,
}

impl ExactWeights {
    pub fn new(alpha: Rat, beta: Rat, gamma: Rat, delta: Rat) -> Self {
        FaceWeights { alpha, beta, gamma, delta }
    }

    pub fn undeformed() -> Self {
        FaceWeights {
            alpha: Rat::one(),
            beta: Rat::zero(),
            gamma: Rat::zero(),
            delta: Rat::one(),
        }
    }

    /// Stochastic point from the two free bulk parameters.
    pub fn stochastic(beta: Rat, gamma: Rat) -> Result<Self, ModelError> {
        let w = FaceWeights {
            alpha: &Rat::one() - &gamma,
            delta: &Rat::one() - &beta,
            beta,
            gamma,
        };
        if !w.classify().stochastic {
            return Err(ModelError::NonStochastic(format!(
                "beta={}, gamma={} outside [0,1]",
                w.beta, w.gamma
            )));
        }
        Ok(w)
    }

    pub fn classify(&self) -> GateClass {
        let one = Rat::one();
        let zero = Rat::zero();
        let in_unit = |x: &Rat| !x.is_negative() && *x <= one;
        let deterministic_rca54 =
            self.alpha == one && self.delta == one && self.beta == zero && self.gamma == zero;
        let trivial =
            self.beta == one && self.gamma == one && self.alpha == zero && self.delta == zero;
        let stochastic = self.alpha == &one - &self.gamma
            && self.delta == &one - &self.beta
            && in_unit(&self.beta)
            && in_unit(&self.gamma);
        // f^T f = I entrywise for the real exact case.
        let unitary = &(&self.alpha * &self.alpha) + &(&self.gamma * &self.gamma) == one
            && &(&self.beta * &self.beta) + &(&self.delta * &self.delta) == one
            && (&(&self.alpha * &self.beta) + &(&self.gamma * &self.delta)).is_zero();
        GateClass { deterministic_rca54, trivial, stochastic, unitary }
    }

    pub fn map<T>(&self, mut f: impl FnMut(&Rat) -> T) -> FaceWeights<T> {
        FaceWeights {
            alpha: f(&self.alpha),
            beta: f(&self.beta),
            gamma: f(&self.gamma),
            delta: f(&self.delta),
        }
    }
}

/// Conditional-driving boundary parameters, all in (0, 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryDriving {
    #[serde(with = "crate::spec::rat_string")]
    pub a: Rat,
    #[serde(with = "crate::spec::rat_string")]
    pub b: Rat,
    #[serde(with = "crate::spec::rat_string")]
    pub c: Rat,
    #[serde(with = "crate::spec::rat_string")]
    pub d: Rat,
}

impl BoundaryDriving {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Result<Self, ModelError> {
        for (name, v) in [("a", &a), ("b", &b), ("c", &c), ("d", &d)] {
            if v.is_negative() || v.is_zero() || *v >= Rat::one() {
                return Err(ModelError::BadParameter(format!("{name}={v} not in (0,1)")));
            }
        }
        Ok(BoundaryDriving { a, b, c, d })
    }
}

/// Chain size and boundary kind. N is even by model assumption.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainGeometry {
    pub n: usize,
    pub boundary: Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Open,
}

impl ChainGeometry {
    pub fn new(n: usize, boundary: Boundary) -> Result<Self, ModelError> {
        if n % 2 != 0 || n < 4 {
            return Err(ModelError::BadParameter(format!("N={n} must be even and >= 4")));
        }
        Ok(ChainGeometry { n, boundary })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_flags() {
        let det = ExactWeights::undeformed();
        let c = det.classify();
        assert!(c.deterministic_rca54 && c.stochastic && c.unitary && !c.trivial);

        let triv = ExactWeights::new(Rat::zero(), Rat::one(), Rat::one(), Rat::zero());
        let c = triv.classify();
        assert!(c.trivial && c.stochastic && c.unitary && !c.deterministic_rca54);

        let stoch = ExactWeights::stochastic(Rat::new(30, 101), Rat::new(40, 49)).unwrap();
        let c = stoch.classify();
        assert!(c.stochastic && !c.deterministic_rca54 && !c.trivial && !c.unitary);

        // 3-4-5 rotation is exactly orthogonal.
        let rot = ExactWeights::new(Rat::new(3, 5), Rat::new(-4, 5), Rat::new(4, 5), Rat::new(3, 5));
        assert!(rot.classify().unitary);
        assert!(!rot.classify().stochastic);

        // The generic pinned parameters are neither stochastic nor unitary.
        let generic =
            ExactWeights::new(Rat::new(1, 7), Rat::new(1, 2), Rat::new(1, 8), Rat::new(3, 11));
        let c = generic.classify();
        assert!(!c.stochastic && !c.unitary && !c.deterministic_rca54 && !c.trivial);
    }

    #[test]
    fn boundary_range_check() {
        assert!(BoundaryDriving::new(Rat::new(1, 2), Rat::one(), Rat::new(1, 3), Rat::new(1, 4)).is_err());
        assert!(BoundaryDriving::new(
            Rat::new(11, 23),
            Rat::new(19, 32),
            Rat::new(23, 53),
            Rat::new(31, 71)
        )
        .is_ok());
    }
}
