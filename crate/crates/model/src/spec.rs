//! JSON model specification; rationals cross the boundary as "num/den"
//! strings.

use crate::weights::{Boundary, BoundaryDriving, ChainGeometry, ExactWeights};
use crate::ModelError;
use dr54_core::Rat;
use serde::{Deserialize, Serialize};

pub mod rat_string {
    use dr54_core::Rat;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", v.numer(), v.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        Rat::from_str(&s).map_err(D::Error::custom)
    }
}

pub mod rat_string_opt {
    use dr54_core::Rat;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.serialize_some(&format!("{}/{}", v.numer(), v.denom())),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| Rat::from_str(&s).map_err(D::Error::custom)).transpose()
    }
}

/// On-disk model description for the rule-54 family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(with = "rat_string")]
    pub alpha: Rat,
    #[serde(with = "rat_string")]
    pub beta: Rat,
    #[serde(with = "rat_string")]
    pub gamma: Rat,
    #[serde(with = "rat_string")]
    pub delta: Rat,
    #[serde(rename = "N")]
    pub n: usize,
    pub boundary: Boundary,
    /// Conditional-driving parameters; required when boundary = open.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "rat_string_opt")]
    pub a: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "rat_string_opt")]
    pub b: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "rat_string_opt")]
    pub c: Option<Rat>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "rat_string_opt")]
    pub d: Option<Rat>,
}

impl ModelSpec {
    pub fn weights(&self) -> ExactWeights {
        ExactWeights::new(
            self.alpha.clone(),
            self.beta.clone(),
            self.gamma.clone(),
            self.delta.clone(),
        )
    }

    pub fn geometry(&self) -> Result<ChainGeometry, ModelError> {
        ChainGeometry::new(self.n, self.boundary)
    }

    pub fn driving(&self) -> Result<Option<BoundaryDriving>, ModelError> {
        match (&self.a, &self.b, &self.c, &self.d) {
            (Some(a), Some(b), Some(c), Some(d)) => Ok(Some(BoundaryDriving::new(
                a.clone(),
                b.clone(),
                c.clone(),
                d.clone(),
            )?)),
            (None, None, None, None) => Ok(None),
            _ => Err(ModelError::BadParameter(
                "boundary driving needs all four of a, b, c, d".into(),
            )),
        }
    }

    /// The pinned generic deformation at the default periodic size.
    pub fn default_periodic(n: usize) -> Self {
        ModelSpec {
            alpha: Rat::new(1, 7),
            beta: Rat::new(1, 2),
            gamma: Rat::new(1, 8),
            delta: Rat::new(3, 11),
            n,
            boundary: Boundary::Periodic,
            a: None,
            b: None,
            c: None,
            d: None,
        }
    }

    /// The stochastic open-chain reference parameter point.
    pub fn default_open(n: usize) -> Self {
        ModelSpec {
            alpha: &Rat::one() - &Rat::new(40, 49),
            beta: Rat::new(30, 101),
            gamma: Rat::new(40, 49),
            delta: &Rat::one() - &Rat::new(30, 101),
            n,
            boundary: Boundary::Open,
            a: Some(Rat::new(11, 23)),
            b: Some(Rat::new(19, 32)),
            c: Some(Rat::new(23, 53)),
            d: Some(Rat::new(31, 71)),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        serde_json::from_str(text).map_err(|e| ModelError::BadParameter(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let text = r#"{"alpha":"1/7","beta":"1/2","gamma":"1/8","delta":"3/11","N":8,"boundary":"periodic"}"#;
        let spec = ModelSpec::from_json(text).unwrap();
        assert_eq!(spec.n, 8);
        assert_eq!(spec.weights().alpha, Rat::new(1, 7));
        let back = ModelSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back.delta, Rat::new(3, 11));
    }

    #[test]
    fn open_spec_requires_driving() {
        let spec = ModelSpec::default_open(8);
        assert!(spec.driving().unwrap().is_some());
        let mut broken = spec.clone();
        broken.d = None;
        assert!(broken.driving().is_err());
    }
}
