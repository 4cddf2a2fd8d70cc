//! Conserved-charge tower of the deformed rule-54 circuit: commutant
//! search, site gluing, correction-term solves and exact verification.

pub mod commutant;
pub mod density;
pub mod ring;
pub mod tower;

pub use commutant::{commutant_dim_mod_p, find_commutant, split_diagonal, CommutantQuery};
pub use density::{
    glue, glue_twice, is_left_aligned, left_align_density, reflect_density, unglue, ChargeDensity,
    Gauge, GluedDensity,
};
pub use ring::{commute_exactly_colwise, Ring};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChargesError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("no solution: {0}")]
    Infeasible(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Core(#[from] dr54_core::CoreError),
    #[error(transparent)]
    Model(#[from] dr54_model::ModelError),
}
