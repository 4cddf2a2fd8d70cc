//! Deformed rule-54 gates and propagators (periodic and boundary-driven),
//! the comparison six-vertex Markov circuit, and the diagonal
//! soliton-current charge.

pub mod gates;
pub mod propagator;
pub mod spec;
pub mod weights;

pub use propagator::{
    is_column_stochastic, open_propagator, periodic_propagator, six_vertex_propagator,
    soliton_current_charge, Circuit, PlacedGate, Propagator, SixVertexSpec,
};
pub use spec::ModelSpec;
pub use weights::{Boundary, BoundaryDriving, ChainGeometry, ExactWeights, FaceWeights, GateClass};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("nonstochastic weights: {0}")]
    NonStochastic(String),
    #[error(transparent)]
    Core(#[from] dr54_core::CoreError),
}
