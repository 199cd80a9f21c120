//! Subshift languages, entropy estimators, Markov diagrams of interval maps,
//! thermodynamic formalism and ergodic optimization on finite approximations.

pub mod decomp;
pub mod entropy;
pub mod ergopt;
pub mod error;
pub mod graph;
pub mod hofbauer;
pub mod lang;
pub mod scalar;
pub mod thermo;
pub mod word;
pub mod zoo;

pub use error::{Error, Result};
pub use word::{Alphabet, Symbol, Word};

/// Exact rational scalar used for interval maps with rational parameters.
pub type Rational = num_rational::BigRational;

pub type ExactMap = hofbauer::PiecewiseMonotoneMap<Rational>;
pub type FloatMap = hofbauer::PiecewiseMonotoneMap<f64>;
pub type ExactDiagram = hofbauer::MarkovDiagram<Rational>;
pub type FloatDiagram = hofbauer::MarkovDiagram<f64>;
