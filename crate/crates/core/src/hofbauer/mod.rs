//! Piecewise monotone interval maps with affine branches, their codings and
//! truncated Markov diagrams.
//!
//! A diagram vertex is the open interval of points coded by a follower set;
//! the successor along symbol `j` is the image interval cut down to the
//! domain of branch `j`. With `BigRational` endpoints vertex identity is
//! exact; with floats endpoints are compared at the type tolerance and near
//! misses raise [`crate::Error::ToleranceCollision`].

mod diagram;
mod map;

pub use diagram::{build_diagram, closed_component, Component, DiagramEdge, DiagramLanguage, MarkovDiagram, Vertex};
pub use map::{Branch, MapSpec, PiecewiseMonotoneMap};
