//! Exact homological algebra on finite posets: homotopy limits of
//! diagrams of chain complexes, the duality functor, and decision
//! procedures for the Verdier and Gorenstein* properties.

pub mod linalg;
pub mod poset;
pub mod simplicial;
pub mod diagram;
pub mod homotopy;
pub mod duality;
pub mod corpus;
