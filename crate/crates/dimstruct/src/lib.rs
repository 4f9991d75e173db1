//! Dimension structures over finite posets: exact verification of the
//! defining axioms, dimension and μ_D computation, classification,
//! order-theoretic constructions, structure-preserving maps, infimum
//! completion, and a gallery of analytically grounded example families.

pub mod constructions;
pub mod error;
pub mod extension;
pub mod extval;
pub mod fileio;
pub mod gallery;
pub mod morphisms;
pub mod poset;
pub mod props;
pub mod random;
pub mod structure;

pub use error::{Error, Result};
pub use extval::ExtVal;
pub use poset::{BoundDir, DimValue, FinitePoset};
pub use structure::{check_axioms, DimensionStructure, StructureData};
