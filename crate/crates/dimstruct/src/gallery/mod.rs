//! Exactly computable model families with analytic dimensions and
//! measurements, each with an adapter that samples a finite structure for
//! cross-validation against the core checker.

pub mod growth;
pub mod iterate;
pub mod lebesgue;
pub mod ranked;
pub mod scale;
pub mod tower;
