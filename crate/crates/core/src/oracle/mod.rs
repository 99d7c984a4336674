//! Brute-force ground truth at tiny sizes: dense simulation and exact
//! Clifford-group enumeration.

pub mod dense;
pub mod exhaustive;

pub use dense::{dense_fidelity_purity, DenseState, DensityMatrix};
pub use exhaustive::{exhaustive_channel_average, replica_gate_average, Ensemble, Functional, GlobalShadowEnsemble};
