//! Snapshot collection, the approximate estimators and batch statistics.

pub mod archive;
pub mod estimators;
pub mod runner;
pub mod seeds;
pub mod snapshot;
pub mod stats;

pub use archive::{read_snapshots, write_snapshots, SnapshotRecord};
pub use estimators::{
    fidelity_estimate, fidelity_term, pauli_estimate, pauli_term, purity_estimate, purity_pair_term, RealizedSnapshot,
};
pub use runner::{Estimator, MonteCarlo};
pub use snapshot::{collect_seeded, collect_snapshot, PlanRef, Preparation, PreparedState, Randomizer, Snapshot, Unitary};
pub use stats::{batch_statistics, EstimateSeries};
