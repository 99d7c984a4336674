//! Snapshot rate for a 28 × 28 grid at depth 10 on one thread.

use std::time::Instant;

use shallow_shadows::architectures::Architecture;
use shallow_shadows::clifford::StateSpec;
use shallow_shadows::shadow::{collect_seeded, Preparation, Randomizer};

fn main() -> shallow_shadows::Result<()> {
    let n = 784;
    let prep = Preparation::pure(StateSpec::Cluster2d).prepared(n)?;
    let randomizer = Randomizer::Circuit { architecture: Architecture::Grid2d, depth: 10 };
    let count = 200;
    let start = Instant::now();
    let mut ones = 0;
    for seed in 0..count {
        let (snap, _) = collect_seeded(&prep, randomizer, seed)?;
        ones += snap.outcome.count_ones();
    }
    let secs = start.elapsed().as_secs_f64();
    println!("{count} snapshots in {secs:.3} s: {:.1} per second (mean weight {:.1})", count as f64 / secs, ones as f64 / count as f64);
    Ok(())
}
