//! Writes snapshots as NDJSON, reads them back, and re-evaluates an estimator
//! from the archive alone.

use std::io::BufReader;

use shallow_shadows::architectures::Architecture;
use shallow_shadows::clifford::{prepare, StateSpec};
use shallow_shadows::shadow::{fidelity_estimate, read_snapshots, write_snapshots, MonteCarlo, Preparation, Randomizer};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mc = MonteCarlo {
        n: 10,
        randomizer: Randomizer::Circuit { architecture: Architecture::Chain1d, depth: 12 },
        prep: Preparation::pure(StateSpec::Ghz),
        m: 200,
        r: 1,
        master_seed: 99,
    };
    let snaps = mc.snapshots(0)?;
    let path = std::env::temp_dir().join("shadowlab_example_snapshots.ndjson");
    write_snapshots(std::fs::File::create(&path)?, &snaps)?;
    let back = read_snapshots(BufReader::new(std::fs::File::open(&path)?))?;
    println!("{} snapshots archived at {}", back.len(), path.display());
    let target = prepare(&StateSpec::Ghz, mc.n)?;
    println!("fidelity from archive: {:.4}", fidelity_estimate(&back, &target)?);
    println!("fidelity from memory:  {:.4}", fidelity_estimate(&snaps, &target)?);
    Ok(())
}
