//! Certifies a noisy GHZ preparation with shallow chain shadows. The mean
//! approaches the true fidelity from above as the depth grows.

use shallow_shadows::analytics::reference;
use shallow_shadows::architectures::Architecture;
use shallow_shadows::clifford::StateSpec;
use shallow_shadows::shadow::{batch_statistics, Estimator, MonteCarlo, Preparation, Randomizer};

fn main() -> shallow_shadows::Result<()> {
    let n = 6;
    let p = 0.02;
    let prep = Preparation { depolarizing: p, ..Preparation::pure(StateSpec::Ghz) };
    println!("N = {n}, true fidelity {:.4}", reference::ghz_depolarized_fidelity(n, p));
    println!("{:>3} {:>9} {:>8}", "t", "mean", "stderr");
    for t in [2, 4, 8, 16, 32] {
        let mc = MonteCarlo {
            n,
            randomizer: Randomizer::Circuit { architecture: Architecture::Chain1d, depth: t },
            prep: prep.clone(),
            m: 50,
            r: 400,
            master_seed: 7,
        };
        let values = mc.run(&[Estimator::Fidelity { target: StateSpec::Ghz }])?.remove(0);
        let s = batch_statistics(values, mc.m, 50, 1)?;
        println!("{t:>3} {:>9.4} {:>8.4}", s.mean, s.stderr);
    }
    Ok(())
}
