//! Pauli expectation values from shallow all-to-all shadows.

use shallow_shadows::architectures::Architecture;
use shallow_shadows::clifford::{PauliString, StateSpec};
use shallow_shadows::harness::parse_pauli_pattern;
use shallow_shadows::shadow::{batch_statistics, Estimator, MonteCarlo, Preparation, Randomizer};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 8;
    let paulis: Vec<PauliString> = ["X*", "Z0 Z1", "Z0 Z7"].iter().map(|s| parse_pauli_pattern(s, n)).collect::<Result<_, _>>()?;
    let estimators: Vec<Estimator> = paulis.iter().map(|p| Estimator::Pauli { pauli: p.clone() }).collect();
    for t in [4, 12, 24] {
        let mc = MonteCarlo {
            n,
            randomizer: Randomizer::Circuit { architecture: Architecture::Alltoall, depth: t },
            prep: Preparation::pure(StateSpec::Ghz),
            m: 50,
            r: 300,
            master_seed: 3,
        };
        let values = mc.run(&estimators)?;
        let line: Vec<String> = paulis
            .iter()
            .zip(values)
            .map(|(p, v)| {
                let s = batch_statistics(v, 50, 20, 0).expect("finite values");
                format!("{p} = {:+.3} ± {:.3}", s.mean, s.stderr)
            })
            .collect();
        println!("t={t:>2}: {}", line.join(", "));
    }
    Ok(())
}
