//! Brute-force ground truth: every global Clifford and outcome on two qubits,
//! and every gate of depth-1..3 one-qubit circuits against the replica engine.

use shallow_shadows::architectures::Architecture;
use shallow_shadows::clifford::{prepare, StateSpec};
use shallow_shadows::oracle::{exhaustive_channel_average, DenseState, Ensemble, Functional, GlobalShadowEnsemble};
use shallow_shadows::replica::{avg_fidelity_exact, collision_z};

fn main() -> shallow_shadows::Result<()> {
    let n = 2;
    let psi = DenseState::from_tableau(&prepare(&StateSpec::Ghz, n)?)?;
    let mut rho = psi.to_density();
    rho.depolarize(0.1)?;
    let ens = GlobalShadowEnsemble::new(&rho)?;
    let (f, fv) = ens.fidelity_moments(&psi);
    let (p, pv) = ens.purity_moments(10)?;
    println!("fidelity {:.12} (estimator mean {f:.12}, variance {fv:.6})", rho.fidelity_with(&psi));
    println!("purity   {:.12} (estimator mean {p:.12}, M=10 variance {pv:.6})", rho.matmul(&rho).trace());

    // On two qubits every layer is already a uniform Clifford, so compare
    // collision probabilities on the two-qubit chain and means on one qubit.
    let z2 = exhaustive_channel_average(2, Ensemble::Circuit { architecture: Architecture::Chain1d, depth: 2 }, &Functional::CollisionZ)?;
    println!("chain N=2 depth 2: Z exhaustive {z2:.12}, replica {:.12}", collision_z(2, Architecture::Chain1d, 2)?);
    let zero = DenseState::zero(1)?;
    let zr = zero.to_density();
    for depth in 1..=3 {
        let ens = Ensemble::Circuit { architecture: Architecture::Chain1d, depth };
        let brute = exhaustive_channel_average(1, ens, &Functional::FidelityMean { rho: &zr, target: &zero })?;
        let replica = avg_fidelity_exact(1, Architecture::Chain1d, depth)?;
        println!("N=1 depth {depth}: fidelity mean exhaustive {brute:.12}, replica {replica:.12}");
    }
    Ok(())
}
