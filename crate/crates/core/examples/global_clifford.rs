//! Uniform N-qubit Cliffords on stabilizer tableaus: sampling, conjugation
//! and inversion.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use shallow_shadows::clifford::{GlobalClifford, StabilizerTableau};

fn main() -> shallow_shadows::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = 5;
    let u = GlobalClifford::random(n, &mut rng)?;
    for (q, img) in u.images()[n..].iter().enumerate() {
        println!("U Z{q} U† = {img}");
    }
    let state = u.apply_to(&StabilizerTableau::zero(n))?;
    println!("stabilizers of U|0⟩: {}", state.stabilizers().iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "));
    let back = u.inverse().apply_to(&state)?;
    let z0 = StabilizerTableau::zero(n).stabilizers()[0].clone();
    println!("⟨Z0⟩ after U†U: {}", back.expectation(&z0));
    Ok(())
}
