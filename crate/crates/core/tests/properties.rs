//! Randomized properties of the Clifford layer, seeds and t* extraction.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use shallow_shadows::architectures::{build_circuit, Architecture};
use shallow_shadows::clifford::{GlobalClifford, PauliString};
use shallow_shadows::replica::t_star;
use shallow_shadows::shadow::seeds::snapshot_seed;

fn pauli(n: usize, code: &[u8]) -> PauliString {
    let s: String = code.iter().take(n).map(|c| ['I', 'X', 'Y', 'Z'][(*c % 4) as usize]).collect();
    s.parse().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn global_conjugation_preserves_commutation(seed in any::<u64>(), n in 1usize..7, a in prop::collection::vec(any::<u8>(), 7), b in prop::collection::vec(any::<u8>(), 7)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = GlobalClifford::random(n, &mut rng).unwrap();
        let (p, q) = (pauli(n, &a), pauli(n, &b));
        let (up, uq) = (u.conjugate(&p).unwrap(), u.conjugate(&q).unwrap());
        prop_assert_eq!(p.commutes_with(&q), up.commutes_with(&uq));
        prop_assert_eq!(u.inverse().conjugate(&up).unwrap(), p);
    }

    #[test]
    fn circuit_conjugation_roundtrips(seed in any::<u64>(), depth in 0usize..12, code in prop::collection::vec(any::<u8>(), 8)) {
        let plan = build_circuit(Architecture::Chain1d, 8, depth, seed).unwrap();
        let p = pauli(8, &code);
        let back = plan.inverse().conjugate_pauli(&plan.conjugate_pauli(&p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn snapshot_seeds_separate_coordinates(m in any::<u64>(), r in 0usize..1000, s in 0usize..1000) {
        let base = snapshot_seed(m, 8, 3, r, s);
        prop_assert_ne!(base, snapshot_seed(m, 8, 3, r, s + 1));
        prop_assert_ne!(base, snapshot_seed(m, 8, 3, r + 1, s));
        prop_assert_ne!(base, snapshot_seed(m, 8, 4, r, s));
        prop_assert_eq!(base, snapshot_seed(m, 8, 3, r, s));
    }

    #[test]
    fn t_star_of_constant_curve_is_first_depth(v in -5.0f64..5.0, start in 0usize..10, len in 1usize..30) {
        let curve: Vec<(usize, f64)> = (start..start + len).map(|t| (t, v)).collect();
        prop_assert_eq!(t_star(&curve, v, 0.01, false).unwrap(), Some(start));
    }
}
