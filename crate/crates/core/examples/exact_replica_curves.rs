//! Exact circuit averages from the replica engines: collision probability,
//! fidelity-estimator mean and purity-estimator mean versus depth.

use shallow_shadows::analytics::reference::product_purity;
use shallow_shadows::architectures::Architecture;
use shallow_shadows::replica::{exact_sweep, t_star, RhoSpec};

fn main() -> shallow_shadows::Result<()> {
    let mu = 0.05;
    for (arch, n) in [(Architecture::Chain1d, 12), (Architecture::Alltoall, 64)] {
        let recs = exact_sweep(n, arch, 80, Some(RhoSpec::Product { mu }))?;
        let want = product_purity(n, mu);
        println!("{} N={n}: true purity {want:.4}", arch.name());
        for r in recs.iter().filter(|r| r.t % 10 == 0 && r.t > 0) {
            println!("  t={:>2}  Z={:.3e}  F̄={:.5}  P̄/P={:.5}", r.t, r.z, r.avg_fidelity, r.avg_purity.unwrap_or(f64::NAN) / want);
        }
        let curve: Vec<_> = recs.iter().skip(1).filter_map(|r| Some((r.t, r.avg_purity?))).collect();
        println!("  t*(δ=0.05) = {:?}", t_star(&curve, want, 0.05, true)?);
    }
    Ok(())
}
