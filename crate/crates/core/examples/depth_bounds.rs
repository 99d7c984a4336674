//! The collision sandwich on the brickwork chain and the depth bound g(N, δ),
//! next to exact t* values.

use shallow_shadows::analytics::{g_bound, BoundParams};
use shallow_shadows::architectures::Architecture;
use shallow_shadows::replica::{exact_sweep, t_star};

fn main() -> shallow_shadows::Result<()> {
    println!("{:>3} {:>6} {:>8} {:>8}", "N", "δ", "t*", "g(N,δ)");
    for n in [4, 8, 12, 16] {
        let recs = exact_sweep(n, Architecture::Chain1d, 80, None)?;
        let bound = BoundParams::chain1d(n);
        let worst = recs
            .iter()
            .skip(1)
            .map(|r| r.avg_fidelity + 1.0 - bound.sandwich_upper(r.t as f64))
            .fold(f64::MIN, f64::max);
        let curve: Vec<_> = recs.iter().skip(1).map(|r| (r.t, r.avg_fidelity)).collect();
        for delta in [0.2, 0.1, 0.05] {
            let ts = t_star(&curve, 1.0, delta, false)?;
            println!("{n:>3} {delta:>6} {:>8} {:>8.2}", ts.map_or("-".to_string(), |t| t.to_string()), g_bound(n, delta)?);
        }
        println!("    max(2^N(2^N+1)Z_t - upper) = {worst:.3e} (≤ 0 inside the sandwich)");
    }
    Ok(())
}
