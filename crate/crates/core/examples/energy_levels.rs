//! Class probabilities and instantaneous gaps along a reservoir sweep.

use qsvp::experiments::{exp_energy_levels, LevelsConfig};
use qsvp::lattice::Basis;

fn main() -> qsvp::Result<()> {
    let b = Basis::from_i64(&[[3, 1], [1, -2]])?;
    let cfg = LevelsConfig {
        reservoir: true,
        levels: 4,
        snapshots: 11,
        ..LevelsConfig::new(2, 5.0)
    };
    let r = exp_energy_levels(&b, &cfg)?;
    println!("D = {}, classes {:?}", r.dim, r.class_norms);
    for ((t, p), g) in r.times.iter().zip(&r.class_probabilities).zip(&r.gaps) {
        println!("t={t:4.1} P={p:.3?} dE={g:.3?}");
    }
    Ok(())
}
