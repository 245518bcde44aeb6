//! Fixed-particle sweeps with the offset taken from the enumeration oracle.

use qsvp::algorithms::{estimate_offset, multi_run, OffsetMode, RunParameters, ADIABATIC_T};
use qsvp::lattice::{random_good_bad_pair, svp_enumerate, GoodBadParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qsvp::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pair = random_good_bad_pair(2, &GoodBadParams::for_dim(2), &mut rng);
    let m = estimate_offset(2, &OffsetMode::Oracle, Some(&pair.bad))?;
    let r = multi_run(&pair.bad, &RunParameters::new(m, ADIABATIC_T))?;
    for c in &r.per_run {
        println!(
            "K={:2} x={:?} v={:?} |v|^2={} p={:.3}",
            c.particles, c.coefficients, c.vector, c.norm_sq, c.probability
        );
    }
    println!(
        "best |v|^2 = {}, lambda1^2 = {}",
        r.best.norm_sq,
        svp_enumerate(&pair.bad)?.lambda1_sq
    );
    Ok(())
}
