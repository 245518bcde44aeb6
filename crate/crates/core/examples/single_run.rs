//! One reservoir sweep on a random two-dimensional good/bad lattice.

use qsvp::algorithms::{
    estimate_offset, extract_candidates, single_run, OffsetMode, RunParameters,
};
use qsvp::hamiltonian::SpectrumScale;
use qsvp::lattice::{random_good_bad_pair, GoodBadParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qsvp::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pair = random_good_bad_pair(2, &GoodBadParams::for_dim(2), &mut rng);
    let m = estimate_offset(2, &OffsetMode::DefaultTable, None)?;
    for t in [1.0, 10.0, 100.0] {
        let mut p = RunParameters::new(m, t);
        p.scale = SpectrumScale::TargetMax(200.0);
        let r = single_run(&pair.bad, &p)?;
        println!(
            "T={t}: D={} P(0)={:.3} P(lambda1)={:.3}",
            r.dim, r.p_rank0, r.p_lambda1
        );
        for c in extract_candidates(&r, 3) {
            println!(
                "   {:?} |v|^2={} p={:.3} gamma={:?}",
                c.vectors[0], c.norm_sq, c.probability, c.gamma
            );
        }
    }
    Ok(())
}
