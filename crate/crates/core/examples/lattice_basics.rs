//! Gram matrix, HNF, LLL and the exact shortest vector of a scrambled basis.

use qsvp::lattice::{
    default_delta, gram, hnf, lll_reduce, random_good_bad_pair, svp_enumerate, GoodBadParams,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qsvp::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pair = random_good_bad_pair(3, &GoodBadParams::for_dim(3), &mut rng);
    println!(
        "bad basis (growth {:.2}):\n{}",
        pair.growth,
        qsvp::lattice::io::to_text(&pair.bad)
    );
    println!("gram: {:?}", gram(&pair.bad).to_i128()?);
    println!("hnf:\n{}", qsvp::lattice::io::to_text(&hnf(&pair.bad)?));
    println!(
        "lll:\n{}",
        qsvp::lattice::io::to_text(&lll_reduce(&pair.bad, &default_delta())?)
    );
    let svp = svp_enumerate(&pair.bad)?;
    println!(
        "lambda1^2 = {}, ||x_min||_inf = {}, x = {:?}",
        svp.lambda1_sq,
        svp.inf_norm_xmin,
        svp.canonical()
    );
    Ok(())
}
