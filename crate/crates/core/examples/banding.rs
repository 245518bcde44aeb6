//! Band-diagonalise one prime-determinant HNF basis and report the cost.

use qsvp::banding::{band_diagonalise, DEFAULT_J_MAX};
use qsvp::lattice::random_prime_det_hnf;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> qsvp::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let h = random_prime_det_hnf(12, 1 << 16, 1 << 20, &mut rng);
    let b = band_diagonalise(&h, DEFAULT_J_MAX)?;
    println!(
        "bandwidth {} after {} eliminations",
        b.bandwidth,
        b.eliminations.len()
    );
    println!(
        "volume factor {} ({} doublings)",
        b.volume_factor, b.scalings
    );
    for e in b.eliminations.iter().filter(|e| e.extended || e.doubled) {
        println!(
            "  row {} column {}: extent {}, doubled {}",
            e.row, e.column, e.extent, e.doubled
        );
    }
    Ok(())
}
