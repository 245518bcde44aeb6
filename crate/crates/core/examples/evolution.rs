//! Evolve the condensate through a linear sweep and print the trajectory of
//! the most likely final state.

use qsvp::evolution::{evolve, initial_ground_state, EvolveOptions};
use qsvp::fock::{FockBasis, OffsetConfig};
use qsvp::hamiltonian::{
    build_problem_diagonal, build_tunnelling, SpectrumScale, SweepHamiltonian,
};
use qsvp::lattice::Basis;

fn main() -> qsvp::Result<()> {
    let b = Basis::from_i64(&[[1, 2], [0, -2]])?;
    let basis = FockBasis::new(2, 2)?;
    let cfg = OffsetConfig::new(0, 2, false);
    let hp = build_problem_diagonal(&basis, &b, &cfg, SpectrumScale::default())?;
    let sweep = SweepHamiltonian::new(build_tunnelling(&basis), hp, 4.0)?;
    let opts = EvolveOptions {
        snapshots: 9,
        spectrum_levels: 3,
        ..EvolveOptions::default()
    };
    let r = evolve(&sweep, &initial_ground_state(&basis), &opts)?;
    for (s, e) in r
        .trajectory
        .iter()
        .flatten()
        .zip(r.spectrum_track.iter().flatten())
    {
        println!("t={:5.2} P={:.4?} E={:.3?}", s.t, s.values, e.values);
    }
    println!("steps {}, norm drift {:.1e}", r.steps, r.norm_drift);
    Ok(())
}
