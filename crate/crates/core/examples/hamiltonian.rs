//! Build the sweep Hamiltonian for a small lattice and dump it at t = T/2.

use qsvp::fock::OffsetConfig;
use qsvp::hamiltonian::{augment_basis, build_sweep, physical_decomposition, SpectrumScale};
use qsvp::lattice::{gram, Basis};

fn main() -> qsvp::Result<()> {
    let b = Basis::from_i64(&[[1, 2], [0, -2]])?;
    let bp = augment_basis(&b)?;
    let cfg = OffsetConfig::new(1, 2, true);
    let (basis, sweep) = build_sweep(&bp, &cfg, 3, 10.0, SpectrumScale::default())?;
    println!("D = {}, H0 nnz = {}", basis.len(), sweep.h0.nnz());
    println!("exact energies {:?}", sweep.hp.exact_energies);
    println!("scale factor {}", sweep.hp.scale_factor);
    let d = physical_decomposition(&gram(&bp), &cfg)?;
    println!("mu = {:?}, constant = {}", d.mu, d.constant);
    let mut out = std::io::stdout().lock();
    sweep.write_coo(5.0, &mut out)?;
    Ok(())
}
