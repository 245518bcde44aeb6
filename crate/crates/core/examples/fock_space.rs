//! Fock basis enumeration, ranking and the Hilbert-space size bound.

use qsvp::fock::{dimension, occupancies_to_coeff, qubit_bound, FockBasis, OffsetConfig};

fn main() -> qsvp::Result<()> {
    let basis = FockBasis::new(3, 3)?;
    let cfg = OffsetConfig::new(1, 2, true);
    for (r, occ) in basis.iter().enumerate() {
        let x = occupancies_to_coeff(occ, &cfg)?;
        println!("{r:2} {occ:?} -> x = {x:?}");
    }
    println!("dimension(9, 3) = {}", dimension(9, 3));
    println!("dimension(16, 4) = {}", dimension(16, 4));
    for n in [2, 10, 50, 100] {
        let s = qubit_bound(n, 1)?;
        println!(
            "N={n}: log2 D = {:.1}, bound = {:.1}",
            s.exact_log2_d, s.stirling_bound_log2
        );
    }
    Ok(())
}
