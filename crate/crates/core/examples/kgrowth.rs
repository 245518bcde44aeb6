//! Coefficient size of shortest vectors on HNF and LLL bases.

use qsvp::experiments::exp_kgrowth;
use qsvp::lattice::LatticeMode;

fn main() -> qsvp::Result<()> {
    let r = exp_kgrowth(&[3, 4, 5, 6], 20, 1, &LatticeMode::uniform(), None)?;
    print!("{}", r.table().to_csv());
    if let Some(f) = r.hnf_fit {
        println!("HNF slope {:.3}", f.slope);
    }
    Ok(())
}
