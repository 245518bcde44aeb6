//! The two-site worked example at several sweep lengths.

use qsvp::experiments::exp_worked_example;

fn main() -> qsvp::Result<()> {
    let r = exp_worked_example(2.0, None)?;
    println!("G = {:?}", r.gram);
    println!("H0 = {:.4?}", r.h0);
    println!("psi0 = {:.4?} over {:?}", r.psi0, r.states);
    for t in [1.0, 2.0, 3.0, 5.0, 8.0] {
        let r = exp_worked_example(t, None)?;
        println!(
            "T={t}: P{:?} = {:.4}, decoded {:?}",
            r.most_probable_state, r.most_probable_probability, r.decoded_vector
        );
    }
    Ok(())
}
