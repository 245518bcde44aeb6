//! A small payoff ensemble: P(0), P(lambda1) and P(lambda2) against T.

use qsvp::experiments::{exp_payoff, ExperimentConfig};

fn main() -> qsvp::Result<()> {
    let cfg = ExperimentConfig {
        ensemble: 8,
        t_grid: vec![0.5, 2.0, 8.0, 32.0],
        ..ExperimentConfig::default()
    };
    let r = exp_payoff(&cfg)?;
    print!("{}", r.table().to_csv());
    Ok(())
}
