//! Experiment settings as TOML.

use qsvp::algorithms::OffsetMode;
use qsvp::experiments::ExperimentConfig;

fn main() -> qsvp::Result<()> {
    let cfg = ExperimentConfig {
        name: "payoff-3d".into(),
        dims: vec![3],
        offset: OffsetMode::Linear { alpha: 1.2 },
        ..ExperimentConfig::default()
    };
    let text = cfg.to_toml()?;
    print!("{text}");
    assert_eq!(ExperimentConfig::from_toml(&text)?, cfg);
    Ok(())
}
