use serde::Serialize;

use super::levels::{exp_energy_levels, levels_sweep, LevelsConfig, LevelsReport};
use crate::error::Result;
use crate::evolution::initial_ground_state;
use crate::hamiltonian::certified_energy;
use crate::lattice::{gram, Basis};

/// Final-state probability the worked example must exceed.
pub const TARGET_PROBABILITY: f64 = 0.9;

/// The two-dimensional worked example: a good basis, two particles, no offset.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorkedExampleReport {
    pub basis: Vec<Vec<i64>>,
    pub gram: Vec<Vec<i128>>,
    pub states: Vec<Vec<u32>>,
    pub h0: Vec<Vec<f64>>,
    pub problem_energies: Vec<i128>,
    pub psi0: Vec<f64>,
    pub levels: LevelsReport,
    pub most_probable_state: Vec<u32>,
    pub most_probable_probability: f64,
    pub decoded_vector: Vec<i128>,
    pub decoded_norm_sq: i128,
    pub passed: bool,
}

pub fn worked_basis() -> Basis {
    Basis::from_i64(&[[1, 2], [0, -2]]).expect("square")
}

pub fn exp_worked_example(total_time: f64, steps: Option<usize>) -> Result<WorkedExampleReport> {
    let b = worked_basis();
    let cfg = LevelsConfig {
        particles: Some(2),
        steps,
        ..LevelsConfig::new(0, total_time)
    };
    let (basis, sweep, _, off) = levels_sweep(&b, &cfg)?;
    let levels = exp_energy_levels(&b, &cfg)?;
    let h0 = sweep.h0.to_dense();
    let probs = &levels.final_probabilities;
    let best = (0..probs.len())
        .max_by(|&a, &c| probs[a].total_cmp(&probs[c]))
        .expect("nonempty");
    let occ = basis.occupancies(best).to_vec();
    let x: Vec<i128> = occ.iter().map(|&v| i128::from(v)).collect();
    let rows = b.to_i64_rows().expect("small entries");
    let decoded_vector: Vec<i128> = (0..2)
        .map(|j| {
            x.iter()
                .zip(&rows)
                .map(|(xi, r)| xi * i128::from(r[j]))
                .sum()
        })
        .collect();
    let decoded_norm_sq = i128::try_from(certified_energy(&b, &occ, &off)?).expect("small");
    let most_probable_probability = probs[best];
    let passed = most_probable_probability > TARGET_PROBABILITY && decoded_vector == [1, 0];
    Ok(WorkedExampleReport {
        gram: gram(&b).to_i128()?,
        states: basis.iter().map(<[u32]>::to_vec).collect(),
        h0: (0..h0.nrows())
            .map(|r| h0.row(r).iter().copied().collect())
            .collect(),
        problem_energies: sweep.hp.exact_energies.clone(),
        psi0: initial_ground_state(&basis)
            .amplitudes()
            .iter()
            .map(|a| a.re)
            .collect(),
        basis: rows,
        levels,
        most_probable_state: occ,
        most_probable_probability,
        decoded_vector,
        decoded_norm_sq,
        passed,
    })
}
