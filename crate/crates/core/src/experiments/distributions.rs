use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fmt_f, instance_rng, summarize, with_jobs, EnsembleSummary, ExperimentConfig, Table};
use crate::algorithms::{estimate_offset, single_run, RunParameters};
use crate::error::{Error, Result};
use crate::hamiltonian::SpectrumScale;
use crate::lattice::{random_good_bad_pair, Basis};

/// Ranks reported individually; everything above is folded into a tail.
pub const MAX_REPORTED_RANK: usize = 20;

/// One single-run sweep of one ensemble member at one `T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceOutcome {
    pub index: usize,
    pub total_time: f64,
    pub m: u32,
    /// `None` when the run broke the unitarity tolerance.
    pub ranks: Option<Vec<f64>>,
    pub tail: f64,
    pub p_lambda1: f64,
    pub p_lambda2: f64,
    /// Ranks whose class lies on the `λ₁` shell, if within the report window.
    pub lambda1_ranks: Vec<usize>,
    pub norm_drift: f64,
}

impl InstanceOutcome {
    pub fn is_valid(&self) -> bool {
        self.ranks.is_some()
    }

    pub fn p_rank(&self, r: usize) -> f64 {
        self.ranks.as_ref().map_or(f64::NAN, |v| v[r])
    }
}

/// Every sweep of a seeded good/bad ensemble in one dimension, sorted by
/// `(T, index)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRuns {
    pub dim: usize,
    pub t_grid: Vec<f64>,
    pub ensemble: usize,
    pub mean_growth: f64,
    pub outcomes: Vec<InstanceOutcome>,
}

impl EnsembleRuns {
    pub fn at(&self, t: f64) -> impl Iterator<Item = &InstanceOutcome> {
        self.outcomes.iter().filter(move |o| o.total_time == t)
    }

    fn valid_at(&self, t: f64, f: impl Fn(&InstanceOutcome) -> f64) -> (Vec<f64>, usize) {
        let mut v = Vec::new();
        let mut invalid = 0;
        for o in self.at(t) {
            if o.is_valid() {
                v.push(f(o));
            } else {
                invalid += 1;
            }
        }
        (v, invalid)
    }
}

fn run_one(
    index: usize,
    b: &Basis,
    m: u32,
    t: f64,
    cfg: &ExperimentConfig,
) -> Result<InstanceOutcome> {
    let mut p = RunParameters::new(m, t);
    p.steps = cfg.steps;
    p.scale = SpectrumScale::TargetMax(cfg.scale_target);
    let r = match single_run(b, &p) {
        Ok(r) => r,
        Err(Error::NormDrift { drift, .. }) => {
            return Ok(InstanceOutcome {
                index,
                total_time: t,
                m,
                ranks: None,
                tail: f64::NAN,
                p_lambda1: f64::NAN,
                p_lambda2: f64::NAN,
                lambda1_ranks: Vec::new(),
                norm_drift: drift,
            })
        }
        Err(e) => return Err(e),
    };
    let classes = &r.table.classes;
    let lambda2 = classes
        .iter()
        .map(|c| c.norm_sq)
        .find(|&n| n > r.reference_norm_sq);
    Ok(InstanceOutcome {
        index,
        total_time: t,
        m,
        ranks: Some(
            (0..=MAX_REPORTED_RANK)
                .map(|k| r.table.probability(k))
                .collect(),
        ),
        tail: classes
            .iter()
            .skip(MAX_REPORTED_RANK + 1)
            .map(|c| c.probability)
            .sum(),
        p_lambda1: r.p_lambda1,
        p_lambda2: lambda2.map_or(0.0, |n| r.table.shell_probability(n)),
        lambda1_ranks: classes
            .iter()
            .take(MAX_REPORTED_RANK + 1)
            .filter(|c| c.norm_sq == r.reference_norm_sq)
            .map(|c| c.rank)
            .collect(),
        norm_drift: r.norm_drift,
    })
}

/// Runs the single-run algorithm on `cfg.ensemble` seeded good/bad lattices of
/// dimension `dim` at every `T` in the grid.
pub fn run_single_ensemble(cfg: &ExperimentConfig, dim: usize) -> Result<EnsembleRuns> {
    cfg.validate()?;
    let params = cfg.lattice_params(dim);
    let instances: Vec<(Basis, u32, f64)> = (0..cfg.ensemble)
        .map(|i| {
            let mut rng = instance_rng(cfg.seed, dim, i);
            let pair = random_good_bad_pair(dim, &params, &mut rng);
            let m = estimate_offset(dim, &cfg.offset, Some(&pair.bad))?;
            Ok((pair.bad, m, pair.growth))
        })
        .collect::<Result<_>>()?;
    let mut t_grid = cfg.t_grid.clone();
    t_grid.sort_by(f64::total_cmp);
    t_grid.dedup();
    let jobs: Vec<(usize, f64)> = t_grid
        .iter()
        .flat_map(|&t| (0..cfg.ensemble).map(move |i| (i, t)))
        .collect();
    let mut outcomes = with_jobs(cfg.jobs, || {
        jobs.par_iter()
            .map(|&(i, t)| {
                let (b, m, _) = &instances[i];
                run_one(i, b, *m, t, cfg)
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let mean_growth = instances.iter().map(|i| i.2).sum::<f64>() / cfg.ensemble as f64;
    outcomes.sort_by(|a, b| {
        a.total_time
            .total_cmp(&b.total_time)
            .then(a.index.cmp(&b.index))
    });
    Ok(EnsembleRuns {
        dim,
        t_grid,
        ensemble: cfg.ensemble,
        mean_growth,
        outcomes,
    })
}

/// Mean class probabilities by rank for one `(dim, T)` condition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub dim: usize,
    pub total_time: f64,
    pub valid_runs: usize,
    pub invalid_runs: usize,
    pub rank_probabilities: Vec<EnsembleSummary>,
    pub tail: EnsembleSummary,
    /// Fraction of instances whose `λ₁` shell contains each rank.
    pub lambda1_fraction: Vec<f64>,
    pub p_lambda1: EnsembleSummary,
}

impl DistributionRow {
    /// Mean probability of ranks `0..=last`.
    pub fn mass_up_to(&self, last: usize) -> f64 {
        self.rank_probabilities
            .iter()
            .take(last + 1)
            .map(|s| s.mean)
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub rows: Vec<DistributionRow>,
}

impl DistributionReport {
    pub fn from_runs(runs: &[EnsembleRuns]) -> Self {
        let mut rows = Vec::new();
        for er in runs {
            for &t in &er.t_grid {
                let (_, invalid) = er.valid_at(t, |_| 0.0);
                let rank_probabilities = (0..=MAX_REPORTED_RANK)
                    .map(|r| summarize(&er.valid_at(t, |o| o.p_rank(r)).0))
                    .collect();
                let valid: Vec<_> = er.at(t).filter(|o| o.is_valid()).collect();
                let lambda1_fraction = (0..=MAX_REPORTED_RANK)
                    .map(|r| {
                        if valid.is_empty() {
                            0.0
                        } else {
                            valid
                                .iter()
                                .filter(|o| o.lambda1_ranks.contains(&r))
                                .count() as f64
                                / valid.len() as f64
                        }
                    })
                    .collect();
                rows.push(DistributionRow {
                    dim: er.dim,
                    total_time: t,
                    valid_runs: valid.len(),
                    invalid_runs: invalid,
                    rank_probabilities,
                    tail: summarize(&er.valid_at(t, |o| o.tail).0),
                    lambda1_fraction,
                    p_lambda1: summarize(&er.valid_at(t, |o| o.p_lambda1).0),
                });
            }
        }
        DistributionReport { rows }
    }

    pub fn row(&self, dim: usize, t: f64) -> Option<&DistributionRow> {
        self.rows.iter().find(|r| r.dim == dim && r.total_time == t)
    }

    /// Long format: one line per `(dim, T, rank)`, with `tail` last.
    pub fn table(&self) -> Table {
        let mut tab = Table::new(&[
            "dim",
            "T",
            "rank",
            "mean_p",
            "stderr",
            "p10",
            "lambda1_fraction",
            "valid_runs",
            "invalid_runs",
        ]);
        for r in &self.rows {
            let lead = |rank: String, s: &EnsembleSummary, frac: f64| {
                vec![
                    r.dim.to_string(),
                    fmt_f(r.total_time),
                    rank,
                    fmt_f(s.mean),
                    fmt_f(s.stderr),
                    fmt_f(s.p10),
                    fmt_f(frac),
                    r.valid_runs.to_string(),
                    r.invalid_runs.to_string(),
                ]
            };
            for (k, s) in r.rank_probabilities.iter().enumerate() {
                tab.push(lead(k.to_string(), s, r.lambda1_fraction[k]));
            }
            tab.push(lead("tail".into(), &r.tail, 0.0));
        }
        tab
    }

    pub fn chart(&self) -> super::svg::Chart {
        use super::svg::{Chart, Series};
        let mut c = Chart::new("Mean class probability by rank", "rank", "mean P");
        for r in &self.rows {
            let pts = r
                .rank_probabilities
                .iter()
                .enumerate()
                .map(|(k, s)| (k as f64, s.mean))
                .collect();
            c.series
                .push(Series::new(format!("N={} T={}", r.dim, r.total_time), pts));
        }
        c
    }
}

pub fn exp_distributions(cfg: &ExperimentConfig) -> Result<DistributionReport> {
    let runs = cfg
        .dims
        .iter()
        .map(|&d| run_single_ensemble(cfg, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(DistributionReport::from_runs(&runs))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PayoffRow {
    pub dim: usize,
    pub total_time: f64,
    pub valid_runs: usize,
    pub invalid_runs: usize,
    pub p_rank0: EnsembleSummary,
    pub p_lambda1: EnsembleSummary,
    pub p_lambda2: EnsembleSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PayoffReport {
    pub rows: Vec<PayoffRow>,
    pub mean_growth: Vec<(usize, f64)>,
}

impl PayoffReport {
    pub fn from_runs(runs: &[EnsembleRuns]) -> Self {
        let mut rows = Vec::new();
        for er in runs {
            for &t in &er.t_grid {
                let (p0, invalid) = er.valid_at(t, |o| o.p_rank(0));
                rows.push(PayoffRow {
                    dim: er.dim,
                    total_time: t,
                    valid_runs: p0.len(),
                    invalid_runs: invalid,
                    p_rank0: summarize(&p0),
                    p_lambda1: summarize(&er.valid_at(t, |o| o.p_lambda1).0),
                    p_lambda2: summarize(&er.valid_at(t, |o| o.p_lambda2).0),
                });
            }
        }
        PayoffReport {
            rows,
            mean_growth: runs.iter().map(|r| (r.dim, r.mean_growth)).collect(),
        }
    }

    pub fn curve(&self, dim: usize, f: impl Fn(&PayoffRow) -> f64) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.dim == dim)
            .map(|r| (r.total_time, f(r)))
            .collect()
    }

    pub fn table(&self) -> Table {
        let mut tab = Table::new(&[
            "dim",
            "T",
            "valid_runs",
            "invalid_runs",
            "p0_mean",
            "p0_p10",
            "plambda1_mean",
            "plambda1_p10",
            "plambda2_mean",
            "plambda2_p10",
        ]);
        for r in &self.rows {
            tab.push(vec![
                r.dim.to_string(),
                fmt_f(r.total_time),
                r.valid_runs.to_string(),
                r.invalid_runs.to_string(),
                fmt_f(r.p_rank0.mean),
                fmt_f(r.p_rank0.p10),
                fmt_f(r.p_lambda1.mean),
                fmt_f(r.p_lambda1.p10),
                fmt_f(r.p_lambda2.mean),
                fmt_f(r.p_lambda2.p10),
            ]);
        }
        tab
    }

    pub fn chart(&self) -> super::svg::Chart {
        use super::svg::{Chart, Series};
        let mut c = Chart::new("Outcome probability vs sweep time", "T", "P");
        c.log_x = true;
        let mut dims: Vec<usize> = self.rows.iter().map(|r| r.dim).collect();
        dims.dedup();
        for d in dims {
            c.series.push(Series::new(
                format!("N={d} P(0)"),
                self.curve(d, |r| r.p_rank0.mean),
            ));
            c.series.push(Series::new(
                format!("N={d} P(l1)"),
                self.curve(d, |r| r.p_lambda1.mean),
            ));
            c.series.push(
                Series::new(
                    format!("N={d} P(l1) p10"),
                    self.curve(d, |r| r.p_lambda1.p10),
                )
                .dashed(),
            );
        }
        c
    }
}

pub fn exp_payoff(cfg: &ExperimentConfig) -> Result<PayoffReport> {
    let runs = cfg
        .dims
        .iter()
        .map(|&d| run_single_ensemble(cfg, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(PayoffReport::from_runs(&runs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            ensemble: 3,
            t_grid: vec![0.5, 2.0],
            steps: Some(400),
            scale_target: 200.0,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn distributions_are_subnormalised() {
        let r = exp_distributions(&small()).unwrap();
        assert_eq!(r.rows.len(), 2);
        for row in &r.rows {
            assert_eq!(row.valid_runs + row.invalid_runs, 3);
            let total: f64 =
                row.rank_probabilities.iter().map(|s| s.mean).sum::<f64>() + row.tail.mean;
            assert!(total <= 1.0 + 1e-6, "{total}");
            for s in &row.rank_probabilities {
                assert!((0.0..=1.0).contains(&s.min) && s.max <= 1.0);
            }
        }
        assert_eq!(r.table().rows.len(), 2 * (MAX_REPORTED_RANK + 2));
    }

    #[test]
    fn payoff_deterministic_across_job_counts() {
        let a = exp_payoff(&small()).unwrap();
        let b = exp_payoff(&ExperimentConfig {
            jobs: Some(2),
            ..small()
        })
        .unwrap();
        assert_eq!(a.table().to_csv(), b.table().to_csv());
        let single = exp_payoff(&ExperimentConfig {
            t_grid: vec![1.0],
            ensemble: 1,
            ..small()
        })
        .unwrap();
        assert_eq!(single.curve(2, |r| r.p_rank0.mean).len(), 1);
    }
}
