use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    fmt_f, instance_rng, linear_fit, summarize, with_jobs, EnsembleSummary, LinearFit, Table,
};
use crate::error::{Error, Result};
use crate::lattice::{
    default_delta, hnf, lll_reduce, random_lattice, svp_enumerate, LatticeMode, DEFAULT_ORACLE_CAP,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KGrowthRow {
    pub dim: usize,
    pub hnf_inf_norm: EnsembleSummary,
    pub lll_inf_norm: EnsembleSummary,
    /// `|Σ x_min^i|` on the HNF basis.
    pub coeff_sum: EnsembleSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KGrowthReport {
    pub rows: Vec<KGrowthRow>,
    pub hnf_fit: Option<LinearFit>,
    pub lll_fit: Option<LinearFit>,
}

impl KGrowthReport {
    pub fn table(&self) -> Table {
        let mut t = Table::new(&[
            "dim",
            "count",
            "hnf_inf_mean",
            "hnf_inf_stderr",
            "lll_inf_mean",
            "lll_inf_stderr",
            "k_mean",
            "k_stderr",
        ]);
        for r in &self.rows {
            t.push(vec![
                r.dim.to_string(),
                r.hnf_inf_norm.count.to_string(),
                fmt_f(r.hnf_inf_norm.mean),
                fmt_f(r.hnf_inf_norm.stderr),
                fmt_f(r.lll_inf_norm.mean),
                fmt_f(r.lll_inf_norm.stderr),
                fmt_f(r.coeff_sum.mean),
                fmt_f(r.coeff_sum.stderr),
            ]);
        }
        t
    }

    pub fn chart(&self) -> super::svg::Chart {
        use super::svg::{Chart, Series};
        let mut c = Chart::new("Shortest-vector coefficient size", "N", "mean value");
        let pick =
            |f: fn(&KGrowthRow) -> f64| self.rows.iter().map(|r| (r.dim as f64, f(r))).collect();
        c.series
            .push(Series::new("HNF ||x||inf", pick(|r| r.hnf_inf_norm.mean)));
        c.series
            .push(Series::new("LLL ||x||inf", pick(|r| r.lll_inf_norm.mean)));
        c.series
            .push(Series::new("|sum x|", pick(|r| r.coeff_sum.mean)).dashed());
        c
    }
}

fn as_f64(v: &num_bigint::BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

/// Coefficient sizes of shortest vectors on HNF and LLL bases of random
/// lattices, per dimension.
pub fn exp_kgrowth(
    dims: &[usize],
    ensemble: usize,
    seed: u64,
    mode: &LatticeMode,
    jobs: Option<usize>,
) -> Result<KGrowthReport> {
    if ensemble == 0 || dims.is_empty() {
        return Err(Error::InvalidConfig(
            "kgrowth needs dims and a nonzero ensemble".into(),
        ));
    }
    if let Some(&d) = dims.iter().find(|&&d| d > DEFAULT_ORACLE_CAP || d < 2) {
        return Err(Error::DimensionCap {
            dim: d,
            cap: DEFAULT_ORACLE_CAP,
        });
    }
    let rows = with_jobs(jobs, || {
        dims.iter()
            .map(|&n| {
                let samples: Vec<(f64, f64, f64)> = (0..ensemble)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = instance_rng(seed, n, i);
                        let b = random_lattice(n, mode, &mut rng)?.problem_basis().clone();
                        let h = hnf(&b)?;
                        let on_hnf = svp_enumerate(&h)?;
                        let on_lll = svp_enumerate(&lll_reduce(&b, &default_delta())?)?;
                        Ok((
                            as_f64(&on_hnf.inf_norm_xmin),
                            as_f64(&on_lll.inf_norm_xmin),
                            as_f64(&on_hnf.coeff_sum_abs),
                        ))
                    })
                    .collect::<Result<_>>()?;
                let col =
                    |f: fn(&(f64, f64, f64)) -> f64| samples.iter().map(f).collect::<Vec<_>>();
                Ok(KGrowthRow {
                    dim: n,
                    hnf_inf_norm: summarize(&col(|s| s.0)),
                    lll_inf_norm: summarize(&col(|s| s.1)),
                    coeff_sum: summarize(&col(|s| s.2)),
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let xs: Vec<f64> = rows.iter().map(|r| r.dim as f64).collect();
    let fit = |f: fn(&KGrowthRow) -> f64| linear_fit(&xs, &rows.iter().map(f).collect::<Vec<_>>());
    Ok(KGrowthReport {
        hnf_fit: fit(|r| r.hnf_inf_norm.mean),
        lll_fit: fit(|r| r.lll_inf_norm.mean),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_lattices_are_flat() {
        let r = exp_kgrowth(&[2, 3, 4], 3, 1, &LatticeMode::Identity, Some(1)).unwrap();
        for row in &r.rows {
            assert_eq!(row.hnf_inf_norm.mean, 1.0);
            assert_eq!(row.lll_inf_norm.mean, 1.0);
            assert_eq!(row.coeff_sum.mean, 1.0);
        }
        assert_eq!(r.hnf_fit.unwrap().slope, 0.0);
        assert_eq!(r.table().rows.len(), 3);
    }

    #[test]
    fn deterministic_and_capped() {
        let a = exp_kgrowth(&[3], 4, 5, &LatticeMode::uniform(), Some(1)).unwrap();
        let b = exp_kgrowth(&[3], 4, 5, &LatticeMode::uniform(), None).unwrap();
        assert_eq!(a.table().to_csv(), b.table().to_csv());
        assert!(matches!(
            exp_kgrowth(&[11], 1, 0, &LatticeMode::uniform(), None),
            Err(Error::DimensionCap { .. })
        ));
    }
}
