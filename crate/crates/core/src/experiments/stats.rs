use serde::{Deserialize, Serialize};

/// Mean, standard error and nearest-rank 10th percentile of a sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub count: usize,
    pub mean: f64,
    pub stderr: f64,
    pub p10: f64,
    pub min: f64,
    pub max: f64,
}

pub fn summarize(samples: &[f64]) -> EnsembleSummary {
    let n = samples.len();
    if n == 0 {
        return EnsembleSummary {
            count: 0,
            mean: f64::NAN,
            stderr: f64::NAN,
            p10: f64::NAN,
            min: f64::NAN,
            max: f64::NAN,
        };
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = sorted.iter().sum::<f64>() / n as f64;
    let stderr = if n > 1 {
        let var = sorted.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    } else {
        0.0
    };
    let rank = ((0.10 * n as f64).ceil() as usize).max(1);
    EnsembleSummary {
        count: n,
        // Clamp away rounding so the mean never leaves [min, max].
        mean: mean.clamp(sorted[0], sorted[n - 1]),
        stderr,
        p10: sorted[rank - 1],
        min: sorted[0],
        max: sorted[n - 1],
    }
}

/// Least-squares line `y = slope x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 2 || ys.len() != n {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some(LinearFit {
        slope,
        intercept: my - slope * mx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn summary_examples() {
        let s = summarize(&[3.0, 1.0, 2.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert_eq!(s.p10, 1.0);
        assert_eq!((s.min, s.max), (1.0, 4.0));
        let v: Vec<f64> = (1..=20).map(f64::from).collect();
        assert_eq!(summarize(&v).p10, 2.0);
        assert!(summarize(&[]).mean.is_nan());
        assert_eq!(summarize(&[7.0]).stderr, 0.0);
    }

    #[test]
    fn fit_examples() {
        let f = linear_fit(&[1.0, 2.0, 3.0], &[3.0, 5.0, 7.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        let f = linear_fit(&[1.0, 2.0, 3.0], &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(f.slope, 0.0);
        assert!(linear_fit(&[1.0], &[1.0]).is_none());
    }

    proptest! {
        #[test]
        fn mean_within_range(v in proptest::collection::vec(-1e6f64..1e6, 1..60)) {
            let s = summarize(&v);
            prop_assert!(s.min <= s.mean && s.mean <= s.max);
            prop_assert!(s.min <= s.p10 && s.p10 <= s.max);
        }
    }
}
