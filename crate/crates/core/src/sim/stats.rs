//! Across-replication summaries.

use serde::Serialize;

use super::metrics::MetricsSeries;

/// 97.5% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Mean and 95% normal-approximation confidence half-width.
///
/// With a single sample the half-width is reported as 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub ci_half_width: f64,
}

impl Summary {
    pub fn of(xs: &[f64]) -> Option<Self> {
        let n = xs.len();
        if n == 0 {
            return None;
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let ci_half_width = if n < 2 {
            0.0
        } else {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            Z_95 * (var / n as f64).sqrt()
        };
        Some(Self { n, mean, ci_half_width })
    }

    pub fn lower(&self) -> f64 {
        self.mean - self.ci_half_width
    }

    pub fn upper(&self) -> f64 {
        self.mean + self.ci_half_width
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioSummary {
    pub capacity_bps: Summary,
    pub acceptance: Summary,
    pub ap_load: Summary,
    pub rejected: Summary,
    pub leases: Summary,
    pub public_confirmation_s: Summary,
    pub private_confirmation_s: Summary,
}

/// Per-metric mean and CI over replications. `None` for an empty list.
pub fn aggregate_metrics(series: &[MetricsSeries]) -> Option<ScenarioSummary> {
    let col = |f: &dyn Fn(&MetricsSeries) -> f64| Summary::of(&series.iter().map(f).collect::<Vec<_>>());
    Some(ScenarioSummary {
        capacity_bps: col(&|s| s.mean_capacity_bps())?,
        acceptance: col(&|s| s.mean_acceptance())?,
        ap_load: col(&|s| s.mean_ap_load())?,
        rejected: col(&|s| s.counters.rejected as f64)?,
        leases: col(&|s| s.counters.leases as f64)?,
        public_confirmation_s: col(&|s| s.public.mean_confirmation_delay())?,
        private_confirmation_s: col(&|s| s.private.mean_confirmation_delay())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn single_sample_has_zero_width() {
        let s = Summary::of(&[3.5]).unwrap();
        assert_eq!((s.mean, s.ci_half_width), (3.5, 0.0));
        assert!(Summary::of(&[]).is_none());
    }

    #[test]
    fn identical_samples_have_zero_width() {
        let s = Summary::of(&[2.0; 7]).unwrap();
        assert_eq!(s.ci_half_width, 0.0);
    }

    #[test]
    fn closed_form_ci() {
        // Sample variance of {1, 2, 3, 4} is 5/3.
        let s = Summary::of(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_relative_eq!(s.mean, 2.5);
        assert_relative_eq!(s.ci_half_width, Z_95 * (5.0f64 / 3.0 / 4.0).sqrt(), max_relative = 1e-12);
    }
}
