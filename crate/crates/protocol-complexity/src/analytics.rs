//! Cohort statistics over analyzed protocols: least-squares regression of
//! duration on complexity, running averages across subjects, and grouped
//! comparisons of observed versus optimal complexity.

use crate::stats::student_t_two_sided_p;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticsError {
    /// Regression needs at least three records.
    InsufficientData { n: usize },
    /// All predictor values are identical; no slope is identifiable.
    DegenerateX,
    /// Grouped comparison requires a group key on every record.
    MissingGroupKey { protocol_id: String },
}

impl fmt::Display for AnalyticsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticsError::InsufficientData { n } => {
                write!(f, "regression requires at least 3 records, got {n}")
            }
            AnalyticsError::DegenerateX => write!(f, "all predictor values are equal"),
            AnalyticsError::MissingGroupKey { protocol_id } => {
                write!(f, "record {protocol_id} carries no group key")
            }
        }
    }
}

impl std::error::Error for AnalyticsError {}

/// Per-protocol observation row feeding the cohort statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct CohortRecord {
    pub protocol_id: String,
    pub pci: f64,
    pub opci: f64,
    pub duration: f64,
    pub performance_index: f64,
    pub group_key: Option<String>,
}

/// Ordinary least squares of duration on complexity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionResult {
    /// Seconds per bit.
    pub slope: f64,
    /// Seconds.
    pub intercept: f64,
    /// Residual standard error, √(SSE/(n−2)).
    pub se_estimate: f64,
    /// Two-sided t-test of slope = 0 with n−2 degrees of freedom.
    pub p_value_slope: f64,
    pub r_squared: f64,
    pub n: usize,
}

/// Compensated (Kahan) running sum; keeps cohort-scale accumulations stable.
#[derive(Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum
    }
}

fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut acc = Kahan::default();
    for v in values {
        acc.add(v);
    }
    acc.total()
}

/// Fits duration = intercept + slope·pci by ordinary least squares and
/// tests the slope against zero.
pub fn ols_time_on_pci(records: &[CohortRecord]) -> Result<RegressionResult, AnalyticsError> {
    let n = records.len();
    if n < 3 {
        return Err(AnalyticsError::InsufficientData { n });
    }
    let nf = n as f64;
    let mean_x = kahan_sum(records.iter().map(|r| r.pci)) / nf;
    let mean_y = kahan_sum(records.iter().map(|r| r.duration)) / nf;

    let sxx = kahan_sum(records.iter().map(|r| (r.pci - mean_x).powi(2)));
    if sxx == 0.0 {
        return Err(AnalyticsError::DegenerateX);
    }
    let sxy = kahan_sum(records.iter().map(|r| (r.pci - mean_x) * (r.duration - mean_y)));
    let syy = kahan_sum(records.iter().map(|r| (r.duration - mean_y).powi(2)));

    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse = kahan_sum(
        records
            .iter()
            .map(|r| (r.duration - intercept - slope * r.pci).powi(2)),
    )
    .max(0.0);

    let df = nf - 2.0;
    let se_estimate = (sse / df).sqrt();
    let se_slope = se_estimate / sxx.sqrt();
    let p_value_slope = if se_slope > 0.0 {
        student_t_two_sided_p(slope / se_slope, df)
    } else if slope == 0.0 {
        1.0
    } else {
        0.0
    };
    let r_squared = if syy > 0.0 {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };

    Ok(RegressionResult { slope, intercept, se_estimate, p_value_slope, r_squared, n })
}

/// Running mean: out[i] is the average of values[0..=i].
pub fn cumulative_average(values: &[f64]) -> Vec<f64> {
    let mut acc = Kahan::default();
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            acc.add(v);
            acc.total() / (i + 1) as f64
        })
        .collect()
}

/// Per-group means of complexity, optimal complexity, and their gap.
#[derive(Debug, Clone, PartialEq)]
pub struct CohortSummary {
    pub group_key: String,
    pub n: usize,
    pub mean_pci: f64,
    pub mean_opci: f64,
    pub mean_gap: f64,
}

/// Groups records by their key and reports per-group means, one row per
/// group in lexicographic order. Sums run in ascending protocol_id order
/// with plain summation so an independent recomputation reproduces the
/// means bit-for-bit.
pub fn cohort_compare(records: &[CohortRecord]) -> Result<Vec<CohortSummary>, AnalyticsError> {
    let mut ordered: Vec<&CohortRecord> = records.iter().collect();
    ordered.sort_by(|a, b| a.protocol_id.cmp(&b.protocol_id));

    let mut groups: BTreeMap<&str, Vec<&CohortRecord>> = BTreeMap::new();
    for r in ordered {
        let key = r.group_key.as_deref().ok_or_else(|| AnalyticsError::MissingGroupKey {
            protocol_id: r.protocol_id.clone(),
        })?;
        groups.entry(key).or_default().push(r);
    }

    Ok(groups
        .into_iter()
        .map(|(key, members)| {
            let n = members.len();
            let nf = n as f64;
            let mut pci = 0.0;
            let mut opci = 0.0;
            let mut gap = 0.0;
            for m in &members {
                pci += m.pci;
                opci += m.opci;
                gap += m.pci - m.opci;
            }
            CohortSummary {
                group_key: key.to_string(),
                n,
                mean_pci: pci / nf,
                mean_opci: opci / nf,
                mean_gap: gap / nf,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-9;

    fn rec(id: &str, pci: f64, duration: f64) -> CohortRecord {
        CohortRecord {
            protocol_id: id.to_string(),
            pci,
            opci: 0.0,
            duration,
            performance_index: pci / duration,
            group_key: None,
        }
    }

    fn points(xy: &[(f64, f64)]) -> Vec<CohortRecord> {
        xy.iter()
            .enumerate()
            .map(|(i, &(x, y))| rec(&format!("p{i:03}"), x, y))
            .collect()
    }

    #[test]
    fn exact_line_recovers_slope_and_zero_error() {
        let r = ols_time_on_pci(&points(&[(1.0, 2.0), (2.0, 4.0), (3.0, 6.0)])).unwrap();
        assert!((r.slope - 2.0).abs() < TOL);
        assert!(r.intercept.abs() < TOL);
        assert!(r.se_estimate.abs() < TOL);
        assert!((r.r_squared - 1.0).abs() < TOL);
        assert_eq!(r.p_value_slope, 0.0);
        assert_eq!(r.n, 3);
    }

    #[test]
    fn three_point_hand_fixture() {
        let r = ols_time_on_pci(&points(&[(1.0, 1.0), (2.0, 2.0), (3.0, 2.0)])).unwrap();
        assert!((r.slope - 0.5).abs() < TOL);
        assert!((r.intercept - 2.0 / 3.0).abs() < TOL);
        assert!((r.se_estimate - (1.0f64 / 6.0).sqrt()).abs() < TOL);
        assert!((r.r_squared - 0.75).abs() < TOL);
        // t = √3 with one degree of freedom gives exactly 1/3.
        assert!((r.p_value_slope - 1.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert!(matches!(
            ols_time_on_pci(&points(&[(1.0, 1.0), (2.0, 2.0)])),
            Err(AnalyticsError::InsufficientData { n: 2 })
        ));
        assert!(matches!(
            ols_time_on_pci(&points(&[(3.0, 1.0), (3.0, 2.0), (3.0, 5.0)])),
            Err(AnalyticsError::DegenerateX)
        ));
    }

    #[test]
    fn constant_durations_fit_a_flat_line() {
        let r = ols_time_on_pci(&points(&[(1.0, 5.0), (2.0, 5.0), (3.0, 5.0)])).unwrap();
        assert!(r.slope.abs() < TOL);
        assert!((r.intercept - 5.0).abs() < TOL);
        assert_eq!(r.p_value_slope, 1.0);
        assert_eq!(r.r_squared, 1.0);
    }

    #[test]
    fn cumulative_average_reference_sequences() {
        assert_eq!(cumulative_average(&[4.0]), vec![4.0]);
        assert_eq!(cumulative_average(&[2.0, 4.0, 6.0]), vec![2.0, 3.0, 4.0]);
        assert_eq!(cumulative_average(&[]), Vec::<f64>::new());
        assert_eq!(cumulative_average(&[7.0, 7.0, 7.0]), vec![7.0, 7.0, 7.0]);
    }

    #[test]
    fn permutation_preserves_the_final_running_mean() {
        let a = [3.0, 9.0, 27.0, 81.0, 12.0];
        let b = [81.0, 12.0, 3.0, 27.0, 9.0];
        let fa = *cumulative_average(&a).last().unwrap();
        let fb = *cumulative_average(&b).last().unwrap();
        assert_eq!(fa, fb);
        assert_ne!(cumulative_average(&a)[1], cumulative_average(&b)[1]);
    }

    fn grouped(id: &str, pci: f64, opci: f64, key: &str) -> CohortRecord {
        CohortRecord {
            protocol_id: id.to_string(),
            pci,
            opci,
            duration: 100.0,
            performance_index: pci / 100.0,
            group_key: Some(key.to_string()),
        }
    }

    #[test]
    fn cohort_means_match_the_hand_example() {
        let rows = cohort_compare(&[grouped("a", 6.0, 6.0, "g"), grouped("b", 8.0, 6.0, "g")]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].n, 2);
        assert!((rows[0].mean_pci - 7.0).abs() < TOL);
        assert!((rows[0].mean_opci - 6.0).abs() < TOL);
        assert!((rows[0].mean_gap - 1.0).abs() < TOL);
    }

    #[test]
    fn groups_come_out_lexicographic() {
        let rows = cohort_compare(&[
            grouped("p3", 10.0, 6.0, "novice"),
            grouped("p1", 8.0, 6.0, "expert"),
            grouped("p2", 9.0, 6.0, "novice"),
        ])
        .unwrap();
        let keys: Vec<&str> = rows.iter().map(|r| r.group_key.as_str()).collect();
        assert_eq!(keys, vec!["expert", "novice"]);
        assert_eq!(rows[1].n, 2);
    }

    #[test]
    fn missing_group_key_is_an_error() {
        let mut records = vec![grouped("a", 6.0, 6.0, "g")];
        records.push(rec("b", 8.0, 100.0));
        assert!(matches!(
            cohort_compare(&records),
            Err(AnalyticsError::MissingGroupKey { protocol_id }) if protocol_id == "b"
        ));
    }

    #[test]
    fn cohort_sums_run_in_ascending_protocol_order() {
        // Plain left-to-right sums over ids sorted ascending must reproduce
        // the means exactly, including floating-point rounding.
        let records = vec![
            grouped("p2", 0.1, 0.3, "g"),
            grouped("p1", 0.2, 0.1, "g"),
            grouped("p3", 0.3, 0.2, "g"),
        ];
        let rows = cohort_compare(&records).unwrap();
        let naive_pci = (0.2 + 0.1 + 0.3) / 3.0;
        let naive_opci = (0.1 + 0.3 + 0.2) / 3.0;
        let naive_gap = ((0.2 - 0.1) + (0.1 - 0.3) + (0.3 - 0.2)) / 3.0;
        assert_eq!(rows[0].mean_pci, naive_pci);
        assert_eq!(rows[0].mean_opci, naive_opci);
        assert_eq!(rows[0].mean_gap, naive_gap);
    }

    prop_compose! {
        fn arb_records()(
            xs in proptest::collection::vec(0.5f64..300.0, 3..40),
            noise in proptest::collection::vec(-20.0f64..20.0, 3..40),
            slope in -5.0f64..5.0,
            intercept in 0.0f64..100.0,
        ) -> Vec<CohortRecord> {
            let n = xs.len().min(noise.len());
            (0..n)
                .map(|i| rec(&format!("p{i:03}"), xs[i], intercept + slope * xs[i] + noise[i]))
                .collect()
        }
    }

    proptest! {
        /// Normal equations: residuals sum to zero and are orthogonal to x.
        #[test]
        fn normal_equations_hold(records in arb_records()) {
            prop_assume!(records.len() >= 3);
            let spread = records.iter().map(|r| r.pci).fold(f64::NEG_INFINITY, f64::max)
                - records.iter().map(|r| r.pci).fold(f64::INFINITY, f64::min);
            prop_assume!(spread > 1e-6);
            let fit = ols_time_on_pci(&records).unwrap();
            let resid: Vec<f64> = records
                .iter()
                .map(|r| r.duration - fit.intercept - fit.slope * r.pci)
                .collect();
            let sum: f64 = resid.iter().sum();
            let dot: f64 = resid.iter().zip(&records).map(|(e, r)| e * r.pci).sum();
            let scale: f64 = records.iter().map(|r| r.duration.abs() + r.pci.abs()).sum::<f64>() + 1.0;
            prop_assert!(sum.abs() < 1e-9 * scale);
            prop_assert!(dot.abs() < 1e-7 * scale * scale);
        }

        /// Reflecting durations about their mean flips the slope but keeps p.
        #[test]
        fn p_value_is_reflection_invariant(records in arb_records()) {
            prop_assume!(records.len() >= 3);
            let spread = records.iter().map(|r| r.pci).fold(f64::NEG_INFINITY, f64::max)
                - records.iter().map(|r| r.pci).fold(f64::INFINITY, f64::min);
            prop_assume!(spread > 1e-6);
            let mean_y = records.iter().map(|r| r.duration).sum::<f64>() / records.len() as f64;
            let reflected: Vec<CohortRecord> = records
                .iter()
                .map(|r| rec(&r.protocol_id, r.pci, 2.0 * mean_y - r.duration))
                .collect();
            let a = ols_time_on_pci(&records).unwrap();
            let b = ols_time_on_pci(&reflected).unwrap();
            prop_assert!((a.slope + b.slope).abs() < 1e-9 * (1.0 + a.slope.abs()));
            prop_assert!((a.p_value_slope - b.p_value_slope).abs() < 1e-12);
        }
    }
}
