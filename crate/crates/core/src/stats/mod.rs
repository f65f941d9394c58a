//! Descriptive statistics, paired and Welch t-tests, and the comparisons
//! that feed the report tables.

mod compare;
mod dist;

use serde::Serialize;
use thiserror::Error;

pub use compare::{compare, compare_in, CompareError, Comparison, Exclusion, Grouping, Indicator};
pub use dist::{ln_gamma, regularized_incomplete_beta, t_cdf};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("empty sample")]
    EmptySample,
    #[error("sample {label:?} has {n} observations, at least 2 are needed")]
    InsufficientData { label: String, n: usize },
    #[error("zero variance: the test statistic is undefined")]
    ZeroVariance,
    #[error("paired samples differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("degrees of freedom must be positive and finite, got {0}")]
    InvalidDf(f64),
    #[error("non-finite input")]
    NonFinite,
}

/// Summary of one group of observations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub label: String,
    pub mean: f64,
    /// Sample variance (divisor n - 1); absent for a single observation.
    pub variance: Option<f64>,
    pub n: usize,
    #[serde(skip)]
    pub values: Vec<f64>,
}

impl Sample {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self, StatsError> {
        if values.is_empty() {
            return Err(StatsError::EmptySample);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(StatsError::NonFinite);
        }
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let variance = (n > 1)
            .then(|| values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64);
        Ok(Self {
            label: label.into(),
            mean,
            variance,
            n,
            values,
        })
    }

    /// A sample known only through its summary statistics.
    pub fn from_summary(label: impl Into<String>, n: usize, mean: f64, variance: f64) -> Self {
        Self {
            label: label.into(),
            mean,
            variance: (n > 1).then_some(variance),
            n,
            values: Vec::new(),
        }
    }

    fn test_variance(&self) -> Result<f64, StatsError> {
        match self.variance {
            Some(v) if self.n >= 2 => Ok(v),
            _ => Err(StatsError::InsufficientData {
                label: self.label.clone(),
                n: self.n,
            }),
        }
    }
}

pub fn descriptive(values: &[f64]) -> Result<Sample, StatsError> {
    Sample::new("", values.to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TestKind {
    Paired,
    Welch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub kind: TestKind,
    pub t: f64,
    pub df: f64,
    /// Tail probability on the side of the observed difference.
    pub p_one: f64,
    pub p_two: f64,
}

impl TestResult {
    fn new(kind: TestKind, t: f64, df: f64) -> Result<Self, StatsError> {
        if !t.is_finite() {
            return Err(StatsError::NonFinite);
        }
        let p_one = dist::one_tail(t, df)?;
        Ok(Self {
            kind,
            t,
            df,
            p_one,
            p_two: (2.0 * p_one).min(1.0),
        })
    }
}

/// Paired t-test on `xs[i] - ys[i]`.
pub fn paired_t(xs: &[f64], ys: &[f64]) -> Result<TestResult, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch(xs.len(), ys.len()));
    }
    let d: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| x - y).collect();
    let s = Sample::new("differences", d)?;
    let var = s.test_variance()?;
    if s.values.iter().all(|&v| v == s.values[0]) {
        return Err(StatsError::ZeroVariance);
    }
    let n = s.n as f64;
    TestResult::new(TestKind::Paired, s.mean / (var / n).sqrt(), n - 1.0)
}

/// Welch's unequal-variance two-sample t-test of `a` against `b`.
pub fn welch_t(a: &Sample, b: &Sample) -> Result<TestResult, StatsError> {
    let (va, vb) = (a.test_variance()?, b.test_variance()?);
    if va == 0.0 && vb == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let (qa, qb) = (va / a.n as f64, vb / b.n as f64);
    let se2 = qa + qb;
    let df = se2 * se2 / (qa * qa / (a.n - 1) as f64 + qb * qb / (b.n - 1) as f64);
    TestResult::new(TestKind::Welch, (a.mean - b.mean) / se2.sqrt(), df)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptive_examples() {
        let s = descriptive(&[2.0, 4.0, 6.0]).unwrap();
        assert_eq!((s.mean, s.variance, s.n), (4.0, Some(4.0), 3));
        let one = descriptive(&[5.0]).unwrap();
        assert_eq!((one.mean, one.variance), (5.0, None));
        assert_eq!(descriptive(&[3.0; 4]).unwrap().variance, Some(0.0));
        assert_eq!(descriptive(&[]), Err(StatsError::EmptySample));
    }

    #[test]
    fn paired_hand_example() {
        let r = paired_t(&[1.0, 2.0, 3.0], &[1.0, 3.0, 5.0]).unwrap();
        assert!((r.t + 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(r.df, 2.0);
        assert!(r.p_one < 0.5);
        assert!((r.p_two - 2.0 * r.p_one).abs() < 1e-15);
    }

    #[test]
    fn paired_degenerate_inputs() {
        assert_eq!(
            paired_t(&[1.0, 2.0], &[1.0, 2.0]),
            Err(StatsError::ZeroVariance)
        );
        assert_eq!(
            paired_t(&[1.0, 2.0], &[0.0, 1.0]),
            Err(StatsError::ZeroVariance)
        );
        assert_eq!(
            paired_t(&[1.0], &[1.0, 2.0]),
            Err(StatsError::LengthMismatch(1, 2))
        );
        assert!(matches!(
            paired_t(&[1.0], &[2.0]),
            Err(StatsError::InsufficientData { .. })
        ));
    }

    #[test]
    fn paired_antisymmetry() {
        let xs = [1.0, 4.0, 2.5, 8.0];
        let ys = [2.0, 3.5, 1.0, 6.0];
        let ab = paired_t(&xs, &ys).unwrap();
        let ba = paired_t(&ys, &xs).unwrap();
        assert_eq!(ab.t, -ba.t);
        assert_eq!(ab.p_two, ba.p_two);
    }

    #[test]
    fn welch_summary_example() {
        let a = Sample::from_summary("a", 100, 10.0, 4.0);
        let b = Sample::from_summary("b", 100, 9.0, 4.0);
        let r = welch_t(&a, &b).unwrap();
        assert!((r.t - 1.0 / 0.08f64.sqrt()).abs() < 1e-12);
        assert!((r.df - 198.0).abs() < 1e-9);
        let back = welch_t(&b, &a).unwrap();
        assert_eq!(back.t, -r.t);
        assert_eq!(back.p_two, r.p_two);
    }

    #[test]
    fn welch_identical_and_constant() {
        let a = Sample::new("a", vec![1.0, 2.0, 4.0]).unwrap();
        let r = welch_t(&a, &a.clone()).unwrap();
        assert_eq!((r.t, r.p_one, r.p_two), (0.0, 0.5, 1.0));
        let c = Sample::new("c", vec![2.0, 2.0]).unwrap();
        assert_eq!(welch_t(&c, &c.clone()), Err(StatsError::ZeroVariance));
        let single = Sample::new("s", vec![1.0]).unwrap();
        assert!(matches!(
            welch_t(&single, &a),
            Err(StatsError::InsufficientData { n: 1, .. })
        ));
    }

    #[test]
    fn scale_and_shift_leave_t_unchanged() {
        let xs = [3.0, 5.5, 2.0, 9.0, 4.0];
        let ys = [2.5, 6.0, 1.0, 7.5, 3.0];
        let base = paired_t(&xs, &ys).unwrap().t;
        let f = |v: &[f64]| v.iter().map(|x| 3.0 * x + 11.0).collect::<Vec<_>>();
        let moved = paired_t(&f(&xs), &f(&ys)).unwrap().t;
        assert!((base - moved).abs() < 1e-12 * base.abs());

        let w = welch_t(
            &Sample::new("x", xs.to_vec()).unwrap(),
            &Sample::new("y", ys.to_vec()).unwrap(),
        )
        .unwrap()
        .t;
        let w2 = welch_t(
            &Sample::new("x", f(&xs)).unwrap(),
            &Sample::new("y", f(&ys)).unwrap(),
        )
        .unwrap()
        .t;
        assert!((w - w2).abs() < 1e-12 * w.abs());
    }
}
