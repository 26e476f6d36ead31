//! Building a linguistic variable from scalar measurements.
//!
//! Subtractive clustering picks the number of terms, fuzzy c-means assigns
//! each measurement a degree in every cluster, and each membership column is
//! fitted with a two-term Gaussian. Terms are named `LC1..LCk` by ascending
//! center.

pub mod fcm;
pub mod gauss2;
pub mod subtractive;

pub use fcm::{fcm, ClusterModel, FcmConfig};
pub use gauss2::{fit_gauss2, FitConfig, Gauss2Fit};
pub use subtractive::{subtractive_clusters, SubtractiveConfig};

use crate::error::{Error, Result};
use crate::membership::{Gauss2Params, MembershipFunction};
use crate::variable::{Domain, LinguisticVariable, Term, VariableKind};

/// Raw scalar measurements with optional labels.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    values: Vec<f64>,
    labels: Option<Vec<String>>,
    lo: f64,
    hi: f64,
}

impl TrainingSet {
    pub fn new(values: Vec<f64>, labels: Option<Vec<String>>, lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "domain [{lo}, {hi}] must be finite with lo < hi"
            )));
        }
        if let Some(labels) = &labels {
            if labels.len() != values.len() {
                return Err(Error::InvalidParameter(format!(
                    "{} labels for {} values",
                    labels.len(),
                    values.len()
                )));
            }
        }
        for (i, &v) in values.iter().enumerate() {
            if !(v >= lo && v <= hi) {
                return Err(Error::OutOfDomain {
                    row: i as u64 + 1,
                    value: v,
                    lo,
                    hi,
                });
            }
        }
        Ok(TrainingSet {
            values,
            labels,
            lo,
            hi,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value carried by the given label, if labels are present.
    pub fn value_of(&self, label: &str) -> Option<f64> {
        let labels = self.labels.as_ref()?;
        labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.values[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElicitationConfig {
    pub subtractive: SubtractiveConfig,
    pub fcm: FcmConfig,
    pub fit: FitConfig,
    /// Largest acceptable RMS fit residual per term.
    pub max_residual: f64,
    /// Coverage below this on the data range is reported as a warning.
    pub coverage_warn: f64,
    pub kind: VariableKind,
}

impl Default for ElicitationConfig {
    fn default() -> Self {
        ElicitationConfig {
            subtractive: SubtractiveConfig::default(),
            fcm: FcmConfig::default(),
            fit: FitConfig::default(),
            max_residual: 0.15,
            coverage_warn: 0.2,
            kind: VariableKind::Interval,
        }
    }
}

/// Everything produced along the way, for reporting.
#[derive(Debug, Clone)]
pub struct Elicitation {
    pub variable: LinguisticVariable,
    /// Subtractive-clustering centers in selection order.
    pub seeds: Vec<f64>,
    pub clusters: ClusterModel,
    pub fits: Vec<Gauss2Fit>,
    pub warnings: Vec<String>,
}

/// Runs the full pipeline and returns the variable plus intermediate results.
pub fn elicit(name: &str, data: &TrainingSet, config: &ElicitationConfig) -> Result<Elicitation> {
    if data.len() < 2 {
        return Err(Error::DatasetTooSmall {
            len: data.len(),
            needed: 2,
        });
    }
    let values = data.values();
    let seeds = subtractive_clusters(values, &config.subtractive)?;
    let clusters = fcm(values, &seeds, &config.fcm)?;

    let mut fits = Vec::with_capacity(clusters.k());
    let mut terms = Vec::with_capacity(clusters.k());
    for j in 0..clusters.k() {
        let term = format!("LC{}", j + 1);
        let center = clusters.centers[j];
        let mut spread = clusters.spread(values, j, config.fcm.m);
        if !(spread > 0.0) {
            // single-valued cluster: fall back to a fraction of the domain
            spread = (data.hi - data.lo) / 10.0;
        }
        let init = Gauss2Params {
            alpha1: 0.5,
            beta1: center,
            gamma1: spread,
            alpha2: 0.5,
            beta2: center,
            gamma2: spread,
        };
        let mus = clusters.column(j);
        let fit = if values.len() >= 6 {
            fit_gauss2(values, &mus, init, &config.fit)?
        } else {
            fit_gauss2(&pad(values), &pad(&mus), init, &config.fit)?
        };
        if fit.residual > config.max_residual {
            return Err(Error::ResidualTooLarge {
                term,
                residual: fit.residual,
                ceiling: config.max_residual,
            });
        }
        terms.push(Term::new(term, MembershipFunction::gauss2(fit.params)?));
        fits.push(fit);
    }

    let variable =
        LinguisticVariable::new(name, config.kind, Domain::interval(data.lo, data.hi), terms)?;

    let mut warnings = Vec::new();
    let (min, max) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let cov = variable.coverage_over(min, max, 1001);
    if cov.degree < config.coverage_warn {
        warnings.push(format!(
            "weak coverage: best term degree {:.3} at {} is below {}",
            cov.degree, cov.point, config.coverage_warn
        ));
    }

    Ok(Elicitation {
        variable,
        seeds,
        clusters,
        fits,
        warnings,
    })
}

/// Repeats tiny samples so the six-parameter fit has enough rows.
fn pad(xs: &[f64]) -> Vec<f64> {
    xs.iter().cycle().take(6.max(xs.len())).copied().collect()
}

pub fn elicit_variable(
    name: &str,
    data: &TrainingSet,
    config: &ElicitationConfig,
) -> Result<LinguisticVariable> {
    elicit(name, data, config).map(|e| e.variable)
}
