//! Linguistic variables: a name, a domain, and named fuzzy terms over it.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::membership::MembershipFunction;

/// Level of measurement of the underlying quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariableKind {
    Nominal,
    Ordinal,
    Interval,
    Ratio,
}

impl fmt::Display for VariableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VariableKind::Nominal => "nominal",
            VariableKind::Ordinal => "ordinal",
            VariableKind::Interval => "interval",
            VariableKind::Ratio => "ratio",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// Closed real interval `[lo, hi]`.
    Interval { lo: f64, hi: f64 },
    /// Finite list of integer codes, kept sorted and unique.
    Codes { codes: Vec<i64> },
}

impl Domain {
    pub fn interval(lo: f64, hi: f64) -> Self {
        Domain::Interval { lo, hi }
    }

    pub fn codes<I: IntoIterator<Item = i64>>(codes: I) -> Self {
        let mut codes: Vec<i64> = codes.into_iter().collect();
        codes.sort_unstable();
        codes.dedup();
        Domain::Codes { codes }
    }

    /// Smallest interval containing the domain.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Domain::Interval { lo, hi } => (*lo, *hi),
            Domain::Codes { codes } => (
                codes.first().copied().unwrap_or(0) as f64,
                codes.last().copied().unwrap_or(0) as f64,
            ),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match self {
            Domain::Interval { lo, hi } => x >= *lo && x <= *hi,
            Domain::Codes { codes } => x.fract() == 0.0 && codes.binary_search(&(x as i64)).is_ok(),
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        match self {
            Domain::Interval { lo, hi } => {
                if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                    return Err(Error::InvalidVariable {
                        name: name.into(),
                        reason: format!("domain [{lo}, {hi}] must be finite with lo < hi"),
                    });
                }
            }
            Domain::Codes { codes } => {
                if codes.is_empty() {
                    return Err(Error::InvalidVariable {
                        name: name.into(),
                        reason: "code list is empty".into(),
                    });
                }
                if codes.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidVariable {
                        name: name.into(),
                        reason: "codes must be sorted and unique".into(),
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    pub mf: MembershipFunction,
}

impl Term {
    pub fn new(name: impl Into<String>, mf: MembershipFunction) -> Self {
        Term {
            name: name.into(),
            mf,
        }
    }
}

/// A linguistic variable: name, level of measurement, domain, and ordered terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinguisticVariable {
    name: String,
    kind: VariableKind,
    domain: Domain,
    terms: Vec<Term>,
}

/// Identifiers follow the rule language: a letter, then letters, digits or `_`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic())
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

impl LinguisticVariable {
    pub fn new(
        name: impl Into<String>,
        kind: VariableKind,
        domain: Domain,
        terms: Vec<Term>,
    ) -> Result<Self> {
        let var = LinguisticVariable {
            name: name.into(),
            kind,
            domain,
            terms,
        };
        var.validate()?;
        Ok(var)
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: String| Error::InvalidVariable {
            name: self.name.clone(),
            reason,
        };
        if !is_identifier(&self.name) {
            return Err(invalid("name is not a valid identifier".into()));
        }
        self.domain.validate(&self.name)?;
        if self.terms.is_empty() {
            return Err(invalid("at least one term is required".into()));
        }
        let mut seen = HashSet::new();
        for term in &self.terms {
            if !is_identifier(&term.name) {
                return Err(invalid(format!(
                    "term name `{}` is not a valid identifier",
                    term.name
                )));
            }
            if !seen.insert(term.name.as_str()) {
                return Err(invalid(format!("duplicate term `{}`", term.name)));
            }
            term.mf
                .validate()
                .map_err(|e| invalid(format!("term `{}`: {e}", term.name)))?;
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> VariableKind {
        self.kind
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term(&self, name: &str) -> Option<&Term> {
        self.terms.iter().find(|t| t.name == name)
    }

    pub fn term_names(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(|t| t.name.as_str())
    }

    pub fn check_domain(&self, x: f64) -> Result<()> {
        if self.domain.contains(x) {
            return Ok(());
        }
        Err(match &self.domain {
            Domain::Interval { lo, hi } => Error::DomainViolation {
                variable: self.name.clone(),
                value: x,
                lo: *lo,
                hi: *hi,
            },
            Domain::Codes { codes } => Error::InvalidCode {
                variable: self.name.clone(),
                value: x,
                codes: codes.clone(),
            },
        })
    }

    /// Degree of `x` in the named term, after checking `x` against the domain.
    pub fn membership(&self, term: &str, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        let t = self.term(term).ok_or_else(|| Error::InvalidVariable {
            name: self.name.clone(),
            reason: format!("no term `{term}`"),
        })?;
        Ok(t.mf.eval(x))
    }

    pub fn fuzzify(&self, x: f64) -> Result<FuzzifiedValue> {
        self.check_domain(x)?;
        Ok(FuzzifiedValue {
            variable: self.name.clone(),
            degrees: self
                .terms
                .iter()
                .map(|t| (t.name.clone(), t.mf.eval(x)))
                .collect(),
        })
    }

    /// Scans the domain (every code, or `samples` uniform points of the
    /// interval) and reports the point whose best term degree is lowest.
    pub fn coverage(&self, samples: usize) -> Coverage {
        match &self.domain {
            Domain::Interval { lo, hi } => self.coverage_over(*lo, *hi, samples),
            Domain::Codes { codes } => self.worst_of(codes.iter().map(|&c| c as f64)),
        }
    }

    /// Like [`coverage`](Self::coverage) but restricted to `[lo, hi]`.
    pub fn coverage_over(&self, lo: f64, hi: f64, samples: usize) -> Coverage {
        let n = samples.max(2);
        self.worst_of((0..n).map(|i| lerp(lo, hi, i, n)))
    }

    fn worst_of(&self, points: impl Iterator<Item = f64>) -> Coverage {
        let mut worst = Coverage {
            point: f64::NAN,
            degree: f64::INFINITY,
        };
        for x in points {
            let best = self.terms.iter().map(|t| t.mf.eval(x)).fold(0.0, f64::max);
            if best < worst.degree {
                worst = Coverage {
                    point: x,
                    degree: best,
                };
            }
        }
        worst
    }
}

/// Weakest-covered point found by [`LinguisticVariable::coverage`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coverage {
    pub point: f64,
    /// Highest term degree at `point`.
    pub degree: f64,
}

impl Coverage {
    pub fn is_covered(&self) -> bool {
        self.degree > 0.0
    }
}

/// `i`-th of `n` uniform samples of `[lo, hi]`, hitting both ends exactly.
pub(crate) fn lerp(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    if n <= 1 || i == 0 {
        lo
    } else if i == n - 1 {
        hi
    } else {
        lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
    }
}

/// Per-term degrees of one crisp value, in the variable's term order.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzifiedValue {
    pub variable: String,
    pub degrees: Vec<(String, f64)>,
}

impl FuzzifiedValue {
    pub fn degree(&self, term: &str) -> Option<f64> {
        self.degrees
            .iter()
            .find(|(name, _)| name == term)
            .map(|(_, d)| *d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_terms() -> LinguisticVariable {
        LinguisticVariable::new(
            "X",
            VariableKind::Ratio,
            Domain::interval(0.0, 10.0),
            vec![
                Term::new(
                    "low",
                    MembershipFunction::trapezoid(0.0, 0.0, 3.0, 6.0).unwrap(),
                ),
                Term::new(
                    "high",
                    MembershipFunction::trapezoid(4.0, 7.0, 10.0, 10.0).unwrap(),
                ),
            ],
        )
        .unwrap()
    }

    #[test]
    fn fuzzify_reports_every_term() {
        let v = two_terms();
        let f = v.fuzzify(5.0).unwrap();
        assert_eq!(f.degrees.len(), 2);
        assert!((f.degree("low").unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((f.degree("high").unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(f.degree("medium"), None);
    }

    #[test]
    fn out_of_domain_names_variable_and_bounds() {
        let err = two_terms().fuzzify(11.0).unwrap_err();
        match err {
            Error::DomainViolation {
                variable, lo, hi, ..
            } => {
                assert_eq!(variable, "X");
                assert_eq!((lo, hi), (0.0, 10.0));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(two_terms().membership("low", -0.1).is_err());
    }

    #[test]
    fn rejects_duplicate_and_missing_terms() {
        let mf = MembershipFunction::trapezoid(0.0, 0.0, 1.0, 1.0).unwrap();
        let dup = LinguisticVariable::new(
            "X",
            VariableKind::Ratio,
            Domain::interval(0.0, 1.0),
            vec![Term::new("a", mf.clone()), Term::new("a", mf)],
        );
        assert!(dup.is_err());
        let empty =
            LinguisticVariable::new("X", VariableKind::Ratio, Domain::interval(0.0, 1.0), vec![]);
        assert!(empty.is_err());
    }

    #[test]
    fn rejects_bad_names_and_domains() {
        let mf = MembershipFunction::trapezoid(0.0, 0.0, 1.0, 1.0).unwrap();
        let t = || vec![Term::new("a", mf.clone())];
        assert!(LinguisticVariable::new(
            "2x",
            VariableKind::Ratio,
            Domain::interval(0.0, 1.0),
            t()
        )
        .is_err());
        assert!(
            LinguisticVariable::new("x", VariableKind::Ratio, Domain::interval(1.0, 1.0), t())
                .is_err()
        );
        assert!(
            LinguisticVariable::new("x", VariableKind::Nominal, Domain::codes([]), t()).is_err()
        );
    }

    #[test]
    fn coverage_finds_gap() {
        let v = LinguisticVariable::new(
            "X",
            VariableKind::Ratio,
            Domain::interval(0.0, 10.0),
            vec![
                Term::new(
                    "low",
                    MembershipFunction::trapezoid(0.0, 0.0, 2.0, 4.0).unwrap(),
                ),
                Term::new(
                    "high",
                    MembershipFunction::trapezoid(6.0, 8.0, 10.0, 10.0).unwrap(),
                ),
            ],
        )
        .unwrap();
        let c = v.coverage(101);
        assert!(!c.is_covered());
        assert!(c.point >= 4.0 && c.point <= 6.0);
        assert!(two_terms().coverage(101).is_covered());
    }

    #[test]
    fn code_domain_checks_membership_of_code() {
        let v = LinguisticVariable::new(
            "L",
            VariableKind::Ordinal,
            Domain::codes([0, 1, 2]),
            vec![
                Term::new("lo", MembershipFunction::crisp_label([0, 1]).unwrap()),
                Term::new("hi", MembershipFunction::crisp_label([2]).unwrap()),
            ],
        )
        .unwrap();
        assert_eq!(v.fuzzify(2.0).unwrap().degree("hi"), Some(1.0));
        assert!(matches!(v.fuzzify(1.5), Err(Error::InvalidCode { .. })));
        assert!(matches!(v.fuzzify(3.0), Err(Error::InvalidCode { .. })));
        assert!(v.coverage(0).is_covered());
    }

    #[test]
    fn lerp_hits_endpoints() {
        assert_eq!(lerp(45.0, 120.0, 0, 1001), 45.0);
        assert_eq!(lerp(45.0, 120.0, 1000, 1001), 120.0);
        assert_eq!(lerp(0.0, 1.0, 0, 1), 0.0);
    }
}
