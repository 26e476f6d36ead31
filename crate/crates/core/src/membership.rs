//! Membership function shapes.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A fuzzy set shape over a real domain. Degrees are always in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MembershipFunction {
    /// Piecewise-linear trapezoid with feet `a`, `d` and plateau `[b, c]`.
    /// `a == b` or `c == d` gives a shoulder.
    Trapezoid { a: f64, b: f64, c: f64, d: f64 },
    /// Sum of two Gaussian bumps,
    /// `alpha1 * exp(-((x - beta1) / gamma1)^2) + alpha2 * exp(-((x - beta2) / gamma2)^2)`,
    /// clamped to `[0, 1]`.
    Gauss2 {
        alpha1: f64,
        beta1: f64,
        gamma1: f64,
        alpha2: f64,
        beta2: f64,
        gamma2: f64,
    },
    /// Crisp catalogue entry: degree 1 on the listed codes, 0 elsewhere.
    CrispLabel { matching_levels: BTreeSet<i64> },
}

impl MembershipFunction {
    pub fn trapezoid(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let mf = MembershipFunction::Trapezoid { a, b, c, d };
        mf.validate()?;
        Ok(mf)
    }

    pub fn gauss2(params: Gauss2Params) -> Result<Self> {
        let mf = params.into();
        Self::validate(&mf)?;
        Ok(mf)
    }

    pub fn crisp_label<I: IntoIterator<Item = i64>>(levels: I) -> Result<Self> {
        let mf = MembershipFunction::CrispLabel {
            matching_levels: levels.into_iter().collect(),
        };
        mf.validate()?;
        Ok(mf)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MembershipFunction::Trapezoid { a, b, c, d } => {
                if ![a, b, c, d].iter().all(|v| v.is_finite()) {
                    return Err(Error::InvalidMembership(
                        "trapezoid breakpoints must be finite".into(),
                    ));
                }
                if !(a <= b && b <= c && c <= d) {
                    return Err(Error::InvalidMembership(format!(
                        "trapezoid requires a <= b <= c <= d, got ({a}, {b}, {c}, {d})"
                    )));
                }
            }
            MembershipFunction::Gauss2 {
                alpha1,
                beta1,
                gamma1,
                alpha2,
                beta2,
                gamma2,
            } => {
                if ![alpha1, beta1, gamma1, alpha2, beta2, gamma2]
                    .iter()
                    .all(|v| v.is_finite())
                {
                    return Err(Error::InvalidMembership(
                        "gauss2 parameters must be finite".into(),
                    ));
                }
                if gamma1 <= 0.0 || gamma2 <= 0.0 {
                    return Err(Error::InvalidMembership(format!(
                        "gauss2 widths must be positive, got gamma1={gamma1}, gamma2={gamma2}"
                    )));
                }
            }
            MembershipFunction::CrispLabel {
                ref matching_levels,
            } => {
                if matching_levels.is_empty() {
                    return Err(Error::InvalidMembership(
                        "crisp label needs at least one matching level".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Degree of membership of `x`, clamped to `[0, 1]`.
    ///
    /// No domain check happens here; see
    /// [`LinguisticVariable::membership`](crate::LinguisticVariable::membership).
    pub fn eval(&self, x: f64) -> f64 {
        let raw = match *self {
            MembershipFunction::Trapezoid { a, b, c, d } => trapezoid(a, b, c, d, x),
            MembershipFunction::Gauss2 { .. } => {
                let p = Gauss2Params::try_from(self).expect("gauss2 variant");
                p.raw(x)
            }
            MembershipFunction::CrispLabel {
                ref matching_levels,
            } => {
                if x.fract() == 0.0
                    && x >= i64::MIN as f64
                    && x <= i64::MAX as f64
                    && matching_levels.contains(&(x as i64))
                {
                    1.0
                } else {
                    0.0
                }
            }
        };
        raw.clamp(0.0, 1.0)
    }
}

fn trapezoid(a: f64, b: f64, c: f64, d: f64, x: f64) -> f64 {
    if x < a || x > d {
        0.0
    } else if x >= b && x <= c {
        1.0
    } else if x < b {
        (x - a) / (b - a)
    } else {
        (d - x) / (d - c)
    }
}

/// Parameters of the two-term Gaussian shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gauss2Params {
    pub alpha1: f64,
    pub beta1: f64,
    pub gamma1: f64,
    pub alpha2: f64,
    pub beta2: f64,
    pub gamma2: f64,
}

impl Gauss2Params {
    /// Unclamped value of the two-term sum.
    pub fn raw(&self, x: f64) -> f64 {
        let t1 = (x - self.beta1) / self.gamma1;
        let t2 = (x - self.beta2) / self.gamma2;
        self.alpha1 * (-t1 * t1).exp() + self.alpha2 * (-t2 * t2).exp()
    }

    pub fn to_array(self) -> [f64; 6] {
        [
            self.alpha1,
            self.beta1,
            self.gamma1,
            self.alpha2,
            self.beta2,
            self.gamma2,
        ]
    }

    pub fn from_array(p: [f64; 6]) -> Self {
        Gauss2Params {
            alpha1: p[0],
            beta1: p[1],
            gamma1: p[2],
            alpha2: p[3],
            beta2: p[4],
            gamma2: p[5],
        }
    }
}

impl From<Gauss2Params> for MembershipFunction {
    fn from(p: Gauss2Params) -> Self {
        MembershipFunction::Gauss2 {
            alpha1: p.alpha1,
            beta1: p.beta1,
            gamma1: p.gamma1,
            alpha2: p.alpha2,
            beta2: p.beta2,
            gamma2: p.gamma2,
        }
    }
}

impl TryFrom<&MembershipFunction> for Gauss2Params {
    type Error = Error;

    fn try_from(mf: &MembershipFunction) -> Result<Self> {
        match *mf {
            MembershipFunction::Gauss2 {
                alpha1,
                beta1,
                gamma1,
                alpha2,
                beta2,
                gamma2,
            } => Ok(Gauss2Params {
                alpha1,
                beta1,
                gamma1,
                alpha2,
                beta2,
                gamma2,
            }),
            _ => Err(Error::InvalidMembership("not a gauss2 shape".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn trapezoid_plateau_and_edges() {
        let shoulder = MembershipFunction::trapezoid(0.0, 0.0, 30.0, 70.0).unwrap();
        assert_eq!(shoulder.eval(15.0), 1.0);
        assert_eq!(shoulder.eval(0.0), 1.0);
        assert_eq!(shoulder.eval(50.0), 0.5);
        assert_eq!(shoulder.eval(70.0), 0.0);

        let t = MembershipFunction::trapezoid(10.0, 20.0, 30.0, 40.0).unwrap();
        assert_eq!(t.eval(15.0), 0.5);
        assert_eq!(t.eval(5.0), 0.0);
        assert_eq!(t.eval(45.0), 0.0);
        assert_eq!(t.eval(35.0), 0.5);
    }

    #[test]
    fn degenerate_trapezoids() {
        // a == b == c == d: a single spike
        let spike = MembershipFunction::trapezoid(3.0, 3.0, 3.0, 3.0).unwrap();
        assert_eq!(spike.eval(3.0), 1.0);
        assert_eq!(spike.eval(3.0001), 0.0);
        let right = MembershipFunction::trapezoid(0.5, 0.75, 1.0, 1.0).unwrap();
        assert_eq!(right.eval(1.0), 1.0);
        assert_eq!(right.eval(0.5), 0.0);
    }

    #[test]
    fn trapezoid_rejects_unordered_breakpoints() {
        assert!(MembershipFunction::trapezoid(20.0, 10.0, 30.0, 40.0).is_err());
        assert!(MembershipFunction::trapezoid(0.0, 1.0, f64::NAN, 2.0).is_err());
    }

    #[test]
    fn gauss2_clamps_at_peak() {
        let mf = MembershipFunction::gauss2(Gauss2Params {
            alpha1: 1.0,
            beta1: 0.0,
            gamma1: 1.0,
            alpha2: 1.0,
            beta2: 0.0,
            gamma2: 1.0,
        })
        .unwrap();
        assert_eq!(mf.eval(0.0), 1.0);
    }

    #[test]
    fn gauss2_matches_direct_formula() {
        let mf = MembershipFunction::gauss2(Gauss2Params {
            alpha1: 0.9,
            beta1: 20.0,
            gamma1: 15.0,
            alpha2: 0.3,
            beta2: 60.0,
            gamma2: 10.0,
        })
        .unwrap();
        // 0.9 * e^0 + 0.3 * e^{-(40/10)^2} = 0.9 + 0.3 e^{-16}
        let expected = 0.9 + 0.3 * 1.125_351_747_192_591e-7;
        assert_relative_eq!(mf.eval(20.0), expected, max_relative = 1e-15);
    }

    #[test]
    fn gauss2_rejects_nonpositive_width() {
        let p = Gauss2Params {
            alpha1: 1.0,
            beta1: 0.0,
            gamma1: 0.0,
            alpha2: 1.0,
            beta2: 0.0,
            gamma2: 1.0,
        };
        assert!(MembershipFunction::gauss2(p).is_err());
    }

    #[test]
    fn crisp_label_matches_codes_only() {
        let mf = MembershipFunction::crisp_label([0, 1]).unwrap();
        assert_eq!(mf.eval(0.0), 1.0);
        assert_eq!(mf.eval(1.0), 1.0);
        assert_eq!(mf.eval(2.0), 0.0);
        assert_eq!(mf.eval(0.5), 0.0);
        assert!(MembershipFunction::crisp_label([]).is_err());
    }
}
