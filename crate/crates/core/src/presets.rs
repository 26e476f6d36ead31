//! Hand-specified variables for the two cases where no data is needed:
//! a fully known ordinal catalogue and a ratio variable with known terms.

use crate::membership::MembershipFunction;
use crate::variable::{Domain, LinguisticVariable, Term, VariableKind};

/// ISCED education levels 0 (pre-primary) to 8 (doctoral), one crisp term per level.
pub fn isced() -> LinguisticVariable {
    const LEVELS: [&str; 9] = [
        "pre_primary",
        "primary",
        "lower_secondary",
        "upper_secondary",
        "post_secondary",
        "short_cycle_tertiary",
        "bachelor",
        "master",
        "doctoral",
    ];
    let terms = LEVELS
        .iter()
        .zip(0i64..)
        .map(|(name, code)| {
            Term::new(
                *name,
                MembershipFunction::CrispLabel {
                    matching_levels: [code].into(),
                },
            )
        })
        .collect();
    LinguisticVariable::new("ISCED", VariableKind::Ordinal, Domain::codes(0..=8), terms)
        .expect("static definition")
}

/// Age in years over `[0, 117]` with trapezoidal developmental stages.
pub fn age() -> LinguisticVariable {
    let trap = |a, b, c, d| MembershipFunction::Trapezoid { a, b, c, d };
    LinguisticVariable::new(
        "Age",
        VariableKind::Ratio,
        Domain::interval(0.0, 117.0),
        vec![
            Term::new("toddler", trap(0.0, 0.0, 3.0, 5.0)),
            Term::new("pre_adolescent", trap(3.0, 5.0, 10.0, 12.0)),
            Term::new("adolescent", trap(10.0, 12.0, 18.0, 21.0)),
            Term::new("adult", trap(18.0, 21.0, 60.0, 67.0)),
            Term::new("elderly", trap(60.0, 67.0, 117.0, 117.0)),
        ],
    )
    .expect("static definition")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isced_code_zero_is_pre_primary_only() {
        let f = isced().fuzzify(0.0).unwrap();
        for (term, degree) in &f.degrees {
            let expected = if term == "pre_primary" { 1.0 } else { 0.0 };
            assert_eq!(*degree, expected, "{term}");
        }
        assert!(isced().fuzzify(9.0).is_err());
        assert!(isced().coverage(0).is_covered());
    }

    #[test]
    fn adult_plateau() {
        let f = age().fuzzify(40.0).unwrap();
        for (term, degree) in &f.degrees {
            let expected = if term == "adult" { 1.0 } else { 0.0 };
            assert_eq!(*degree, expected, "{term}");
        }
        assert!(age().coverage(11_701).is_covered());
    }
}
