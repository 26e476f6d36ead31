//! The two conversational-distance systems: Individualism to distance, and
//! Individualism plus gender to distance.
//!
//! The Individualism variable is elicited from the bundled Hofstede scores.
//! Output breakpoints were never published, so they are calibrated once by
//! a coarse grid search ([`calibrate_case1`], [`calibrate_case2`]) and
//! shipped as fixture files under `fixtures/`. The reference distances are
//! the published ones; everything else is fixture data.

use crate::dataio::{parse_training_csv, FisDefinition};
use crate::elicitation::{elicit, Elicitation, ElicitationConfig, TrainingSet};
use crate::error::Result;
use crate::inference::FuzzyInferenceSystem;
use crate::membership::MembershipFunction;
use crate::rules::parse_rules;
use crate::variable::{Domain, LinguisticVariable, Term, VariableKind};

pub const HOFSTEDE_CSV: &str = include_str!("../fixtures/hofstede_individualism.csv");
pub const CASE1_FIS_JSON: &str = include_str!("../fixtures/case1_fis.json");
pub const CASE2_FIS_JSON: &str = include_str!("../fixtures/case2_fis.json");

pub const INDIVIDUALISM: &str = "C";
pub const GENDER: &str = "C2";
pub const DISTANCE: &str = "P";

/// Conversational distance range in centimetres.
pub const DISTANCE_RANGE: (f64, f64) = (45.0, 120.0);

pub const CASE1_RULES: &str = "\
# Individualism -> conversational distance
if C is LC1 then P is close
if C is LC2 then P is far
";

pub const CASE2_RULES: &str = "\
# Individualism and gender -> conversational distance
if C is LC1 and C2 is female then P is close
if C is LC2 and C2 is female then P is medium
if C is LC1 and C2 is male then P is medium
if C is LC2 and C2 is male then P is far
";

/// A reference input profile with its published output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Anchor {
    pub label: &'static str,
    pub individualism: f64,
    /// `None` for the single-input system.
    pub gender: Option<f64>,
    pub expected_cm: f64,
}

impl Anchor {
    pub fn inputs(&self) -> Vec<(&'static str, f64)> {
        let mut v = vec![(INDIVIDUALISM, self.individualism)];
        if let Some(g) = self.gender {
            v.push((GENDER, g));
        }
        v
    }
}

pub const CASE1_ANCHORS: [Anchor; 2] = [
    Anchor {
        label: "Arab countries",
        individualism: 38.0,
        gender: None,
        expected_cm: 69.9,
    },
    Anchor {
        label: "Germany",
        individualism: 67.0,
        gender: None,
        expected_cm: 100.7,
    },
];

pub const CASE2_ANCHORS: [Anchor; 4] = [
    Anchor {
        label: "Arab_woman",
        individualism: 38.0,
        gender: Some(0.0),
        expected_cm: 63.63,
    },
    Anchor {
        label: "German_woman",
        individualism: 67.0,
        gender: Some(0.0),
        expected_cm: 84.7,
    },
    Anchor {
        label: "Arab_man",
        individualism: 38.0,
        gender: Some(1.0),
        expected_cm: 87.51,
    },
    Anchor {
        label: "German_man",
        individualism: 67.0,
        gender: Some(1.0),
        expected_cm: 109.34,
    },
];

/// Allowed deviation from the published distances, in centimetres.
pub const ANCHOR_TOLERANCE_CM: f64 = 5.0;

pub fn hofstede_training_set() -> Result<TrainingSet> {
    parse_training_csv(HOFSTEDE_CSV.as_bytes(), 0.0, 100.0)
}

/// Elicits the Individualism variable from the bundled scores with default settings.
pub fn elicit_individualism() -> Result<Elicitation> {
    elicit(
        INDIVIDUALISM,
        &hofstede_training_set()?,
        &ElicitationConfig::default(),
    )
}

/// Gender on `[0, 1]`: 0 is female, 1 is male.
pub fn gender_variable() -> LinguisticVariable {
    LinguisticVariable::new(
        GENDER,
        VariableKind::Nominal,
        Domain::interval(0.0, 1.0),
        vec![
            Term::new(
                "female",
                MembershipFunction::Trapezoid {
                    a: 0.0,
                    b: 0.0,
                    c: 0.25,
                    d: 0.5,
                },
            ),
            Term::new(
                "male",
                MembershipFunction::Trapezoid {
                    a: 0.5,
                    b: 0.75,
                    c: 1.0,
                    d: 1.0,
                },
            ),
        ],
    )
    .expect("static definition")
}

pub fn case1_definition() -> Result<FisDefinition> {
    FisDefinition::from_json(CASE1_FIS_JSON)
}

pub fn case2_definition() -> Result<FisDefinition> {
    FisDefinition::from_json(CASE2_FIS_JSON)
}

/// Case-study system from the bundled fixture.
pub fn case1_fis() -> Result<FuzzyInferenceSystem> {
    case1_definition()?.build()
}

pub fn case2_fis() -> Result<FuzzyInferenceSystem> {
    case2_definition()?.build()
}

/// Rebuilds a fixture system around a freshly elicited Individualism variable.
pub fn with_individualism(
    def: &FisDefinition,
    individualism: LinguisticVariable,
) -> Result<FuzzyInferenceSystem> {
    let mut def = def.clone();
    for v in &mut def.variables {
        if v.name() == INDIVIDUALISM {
            *v = individualism.clone();
        }
    }
    def.build()
}

fn distance_variable(terms: Vec<Term>) -> Result<LinguisticVariable> {
    let (lo, hi) = DISTANCE_RANGE;
    LinguisticVariable::new(
        DISTANCE,
        VariableKind::Ratio,
        Domain::interval(lo, hi),
        terms,
    )
}

/// Largest absolute deviation from the anchors, or `None` if evaluation fails.
pub fn max_anchor_error(fis: &FuzzyInferenceSystem, anchors: &[Anchor]) -> Option<f64> {
    anchors.iter().try_fold(0.0_f64, |worst, a| {
        let p = fis.evaluate_single(a.inputs()).ok()?;
        Some(worst.max((p - a.expected_cm).abs()))
    })
}

/// True if the output never decreases along `samples` points of Individualism
/// in `[0, 100]` with the remaining inputs fixed.
pub fn is_monotone_in_individualism(
    fis: &FuzzyInferenceSystem,
    others: &[(&str, f64)],
    samples: usize,
) -> bool {
    let mut prev = f64::NEG_INFINITY;
    for i in 0..samples {
        let c = 100.0 * i as f64 / (samples - 1) as f64;
        let mut inputs = vec![(INDIVIDUALISM, c)];
        inputs.extend_from_slice(others);
        match fis.evaluate_single(inputs) {
            Ok(p) if p >= prev => prev = p,
            _ => return false,
        }
    }
    true
}

/// `f(67, male) - f(67, female) - f(38, male) + f(38, female)`: zero for any
/// additive surface.
pub fn interaction(values: [f64; 4]) -> f64 {
    let [woman_low, woman_high, man_low, man_high] = values;
    man_high - woman_high - man_low + woman_low
}

/// Breakpoint grid: 45 to 120 cm in 2.5 cm steps.
fn grid() -> Vec<f64> {
    (0..=30).map(|i| 45.0 + 2.5 * i as f64).collect()
}

#[derive(Debug, Clone)]
pub struct Calibration {
    pub output: LinguisticVariable,
    pub max_error: f64,
    pub evaluated: usize,
}

/// Ranks every candidate by worst anchor error, then returns the best one
/// that passes `feasible`. Constraint checks only run in rank order.
fn ranked_search<P: Copy>(
    candidates: impl Iterator<Item = P>,
    build: impl Fn(&P) -> Option<(FuzzyInferenceSystem, LinguisticVariable)>,
    anchors: &[Anchor],
    feasible: impl Fn(&FuzzyInferenceSystem) -> bool,
) -> Option<(f64, P, LinguisticVariable, usize)> {
    let mut scored: Vec<(f64, P)> = candidates
        .filter_map(|p| {
            let (fis, _) = build(&p)?;
            Some((max_anchor_error(&fis, anchors)?, p))
        })
        .collect();
    let evaluated = scored.len();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    scored.into_iter().find_map(|(err, p)| {
        let (fis, out) = build(&p)?;
        feasible(&fis).then_some((err, p, out, evaluated))
    })
}

/// Grid search for `close = (45, 45, c, d)` and `far = (a, b, 120, 120)`
/// minimizing the worst anchor error, subject to a nondecreasing response over
/// 1000 samples of Individualism.
pub fn calibrate_case1(individualism: &LinguisticVariable) -> Result<Calibration> {
    let rules = parse_rules(CASE1_RULES)?;
    let g = grid();
    let (lo, hi) = DISTANCE_RANGE;
    let candidates = g.iter().enumerate().flat_map(|(i, &c)| {
        let g = &g;
        g[i..].iter().flat_map(move |&d| {
            g.iter()
                .enumerate()
                .flat_map(move |(k, &a)| g[k..].iter().map(move |&b| [c, d, a, b]))
        })
    });
    let build = |p: &[f64; 4]| {
        let out = distance_variable(vec![
            Term::new(
                "close",
                MembershipFunction::trapezoid(lo, lo, p[0], p[1]).ok()?,
            ),
            Term::new(
                "far",
                MembershipFunction::trapezoid(p[2], p[3], hi, hi).ok()?,
            ),
        ])
        .ok()?;
        let fis = FuzzyInferenceSystem::new(
            vec![individualism.clone()],
            vec![out.clone()],
            rules.clone(),
        )
        .ok()?;
        Some((fis, out))
    };
    let (max_error, _, output, evaluated) =
        ranked_search(candidates, build, &CASE1_ANCHORS, |fis| {
            is_monotone_in_individualism(fis, &[], 1000)
        })
        .ok_or_else(|| {
            crate::Error::FitFailed("no monotone breakpoint set found on the grid".into())
        })?;
    Ok(Calibration {
        output,
        max_error,
        evaluated,
    })
}

/// Two-stage search over `close = (45, 45, c, d)`, `medium = (a, b, c, d)`
/// and `far = (a, b, 120, 120)`: an exhaustive pass over vertical-edged
/// shapes on the grid, then coordinate-wise refinement of all eight
/// breakpoints.
///
/// Constraints: the published orderings (female below male at each score,
/// low score below high score for each gender) and a response nondecreasing
/// in Individualism for both genders.
pub fn calibrate_case2(individualism: &LinguisticVariable) -> Result<Calibration> {
    let rules = parse_rules(CASE2_RULES)?;
    let gender = gender_variable();
    let (lo, hi) = DISTANCE_RANGE;
    let build = |p: &[f64; 8]| -> Option<(FuzzyInferenceSystem, LinguisticVariable)> {
        let out = distance_variable(vec![
            Term::new(
                "close",
                MembershipFunction::trapezoid(lo, lo, p[0], p[1]).ok()?,
            ),
            Term::new(
                "medium",
                MembershipFunction::trapezoid(p[2], p[3], p[4], p[5]).ok()?,
            ),
            Term::new(
                "far",
                MembershipFunction::trapezoid(p[6], p[7], hi, hi).ok()?,
            ),
        ])
        .ok()?;
        let fis = FuzzyInferenceSystem::new(
            vec![individualism.clone(), gender.clone()],
            vec![out.clone()],
            rules.clone(),
        )
        .ok()?;
        Some((fis, out))
    };

    let g = grid();
    let candidates = g.iter().flat_map(|&close| {
        let g = &g;
        g.iter().enumerate().flat_map(move |(i, &m1)| {
            g[i..].iter().flat_map(move |&m2| {
                g.iter()
                    .map(move |&far| [close, close, m1, m1, m2, m2, far, far])
            })
        })
    });
    let (_, mut params, _, mut evaluated) =
        ranked_search(candidates, build, &CASE2_ANCHORS, case2_constraints).ok_or_else(|| {
            crate::Error::FitFailed("no feasible breakpoint set found on the grid".into())
        })?;

    let score = |p: &[f64; 8]| -> Option<(f64, LinguisticVariable)> {
        let (fis, out) = build(p)?;
        let err = max_anchor_error(&fis, &CASE2_ANCHORS)?;
        case2_constraints(&fis).then_some((err, out))
    };
    let mut best = score(&params).expect("stage one result is feasible");
    loop {
        let mut improved = false;
        for k in 0..params.len() {
            for &v in &g {
                if v == params[k] {
                    continue;
                }
                let mut trial = params;
                trial[k] = v;
                evaluated += 1;
                if let Some((err, out)) = score(&trial) {
                    if err < best.0 {
                        best = (err, out);
                        params = trial;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(Calibration {
        output: best.1,
        max_error: best.0,
        evaluated,
    })
}

fn case2_constraints(fis: &FuzzyInferenceSystem) -> bool {
    let values: Option<Vec<f64>> = CASE2_ANCHORS
        .iter()
        .map(|a| fis.evaluate_single(a.inputs()).ok())
        .collect();
    let Some(v) = values else { return false };
    let [woman_low, woman_high, man_low, man_high] = [v[0], v[1], v[2], v[3]];
    woman_low < man_low
        && woman_high < man_high
        && woman_low < woman_high
        && man_low < man_high
        && is_monotone_in_individualism(fis, &[(GENDER, 0.0)], 1000)
        && is_monotone_in_individualism(fis, &[(GENDER, 1.0)], 1000)
}

/// Builds fixture documents from a calibration result.
pub fn fixture_definition(
    individualism: &LinguisticVariable,
    gender: Option<&LinguisticVariable>,
    output: &LinguisticVariable,
    rules: &str,
    notes: &[&str],
) -> Result<FisDefinition> {
    let mut inputs = vec![individualism.clone()];
    inputs.extend(gender.cloned());
    let fis = FuzzyInferenceSystem::new(inputs, vec![output.clone()], parse_rules(rules)?)?;
    let mut def = FisDefinition::from_fis(&fis);
    def.provenance = notes.iter().map(|s| s.to_string()).collect();
    Ok(def)
}
