//! Mamdani inference: min conjunction, min implication, max aggregation and
//! Center-of-Area defuzzification over uniform output samples.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::rules::{validate_rules, RuleBase};
use crate::variable::{lerp, Domain, FuzzifiedValue, LinguisticVariable};

/// Number of output-domain samples used unless configured otherwise.
pub const DEFAULT_RESOLUTION: usize = 1001;

/// An output membership curve sampled at `degrees.len()` uniform points of `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregatedCurve {
    pub lo: f64,
    pub hi: f64,
    pub degrees: Vec<f64>,
}

impl AggregatedCurve {
    pub fn zeros(lo: f64, hi: f64, samples: usize) -> Self {
        AggregatedCurve {
            lo,
            hi,
            degrees: vec![0.0; samples],
        }
    }

    /// Samples `f` over `[lo, hi]`.
    pub fn sample(lo: f64, hi: f64, samples: usize, f: impl Fn(f64) -> f64) -> Self {
        AggregatedCurve {
            lo,
            hi,
            degrees: (0..samples).map(|i| f(lerp(lo, hi, i, samples))).collect(),
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        lerp(self.lo, self.hi, i, self.degrees.len())
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.degrees.len()).map(|i| self.x(i))
    }
}

/// Centroid `sum(x * mu) / sum(mu)` over the curve's samples.
pub fn defuzzify_coa(curve: &AggregatedCurve) -> Result<f64> {
    if curve.degrees.len() < 2 {
        return Err(Error::InvalidCurve(format!(
            "need at least 2 samples, got {}",
            curve.degrees.len()
        )));
    }
    let (mut num, mut den) = (0.0, 0.0);
    for (x, mu) in curve.xs().zip(&curve.degrees) {
        num += x * mu;
        den += mu;
    }
    if den <= 0.0 {
        return Err(Error::InvalidCurve("curve is identically zero".into()));
    }
    // rounding can push the ratio a hair outside the sampled range
    Ok((num / den).clamp(curve.lo, curve.hi))
}

#[derive(Debug, Clone)]
struct CompiledRule {
    /// (input index, term index) per antecedent
    antecedents: Vec<(usize, usize)>,
    output: usize,
    /// consequent membership sampled over the output domain
    consequent: Vec<f64>,
}

/// A validated, immutable multiple-input multiple-output Mamdani system.
///
/// Safe to share across threads; evaluation takes `&self` only.
#[derive(Debug, Clone)]
pub struct FuzzyInferenceSystem {
    inputs: Vec<LinguisticVariable>,
    outputs: Vec<LinguisticVariable>,
    rules: RuleBase,
    resolution: usize,
    compiled: Vec<CompiledRule>,
}

impl FuzzyInferenceSystem {
    pub fn new(
        inputs: Vec<LinguisticVariable>,
        outputs: Vec<LinguisticVariable>,
        rules: RuleBase,
    ) -> Result<Self> {
        Self::with_resolution(inputs, outputs, rules, DEFAULT_RESOLUTION)
    }

    pub fn with_resolution(
        inputs: Vec<LinguisticVariable>,
        outputs: Vec<LinguisticVariable>,
        rules: RuleBase,
        resolution: usize,
    ) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::InvalidParameter(format!(
                "defuzzification resolution must be at least 2, got {resolution}"
            )));
        }
        let mut names = std::collections::HashSet::new();
        for v in inputs.iter().chain(&outputs) {
            v.validate()?;
            if !names.insert(v.name()) {
                return Err(Error::InvalidVariable {
                    name: v.name().into(),
                    reason: "declared more than once".into(),
                });
            }
        }
        for v in &outputs {
            if !matches!(v.domain(), Domain::Interval { .. }) {
                return Err(Error::InvalidVariable {
                    name: v.name().into(),
                    reason: "output variables need an interval domain".into(),
                });
            }
        }
        validate_rules(&rules, &inputs, &outputs)?;

        let input_index: HashMap<&str, usize> = inputs
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name(), i))
            .collect();
        let output_index: HashMap<&str, usize> = outputs
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name(), i))
            .collect();
        let term_index = |var: &LinguisticVariable, term: &str| {
            var.term_names()
                .position(|t| t == term)
                .expect("validated term")
        };

        let compiled = rules
            .rules()
            .iter()
            .map(|rule| {
                let antecedents = rule
                    .antecedents
                    .iter()
                    .map(|c| {
                        let vi = input_index[c.variable.as_str()];
                        (vi, term_index(&inputs[vi], &c.term))
                    })
                    .collect();
                let output = output_index[rule.consequent.variable.as_str()];
                let var = &outputs[output];
                let mf = &var.terms()[term_index(var, &rule.consequent.term)].mf;
                let (lo, hi) = var.domain().bounds();
                let consequent =
                    AggregatedCurve::sample(lo, hi, resolution, |x| mf.eval(x)).degrees;
                CompiledRule {
                    antecedents,
                    output,
                    consequent,
                }
            })
            .collect();

        Ok(FuzzyInferenceSystem {
            inputs,
            outputs,
            rules,
            resolution,
            compiled,
        })
    }

    pub fn inputs(&self) -> &[LinguisticVariable] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[LinguisticVariable] {
        &self.outputs
    }

    pub fn rules(&self) -> &RuleBase {
        &self.rules
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn input(&self, name: &str) -> Option<&LinguisticVariable> {
        self.inputs.iter().find(|v| v.name() == name)
    }

    pub fn output(&self, name: &str) -> Option<&LinguisticVariable> {
        self.outputs.iter().find(|v| v.name() == name)
    }

    /// Orders the supplied `(variable, value)` pairs by input declaration,
    /// rejecting unknown, duplicate, missing and out-of-domain values.
    fn crisp_inputs<'a, I>(&self, values: I) -> Result<Vec<f64>>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let mut slots: Vec<Option<f64>> = vec![None; self.inputs.len()];
        for (name, x) in values {
            let i = self
                .inputs
                .iter()
                .position(|v| v.name() == name)
                .ok_or_else(|| Error::UnknownVariable(name.to_owned()))?;
            if slots[i].replace(x).is_some() {
                return Err(Error::DuplicateInput(name.to_owned()));
            }
        }
        slots
            .into_iter()
            .zip(&self.inputs)
            .map(|(slot, var)| {
                let x = slot.ok_or_else(|| Error::MissingInput(var.name().to_owned()))?;
                var.check_domain(x)?;
                Ok(x)
            })
            .collect()
    }

    /// Fuzzifies every input, in declaration order.
    pub fn fuzzify<'a, I>(&self, values: I) -> Result<Vec<FuzzifiedValue>>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let crisp = self.crisp_inputs(values)?;
        self.inputs
            .iter()
            .zip(crisp)
            .map(|(v, x)| v.fuzzify(x))
            .collect()
    }

    fn aggregate(&self, fuzzified: &[FuzzifiedValue]) -> Vec<AggregatedCurve> {
        let mut curves: Vec<AggregatedCurve> = self
            .outputs
            .iter()
            .map(|v| {
                let (lo, hi) = v.domain().bounds();
                AggregatedCurve::zeros(lo, hi, self.resolution)
            })
            .collect();
        for rule in &self.compiled {
            let strength = rule
                .antecedents
                .iter()
                .map(|&(vi, ti)| fuzzified[vi].degrees[ti].1)
                .fold(1.0, f64::min);
            if strength <= 0.0 {
                continue;
            }
            let curve = &mut curves[rule.output].degrees;
            for (agg, &mu) in curve.iter_mut().zip(&rule.consequent) {
                *agg = agg.max(mu.min(strength));
            }
        }
        curves
    }

    /// Aggregated (clipped, max-combined) output curve per output variable.
    pub fn infer<'a, I>(&self, values: I) -> Result<BTreeMap<String, AggregatedCurve>>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let fuzzified = self.fuzzify(values)?;
        Ok(self
            .outputs
            .iter()
            .map(|v| v.name().to_owned())
            .zip(self.aggregate(&fuzzified))
            .collect())
    }

    /// Crisp value per output variable.
    pub fn evaluate<'a, I>(&self, values: I) -> Result<BTreeMap<String, f64>>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let fuzzified = self.fuzzify(values)?;
        self.outputs
            .iter()
            .zip(self.aggregate(&fuzzified))
            .map(|(v, curve)| {
                let crisp = defuzzify_coa(&curve).map_err(|_| Error::NoRuleFired {
                    variable: v.name().to_owned(),
                })?;
                Ok((v.name().to_owned(), crisp))
            })
            .collect()
    }

    /// Evaluates a system with a single output variable.
    pub fn evaluate_single<'a, I>(&self, values: I) -> Result<f64>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        if self.outputs.len() != 1 {
            return Err(Error::InvalidParameter(format!(
                "system has {} outputs, expected exactly one",
                self.outputs.len()
            )));
        }
        Ok(self
            .evaluate(values)?
            .into_values()
            .next()
            .expect("one output"))
    }
}
