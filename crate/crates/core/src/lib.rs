//! Fuzzy linguistic variables, an if-then rule language and a Mamdani
//! inference engine for mapping cultural profiles onto continuous robot
//! behaviour parameters.
//!
//! Inputs are encoded as [`LinguisticVariable`]s, either written by hand or
//! elicited from measurements (see [`elicitation`]). Rules are parsed from
//! text with [`parse_rules`] and combined with the variables into a
//! [`FuzzyInferenceSystem`], which maps crisp profiles to crisp outputs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod case_studies;
pub mod dataio;
pub mod elicitation;
mod error;
pub mod inference;
pub mod membership;
pub mod presets;
pub mod rules;
pub mod surface;
pub mod variable;

pub use dataio::{Catalog, FisDefinition};
pub use error::{Error, Result};
pub use inference::{defuzzify_coa, AggregatedCurve, FuzzyInferenceSystem, DEFAULT_RESOLUTION};
pub use membership::{Gauss2Params, MembershipFunction};
pub use rules::{parse_rules, validate_rules, Diagnostic, Diagnostics, Rule, RuleBase};
pub use surface::{AxisSpec, SurfaceGrid};
pub use variable::{Domain, FuzzifiedValue, LinguisticVariable, Term, VariableKind};
