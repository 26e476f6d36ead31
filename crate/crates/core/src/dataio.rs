//! JSON catalogs and system definitions, and CSV training sets.
//!
//! The JSON layout is described by `schema/culture-fis.schema.json`. Every
//! document carries `schema_version`; numbers are written in shortest
//! round-trip form so save/load is lossless.

use std::collections::HashSet;
use std::fs;
use std::io::Read;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::elicitation::TrainingSet;
use crate::error::{Error, Result};
use crate::inference::{FuzzyInferenceSystem, DEFAULT_RESOLUTION};
use crate::membership::MembershipFunction;
use crate::rules::parse_rules;
use crate::variable::{is_identifier, Domain, LinguisticVariable};

pub const SCHEMA_VERSION: u64 = 1;

const MF_TYPES: [&str; 3] = ["trapezoid", "gauss2", "crisp_label"];

/// Named linguistic variables plus provenance notes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub schema_version: u64,
    #[serde(default)]
    pub provenance: Vec<String>,
    pub variables: Vec<LinguisticVariable>,
}

impl Catalog {
    pub fn new(variables: Vec<LinguisticVariable>) -> Result<Self> {
        let cat = Catalog {
            schema_version: SCHEMA_VERSION,
            provenance: Vec::new(),
            variables,
        };
        check_variables(&cat.variables)?;
        Ok(cat)
    }

    pub fn with_provenance(mut self, note: impl Into<String>) -> Self {
        self.provenance.push(note.into());
        self
    }

    pub fn get(&self, name: &str) -> Option<&LinguisticVariable> {
        self.variables.iter().find(|v| v.name() == name)
    }

    /// Adds or replaces a variable by name.
    pub fn insert(&mut self, var: LinguisticVariable) {
        match self.variables.iter_mut().find(|v| v.name() == var.name()) {
            Some(slot) => *slot = var,
            None => self.variables.push(var),
        }
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cat: Catalog = parse_document(text)?;
        check_variables(&cat.variables)?;
        Ok(cat)
    }
}

/// A complete inference system: variables, which of them are inputs and
/// outputs, and the rule text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FisDefinition {
    pub schema_version: u64,
    #[serde(default)]
    pub provenance: Vec<String>,
    pub variables: Vec<LinguisticVariable>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub rules: String,
    #[serde(default = "default_resolution")]
    pub defuzz_resolution: usize,
}

fn default_resolution() -> usize {
    DEFAULT_RESOLUTION
}

impl FisDefinition {
    pub fn from_fis(fis: &FuzzyInferenceSystem) -> Self {
        FisDefinition {
            schema_version: SCHEMA_VERSION,
            provenance: Vec::new(),
            variables: fis.inputs().iter().chain(fis.outputs()).cloned().collect(),
            inputs: fis.inputs().iter().map(|v| v.name().to_owned()).collect(),
            outputs: fis.outputs().iter().map(|v| v.name().to_owned()).collect(),
            rules: fis.rules().source().to_owned(),
            defuzz_resolution: fis.resolution(),
        }
    }

    pub fn catalog(&self) -> Catalog {
        Catalog {
            schema_version: self.schema_version,
            provenance: self.provenance.clone(),
            variables: self.variables.clone(),
        }
    }

    pub fn build(&self) -> Result<FuzzyInferenceSystem> {
        check_variables(&self.variables)?;
        let pick = |names: &[String], field: &str| -> Result<Vec<LinguisticVariable>> {
            names
                .iter()
                .enumerate()
                .map(|(i, name)| {
                    self.variables
                        .iter()
                        .find(|v| v.name() == name)
                        .cloned()
                        .ok_or_else(|| Error::Schema {
                            pointer: format!("/{field}/{i}"),
                            message: format!("no variable named `{name}`"),
                        })
                })
                .collect()
        };
        let inputs = pick(&self.inputs, "inputs")?;
        let outputs = pick(&self.outputs, "outputs")?;
        let rules = parse_rules(&self.rules)?;
        FuzzyInferenceSystem::with_resolution(inputs, outputs, rules, self.defuzz_resolution)
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let def: FisDefinition = parse_document(text)?;
        check_variables(&def.variables)?;
        Ok(def)
    }
}

fn to_canonical_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("plain data serializes");
    s.push('\n');
    s
}

fn parse_document<T: DeserializeOwned>(text: &str) -> Result<T> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Schema {
        pointer: String::new(),
        message: format!("invalid JSON: {e}"),
    })?;
    match value.get("schema_version") {
        None => {
            return Err(Error::Schema {
                pointer: "/schema_version".into(),
                message: "missing field".into(),
            })
        }
        Some(v) => match v.as_u64() {
            Some(SCHEMA_VERSION) => {}
            Some(found) => {
                return Err(Error::VersionMismatch {
                    found,
                    expected: SCHEMA_VERSION,
                })
            }
            None => {
                return Err(Error::Schema {
                    pointer: "/schema_version".into(),
                    message: "expected an unsigned integer".into(),
                })
            }
        },
    }
    check_mf_types(&value)?;
    serde_path_to_error::deserialize(value).map_err(|e| Error::Schema {
        pointer: to_pointer(e.path()),
        message: e.inner().to_string(),
    })
}

fn to_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => {
                out.push('/');
                out.push_str(&key.replace('~', "~0").replace('/', "~1"));
            }
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    out
}

fn check_mf_types(doc: &Value) -> Result<()> {
    let Some(vars) = doc.get("variables").and_then(Value::as_array) else {
        return Ok(());
    };
    for (i, var) in vars.iter().enumerate() {
        let Some(terms) = var.get("terms").and_then(Value::as_array) else {
            continue;
        };
        for (j, term) in terms.iter().enumerate() {
            if let Some(kind) = term
                .get("mf")
                .and_then(|mf| mf.get("type"))
                .and_then(Value::as_str)
            {
                if !MF_TYPES.contains(&kind) {
                    return Err(Error::UnknownMembershipType {
                        pointer: format!("/variables/{i}/terms/{j}/mf/type"),
                        found: kind.to_owned(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Structural checks with a pointer to the offending field.
fn check_variables(vars: &[LinguisticVariable]) -> Result<()> {
    let mut names = HashSet::new();
    for (i, var) in vars.iter().enumerate() {
        let base = format!("/variables/{i}");
        let fail = |field: &str, message: String| Error::Schema {
            pointer: format!("{base}{field}"),
            message,
        };
        if !is_identifier(var.name()) {
            return Err(fail(
                "/name",
                format!("`{}` is not an identifier", var.name()),
            ));
        }
        if !names.insert(var.name()) {
            return Err(fail(
                "/name",
                format!("duplicate variable `{}`", var.name()),
            ));
        }
        match var.domain() {
            Domain::Interval { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(fail(
                        "/domain/interval",
                        format!("need finite lo < hi, got [{lo}, {hi}]"),
                    ));
                }
            }
            Domain::Codes { codes } => {
                if codes.is_empty() || codes.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(fail(
                        "/domain/codes/codes",
                        "codes must be non-empty, sorted and unique".into(),
                    ));
                }
            }
        }
        if var.terms().is_empty() {
            return Err(fail("/terms", "at least one term is required".into()));
        }
        let mut term_names = HashSet::new();
        for (j, term) in var.terms().iter().enumerate() {
            let tbase = format!("/terms/{j}");
            if !is_identifier(&term.name) {
                return Err(fail(
                    &format!("{tbase}/name"),
                    format!("`{}` is not an identifier", term.name),
                ));
            }
            if !term_names.insert(term.name.as_str()) {
                return Err(fail(
                    &format!("{tbase}/name"),
                    format!("duplicate term `{}`", term.name),
                ));
            }
            if let Some((field, message)) = locate_mf_error(&term.mf) {
                return Err(fail(&format!("{tbase}/mf/{field}"), message));
            }
        }
        // anything the pointer checks above missed
        var.validate().map_err(|e| fail("", e.to_string()))?;
    }
    Ok(())
}

fn locate_mf_error(mf: &MembershipFunction) -> Option<(&'static str, String)> {
    match *mf {
        MembershipFunction::Trapezoid { a, b, c, d } => {
            let fields = [("a", a), ("b", b), ("c", c), ("d", d)];
            if let Some((name, v)) = fields.iter().find(|(_, v)| !v.is_finite()) {
                return Some((name, format!("{name} = {v} is not finite")));
            }
            fields.windows(2).find(|w| w[0].1 > w[1].1).map(|w| {
                (
                    w[1].0,
                    format!(
                        "trapezoid requires {} <= {}, got {} > {}",
                        w[0].0, w[1].0, w[0].1, w[1].1
                    ),
                )
            })
        }
        MembershipFunction::Gauss2 { gamma1, gamma2, .. } => {
            if !(gamma1 > 0.0) {
                Some(("gamma1", format!("width must be positive, got {gamma1}")))
            } else if !(gamma2 > 0.0) {
                Some(("gamma2", format!("width must be positive, got {gamma2}")))
            } else {
                None
            }
        }
        MembershipFunction::CrispLabel {
            ref matching_levels,
        } if matching_levels.is_empty() => {
            Some(("matching_levels", "at least one level is required".into()))
        }
        MembershipFunction::CrispLabel { .. } => None,
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn load_catalog(path: impl AsRef<Path>) -> Result<Catalog> {
    Catalog::from_json(&read_file(path.as_ref())?)
}

pub fn save_catalog(catalog: &Catalog, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &catalog.to_json())
}

pub fn load_fis(path: impl AsRef<Path>) -> Result<FisDefinition> {
    FisDefinition::from_json(&read_file(path.as_ref())?)
}

pub fn save_fis(def: &FisDefinition, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &def.to_json())
}

/// Reads a `label,value` (or just `value`) CSV file.
pub fn load_training_csv(path: impl AsRef<Path>, lo: f64, hi: f64) -> Result<TrainingSet> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_training_csv(file, lo, hi)
}

/// Parses training CSV from any reader. Row numbers in errors are file line numbers.
pub fn parse_training_csv<R: Read>(reader: R, lo: f64, hi: f64) -> Result<TrainingSet> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader);
    let headers = match rdr.headers() {
        Ok(h) => h.clone(),
        Err(e) => {
            return Err(Error::Csv {
                row: 1,
                message: e.to_string(),
            })
        }
    };
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::EmptyDataset);
    }
    let value_col = headers
        .iter()
        .position(|h| h.eq_ignore_ascii_case("value"))
        .ok_or_else(|| Error::Csv {
            row: 1,
            message: "header must contain a `value` column".into(),
        })?;
    let label_col = headers.iter().position(|h| h.eq_ignore_ascii_case("label"));

    let mut values = Vec::new();
    let mut labels = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Csv {
            row: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let row = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let raw = record.get(value_col).ok_or_else(|| Error::Csv {
            row,
            message: "missing value column".into(),
        })?;
        let value: f64 = raw.parse().map_err(|_| Error::Csv {
            row,
            message: format!("`{raw}` is not a number"),
        })?;
        if !value.is_finite() {
            return Err(Error::Csv {
                row,
                message: format!("`{raw}` is not a finite number"),
            });
        }
        if !(value >= lo && value <= hi) {
            return Err(Error::OutOfDomain { row, value, lo, hi });
        }
        values.push(value);
        if let Some(col) = label_col {
            labels.push(record.get(col).unwrap_or("").to_owned());
        }
    }
    if values.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let labels = label_col.map(|_| labels);
    TrainingSet::new(values, labels, lo, hi)
}
