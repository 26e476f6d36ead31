//! Response surfaces over one or two inputs, for external plotting.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::inference::FuzzyInferenceSystem;
use crate::variable::lerp;

/// `variable=lo:hi:steps`; `steps` points including both ends
/// (a single step samples `lo` only).
#[derive(Debug, Clone, PartialEq)]
pub struct AxisSpec {
    pub variable: String,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl AxisSpec {
    pub fn values(&self) -> Vec<f64> {
        (0..self.steps)
            .map(|i| lerp(self.lo, self.hi, i, self.steps))
            .collect()
    }
}

impl FromStr for AxisSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| {
            Error::InvalidParameter(format!("axis `{s}`: {why} (expected var=lo:hi:steps)"))
        };
        let (variable, range) = s.split_once('=').ok_or_else(|| bad("missing `=`"))?;
        let parts: Vec<&str> = range.split(':').collect();
        let [lo, hi, steps] = parts[..] else {
            return Err(bad("need three `:`-separated fields"));
        };
        let lo: f64 = lo.trim().parse().map_err(|_| bad("lo is not a number"))?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad("hi is not a number"))?;
        let steps: usize = steps
            .trim()
            .parse()
            .map_err(|_| bad("steps is not a positive integer"))?;
        if steps == 0 {
            return Err(bad("steps must be at least 1"));
        }
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(bad("need finite lo <= hi"));
        }
        Ok(AxisSpec {
            variable: variable.trim().to_owned(),
            lo,
            hi,
            steps,
        })
    }
}

/// Output values of one variable over a 1-D or 2-D grid, row-major
/// (first axis varies slowest).
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceGrid {
    pub axes: Vec<AxisSpec>,
    pub output: String,
    pub values: Vec<f64>,
}

impl SurfaceGrid {
    /// Sweeps the system over the axes. Every input must be covered by an
    /// axis or appear in `fixed`.
    pub fn compute(
        fis: &FuzzyInferenceSystem,
        axes: &[AxisSpec],
        fixed: &[(String, f64)],
        output: Option<&str>,
    ) -> Result<Self> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(Error::InvalidParameter(format!(
                "surfaces need one or two axes, got {}",
                axes.len()
            )));
        }
        if axes.len() == 2 && axes[0].variable == axes[1].variable {
            return Err(Error::InvalidParameter(
                "both axes sweep the same variable".into(),
            ));
        }
        let output = match output {
            Some(name) => fis
                .output(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_owned()))?
                .name()
                .to_owned(),
            None if fis.outputs().len() == 1 => fis.outputs()[0].name().to_owned(),
            None => {
                return Err(Error::InvalidParameter(
                    "system has several outputs; choose one".into(),
                ))
            }
        };
        let first = axes[0].values();
        let second = axes.get(1).map_or_else(|| vec![f64::NAN], AxisSpec::values);
        let mut values = Vec::with_capacity(first.len() * second.len());
        for &x in &first {
            for &y in &second {
                let mut inputs: Vec<(&str, f64)> = vec![(axes[0].variable.as_str(), x)];
                if let Some(ax) = axes.get(1) {
                    inputs.push((ax.variable.as_str(), y));
                }
                inputs.extend(fixed.iter().map(|(n, v)| (n.as_str(), *v)));
                values.push(fis.evaluate(inputs)?[&output]);
            }
        }
        Ok(SurfaceGrid {
            axes: axes.to_vec(),
            output,
            values,
        })
    }

    /// 1-D: two columns `axis,output`. 2-D: a header row holding the second
    /// axis values, then one row per first-axis value.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let first = self.axes[0].values();
        match self.axes.get(1) {
            None => {
                writeln!(out, "{},{}", self.axes[0].variable, self.output).unwrap();
                for (x, v) in first.iter().zip(&self.values) {
                    writeln!(out, "{x},{v}").unwrap();
                }
            }
            Some(second) => {
                let ys = second.values();
                write!(out, "{}\\{}", self.axes[0].variable, second.variable).unwrap();
                for y in &ys {
                    write!(out, ",{y}").unwrap();
                }
                out.push('\n');
                for (x, row) in first.iter().zip(self.values.chunks(ys.len())) {
                    write!(out, "{x}").unwrap();
                    for v in row {
                        write!(out, ",{v}").unwrap();
                    }
                    out.push('\n');
                }
            }
        }
        out
    }
}
