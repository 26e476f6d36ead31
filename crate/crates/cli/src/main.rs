use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use culture_fis::case_studies::{self, Anchor, ANCHOR_TOLERANCE_CM};
use culture_fis::dataio::{self, FisDefinition};
use culture_fis::elicitation::{elicit, ElicitationConfig, SubtractiveConfig};
use culture_fis::{parse_rules, validate_rules, AxisSpec, LinguisticVariable, SurfaceGrid};

/// Fuzzy inference from cultural variables to behaviour parameters.
#[derive(Parser)]
#[command(name = "culture-fis", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a linguistic variable from a `label,value` CSV.
    Elicit(ElicitArgs),
    /// Check a rule base against variable definitions.
    Validate(ValidateArgs),
    /// Evaluate a system on one input profile.
    Eval(EvalArgs),
    /// Export a 1-D or 2-D output grid as CSV.
    Surface(SurfaceArgs),
    /// Re-run a bundled case study and compare with the reference distances.
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct ElicitArgs {
    /// CSV with a `value` column and an optional `label` column.
    #[arg(long)]
    data: PathBuf,
    /// Variable domain as `lo,hi`.
    #[arg(long, value_parser = parse_domain, allow_hyphen_values = true)]
    domain: (f64, f64),
    /// Subtractive-clustering radius, relative to the data range.
    #[arg(long, default_value_t = 0.5)]
    radius: f64,
    /// Name of the new variable.
    #[arg(long, default_value = "C")]
    name: String,
    /// Catalog to write.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    /// System document; its own rules are checked unless --rules is given.
    #[arg(long, conflicts_with = "catalog")]
    fis: Option<PathBuf>,
    /// Variable catalog; needs --rules, --inputs and --outputs.
    #[arg(long, requires_all = ["rules", "inputs", "outputs"])]
    catalog: Option<PathBuf>,
    /// Rule file, or `-` for standard input.
    #[arg(long)]
    rules: Option<String>,
    /// Comma-separated input variable names.
    #[arg(long, value_delimiter = ',')]
    inputs: Vec<String>,
    /// Comma-separated output variable names.
    #[arg(long, value_delimiter = ',')]
    outputs: Vec<String>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    fis: PathBuf,
    /// Input values as `var=value[,var=value...]`; may be repeated.
    #[arg(long = "in", value_delimiter = ',', value_parser = parse_assignment, allow_hyphen_values = true)]
    inputs: Vec<(String, f64)>,
}

#[derive(Args)]
struct SurfaceArgs {
    #[arg(long)]
    fis: PathBuf,
    /// Sweep as `var=lo:hi:steps`; give one or two.
    #[arg(long, required = true, num_args = 1, allow_hyphen_values = true)]
    axis: Vec<AxisSpec>,
    /// Values for inputs not swept, as `var=value[,var=value...]`.
    #[arg(long, value_delimiter = ',', value_parser = parse_assignment, allow_hyphen_values = true)]
    fix: Vec<(String, f64)>,
    /// Output variable; required only when the system has several.
    #[arg(long)]
    output: Option<String>,
    /// CSV file to write; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(long, value_parser = ["1", "2"])]
    case: String,
}

/// A check ran to completion and failed.
#[derive(Debug)]
struct CheckFailed;

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("check failed")
    }
}

impl std::error::Error for CheckFailed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Elicit(a) => cmd_elicit(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Surface(a) => cmd_surface(a),
        Command::Reproduce(a) => cmd_reproduce(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<CheckFailed>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn parse_domain(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| format!("`{s}`: expected lo,hi"))?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("`{lo}` is not a number"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("`{hi}` is not a number"))?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("`{s}`: need finite lo < hi"));
    }
    Ok((lo, hi))
}

fn parse_assignment(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("`{s}`: expected var=value"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("`{value}` is not a number"))?;
    Ok((name.trim().to_owned(), value))
}

fn cmd_elicit(args: ElicitArgs) -> Result<()> {
    let (lo, hi) = args.domain;
    let data = dataio::load_training_csv(&args.data, lo, hi)?;
    let config = ElicitationConfig {
        subtractive: SubtractiveConfig::with_radius(args.radius),
        ..ElicitationConfig::default()
    };
    let result = elicit(&args.name, &data, &config)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }

    let catalog = dataio::Catalog::new(vec![result.variable.clone()])?.with_provenance(format!(
        "{}: elicited from {} (radius {})",
        args.name,
        args.data.display(),
        args.radius
    ));
    dataio::save_catalog(&catalog, &args.out)?;

    let mut out = io::stdout().lock();
    writeln!(out, "k={}", result.clusters.k())?;
    let centers: Vec<String> = result
        .clusters
        .centers
        .iter()
        .map(|c| format!("{c:.4}"))
        .collect();
    writeln!(out, "centers={}", centers.join(","))?;
    for (term, fit) in result.variable.terms().iter().zip(&result.fits) {
        writeln!(out, "{} residual={:.6}", term.name, fit.residual)?;
    }
    Ok(())
}

fn read_text(source: &str) -> Result<String> {
    if source == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading rules from stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(source).with_context(|| format!("reading {source}"))
    }
}

fn pick(catalog: &dataio::Catalog, names: &[String]) -> Result<Vec<LinguisticVariable>> {
    names
        .iter()
        .map(|n| {
            catalog
                .get(n)
                .cloned()
                .with_context(|| format!("variable `{n}` is not in the catalog"))
        })
        .collect()
}

fn cmd_validate(args: ValidateArgs) -> Result<()> {
    let (catalog, inputs, outputs, text) = match (&args.fis, &args.catalog) {
        (Some(path), None) => {
            let def = dataio::load_fis(path)?;
            let text = match &args.rules {
                Some(src) => read_text(src)?,
                None => def.rules.clone(),
            };
            let inputs = if args.inputs.is_empty() {
                def.inputs.clone()
            } else {
                args.inputs.clone()
            };
            let outputs = if args.outputs.is_empty() {
                def.outputs.clone()
            } else {
                args.outputs.clone()
            };
            (def.catalog(), inputs, outputs, text)
        }
        (None, Some(path)) => {
            let catalog = dataio::load_catalog(path)?;
            let text = read_text(args.rules.as_deref().unwrap_or("-"))?;
            (catalog, args.inputs.clone(), args.outputs.clone(), text)
        }
        _ => bail!("give either --fis or --catalog"),
    };
    let inputs = pick(&catalog, &inputs)?;
    let outputs = pick(&catalog, &outputs)?;

    let rules = match parse_rules(&text) {
        Ok(r) => r,
        Err(diags) => {
            eprintln!("{diags}");
            return Err(CheckFailed.into());
        }
    };
    if let Err(diags) = validate_rules(&rules, &inputs, &outputs) {
        eprintln!("{diags}");
        return Err(CheckFailed.into());
    }
    println!("ok: {} rule(s)", rules.len());
    Ok(())
}

fn load_system(path: &Path) -> Result<culture_fis::FuzzyInferenceSystem> {
    let def = dataio::load_fis(path)?;
    Ok(def.build()?)
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let fis = load_system(&args.fis)?;
    let outputs = fis.evaluate(args.inputs.iter().map(|(n, v)| (n.as_str(), *v)))?;
    let mut out = io::stdout().lock();
    for (name, value) in outputs {
        writeln!(out, "{name}={value}")?;
    }
    Ok(())
}

fn cmd_surface(args: SurfaceArgs) -> Result<()> {
    if args.axis.len() > 2 {
        bail!("at most two --axis options are allowed");
    }
    let fis = load_system(&args.fis)?;
    let grid = SurfaceGrid::compute(&fis, &args.axis, &args.fix, args.output.as_deref())?;
    let csv = grid.to_csv();
    match &args.out {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => io::stdout().lock().write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<()> {
    let start = Instant::now();
    let (def, anchors): (FisDefinition, &[Anchor]) = match args.case.as_str() {
        "1" => (
            case_studies::case1_definition()?,
            &case_studies::CASE1_ANCHORS,
        ),
        _ => (
            case_studies::case2_definition()?,
            &case_studies::CASE2_ANCHORS,
        ),
    };
    let elicited = case_studies::elicit_individualism()?;
    let fis = case_studies::with_individualism(&def, elicited.variable)?;

    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{:<16} {:>10} {:>12} {:>10} {:>8}",
        "input", "C", "expected_cm", "actual_cm", "delta"
    )?;
    let mut all_ok = true;
    for a in anchors {
        let actual = fis.evaluate_single(a.inputs())?;
        let delta = (actual - a.expected_cm).abs();
        all_ok &= delta <= ANCHOR_TOLERANCE_CM;
        let input = match a.gender {
            Some(g) => format!("{} C2={g}", a.label),
            None => a.label.to_owned(),
        };
        writeln!(
            out,
            "{input:<16} {:>10} {:>12.2} {:>10.2} {:>8.2}",
            a.individualism, a.expected_cm, actual, delta
        )?;
    }
    eprintln!(
        "case {}: {} within {ANCHOR_TOLERANCE_CM} cm ({:.0} ms)",
        args.case,
        if all_ok { "all rows" } else { "NOT all rows" },
        start.elapsed().as_secs_f64() * 1e3
    );
    if all_ok {
        Ok(())
    } else {
        Err(CheckFailed.into())
    }
}
