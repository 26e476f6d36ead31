//! Regenerates `fixtures/case1_fis.json` and `fixtures/case2_fis.json`.
//!
//!     cargo run --release -p culture-fis --example calibrate_fixtures
//!
//! The Individualism variable is elicited from the bundled scores; the
//! distance breakpoints come from the grid searches in `case_studies`.

use std::path::Path;

use culture_fis::case_studies::{self, *};
use culture_fis::dataio::save_fis;

fn main() -> culture_fis::Result<()> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let elicited = elicit_individualism()?;
    let c = &elicited.variable;
    println!(
        "elicited k={} centers={:?}",
        elicited.clusters.k(),
        elicited.clusters.centers
    );

    let case1 = calibrate_case1(c)?;
    println!(
        "case 1: max error {:.3} cm after {} candidates: {:?}",
        case1.max_error,
        case1.evaluated,
        case1.output.terms()
    );
    let def1 = fixture_definition(
        c,
        None,
        &case1.output,
        CASE1_RULES,
        &[
            "C: elicited from fixtures/hofstede_individualism.csv with default settings",
            "P: trapezoid breakpoints calibrated on a 2.5 cm grid against the reference distances; fixture data, not published values",
        ],
    )?;
    save_fis(&def1, fixtures.join("case1_fis.json"))?;

    let case2 = calibrate_case2(c)?;
    println!(
        "case 2: max error {:.3} cm after {} candidates: {:?}",
        case2.max_error,
        case2.evaluated,
        case2.output.terms()
    );
    let gender = case_studies::gender_variable();
    let def2 = fixture_definition(
        c,
        Some(&gender),
        &case2.output,
        CASE2_RULES,
        &[
            "C: elicited from fixtures/hofstede_individualism.csv with default settings",
            "C2: gender, 0 = female, 1 = male",
            "P: trapezoid breakpoints calibrated on a 2.5 cm grid against the reference distances; fixture data, not published values",
        ],
    )?;
    save_fis(&def2, fixtures.join("case2_fis.json"))?;
    Ok(())
}
