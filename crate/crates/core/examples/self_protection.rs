//! Self-protection effort with and without an independent background risk.

use dualrisk::applications::protection::{
    sp_background_effect, sp_solve, EffortModel, SelfProtectionProblem,
};
use dualrisk::rational::int;
use dualrisk::repro::calibrated_problem;
use dualrisk::weighting::WeightingSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for text in ["dualpower:m=3", "poly:0;0;3;-2"] {
        let w: WeightingSpec = text.parse()?;
        let sp = calibrated_problem(int(2), &w)?;
        let effect = sp_background_effect(&sp, &w)?;
        println!(
            "{text}: e* {:.6} -> {:.6} with background risk ({}), p(e*) = {:.6}, -h'(1/4)+2h'(1/2)-h'(3/4) = {}",
            effect.e_without, effect.e_with, effect.direction, effect.p_at_opt, effect.calibrated_expression
        );
    }

    // Linear weighting: the optimum has a closed form.
    let (p0, k) = (0.8, 0.5);
    let sp = SelfProtectionProblem::new(
        int(20),
        int(10),
        int(0),
        EffortModel::Exponential { p0, k },
        (0.0, 5.0),
    )?;
    let sol = sp_solve(&sp, &WeightingSpec::identity())?;
    println!(
        "identity: e* = {:.10}, closed form {:.10}",
        sol.e_star,
        (k * p0 * 10.0).ln() / k
    );
    Ok(())
}
