//! Two lotteries with equal mean and variance: an expected-utility maximizer
//! with quadratic utility is indifferent, while a dual-theory agent with a
//! quadratic weighting function strictly prefers `A`.

use dualrisk::rational::{fraction_string, rat};
use dualrisk::repro::{divergence_a, divergence_b};
use dualrisk::valuation::{dt_value, dual_moment, eu_value, primal_moment, UtilityFunction};
use dualrisk::weighting::WeightingSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (a, b) = (divergence_a(), divergence_b());
    println!("A = {a}\nB = {b}");
    println!(
        "variance A = {}, B = {}",
        primal_moment(&a, 2),
        primal_moment(&b, 2)
    );
    println!(
        "second dual moment A = {}, B = {}",
        dual_moment(&a, 2),
        dual_moment(&b, 2)
    );

    let u = UtilityFunction::Quadratic(rat(1, 10));
    println!(
        "EU with u(x) = x - x^2/10: A = {}, B = {}",
        eu_value(&a, &u)?,
        eu_value(&b, &u)?
    );

    for beta in [rat(0, 1), rat(1, 4), rat(1, 2), rat(1, 1)] {
        let w = WeightingSpec::quadratic(beta.clone())?;
        let gap = dt_value(&a, &w)? - dt_value(&b, &w)?;
        println!("beta = {:>3}: V[A] - V[B] = {gap}", fraction_string(&beta));
    }
    Ok(())
}
