//! Dual and primal stochastic dominance checks, plus CDF crossings.

use dualrisk::apportionment::{make_pair, GapSpec};
use dualrisk::dominance::{crossing_pattern, dual_sd_check, primal_sd_check, PrimalVariant};
use dualrisk::lottery::EqualProbLottery;
use dualrisk::rational::rat;
use dualrisk::repro::{divergence_a, divergence_b};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (a, b) = (divergence_a(), divergence_b());
    for m in 1..=3 {
        println!("B over A, dual   {}", dual_sd_check(&a, &b, m));
        println!(
            "B over A, primal {}",
            primal_sd_check(&a, &b, m, PrimalVariant::Plain)
        );
    }

    let base = EqualProbLottery::from_integers(&[1, 2, 4])?;
    let pair = make_pair(&base, 3, &rat(1, 6), &GapSpec::minimal(3), 0, 1)?;
    let (c, d) = (pair.c_lottery(), pair.d_lottery());
    println!("{pair}");
    println!("D over C, dual   {}", dual_sd_check(&c, &d, 3));
    println!(
        "D over C, ekern  {}",
        primal_sd_check(&c, &d, 3, PrimalVariant::Ekern)
    );
    let crossings = crossing_pattern(&c, &d);
    let points: Vec<String> = crossings.points.iter().map(|x| x.to_string()).collect();
    println!("CDFs cross at {}", points.join(", "));
    Ok(())
}
