//! Parsimonious pairs move m consecutive states by signed binomial
//! coefficients, so their premium is an m-th finite difference of `h`.

use dualrisk::apportionment::{binomial_increments, dual_utility_premium, make_parsimonious_pair};
use dualrisk::harness::forward_difference;
use dualrisk::lottery::EqualProbLottery;
use dualrisk::rational::{int, rat};
use dualrisk::weighting::WeightingSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 10;
    let base = EqualProbLottery::new((1..=n).map(|i| int(2 * i)).collect())?;
    let w = WeightingSpec::dual_power(6)?;
    for m in 2..=5u32 {
        let big_m = 1u64 << m;
        let j = 3;
        let pair = make_parsimonious_pair(&base, j, m, big_m)?;
        let inc: Vec<String> = binomial_increments(m, big_m)
            .iter()
            .map(|x| x.to_string())
            .collect();
        let premium = dual_utility_premium(&pair, &w)?;
        let sign = if m % 2 == 1 { int(1) } else { int(-1) };
        let diff =
            forward_difference(&w, m, &rat(j as i64, n), &rat(1, n))? * sign / int(big_m as i64);
        println!(
            "m = {m}: increments [{}], premium {premium}, scaled difference {diff}",
            inc.join(", ")
        );
    }
    Ok(())
}
