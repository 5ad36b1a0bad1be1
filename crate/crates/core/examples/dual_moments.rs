//! Dual moments are expected minima of independent draws. The exact value
//! is compared with a seeded Monte Carlo estimate.

use dualrisk::lottery::EqualProbLottery;
use dualrisk::rational::{int, to_f64};
use dualrisk::valuation::{
    dual_moment, dual_moment_equal_prob, dual_moment_mc_oracle, dual_moment_weights,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let outcomes: Vec<_> = [1, 2, 4, 7, 11].into_iter().map(int).collect();
    let lottery = EqualProbLottery::new(outcomes.clone())?.to_lottery();
    for m in 1..=4 {
        let exact = dual_moment(&lottery, m);
        assert_eq!(exact, dual_moment_equal_prob(&outcomes, m));
        let mc = dual_moment_mc_oracle(&lottery, m, 200_000, 7);
        println!(
            "m = {m}: exact {exact} ({:.6}), monte carlo {:.6} +/- {:.6}",
            to_f64(&exact),
            mc.mean,
            mc.std_error
        );
    }
    let weights: Vec<String> = dual_moment_weights(5, 3)
        .iter()
        .map(|w| w.to_string())
        .collect();
    println!(
        "order-3 weights on the ranked states: {}",
        weights.join(", ")
    );
    Ok(())
}
