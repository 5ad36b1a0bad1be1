//! Zero-cost derivative menus that turn a stock position into a dual
//! improvement of order 2, 3 or 4.

use std::cmp::Ordering;

use dualrisk::applications::portfolio::{
    build_menu, eu_ranking, portfolio_lottery, portfolio_value, DerivativeMenu, PortfolioProblem,
};
use dualrisk::lottery::EqualProbLottery;
use dualrisk::rational::{int, rat};
use dualrisk::repro::{bracket, worked_price_sets};
use dualrisk::valuation::{mean, UtilityFunction};
use dualrisk::weighting::WeightingSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (m, prices) in worked_price_sets() {
        let stock = EqualProbLottery::from_integers(&prices)?;
        let s0 = mean(&stock.to_lottery());
        let pp = PortfolioProblem::new(int(100), int(0), s0, stock)?;
        let menu = build_menu(m, &pp.stock_prices)?;
        let out: Vec<_> = portfolio_lottery(&pp, &menu)?.outcomes().cloned().collect();
        let w = WeightingSpec::dual_power(m)?;
        println!("order {m}: {menu}");
        println!(
            "  prices {} -> {}",
            bracket(pp.stock_prices.outcomes()),
            bracket(&out)
        );
        println!(
            "  V[R] = {}, V[R-bar] = {}",
            portfolio_value(&pp, &DerivativeMenu::empty(), &w)?,
            portfolio_value(&pp, &menu, &w)?
        );
    }

    // Expected utility does not agree on the straddle.
    let pp = PortfolioProblem::new(
        int(100),
        int(0),
        int(4),
        EqualProbLottery::from_integers(&[1, 3, 5, 7])?,
    )?;
    let menu = build_menu(3, &pp.stock_prices)?;
    let kinked = UtilityFunction::tabulated(vec![
        (int(0), int(0)),
        (int(2), int(2)),
        (int(100), int(2) + rat(98, 100)),
    ])?;
    for (name, u) in [
        ("quadratic c=1/16", UtilityFunction::Quadratic(rat(1, 16))),
        ("kinked at 2", kinked),
    ] {
        let verdict = match eu_ranking(&pp, &menu, &u)? {
            Ordering::Greater => "prefers the portfolio",
            Ordering::Less => "prefers the stock",
            Ordering::Equal => "is indifferent",
        };
        println!("EU with {name} {verdict}");
    }
    Ok(())
}
