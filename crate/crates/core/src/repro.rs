//! Regenerates every worked number as CSV tables, one file per topic.
//!
//! Each row is `section,quantity,exact,decimal`. Exact values are `p/q`
//! strings; quantities computed in floating point leave `exact` empty and
//! labels leave `decimal` empty.

use std::path::{Path, PathBuf};

use crate::applications::portfolio::{
    build_menu, portfolio_lottery, portfolio_value, DerivativeMenu, PortfolioProblem,
};
use crate::applications::protection::{
    sp_background_effect, sp_foc_lhs, sp_solve, EffortModel, SelfProtectionProblem,
};
use crate::apportionment::{make_pair, GapSpec};
use crate::dominance::dual_sd_check;
use crate::error::Result;
use crate::lottery::{EqualProbLottery, Lottery};
use crate::rational::{self, decimal_string, fraction_string, int, rat, Rational};
use crate::valuation::{dt_value, dual_moment, eu_value, mean, primal_moment, UtilityFunction};
use crate::value::Value;
use crate::weighting::WeightingSpec;

pub const DECIMAL_DIGITS: usize = 12;

/// One output table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub section: String,
    pub quantity: String,
    pub exact: String,
    pub decimal: String,
}

impl Row {
    fn exact(section: &str, quantity: impl Into<String>, r: &Rational) -> Row {
        Row {
            section: section.into(),
            quantity: quantity.into(),
            exact: fraction_string(r),
            decimal: decimal_string(r, DECIMAL_DIGITS),
        }
    }

    fn real(section: &str, quantity: impl Into<String>, x: f64) -> Row {
        let decimal = rational::from_f64(x)
            .map_or_else(|| x.to_string(), |r| decimal_string(&r, DECIMAL_DIGITS));
        Row {
            section: section.into(),
            quantity: quantity.into(),
            exact: String::new(),
            decimal,
        }
    }

    fn value(section: &str, quantity: impl Into<String>, v: &Value) -> Row {
        match v {
            Value::Exact(r) => Row::exact(section, quantity, r),
            Value::Real(x) => Row::real(section, quantity, *x),
        }
    }

    fn text(section: &str, quantity: impl Into<String>, text: impl Into<String>) -> Row {
        Row {
            section: section.into(),
            quantity: quantity.into(),
            exact: text.into(),
            decimal: String::new(),
        }
    }
}

/// `[x1 x2 ...]` with outcomes in increasing order, repeated per state for
/// equal-probability lotteries.
pub fn bracket(outcomes: &[Rational]) -> String {
    let parts: Vec<String> = outcomes.iter().map(fraction_string).collect();
    format!("[{}]", parts.join(" "))
}

fn lottery_bracket(l: &Lottery) -> String {
    let parts: Vec<String> = l
        .states()
        .iter()
        .map(|s| {
            format!(
                "{}@{}",
                fraction_string(&s.outcome),
                fraction_string(&s.probability)
            )
        })
        .collect();
    format!("[{}]", parts.join(" "))
}

pub fn divergence_a() -> Lottery {
    Lottery::new([(int(0), rat(1, 6)), (int(3), rat(5, 6))]).expect("valid lottery")
}

pub fn divergence_b() -> Lottery {
    Lottery::new([
        (int(1), rat(1, 6)),
        (int(2), rat(1, 2)),
        (int(4), rat(1, 3)),
    ])
    .expect("valid lottery")
}

pub fn divergence_i() -> Lottery {
    Lottery::new([(int(2), rat(1, 2)), (int(3), rat(1, 2))]).expect("valid lottery")
}

fn divergence() -> Result<Table> {
    let s = "divergence";
    let (a, b, i) = (divergence_a(), divergence_b(), divergence_i());
    let mut rows = vec![
        Row::text(s, "lottery I", lottery_bracket(&i)),
        Row::text(s, "lottery A", lottery_bracket(&a)),
        Row::text(s, "lottery B", lottery_bracket(&b)),
    ];
    for (name, l) in [("A", &a), ("B", &b)] {
        rows.push(Row::exact(s, format!("mean {name}"), &mean(l)));
        for k in 2..=3 {
            rows.push(Row::exact(
                s,
                format!("central moment {k} {name}"),
                &primal_moment(l, k),
            ));
        }
        for k in 1..=3 {
            rows.push(Row::exact(
                s,
                format!("dual moment {k} {name}"),
                &dual_moment(l, k),
            ));
        }
    }
    for beta in [rat(0, 1), rat(1, 4), rat(1, 2), rat(1, 1)] {
        let w = WeightingSpec::quadratic(beta.clone())?;
        let va = dt_value(&a, &w)?;
        let vb = dt_value(&b, &w)?;
        let tag = fraction_string(&beta);
        rows.push(Row::value(s, format!("V[A] quadratic beta={tag}"), &va));
        rows.push(Row::value(s, format!("V[B] quadratic beta={tag}"), &vb));
        rows.push(Row::value(
            s,
            format!("V[A]-V[B] quadratic beta={tag}"),
            &(va - vb),
        ));
    }
    let u = UtilityFunction::Quadratic(rat(1, 10));
    rows.push(Row::exact(s, "EU[A] u=x-x^2/10", &eu_value(&a, &u)?));
    rows.push(Row::exact(s, "EU[B] u=x-x^2/10", &eu_value(&b, &u)?));
    Ok(Table {
        name: "divergence",
        rows,
    })
}

/// The worked pairs: order 2 on `[1 2]` with `M = 2`, order 3 on `[1 2 4]`
/// and `[1 2 3]` with `M = 6`, order 4 on `[1 2 4 7]` with `M = 4`.
pub fn worked_pairs() -> Vec<(&'static str, Vec<i64>, u32, i64)> {
    vec![
        ("order 2", vec![1, 2], 2, 2),
        ("order 3", vec![1, 2, 4], 3, 6),
        ("order 3 flat", vec![1, 2, 3], 3, 6),
        ("order 4", vec![1, 2, 4, 7], 4, 4),
    ]
}

fn moments() -> Result<Table> {
    let mut rows = Vec::new();
    for (s, base, m, big_m) in worked_pairs() {
        let base = EqualProbLottery::from_integers(&base)?;
        let pair = make_pair(&base, m, &rat(1, big_m), &GapSpec::minimal(m), 0, 1)?;
        rows.push(Row::text(s, "M", big_m.to_string()));
        rows.push(Row::text(s, "base", bracket(base.outcomes())));
        for (name, l) in [("C", &pair.c), ("D", &pair.d)] {
            let lottery = l.to_lottery();
            rows.push(Row::text(
                s,
                format!("lottery {name}"),
                bracket(l.outcomes()),
            ));
            rows.push(Row::exact(s, format!("mean {name}"), &mean(&lottery)));
            for k in 2..=4 {
                rows.push(Row::exact(
                    s,
                    format!("central moment {k} {name}"),
                    &primal_moment(&lottery, k),
                ));
            }
            for k in 1..=m {
                rows.push(Row::exact(
                    s,
                    format!("dual moment {k} {name}"),
                    &dual_moment(&lottery, k),
                ));
            }
        }
        let report = dual_sd_check(&pair.c_lottery(), &pair.d_lottery(), m);
        rows.push(Row::text(
            s,
            format!("D dominates C at dual degree {m}"),
            report.holds.to_string(),
        ));
        let w = WeightingSpec::dual_power(m)?;
        let premium = dt_value(&pair.d_lottery(), &w)? - dt_value(&pair.c_lottery(), &w)?;
        rows.push(Row::value(
            s,
            format!("V[D]-V[C] dualpower m={m}"),
            &premium,
        ));
    }
    Ok(Table {
        name: "moments",
        rows,
    })
}

/// Stock price sets of the worked portfolio examples for orders 2, 3, 4.
pub fn worked_price_sets() -> Vec<(u32, Vec<i64>)> {
    vec![
        (2, vec![1, 3]),
        (3, vec![1, 3, 5, 7]),
        (4, vec![1, 3, 5, 7, 9, 11, 13, 15]),
    ]
}

fn portfolio() -> Result<Table> {
    let mut rows = Vec::new();
    for (m, prices) in worked_price_sets() {
        let s = format!("order {m}");
        let s = s.as_str();
        let stock = EqualProbLottery::from_integers(&prices)?;
        let s0 = mean(&stock.to_lottery());
        let pp = PortfolioProblem::new(int(100), rat(1, 100), s0, stock)?;
        let menu = build_menu(m, &pp.stock_prices)?;
        let price_lottery = portfolio_lottery(&pp, &menu)?;
        let outcomes: Vec<Rational> = price_lottery.outcomes().cloned().collect();
        rows.push(Row::text(
            s,
            "stock prices",
            bracket(pp.stock_prices.outcomes()),
        ));
        rows.push(Row::text(s, "menu", menu.to_string()));
        rows.push(Row::exact(s, "premium", &menu.premium));
        let payoffs: Vec<Rational> = pp
            .stock_prices
            .outcomes()
            .iter()
            .map(|x| menu.payoff(x))
            .collect();
        rows.push(Row::text(s, "payoffs", bracket(&payoffs)));
        rows.push(Row::text(s, "portfolio price lottery", bracket(&outcomes)));
        let w = WeightingSpec::dual_power(m)?;
        rows.push(Row::value(
            s,
            format!("V[R] dualpower m={m}"),
            &portfolio_value(&pp, &DerivativeMenu::empty(), &w)?,
        ));
        rows.push(Row::value(
            s,
            format!("V[R-bar] dualpower m={m}"),
            &portfolio_value(&pp, &menu, &w)?,
        ));
    }
    Ok(Table {
        name: "portfolio",
        rows,
    })
}

/// Power effort model calibrated so that `p(e*) = 1/2` without background
/// risk: `w0 = 20`, loss 10, `p0 = 0.6`, `a = 1/2`, effort in `[0, 5]`.
pub fn calibrated_problem(epsilon: Rational, w: &WeightingSpec) -> Result<SelfProtectionProblem> {
    let effort = EffortModel::calibrated_power(0.6, 0.5, 10.0, w)?;
    SelfProtectionProblem::new(int(20), int(10), epsilon, effort, (0.0, 5.0))
}

fn protection() -> Result<Table> {
    let mut rows = Vec::new();
    let cases = [
        ("dualpower m=3", WeightingSpec::dual_power(3)?),
        (
            "poly 3p^2-2p^3",
            WeightingSpec::polynomial(vec![int(0), int(0), int(3), int(-2)])?,
        ),
    ];
    for (s, w) in &cases {
        let sp = calibrated_problem(int(2), w)?;
        let effect = sp_background_effect(&sp, w)?;
        rows.push(Row::real(s, "e* without background risk", effect.e_without));
        rows.push(Row::real(s, "e* with background risk eps=2", effect.e_with));
        rows.push(Row::real(
            s,
            "p(e*) without background risk",
            effect.p_at_opt,
        ));
        rows.push(Row::value(
            s,
            "-h'(1/4)+2h'(1/2)-h'(3/4)",
            &effect.calibrated_expression,
        ));
        rows.push(Row::text(
            s,
            "effort direction",
            effect.direction.to_string(),
        ));
    }
    let s = "identity exponential";
    let (p0, k, l) = (0.8, 0.5, 10.0);
    let sp = SelfProtectionProblem::new(
        int(20),
        int(10),
        int(0),
        EffortModel::Exponential { p0, k },
        (0.0, 5.0),
    )?;
    let w = WeightingSpec::identity();
    let sol = sp_solve(&sp, &w)?;
    rows.push(Row::real(s, "e* numeric", sol.e_star));
    rows.push(Row::real(
        s,
        "e* closed form ln(k p0 l)/k",
        (k * p0 * l).ln() / k,
    ));
    let residual = sp_foc_lhs(&sp, sol.e_star, &w)?;
    rows.push(Row::text(
        s,
        "|FOC residual| < 1e-9",
        (residual.abs() < 1e-9).to_string(),
    ));
    Ok(Table {
        name: "protection",
        rows,
    })
}

pub fn all_tables() -> Result<Vec<Table>> {
    Ok(vec![divergence()?, moments()?, portfolio()?, protection()?])
}

/// Serializes a table to CSV bytes with a header row.
pub fn to_csv(table: &Table) -> Result<Vec<u8>> {
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(["section", "quantity", "exact", "decimal"])?;
    for r in &table.rows {
        out.write_record([&r.section, &r.quantity, &r.exact, &r.decimal])?;
    }
    out.into_inner()
        .map_err(|e| crate::error::Error::Io(e.to_string()))
}

/// Writes `<name>.csv` for every table into `dir`, creating it if needed.
pub fn write_repro(dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for table in all_tables()? {
        let path = dir.join(format!("{}.csv", table.name));
        std::fs::write(&path, to_csv(&table)?)?;
        paths.push(path);
    }
    Ok(paths)
}
