//! Portfolio choice with a derivative supplement.
//!
//! The investor splits `w0` between a bond returning `r` and a stock bought
//! at `S0`. The dual-theory objective is linear in the stock position, so
//! the optimum is a corner. A zero-cost derivative menu changes the return
//! lottery; returns are valued through the price lottery
//! (`V[R] = (V[price] - S0) / S0`), which keeps outcomes non-negative.

use std::cmp::Ordering;
use std::fmt;

use num::{Signed, Zero};

use crate::dominance::dual_sd_check;
use crate::error::{Error, Result};
use crate::lottery::{EqualProbLottery, Lottery};
use crate::rational::{int, Rational};
use crate::valuation::{dt_value, eu_value, UtilityFunction};
use crate::value::Value;
use crate::weighting::WeightingSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct PortfolioProblem {
    pub w0: Rational,
    pub r: Rational,
    pub s0: Rational,
    pub stock_prices: EqualProbLottery,
}

impl PortfolioProblem {
    pub fn new(
        w0: Rational,
        r: Rational,
        s0: Rational,
        stock_prices: EqualProbLottery,
    ) -> Result<Self> {
        if w0.is_negative() {
            return Err(Error::Domain(format!("initial wealth {w0} is negative")));
        }
        if !s0.is_positive() {
            return Err(Error::Domain(format!(
                "initial stock price {s0} must be positive"
            )));
        }
        Ok(PortfolioProblem {
            w0,
            r,
            s0,
            stock_prices,
        })
    }
}

/// Closed interval of stock prices on which an instrument pays.
pub type Window = Option<(Rational, Rational)>;

#[derive(Debug, Clone, PartialEq)]
pub enum Instrument {
    LongPut {
        strike: Rational,
    },
    ShortCall {
        strike: Rational,
    },
    /// Pays `|s - center|` inside the window.
    Straddle {
        center: Rational,
        window: Window,
    },
    /// Pays `-|s - center|` inside the window.
    ShortStraddle {
        center: Rational,
        window: Window,
    },
    /// Sets the whole menu's payoff to zero at this stock price.
    DigitalZeroAt {
        point: Rational,
    },
}

impl Instrument {
    fn payoff(&self, s: &Rational) -> Rational {
        let inside = |w: &Window| w.as_ref().is_none_or(|(lo, hi)| s >= lo && s <= hi);
        match self {
            Instrument::LongPut { strike } => (strike - s).max(Rational::zero()),
            Instrument::ShortCall { strike } => -(s - strike).max(Rational::zero()),
            Instrument::Straddle { center, window } if inside(window) => (s - center).abs(),
            Instrument::ShortStraddle { center, window } if inside(window) => -(s - center).abs(),
            _ => Rational::zero(),
        }
    }
}

impl fmt::Display for Instrument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let window = |w: &Window| match w {
            Some((lo, hi)) => format!(" on [{lo}, {hi}]"),
            None => String::new(),
        };
        match self {
            Instrument::LongPut { strike } => write!(f, "long put at {strike}"),
            Instrument::ShortCall { strike } => write!(f, "short call at {strike}"),
            Instrument::Straddle { center, window: w } => {
                write!(f, "straddle at {center}{}", window(w))
            }
            Instrument::ShortStraddle { center, window: w } => {
                write!(f, "short straddle at {center}{}", window(w))
            }
            Instrument::DigitalZeroAt { point } => write!(f, "payoff zero at {point}"),
        }
    }
}

/// Instruments plus the premium that makes the joint expected payoff zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeMenu {
    pub instruments: Vec<Instrument>,
    pub premium: Rational,
}

impl DerivativeMenu {
    pub fn empty() -> DerivativeMenu {
        DerivativeMenu {
            instruments: Vec::new(),
            premium: Rational::zero(),
        }
    }

    /// Prices the instruments at their expected payoff under `prices`.
    pub fn priced(instruments: Vec<Instrument>, prices: &EqualProbLottery) -> DerivativeMenu {
        let gross = DerivativeMenu {
            instruments,
            premium: Rational::zero(),
        };
        let premium = prices
            .outcomes()
            .iter()
            .map(|s| gross.payoff(s))
            .sum::<Rational>()
            / int(prices.n() as i64);
        DerivativeMenu { premium, ..gross }
    }

    /// Payoff net of premium at stock price `s`.
    pub fn payoff(&self, s: &Rational) -> Rational {
        let zeroed = self
            .instruments
            .iter()
            .any(|i| matches!(i, Instrument::DigitalZeroAt { point } if point == s));
        let gross: Rational = if zeroed {
            Rational::zero()
        } else {
            self.instruments.iter().map(|i| i.payoff(s)).sum()
        };
        gross - &self.premium
    }

    /// Expected net payoff; zero for a correctly priced menu.
    pub fn expected_payoff(&self, prices: &EqualProbLottery) -> Rational {
        prices
            .outcomes()
            .iter()
            .map(|s| self.payoff(s))
            .sum::<Rational>()
            / int(prices.n() as i64)
    }
}

impl fmt::Display for DerivativeMenu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.instruments.is_empty() {
            return write!(f, "no derivatives");
        }
        let names: Vec<String> = self.instruments.iter().map(|i| i.to_string()).collect();
        write!(f, "{} (premium {})", names.join(" + "), self.premium)
    }
}

/// Stock price plus menu payoff, state by state.
pub fn portfolio_lottery(pp: &PortfolioProblem, menu: &DerivativeMenu) -> Result<Lottery> {
    let p = pp.stock_prices.state_probability();
    Lottery::new(
        pp.stock_prices
            .outcomes()
            .iter()
            .map(|s| (s + menu.payoff(s), p.clone())),
    )
}

/// Dual-theory value of the (supplemented) return lottery.
pub fn portfolio_value(
    pp: &PortfolioProblem,
    menu: &DerivativeMenu,
    w: &WeightingSpec,
) -> Result<Value> {
    if !menu.expected_payoff(&pp.stock_prices).is_zero() {
        return Err(Error::Domain(format!(
            "menu `{menu}` does not have zero expected payoff"
        )));
    }
    let v = dt_value(&portfolio_lottery(pp, menu)?, w)?;
    Ok(match v {
        Value::Exact(x) => Value::Exact((x - &pp.s0) / &pp.s0),
        Value::Real(x) => {
            let s0 = crate::rational::to_f64(&pp.s0);
            Value::Real((x - s0) / s0)
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaDecision {
    /// Amount invested in the stock: 0 or `w0`.
    pub alpha: Rational,
    /// True when the return value equals `r`, so any split is optimal.
    pub indifferent: bool,
}

/// Corner solution of the linear objective.
pub fn optimal_alpha(
    pp: &PortfolioProblem,
    menu: &DerivativeMenu,
    w: &WeightingSpec,
) -> Result<AlphaDecision> {
    let v = portfolio_value(pp, menu, w)?;
    let ordering = match &v {
        Value::Exact(x) => x.cmp(&pp.r),
        Value::Real(x) => x
            .partial_cmp(&crate::rational::to_f64(&pp.r))
            .unwrap_or(Ordering::Equal),
    };
    Ok(match ordering {
        Ordering::Less => AlphaDecision {
            alpha: Rational::zero(),
            indifferent: false,
        },
        Ordering::Greater => AlphaDecision {
            alpha: pp.w0.clone(),
            indifferent: false,
        },
        Ordering::Equal => AlphaDecision {
            alpha: Rational::zero(),
            indifferent: true,
        },
    })
}

/// Zero-cost menu aimed at an order-`order` dual improvement:
/// a collar at the mean (2), a straddle at the mean (3), or a long straddle
/// on the lower half and a short straddle on the upper half with the payoff
/// zeroed at the split point (4). The result is checked against the dual
/// dominance order.
pub fn build_menu(order: u32, prices: &EqualProbLottery) -> Result<DerivativeMenu> {
    let mean_of = |xs: &[Rational]| xs.iter().sum::<Rational>() / int(xs.len() as i64);
    let outcomes = prices.outcomes();
    let instruments = match order {
        2 => {
            let strike = mean_of(outcomes);
            vec![
                Instrument::LongPut {
                    strike: strike.clone(),
                },
                Instrument::ShortCall { strike },
            ]
        }
        3 => vec![Instrument::Straddle {
            center: mean_of(outcomes),
            window: None,
        }],
        4 => {
            let n = outcomes.len();
            if n < 4 || !n.is_multiple_of(2) {
                return Err(Error::Domain(format!(
                    "the fourth-order menu needs an even number of at least 4 states, got {n}"
                )));
            }
            let (lower, upper) = outcomes.split_at(n / 2);
            let split = (&lower[lower.len() - 1] + &upper[0]) / int(2);
            vec![
                Instrument::Straddle {
                    center: mean_of(lower),
                    window: Some((outcomes[0].clone(), split.clone())),
                },
                Instrument::ShortStraddle {
                    center: mean_of(upper),
                    window: Some((split.clone(), outcomes[n - 1].clone())),
                },
                Instrument::DigitalZeroAt { point: split },
            ]
        }
        _ => {
            return Err(Error::Domain(format!(
                "derivative menus exist for orders 2, 3 and 4, got {order}"
            )))
        }
    };
    let menu = DerivativeMenu::priced(instruments, prices);
    let pp = PortfolioProblem {
        w0: Rational::zero(),
        r: Rational::zero(),
        s0: int(1),
        stock_prices: prices.clone(),
    };
    let supplemented = portfolio_lottery(&pp, &menu)?;
    if !dual_sd_check(&prices.to_lottery(), &supplemented, order).holds {
        return Err(Error::DominanceCheckFailed { order });
    }
    Ok(menu)
}

/// Expected-utility comparison of the supplemented portfolio against the
/// plain stock: `Greater` means the supplement is preferred.
pub fn eu_ranking(
    pp: &PortfolioProblem,
    menu: &DerivativeMenu,
    u: &UtilityFunction,
) -> Result<Ordering> {
    let with = eu_value(&portfolio_lottery(pp, menu)?, u)?;
    let without = eu_value(&pp.stock_prices.to_lottery(), u)?;
    Ok(with.cmp(&without))
}
