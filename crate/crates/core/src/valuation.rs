//! Dual-theory and expected-utility evaluation, primal central moments and
//! dual moments.

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lottery::Lottery;
use crate::poly::Poly;
use crate::rational::{self, int, Rational};
use crate::value::Value;
use crate::weighting::WeightingSpec;

#[derive(Debug, Clone, PartialEq)]
pub enum UtilityFunction {
    Linear,
    /// `u(x) = x - c x^2`.
    Quadratic(Rational),
    /// `u(x) = x^k`.
    PowerInt(u32),
    /// Piecewise-linear through `(x, u(x))` knots, extended linearly past
    /// both ends using the outermost segments.
    Tabulated(Vec<(Rational, Rational)>),
}

impl UtilityFunction {
    pub fn tabulated(knots: Vec<(Rational, Rational)>) -> Result<UtilityFunction> {
        if knots.len() < 2 || knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Domain(
                "tabulated utility needs at least two knots with increasing abscissae".into(),
            ));
        }
        Ok(UtilityFunction::Tabulated(knots))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        match self {
            UtilityFunction::Linear => x.clone(),
            UtilityFunction::Quadratic(c) => x - c * x * x,
            UtilityFunction::PowerInt(k) => rational::pow(x, *k),
            UtilityFunction::Tabulated(knots) => {
                let last = knots.len() - 1;
                let idx = knots.partition_point(|(k, _)| k < x).clamp(1, last);
                let (x0, y0) = &knots[idx - 1];
                let (x1, y1) = &knots[idx];
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    fn as_poly(&self) -> Option<Poly> {
        match self {
            UtilityFunction::Linear => Some(Poly::x()),
            UtilityFunction::Quadratic(c) => Some(Poly::from_coeffs(vec![
                Rational::zero(),
                Rational::one(),
                -c.clone(),
            ])),
            UtilityFunction::PowerInt(k) => Some(Poly::monomial(Rational::one(), *k as usize)),
            UtilityFunction::Tabulated(_) => None,
        }
    }

    /// Checks that `u` does not decrease anywhere on `[lo, hi]`.
    pub fn check_monotone(&self, lo: &Rational, hi: &Rational) -> Result<()> {
        if lo >= hi {
            return Ok(());
        }
        if let Some(poly) = self.as_poly() {
            let scan = poly.derivative().sign_scan(lo, hi, true);
            if let Some((x, _)) = scan.negative {
                return Err(Error::NonMonotoneUtility {
                    lo: x,
                    hi: hi.clone(),
                });
            }
            return Ok(());
        }
        let UtilityFunction::Tabulated(knots) = self else {
            unreachable!()
        };
        let mut points = vec![lo.clone()];
        points.extend(
            knots
                .iter()
                .map(|(x, _)| x.clone())
                .filter(|x| x > lo && x < hi),
        );
        points.push(hi.clone());
        for w in points.windows(2) {
            if self.eval(&w[1]) < self.eval(&w[0]) {
                return Err(Error::NonMonotoneUtility {
                    lo: w[0].clone(),
                    hi: w[1].clone(),
                });
            }
        }
        Ok(())
    }
}

/// Dual-theory value `sum_i x_i (h(F(x_i)) - h(F(x_{i-1})))` on the
/// canonical distribution.
pub fn dt_value(lottery: &Lottery, w: &WeightingSpec) -> Result<Value> {
    let canon = lottery.canonical();
    let mut value = Value::zero();
    let mut prev_h = Value::zero();
    for (state, cum) in canon.states().iter().zip(canon.cumulative()) {
        let h = w.eval_h(&cum)?;
        value = &value + &(&Value::Exact(state.outcome.clone()) * &(&h - &prev_h));
        prev_h = h;
    }
    debug_assert!(
        agrees(&value, &dt_value_survival(&canon, w)?),
        "CDF and survival forms disagree"
    );
    Ok(value)
}

/// `sum_i hbar(S(x_{i-1})) (x_i - x_{i-1})` with `x_0 = 0`.
pub fn dt_value_survival(lottery: &Lottery, w: &WeightingSpec) -> Result<Value> {
    let canon = lottery.canonical();
    let mut value = Value::zero();
    let mut prev_x = Rational::zero();
    let mut survival = Rational::one();
    for state in canon.states() {
        let gap = &state.outcome - &prev_x;
        value = &value + &(&w.eval_hbar(&survival)? * &Value::Exact(gap));
        survival -= &state.probability;
        prev_x = state.outcome.clone();
    }
    Ok(value)
}

fn agrees(a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Exact(x), Value::Exact(y)) => x == y,
        _ => {
            let (x, y) = (a.to_f64(), b.to_f64());
            (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0)
        }
    }
}

/// Dual-theory value of a lottery given as `(outcome, probability)` pairs in
/// floating point. Pairs need not be sorted.
pub fn dt_value_f64(states: &[(f64, f64)], w: &WeightingSpec) -> Result<f64> {
    let mut sorted = states.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut value = 0.0;
    let mut cum = 0.0;
    let mut prev_h = 0.0;
    for (i, (x, p)) in sorted.iter().enumerate() {
        cum += p;
        let level = if i + 1 == sorted.len() {
            1.0
        } else {
            cum.min(1.0)
        };
        let h = w.eval_h_f64(level)?;
        value += x * (h - prev_h);
        prev_h = h;
    }
    Ok(value)
}

/// Expected utility `sum_i p_i u(x_i)`.
pub fn eu_value(lottery: &Lottery, u: &UtilityFunction) -> Result<Rational> {
    u.check_monotone(lottery.min_outcome(), lottery.max_outcome())?;
    Ok(lottery
        .states()
        .iter()
        .map(|s| &s.probability * u.eval(&s.outcome))
        .sum())
}

pub fn mean(lottery: &Lottery) -> Rational {
    lottery
        .states()
        .iter()
        .map(|s| &s.probability * &s.outcome)
        .sum()
}

/// `k = 1`: the mean. `k >= 2`: the central moment `E[(X - mean)^k]`.
pub fn primal_moment(lottery: &Lottery, k: u32) -> Rational {
    assert!(k >= 1, "moment order must be positive");
    let mu = mean(lottery);
    if k == 1 {
        return mu;
    }
    lottery
        .states()
        .iter()
        .map(|s| &s.probability * rational::pow(&(&s.outcome - &mu), k))
        .sum()
}

/// `E[min of m independent copies] = sum_i S(x_{i-1})^m (x_i - x_{i-1})`.
pub fn dual_moment(lottery: &Lottery, m: u32) -> Rational {
    assert!(m >= 1, "dual moment order must be positive");
    let mut value = Rational::zero();
    let mut prev_x = Rational::zero();
    let mut survival = Rational::one();
    for state in lottery.states() {
        value += rational::pow(&survival, m) * (&state.outcome - &prev_x);
        survival -= &state.probability;
        prev_x = state.outcome.clone();
    }
    value
}

/// Weights `((n-i+1)^m - (n-i)^m) / n^m` of the `i`-th lowest state of an
/// equally likely `n`-state lottery in its `m`-th dual moment.
pub fn dual_moment_weights(n: usize, m: u32) -> Vec<Rational> {
    let denom = rational::pow(&int(n as i64), m);
    (1..=n)
        .map(|i| {
            let above = int((n - i + 1) as i64);
            let below = int((n - i) as i64);
            (rational::pow(&above, m) - rational::pow(&below, m)) / &denom
        })
        .collect()
}

/// Dual moment of an equally likely lottery through the state weights.
pub fn dual_moment_equal_prob(outcomes: &[Rational], m: u32) -> Rational {
    dual_moment_weights(outcomes.len(), m)
        .iter()
        .zip(outcomes)
        .map(|(w, x)| w * x)
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
}

/// Monte Carlo estimate of `E[min of m independent copies]`, deterministic
/// in `seed`.
pub fn dual_moment_mc_oracle(lottery: &Lottery, m: u32, draws: u64, seed: u64) -> McEstimate {
    assert!(draws >= 1 && m >= 1);
    let outcomes: Vec<f64> = lottery.outcomes().map(rational::to_f64).collect();
    let cumulative: Vec<f64> = lottery.cumulative().iter().map(rational::to_f64).collect();
    let last = outcomes.len() - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; outcomes.len()];
    for _ in 0..draws {
        let mut min_idx = last;
        for _ in 0..m {
            let u: f64 = rng.gen();
            let idx = cumulative.partition_point(|&c| c <= u).min(last);
            min_idx = min_idx.min(idx);
        }
        counts[min_idx] += 1;
    }
    // Frequency-weighted sums keep a point mass exact.
    let n = draws as f64;
    let freq = |c: u64| c as f64 / n;
    let mean: f64 = counts
        .iter()
        .zip(&outcomes)
        .map(|(&c, x)| freq(c) * x)
        .sum();
    let second: f64 = counts
        .iter()
        .zip(&outcomes)
        .map(|(&c, x)| freq(c) * (x - mean) * (x - mean))
        .sum();
    let var = if draws > 1 {
        second * n / (n - 1.0)
    } else {
        0.0
    };
    McEstimate {
        mean,
        std_error: (var / n).sqrt(),
    }
}

/// Dual-theory certainty equivalent gap `V[b] - V[a]`.
pub fn dt_difference(a: &Lottery, b: &Lottery, w: &WeightingSpec) -> Result<Value> {
    Ok(&dt_value(b, w)? - &dt_value(a, w)?)
}

/// True when every outcome is non-negative after shifting by `shift`.
pub fn is_nonnegative_after(lottery: &Lottery, shift: &Rational) -> bool {
    !(lottery.min_outcome() + shift).is_negative()
}
