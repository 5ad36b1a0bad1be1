//! Self-protection with an independent background risk.
//!
//! Effort `e` lowers the probability `p(e)` of losing `loss`; a background
//! risk adds `+epsilon` or `-epsilon` with probability one half each. The
//! objective `e -> V[S(e)]` is maximized by a grid scan followed by a
//! golden-section refinement.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lottery::Lottery;
use crate::rational::{self, int, parse_rational, Rational};
use crate::valuation::dt_value_f64;
use crate::value::{Sign, Value};
use crate::weighting::WeightingSpec;

pub const SCAN_POINTS: usize = 256;
const GOLDEN_TOLERANCE: f64 = 1e-10;

/// Loss probability as a function of effort.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EffortModel {
    /// `p0 - k e`, clamped to `[p_min, p_max]`.
    Linear {
        p0: f64,
        k: f64,
        p_min: f64,
        p_max: f64,
    },
    /// `p0 exp(-k e)`.
    Exponential { p0: f64, k: f64 },
    /// `p0 (1 + c e)^(-a)`.
    Power { p0: f64, c: f64, a: f64 },
}

impl EffortModel {
    pub fn p(&self, e: f64) -> f64 {
        match *self {
            EffortModel::Linear {
                p0,
                k,
                p_min,
                p_max,
            } => (p0 - k * e).clamp(p_min, p_max),
            EffortModel::Exponential { p0, k } => p0 * (-k * e).exp(),
            EffortModel::Power { p0, c, a } => p0 * (1.0 + c * e).powf(-a),
        }
    }

    /// `p'(e)`; zero where the linear model is clamped.
    pub fn dp(&self, e: f64) -> f64 {
        match *self {
            EffortModel::Linear {
                p0,
                k,
                p_min,
                p_max,
            } => {
                let raw = p0 - k * e;
                if raw < p_min || raw > p_max {
                    0.0
                } else {
                    -k
                }
            }
            EffortModel::Exponential { p0, k } => -k * p0 * (-k * e).exp(),
            EffortModel::Power { p0, c, a } => -a * c * p0 * (1.0 + c * e).powf(-a - 1.0),
        }
    }

    /// Effort at which `p(e) = target`, if reachable.
    pub fn effort_for(&self, target: f64) -> Option<f64> {
        let e = match *self {
            EffortModel::Linear { p0, k, .. } => (p0 - target) / k,
            EffortModel::Exponential { p0, k } => (p0 / target).ln() / k,
            EffortModel::Power { p0, c, a } => ((p0 / target).powf(1.0 / a) - 1.0) / c,
        };
        (e.is_finite() && e >= 0.0).then_some(e)
    }

    /// Exponential model with `k` chosen so that the no-background-risk
    /// first-order condition holds where `p(e) = 1/2`.
    pub fn calibrated_exponential(p0: f64, loss: f64, w: &WeightingSpec) -> Result<EffortModel> {
        let h1 = half_slope(w)?;
        Ok(EffortModel::Exponential {
            p0,
            k: 2.0 / (h1 * loss),
        })
    }

    /// Power model with `c` chosen as in [`EffortModel::calibrated_exponential`].
    pub fn calibrated_power(p0: f64, a: f64, loss: f64, w: &WeightingSpec) -> Result<EffortModel> {
        let h1 = half_slope(w)?;
        let u = (2.0 * p0).powf(1.0 / a);
        Ok(EffortModel::Power {
            p0,
            c: 2.0 * u / (a * h1 * loss),
            a,
        })
    }

    /// Linear model with slope `k` chosen as in
    /// [`EffortModel::calibrated_exponential`].
    pub fn calibrated_linear(
        p0: f64,
        p_min: f64,
        p_max: f64,
        loss: f64,
        w: &WeightingSpec,
    ) -> Result<EffortModel> {
        let h1 = half_slope(w)?;
        Ok(EffortModel::Linear {
            p0,
            k: 1.0 / (h1 * loss),
            p_min,
            p_max,
        })
    }
}

fn half_slope(w: &WeightingSpec) -> Result<f64> {
    let h1 = w.derivative_f64(0.5)?;
    if h1 <= 0.0 {
        return Err(Error::InvalidWeighting(
            "h'(1/2) must be positive to calibrate".into(),
        ));
    }
    Ok(h1)
}

impl fmt::Display for EffortModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EffortModel::Linear {
                p0,
                k,
                p_min,
                p_max,
            } => {
                write!(f, "linear(p0={p0}, k={k}, clamp=[{p_min}, {p_max}])")
            }
            EffortModel::Exponential { p0, k } => write!(f, "exponential(p0={p0}, k={k})"),
            EffortModel::Power { p0, c, a } => write!(f, "power(p0={p0}, c={c}, a={a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfProtectionProblem {
    pub w0: Rational,
    pub loss: Rational,
    pub epsilon: Rational,
    pub effort: EffortModel,
    pub bounds: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    NoBackgroundRisk,
    /// `2 epsilon < loss`.
    SmallBackground,
    /// `2 epsilon > loss`.
    LargeBackground,
}

impl SelfProtectionProblem {
    pub fn new(
        w0: Rational,
        loss: Rational,
        epsilon: Rational,
        effort: EffortModel,
        bounds: (f64, f64),
    ) -> Result<Self> {
        if loss.is_negative() || epsilon.is_negative() {
            return Err(Error::Domain(
                "loss and epsilon must be non-negative".into(),
            ));
        }
        if !(bounds.0.is_finite() && bounds.1.is_finite() && bounds.0 >= 0.0 && bounds.0 < bounds.1)
        {
            return Err(Error::Domain(format!("bad effort bounds {bounds:?}")));
        }
        let sp = SelfProtectionProblem {
            w0,
            loss,
            epsilon,
            effort,
            bounds,
        };
        sp.regime()?;
        let worst = rational::to_f64(&(&sp.w0 - &sp.loss - &sp.epsilon)) - bounds.1;
        if worst < 0.0 {
            return Err(Error::NegativeOutcome(
                rational::from_f64(worst).unwrap_or_else(|| int(-1)),
            ));
        }
        for i in 0..=SCAN_POINTS {
            let e = bounds.0 + (bounds.1 - bounds.0) * i as f64 / SCAN_POINTS as f64;
            let p = effort.p(e);
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::Domain(format!("p({e}) = {p} outside (0, 1)")));
            }
            if effort.dp(e) > 0.0 {
                return Err(Error::Domain(format!("p is increasing at effort {e}")));
            }
        }
        Ok(sp)
    }

    /// The same problem without background risk.
    pub fn without_background(&self) -> SelfProtectionProblem {
        SelfProtectionProblem {
            epsilon: Rational::zero(),
            ..self.clone()
        }
    }

    pub fn regime(&self) -> Result<Regime> {
        if self.epsilon.is_zero() {
            return Ok(Regime::NoBackgroundRisk);
        }
        let twice = &self.epsilon * int(2);
        match twice.cmp(&self.loss) {
            std::cmp::Ordering::Less => Ok(Regime::SmallBackground),
            std::cmp::Ordering::Greater => Ok(Regime::LargeBackground),
            std::cmp::Ordering::Equal => Err(Error::CaseBoundary),
        }
    }

    fn outcomes_f64(&self, e: f64) -> Vec<(f64, f64)> {
        let w0 = rational::to_f64(&self.w0);
        let l = rational::to_f64(&self.loss);
        let eps = rational::to_f64(&self.epsilon);
        let p = self.effort.p(e);
        if self.epsilon.is_zero() {
            return vec![(w0 - l - e, p), (w0 - e, 1.0 - p)];
        }
        vec![
            (w0 - l - eps - e, p / 2.0),
            (w0 - l + eps - e, p / 2.0),
            (w0 - eps - e, (1.0 - p) / 2.0),
            (w0 + eps - e, (1.0 - p) / 2.0),
        ]
    }
}

/// The lottery `S(e)` with `p(e)` rounded to the nearest rational double.
/// States are ordered by outcome, so the middle two swap when
/// `2 epsilon > loss`.
pub fn sp_lottery(sp: &SelfProtectionProblem, e: &Rational) -> Result<Lottery> {
    let regime = sp.regime()?;
    let p = rational::from_f64(sp.effort.p(rational::to_f64(e)))
        .ok_or_else(|| Error::Domain("loss probability is not finite".into()))?;
    let q = Rational::one() - &p;
    let base = &sp.w0 - e;
    let lost = &base - &sp.loss;
    if regime == Regime::NoBackgroundRisk {
        return Lottery::new([(lost, p), (base, q)]);
    }
    let half = |x: &Rational| x / int(2);
    let eps = &sp.epsilon;
    Lottery::new([
        (&lost - eps, half(&p)),
        (&lost + eps, half(&p)),
        (&base - eps, half(&q)),
        (&base + eps, half(&q)),
    ])
}

/// `V[S(e)]` in floating point.
pub fn sp_value(sp: &SelfProtectionProblem, e: f64, w: &WeightingSpec) -> Result<f64> {
    dt_value_f64(&sp.outcomes_f64(e), w)
}

/// Left-hand side of the first-order condition `dV/de = 0` for the
/// problem's regime.
pub fn sp_foc_lhs(sp: &SelfProtectionProblem, e: f64, w: &WeightingSpec) -> Result<f64> {
    let p = sp.effort.p(e);
    let dp = sp.effort.dp(e);
    let l = rational::to_f64(&sp.loss);
    let eps = rational::to_f64(&sp.epsilon);
    let h1 = |x: f64| w.derivative_f64(x);
    Ok(match sp.regime()? {
        Regime::NoBackgroundRisk => -dp * h1(p)? * l - 1.0,
        Regime::SmallBackground => {
            dp * eps * (-h1(p / 2.0)? + 2.0 * h1(p)? - h1((1.0 + p) / 2.0)?) - dp * h1(p)? * l - 1.0
        }
        Regime::LargeBackground => -0.5 * dp * l * (h1(p / 2.0)? + h1((1.0 + p) / 2.0)?) - 1.0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpDiagnostics {
    pub at_lower_bound: bool,
    pub at_upper_bound: bool,
    /// The first-order condition changes sign across the optimum.
    pub foc_sign_change: bool,
    /// Second differences of `V` on the scan grid are all non-positive.
    pub concave_on_grid: bool,
    pub p_at_opt: f64,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpSolution {
    pub e_star: f64,
    pub v_star: f64,
    pub diagnostics: SpDiagnostics,
}

/// Maximizes `e -> V[S(e)]` over the effort bounds.
pub fn sp_solve(sp: &SelfProtectionProblem, w: &WeightingSpec) -> Result<SpSolution> {
    let (lo, hi) = sp.bounds;
    let step = (hi - lo) / SCAN_POINTS as f64;
    let grid: Vec<f64> = (0..=SCAN_POINTS).map(|i| lo + step * i as f64).collect();
    let values = grid
        .par_iter()
        .map(|&e| sp_value(sp, e, w))
        .collect::<Result<Vec<f64>>>()?;
    let best = values
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v > values[best] { i } else { best });

    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let concave_on_grid = values
        .windows(3)
        .all(|t| t[2] - 2.0 * t[1] + t[0] <= 1e-12 * scale);
    let mut warnings = Vec::new();
    if !concave_on_grid {
        warnings.push(
            "V is not concave in effort on the scan grid; returning the global grid maximum".into(),
        );
    }

    let bracket = (
        grid[best.saturating_sub(1)],
        grid[(best + 1).min(SCAN_POINTS)],
    );
    let (mut a, mut b) = bracket;
    let f = |e: f64| sp_value(sp, e, w);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > GOLDEN_TOLERANCE {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let mut e_star = 0.5 * (a + b);
    // Function values are flat near the optimum, which limits golden-section
    // accuracy to roughly the square root of machine precision. When the
    // first-order condition brackets a root, polish by bisection on it.
    if let Some(root) = foc_root(sp, w, bracket)? {
        e_star = root;
    }
    let mut v_star = f(e_star)?;
    // Keep the grid optimum if refinement did not improve on it.
    if values[best] > v_star {
        e_star = grid[best];
        v_star = values[best];
    }
    let edge = 2.0 * GOLDEN_TOLERANCE;
    let at_lower_bound = e_star - lo <= edge;
    let at_upper_bound = hi - e_star <= edge;
    let probe = (step / 4.0).max(1e-6);
    let foc_sign_change = !at_lower_bound
        && !at_upper_bound
        && sp_foc_lhs(sp, (e_star - probe).max(lo), w)? >= 0.0
        && sp_foc_lhs(sp, (e_star + probe).min(hi), w)? <= 0.0;
    Ok(SpSolution {
        e_star,
        v_star,
        diagnostics: SpDiagnostics {
            at_lower_bound,
            at_upper_bound,
            foc_sign_change,
            concave_on_grid,
            p_at_opt: sp.effort.p(e_star),
            warnings,
        },
    })
}

fn foc_root(
    sp: &SelfProtectionProblem,
    w: &WeightingSpec,
    (mut a, mut b): (f64, f64),
) -> Result<Option<f64>> {
    let fa = sp_foc_lhs(sp, a, w)?;
    let fb = sp_foc_lhs(sp, b, w)?;
    if !(fa > 0.0 && fb < 0.0) {
        return Ok(None);
    }
    while b - a > 1e-13 * b.abs().max(1.0) {
        let mid = 0.5 * (a + b);
        if sp_foc_lhs(sp, mid, w)? > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Some(0.5 * (a + b)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffortDirection {
    More,
    Less,
    Unchanged,
}

impl fmt::Display for EffortDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EffortDirection::More => "more effort",
            EffortDirection::Less => "less effort",
            EffortDirection::Unchanged => "unchanged",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundEffect {
    pub e_with: f64,
    pub e_without: f64,
    pub direction: EffortDirection,
    /// `p(e*)` without background risk.
    pub p_at_opt: f64,
    /// `-h'(1/4) + 2 h'(1/2) - h'(3/4)`, exact for polynomial families.
    pub calibrated_expression: Value,
    /// `-h'(p/2) + 2 h'(p) - h'((1+p)/2)` at `p = p(e*)` without
    /// background risk.
    pub general_expression: f64,
}

/// Solves with and without the background risk and compares.
pub fn sp_background_effect(
    sp: &SelfProtectionProblem,
    w: &WeightingSpec,
) -> Result<BackgroundEffect> {
    let with = sp_solve(sp, w)?;
    let without = sp_solve(&sp.without_background(), w)?;
    let tol = 1e-7;
    let direction = if with.e_star > without.e_star + tol {
        EffortDirection::More
    } else if with.e_star < without.e_star - tol {
        EffortDirection::Less
    } else {
        EffortDirection::Unchanged
    };
    let calibrated_expression = match (
        w.derivative_exact(&Rational::new(1.into(), 4.into())),
        w.derivative_exact(&Rational::new(1.into(), 2.into())),
        w.derivative_exact(&Rational::new(3.into(), 4.into())),
    ) {
        (Some(a), Some(b), Some(c)) => Value::Exact(-a + int(2) * b - c),
        _ => Value::Real(second_difference(w, 0.5)?),
    };
    let p = without.diagnostics.p_at_opt;
    Ok(BackgroundEffect {
        e_with: with.e_star,
        e_without: without.e_star,
        direction,
        p_at_opt: p,
        calibrated_expression,
        general_expression: second_difference(w, p)?,
    })
}

fn second_difference(w: &WeightingSpec, p: f64) -> Result<f64> {
    Ok(-w.derivative_f64(p / 2.0)? + 2.0 * w.derivative_f64(p)?
        - w.derivative_f64((1.0 + p) / 2.0)?)
}

impl BackgroundEffect {
    /// Sign predicted from the calibrated expression: negative means more
    /// effort under background risk.
    pub fn predicted(&self) -> EffortDirection {
        match self.calibrated_expression.sign() {
            Sign::Negative => EffortDirection::More,
            Sign::Positive => EffortDirection::Less,
            Sign::Zero => EffortDirection::Unchanged,
        }
    }
}

/// Reads a `key = value` problem description. Keys: `wealth`, `loss`,
/// `epsilon`, `effort` (`linear`, `exponential` or `power`), `p0`, `k`,
/// `c`, `a`, `p_min`, `p_max`, `effort_min`, `effort_max`, `weighting`,
/// and `calibrate = true` to fit the slope parameter so that the
/// no-background-risk optimum has loss probability one half.
pub fn parse_config(text: &str) -> Result<(SelfProtectionProblem, WeightingSpec)> {
    let mut map = BTreeMap::new();
    let mut lines = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: idx + 1,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = k.trim().to_ascii_lowercase();
        lines.insert(key.clone(), idx + 1);
        map.insert(key, v.trim().to_string());
    }
    let err = |key: &str, message: String| Error::Parse {
        line: lines.get(key).copied().unwrap_or(0),
        message,
    };
    let get = |key: &str| {
        map.get(key)
            .cloned()
            .ok_or_else(|| err(key, format!("missing key `{key}`")))
    };
    let exact = |key: &str| -> Result<Rational> {
        parse_rational(&get(key)?).map_err(|e| err(key, e.to_string()))
    };
    let real = |key: &str, default: Option<f64>| -> Result<f64> {
        match map.get(key) {
            None => default.ok_or_else(|| err(key, format!("missing key `{key}`"))),
            Some(v) => v
                .parse::<f64>()
                .map_err(|_| err(key, format!("invalid number `{v}`"))),
        }
    };
    let w: WeightingSpec = get("weighting")?
        .parse()
        .map_err(|e: Error| err("weighting", e.to_string()))?;
    let loss = exact("loss")?;
    let l = rational::to_f64(&loss);
    let calibrate = map.get("calibrate").is_some_and(|v| v == "true");
    let p0 = real("p0", None)?;
    let effort = match get("effort")?.as_str() {
        "linear" => {
            let (p_min, p_max) = (real("p_min", Some(0.01))?, real("p_max", Some(0.99))?);
            if calibrate {
                EffortModel::calibrated_linear(p0, p_min, p_max, l, &w)?
            } else {
                EffortModel::Linear {
                    p0,
                    k: real("k", None)?,
                    p_min,
                    p_max,
                }
            }
        }
        "exponential" => {
            if calibrate {
                EffortModel::calibrated_exponential(p0, l, &w)?
            } else {
                EffortModel::Exponential {
                    p0,
                    k: real("k", None)?,
                }
            }
        }
        "power" => {
            let a = real("a", Some(0.5))?;
            if calibrate {
                EffortModel::calibrated_power(p0, a, l, &w)?
            } else {
                EffortModel::Power {
                    p0,
                    c: real("c", None)?,
                    a,
                }
            }
        }
        other => return Err(err("effort", format!("unknown effort model `{other}`"))),
    };
    let sp = SelfProtectionProblem::new(
        exact("wealth")?,
        loss,
        exact("epsilon")?,
        effort,
        (real("effort_min", Some(0.0))?, real("effort_max", None)?),
    )?;
    Ok((sp, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn dp3() -> WeightingSpec {
        WeightingSpec::dual_power(3).unwrap()
    }

    fn problem(eps: Rational, w: &WeightingSpec) -> SelfProtectionProblem {
        let effort = EffortModel::calibrated_power(0.6, 0.5, 10.0, w).unwrap();
        SelfProtectionProblem::new(int(20), int(10), eps, effort, (0.0, 5.0)).unwrap()
    }

    #[test]
    fn lottery_shapes() {
        let w = dp3();
        let none = problem(int(0), &w);
        let l = sp_lottery(&none, &int(1)).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(
            l.outcomes().cloned().collect::<Vec<_>>(),
            vec![int(9), int(19)]
        );
        let small = problem(int(2), &w);
        let l = sp_lottery(&small, &int(1)).unwrap();
        assert_eq!(
            l.outcomes().cloned().collect::<Vec<_>>(),
            vec![int(7), int(11), int(17), int(21)]
        );
        let large =
            SelfProtectionProblem::new(int(20), int(10), int(6), none.effort, (0.0, 4.0)).unwrap();
        let l = sp_lottery(&large, &int(1)).unwrap();
        // Middle states swapped: w0-eps-e = 13 sits below w0-l+eps-e = 15.
        assert_eq!(
            l.outcomes().cloned().collect::<Vec<_>>(),
            vec![int(3), int(13), int(15), int(25)]
        );
        assert_eq!(
            l.states()[1].probability,
            (Rational::one() - &l.states()[0].probability * int(2)) / int(2)
        );
        let boundary =
            SelfProtectionProblem::new(int(20), int(10), int(5), none.effort, (0.0, 4.0));
        assert!(matches!(boundary, Err(Error::CaseBoundary)));
        let broke = SelfProtectionProblem::new(int(12), int(10), int(2), none.effort, (0.0, 5.0));
        assert!(matches!(broke, Err(Error::NegativeOutcome(_))));
    }

    #[test]
    fn identity_background_term_vanishes() {
        let w = WeightingSpec::identity();
        let effort = EffortModel::Exponential { p0: 0.8, k: 0.5 };
        let with =
            SelfProtectionProblem::new(int(20), int(10), int(2), effort, (0.0, 5.0)).unwrap();
        for e in [0.1, 1.0, 3.0] {
            let a = sp_foc_lhs(&with, e, &w).unwrap();
            let b = sp_foc_lhs(&with.without_background(), e, &w).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_loss_means_no_effort() {
        let effort = EffortModel::Exponential { p0: 0.5, k: 1.0 };
        let sp = SelfProtectionProblem::new(int(10), int(0), int(0), effort, (0.0, 2.0)).unwrap();
        let sol = sp_solve(&sp, &dp3()).unwrap();
        assert!(sol.diagnostics.at_lower_bound);
        assert!(sol.e_star.abs() < 1e-9);
    }

    #[test]
    fn calibration_hits_one_half() {
        let w = dp3();
        let sol = sp_solve(&problem(int(0), &w), &w).unwrap();
        assert!((sol.diagnostics.p_at_opt - 0.5).abs() < 1e-8);
        assert!(sol.diagnostics.foc_sign_change);
        assert!(sol.diagnostics.concave_on_grid);
    }

    #[test]
    fn calibrated_expression_is_exact() {
        let w = dp3();
        let effect = sp_background_effect(&problem(int(2), &w), &w).unwrap();
        assert_eq!(effect.calibrated_expression, Value::Exact(rat(-3, 8)));
        assert_eq!(effect.direction, EffortDirection::More);
        assert_eq!(effect.predicted(), EffortDirection::More);
    }

    #[test]
    fn config_round_trip() {
        let text = "# problem\nwealth = 20\nloss = 10\nepsilon = 2\neffort = power\np0 = 0.6\na = 0.5\ncalibrate = true\neffort_max = 5\nweighting = dualpower:m=3\n";
        let (sp, w) = parse_config(text).unwrap();
        assert_eq!(w, dp3());
        assert_eq!(sp, problem(int(2), &w));
        let bad = parse_config("wealth = 20\nloss ten\n");
        assert!(matches!(bad, Err(Error::Parse { line: 2, .. })));
    }
}
