//! Primal and dual (inverse) stochastic dominance of arbitrary degree.
//!
//! Pointwise comparisons of iterated integrals are decided exactly: on each
//! interval of the merged breakpoint set the difference is one polynomial,
//! whose sign is settled by root isolation.

use std::fmt;

use num::{One, Zero};

use crate::lottery::Lottery;
use crate::poly::{merge_breakpoints, PiecewisePoly, Poly};
use crate::rational::Rational;
use crate::valuation::{dual_moment, primal_moment};
use crate::value::Sign;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimalVariant {
    /// Iterated CDFs ordered at the top of the support, then pointwise.
    Plain,
    /// Lower primal moments equal, then pointwise.
    Ekern,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Condition {
    /// Dual moment of order `k` of the dominating lottery is smaller.
    DualMoment(u32),
    /// Iterated CDF of order `k` at the top of the support is larger for
    /// the dominating lottery.
    IteratedCdfAtTop(u32),
    /// Primal moment of order `k` differs (Ekern variant).
    PrimalMoment(u32),
    /// The pointwise comparison of the degree-`m` integral fails.
    Pointwise,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::DualMoment(k) => write!(f, "dual moment {k}"),
            Condition::IteratedCdfAtTop(k) => write!(f, "iterated cdf {k} at top"),
            Condition::PrimalMoment(k) => write!(f, "primal moment {k} equality"),
            Condition::Pointwise => write!(f, "pointwise"),
        }
    }
}

/// Result of testing whether `B` dominates `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub degree: u32,
    pub holds: bool,
    /// First failed condition, in the order they are listed in `failures`.
    pub failed_condition: Option<Condition>,
    /// Every failed condition; all conditions are tested independently.
    pub failures: Vec<Condition>,
    /// Point where the pointwise comparison fails, with the (negative)
    /// value of `dominating - dominated` there (sign-adjusted).
    pub witness: Option<(Rational, Rational)>,
}

impl DominanceReport {
    fn from_failures(
        degree: u32,
        failures: Vec<Condition>,
        witness: Option<(Rational, Rational)>,
    ) -> Self {
        DominanceReport {
            degree,
            holds: failures.is_empty(),
            failed_condition: failures.first().cloned(),
            failures,
            witness,
        }
    }
}

impl fmt::Display for DominanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds {
            return write!(f, "degree {}: holds", self.degree);
        }
        let names: Vec<String> = self.failures.iter().map(|c| c.to_string()).collect();
        write!(f, "degree {}: fails ({})", self.degree, names.join(", "))?;
        if let Some((x, v)) = &self.witness {
            write!(f, "; witness at {x} (gap {v})")?;
        }
        Ok(())
    }
}

/// `^1F^{-1}` is the left-continuous quantile; `^{k+1}F^{-1}(q)` integrates
/// `^kF^{-1}` from 0 to `q`. Breakpoints sit at the cumulative
/// probabilities.
pub fn iterated_quantile(lottery: &Lottery, m: u32) -> PiecewisePoly {
    assert!(m >= 1, "degree must be positive");
    let canon = lottery.canonical();
    let mut breakpoints = vec![Rational::zero()];
    breakpoints.extend(canon.cumulative());
    let pieces = canon
        .states()
        .iter()
        .map(|s| Poly::constant(s.outcome.clone()))
        .collect();
    let mut f = PiecewisePoly::new(breakpoints, pieces);
    for _ in 1..m {
        f = f.integral();
    }
    f
}

/// `F^{(1)} = F` and `F^{(k+1)}(x)` integrates `F^{(k)}` from 0 to `x`, on
/// `[0, top]`. Requires `top >= max outcome`.
pub fn iterated_cdf(lottery: &Lottery, k: u32, top: &Rational) -> PiecewisePoly {
    assert!(k >= 1, "degree must be positive");
    assert!(top >= lottery.max_outcome(), "top below the support");
    let canon = lottery.canonical();
    let mut breakpoints = vec![Rational::zero()];
    breakpoints.extend(canon.outcomes().filter(|x| !x.is_zero()).cloned());
    if breakpoints.last() != Some(top) {
        breakpoints.push(top.clone());
    }
    if breakpoints.len() == 1 {
        breakpoints.push(Rational::one());
    }
    // Value on the open interval (b_k, b_{k+1}) is the CDF at b_k.
    let pieces = breakpoints[..breakpoints.len() - 1]
        .iter()
        .map(|b| Poly::constant(canon.cdf(b)))
        .collect();
    let mut f = PiecewisePoly::new(breakpoints, pieces);
    for _ in 1..k {
        f = f.integral();
    }
    f
}

/// Whether `b` dominates `a` in the degree-`m` dual order: dual moments
/// `1..m-1` of `a` at most those of `b`, and `^mF_a^{-1} <= ^mF_b^{-1}` on
/// `[0, 1]`.
pub fn dual_sd_check(a: &Lottery, b: &Lottery, m: u32) -> DominanceReport {
    assert!(m >= 1, "degree must be positive");
    let mut failures = Vec::new();
    for k in 1..m {
        if dual_moment(a, k) > dual_moment(b, k) {
            failures.push(Condition::DualMoment(k));
        }
    }
    let gap = iterated_quantile(b, m).difference(&iterated_quantile(a, m));
    let witness = gap.find_negative();
    if witness.is_some() {
        failures.push(Condition::Pointwise);
    }
    DominanceReport::from_failures(m, failures, witness)
}

/// Whether `b` dominates `a` in the degree-`m` primal order:
/// `F_b^{(m)} <= F_a^{(m)}` on the common support plus the variant's
/// conditions on lower orders.
pub fn primal_sd_check(
    a: &Lottery,
    b: &Lottery,
    m: u32,
    variant: PrimalVariant,
) -> DominanceReport {
    assert!(m >= 1, "degree must be positive");
    if m == 1 {
        let points = merge_breakpoints(
            &a.outcomes().cloned().collect::<Vec<_>>(),
            &b.outcomes().cloned().collect::<Vec<_>>(),
        );
        let witness = points.into_iter().find_map(|x| {
            let gap = a.cdf(&x) - b.cdf(&x);
            (gap < Rational::zero()).then_some((x, gap))
        });
        let failures = if witness.is_some() {
            vec![Condition::Pointwise]
        } else {
            Vec::new()
        };
        return DominanceReport::from_failures(1, failures, witness);
    }
    let top = a.max_outcome().max(b.max_outcome()).clone();
    let mut failures = Vec::new();
    match variant {
        PrimalVariant::Plain => {
            for k in 2..m {
                let fa = iterated_cdf(a, k, &top).eval(&top).unwrap();
                let fb = iterated_cdf(b, k, &top).eval(&top).unwrap();
                if fb > fa {
                    failures.push(Condition::IteratedCdfAtTop(k));
                }
            }
        }
        PrimalVariant::Ekern => {
            for k in 1..m {
                if primal_moment(a, k) != primal_moment(b, k) {
                    failures.push(Condition::PrimalMoment(k));
                }
            }
        }
    }
    let gap = iterated_cdf(a, m, &top).difference(&iterated_cdf(b, m, &top));
    let witness = gap.find_negative();
    if witness.is_some() {
        failures.push(Condition::Pointwise);
    }
    DominanceReport::from_failures(m, failures, witness)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingPattern {
    /// Sign of `F_A - F_B` at the first point where it is non-zero.
    pub initial_sign: Option<Sign>,
    /// Outcomes at which `F_A - F_B` takes a sign opposite to the previous
    /// non-zero sign.
    pub points: Vec<Rational>,
}

/// Sign changes of the step function `F_A - F_B`.
pub fn crossing_pattern(a: &Lottery, b: &Lottery) -> CrossingPattern {
    let points = merge_breakpoints(
        &a.outcomes().cloned().collect::<Vec<_>>(),
        &b.outcomes().cloned().collect::<Vec<_>>(),
    );
    let mut initial_sign = None;
    let mut current = Sign::Zero;
    let mut changes = Vec::new();
    for x in points {
        let sign = crate::rational::sign_of(&(a.cdf(&x) - b.cdf(&x)));
        if sign == Sign::Zero {
            continue;
        }
        match initial_sign {
            None => initial_sign = Some(sign),
            Some(_) if sign != current => changes.push(x),
            _ => {}
        }
        current = sign;
    }
    CrossingPattern {
        initial_sign,
        points: changes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::valuation::mean;

    fn lot(pairs: &[(Rational, Rational)]) -> Lottery {
        Lottery::new(pairs.iter().cloned()).unwrap()
    }

    fn a() -> Lottery {
        lot(&[(int(0), rat(1, 6)), (int(3), rat(5, 6))])
    }

    fn b() -> Lottery {
        lot(&[
            (int(1), rat(1, 6)),
            (int(2), rat(1, 2)),
            (int(4), rat(1, 3)),
        ])
    }

    fn thirds(xs: [Rational; 3]) -> Lottery {
        lot(&xs.map(|x| (x, rat(1, 3))))
    }

    fn c3() -> Lottery {
        thirds([rat(5, 6), rat(7, 3), rat(23, 6)])
    }

    fn d3() -> Lottery {
        thirds([rat(7, 6), rat(5, 3), rat(25, 6)])
    }

    #[test]
    fn iterated_quantile_examples() {
        let q1 = iterated_quantile(&a(), 1);
        assert_eq!(q1.eval(&rat(1, 12)), Some(int(0)));
        assert_eq!(q1.eval(&rat(1, 6)), Some(int(0)));
        assert_eq!(q1.eval(&rat(1, 5)), Some(int(3)));
        assert_eq!(iterated_quantile(&a(), 2).eval(&rat(1, 2)), Some(int(1)));
        assert_eq!(iterated_quantile(&b(), 2).eval(&int(1)), Some(mean(&b())));
    }

    #[test]
    fn quantile_integral_at_one_is_scaled_dual_moment() {
        // ^{k+1}F^{-1}(1) = E[min of k] / k!
        let mut fact = int(1);
        for k in 1..=5u32 {
            fact *= int(k as i64);
            let top = iterated_quantile(&b(), k + 1).eval(&int(1)).unwrap();
            assert_eq!(top, dual_moment(&b(), k) / &fact);
        }
    }

    #[test]
    fn dual_examples() {
        let r = dual_sd_check(&c3(), &d3(), 3);
        assert!(r.holds, "{r}");
        for m in 1..=5 {
            assert!(dual_sd_check(&b(), &b(), m).holds);
        }
        let r = dual_sd_check(&a(), &b(), 3);
        assert!(!r.holds);
        assert_eq!(r.failed_condition, Some(Condition::DualMoment(2)));
    }

    #[test]
    fn primal_examples() {
        let r = primal_sd_check(&a(), &b(), 3, PrimalVariant::Plain);
        assert!(r.holds, "{r}");
        assert!(primal_sd_check(&a(), &b(), 3, PrimalVariant::Ekern).holds);
        let shifted = b().affine(&rat(1, 2), &int(1)).unwrap();
        assert!(primal_sd_check(&b(), &shifted, 1, PrimalVariant::Plain).holds);
        assert!(!primal_sd_check(&shifted, &b(), 1, PrimalVariant::Plain).holds);
        for variant in [PrimalVariant::Plain, PrimalVariant::Ekern] {
            assert!(!primal_sd_check(&c3(), &d3(), 3, variant).holds);
            assert!(!primal_sd_check(&d3(), &c3(), 3, variant).holds);
        }
    }

    #[test]
    fn crossing_examples() {
        let cp = crossing_pattern(&c3(), &d3());
        assert_eq!(cp.initial_sign, Some(Sign::Positive));
        assert_eq!(cp.points, vec![rat(5, 3), rat(23, 6)]);
        assert_eq!(crossing_pattern(&b(), &b()).points, vec![]);
        let c2 = lot(&[(rat(5, 6), rat(1, 2)), (rat(13, 6), rat(1, 2))]);
        let d2 = lot(&[(rat(7, 6), rat(1, 2)), (rat(11, 6), rat(1, 2))]);
        assert_eq!(crossing_pattern(&c2, &d2).points.len(), 1);
    }

    #[test]
    fn failure_witness_is_really_negative() {
        let r = dual_sd_check(&d3(), &c3(), 3);
        assert!(!r.holds);
        if let Some((q, v)) = r.witness {
            let lhs = iterated_quantile(&c3(), 3).eval(&q).unwrap();
            let rhs = iterated_quantile(&d3(), 3).eval(&q).unwrap();
            assert_eq!(lhs - rhs, v);
            assert!(v < Rational::zero());
        }
    }
}
