//! Finite-outcome lotteries with exact probabilities.
//!
//! A [`Lottery`] keeps its states in outcome order and never merges states
//! on its own: squeezes act on individual states, so two states that happen
//! to share an outcome stay distinct. Distribution-level questions go through
//! [`Lottery::canonical`].

use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, int, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub outcome: Rational,
    pub probability: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lottery {
    states: Vec<State>,
}

impl Lottery {
    /// Builds a lottery from `(outcome, probability)` pairs, stably sorted by
    /// outcome.
    pub fn new<I>(pairs: I) -> Result<Lottery>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let mut states = Vec::new();
        let mut total = Rational::zero();
        for (outcome, probability) in pairs {
            if outcome.is_negative() {
                return Err(Error::NegativeOutcome(outcome));
            }
            if !probability.is_positive() {
                return Err(Error::NonPositiveProbability(probability));
            }
            total += &probability;
            states.push(State {
                outcome,
                probability,
            });
        }
        if !total.is_one() {
            return Err(Error::NonUnitMass(total));
        }
        states.sort_by(|a, b| a.outcome.cmp(&b.outcome));
        Ok(Lottery { states })
    }

    /// Point mass at `outcome`.
    pub fn degenerate(outcome: Rational) -> Result<Lottery> {
        Lottery::new([(outcome, Rational::one())])
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &Rational> {
        self.states.iter().map(|s| &s.outcome)
    }

    pub fn min_outcome(&self) -> &Rational {
        &self.states[0].outcome
    }

    pub fn max_outcome(&self) -> &Rational {
        &self.states[self.states.len() - 1].outcome
    }

    /// `P[L <= x]`, right-continuous.
    pub fn cdf(&self, x: &Rational) -> Rational {
        self.states
            .iter()
            .take_while(|s| &s.outcome <= x)
            .fold(Rational::zero(), |acc, s| acc + &s.probability)
    }

    /// `P[L > x] = 1 - cdf(x)`.
    pub fn survival(&self, x: &Rational) -> Rational {
        Rational::one() - self.cdf(x)
    }

    /// Left-continuous generalized inverse: the smallest outcome `x` with
    /// `cdf(x) >= q`, for `0 < q <= 1`.
    pub fn quantile(&self, q: &Rational) -> Result<Rational> {
        if !q.is_positive() || q > &Rational::one() {
            return Err(Error::Domain(format!("quantile level {q} outside (0, 1]")));
        }
        let mut cumulative = Rational::zero();
        for s in &self.states {
            cumulative += &s.probability;
            if &cumulative >= q {
                return Ok(s.outcome.clone());
            }
        }
        // Unreachable for a valid lottery: the mass sums to one.
        Ok(self.max_outcome().clone())
    }

    /// Merges adjacent states with identical outcomes.
    pub fn canonical(&self) -> Lottery {
        let mut merged: Vec<State> = Vec::with_capacity(self.states.len());
        for s in &self.states {
            match merged.last_mut() {
                Some(last) if last.outcome == s.outcome => last.probability += &s.probability,
                _ => merged.push(s.clone()),
            }
        }
        Lottery { states: merged }
    }

    pub fn is_canonical(&self) -> bool {
        self.states.windows(2).all(|w| w[0].outcome != w[1].outcome)
    }

    /// Cumulative probabilities after each state, ending at exactly 1.
    pub fn cumulative(&self) -> Vec<Rational> {
        let mut acc = Rational::zero();
        self.states
            .iter()
            .map(|s| {
                acc += &s.probability;
                acc.clone()
            })
            .collect()
    }

    /// `a + b * L` for `a, b >= 0`.
    pub fn affine(&self, shift: &Rational, scale: &Rational) -> Result<Lottery> {
        Lottery::new(
            self.states
                .iter()
                .map(|s| (shift + scale * &s.outcome, s.probability.clone())),
        )
    }

    /// Same distribution as `other` (after merging tied states).
    pub fn same_distribution(&self, other: &Lottery) -> bool {
        self.canonical() == other.canonical()
    }

    /// Parses the one-state-per-line text format.
    pub fn parse(text: &str) -> Result<Lottery> {
        let mut pairs = Vec::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            last_line = line_no;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected `<outcome> <probability>`, found `{line}`"),
                });
            }
            let parse = |f: &str| {
                parse_rational(f).map_err(|e| Error::Parse {
                    line: line_no,
                    message: e.to_string(),
                })
            };
            let outcome = parse(fields[0])?;
            let probability = parse(fields[1])?;
            if outcome.is_negative() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("negative outcome {outcome}"),
                });
            }
            if !probability.is_positive() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("non-positive probability {probability}"),
                });
            }
            pairs.push((outcome, probability));
        }
        if pairs.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "no states".to_string(),
            });
        }
        Lottery::new(pairs).map_err(|e| Error::Parse {
            line: last_line,
            message: e.to_string(),
        })
    }

    /// Text format accepted by [`Lottery::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.states {
            out.push_str(&format!("{} {}\n", s.outcome, s.probability));
        }
        out
    }
}

impl fmt::Display for Lottery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, s) in self.states.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}, {}", s.outcome, s.probability)?;
        }
        f.write_str("]")
    }
}

/// `n` states of probability `1/n` each, outcomes in non-decreasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualProbLottery {
    outcomes: Vec<Rational>,
}

impl EqualProbLottery {
    pub fn new(outcomes: Vec<Rational>) -> Result<EqualProbLottery> {
        if outcomes.is_empty() {
            return Err(Error::Domain(
                "an equal-probability lottery needs at least one state".into(),
            ));
        }
        check_ranked(&outcomes)?;
        Ok(EqualProbLottery { outcomes })
    }

    pub fn from_integers(outcomes: &[i64]) -> Result<EqualProbLottery> {
        EqualProbLottery::new(outcomes.iter().map(|&x| int(x)).collect())
    }

    pub fn n(&self) -> usize {
        self.outcomes.len()
    }

    pub fn outcomes(&self) -> &[Rational] {
        &self.outcomes
    }

    pub fn state_probability(&self) -> Rational {
        rational::rat(1, self.n() as i64)
    }

    pub fn to_lottery(&self) -> Lottery {
        let p = self.state_probability();
        Lottery {
            states: self
                .outcomes
                .iter()
                .map(|x| State {
                    outcome: x.clone(),
                    probability: p.clone(),
                })
                .collect(),
        }
    }

    /// Splits every state of `lottery` into `k` copies of probability `1/n`.
    /// Fails unless `n` makes every probability an integer multiple of `1/n`.
    pub fn from_lottery(lottery: &Lottery, n: usize) -> Result<EqualProbLottery> {
        let n_r = int(n as i64);
        let mut outcomes = Vec::with_capacity(n);
        for s in lottery.states() {
            let copies = &s.probability * &n_r;
            if !copies.is_integer() {
                return Err(Error::Domain(format!(
                    "probability {} is not a multiple of 1/{n}",
                    s.probability
                )));
            }
            let k: usize = copies
                .to_integer()
                .try_into()
                .map_err(|_| Error::Domain("state count overflow".into()))?;
            outcomes.extend(std::iter::repeat_n(s.outcome.clone(), k));
        }
        EqualProbLottery::new(outcomes)
    }
}

impl fmt::Display for EqualProbLottery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.outcomes.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, " @1/{}]", self.n())
    }
}

/// Non-negative, non-decreasing outcome vector; ties allowed.
pub(crate) fn check_ranked(outcomes: &[Rational]) -> Result<()> {
    for x in outcomes {
        if x.is_negative() {
            return Err(Error::NegativeOutcome(x.clone()));
        }
    }
    for (i, w) in outcomes.windows(2).enumerate() {
        if w[0] > w[1] {
            return Err(Error::RankViolation {
                state: i + 1,
                below: w[0].clone(),
                above: w[1].clone(),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn lot(pairs: &[(i64, i64, i64, i64)]) -> Lottery {
        Lottery::new(pairs.iter().map(|&(a, b, c, d)| (rat(a, b), rat(c, d)))).unwrap()
    }

    #[test]
    fn make_lottery_examples() {
        let i = lot(&[(2, 1, 1, 2), (3, 1, 1, 2)]);
        assert_eq!(i.len(), 2);
        let point = Lottery::degenerate(int(5)).unwrap();
        assert_eq!(point.len(), 1);
        let sorted = lot(&[(3, 1, 1, 2), (1, 1, 1, 2)]);
        assert_eq!(sorted.states()[0].outcome, int(1));
        assert_eq!(sorted.states()[1].outcome, int(3));
    }

    #[test]
    fn make_lottery_errors() {
        assert!(matches!(
            Lottery::new([(int(1), rat(1, 2))]),
            Err(Error::NonUnitMass(_))
        ));
        assert!(matches!(
            Lottery::new([(int(-1), int(1))]),
            Err(Error::NegativeOutcome(_))
        ));
        assert!(matches!(
            Lottery::new([(int(1), int(0)), (int(2), int(1))]),
            Err(Error::NonPositiveProbability(_))
        ));
    }

    #[test]
    fn equal_outcomes_are_not_merged() {
        let l = lot(&[(2, 1, 1, 2), (2, 1, 1, 2)]);
        assert_eq!(l.len(), 2);
        assert_eq!(l.canonical(), Lottery::degenerate(int(2)).unwrap());
    }

    #[test]
    fn cdf_and_survival() {
        let a = lot(&[(0, 1, 1, 6), (3, 1, 5, 6)]);
        assert_eq!(a.cdf(&int(0)), rat(1, 6));
        assert_eq!(a.cdf(&rat(-1, 1)), int(0));
        assert_eq!(a.cdf(&int(3)), int(1));
        assert_eq!(a.survival(&int(0)), rat(5, 6));
    }

    #[test]
    fn quantile_examples() {
        let a = lot(&[(0, 1, 1, 6), (3, 1, 5, 6)]);
        assert_eq!(a.quantile(&rat(1, 6)).unwrap(), int(0));
        assert_eq!(
            a.quantile(&(rat(1, 6) + rat(1, 1_000_000))).unwrap(),
            int(3)
        );
        assert!(a.quantile(&int(0)).is_err());
        assert!(a.quantile(&rat(3, 2)).is_err());
        let c = Lottery::degenerate(rat(7, 3)).unwrap();
        for q in [rat(1, 100), rat(1, 2), int(1)] {
            assert_eq!(c.quantile(&q).unwrap(), rat(7, 3));
        }
    }

    #[test]
    fn canonical_examples() {
        let l = Lottery::new([
            (rat(5, 4), rat(1, 4)),
            (rat(5, 4), rat(1, 4)),
            (rat(19, 4), rat(1, 4)),
            (rat(27, 4), rat(1, 4)),
        ])
        .unwrap();
        let c = l.canonical();
        let expected = Lottery::new([
            (rat(5, 4), rat(1, 2)),
            (rat(19, 4), rat(1, 4)),
            (rat(27, 4), rat(1, 4)),
        ])
        .unwrap();
        assert_eq!(c, expected);
        assert_eq!(c.canonical(), c);
    }

    #[test]
    fn parse_text_format() {
        let text = "# lottery A\n0 1/6\n3 0.8333333333333333333333333333333333 # nope\n";
        assert!(matches!(
            Lottery::parse(text),
            Err(Error::Parse { line: 3, .. })
        ));
        let text = "# lottery A\n0 1/6\n\n3 5/6  # good state\n";
        let a = Lottery::parse(text).unwrap();
        assert_eq!(a, lot(&[(0, 1, 1, 6), (3, 1, 5, 6)]));
        assert_eq!(Lottery::parse(&a.to_text()).unwrap(), a);
        assert!(matches!(
            Lottery::parse("1 1/2\n-2 1/2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Lottery::parse("1 x\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Lottery::parse("1 1 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn equal_prob_round_trip() {
        let l = lot(&[(1, 1, 1, 4), (2, 1, 1, 2), (5, 1, 1, 4)]);
        let e = EqualProbLottery::from_lottery(&l, 4).unwrap();
        assert_eq!(e.outcomes(), &[int(1), int(2), int(2), int(5)]);
        assert!(e.to_lottery().same_distribution(&l));
        assert!(EqualProbLottery::from_lottery(&l, 3).is_err());
        assert!(matches!(
            EqualProbLottery::from_integers(&[2, 1]),
            Err(Error::RankViolation { .. })
        ));
    }
}
