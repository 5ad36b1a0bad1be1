//! Squeeze and anti-squeeze moves, good/bad blocks and the lottery pairs
//! `(C, D)` whose dual utility premium `V[D] - V[C]` is signed by the
//! `m`-th derivative of `h`.
//!
//! A block of order `m` is the increment vector
//! `delta * (1 - z^{s_3}) ... (1 - z^{s_m})` written in shift-operator form:
//! order `k` is the order `k-1` good block followed, `s_k` states later, by
//! its negation. Overlapping entries add up. State indices are zero-based.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lottery::{check_ranked, EqualProbLottery, Lottery};
use crate::rational::{self, binomial, int, parse_rational, rat, Rational};
use crate::valuation::{dt_value, dual_moment, mean};
use crate::value::{Sign, Value};
use crate::weighting::WeightingSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Polarity {
    Good,
    Bad,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    /// `(state offset, increment)`, offsets strictly increasing, no zero
    /// increments.
    pub entries: Vec<(usize, Rational)>,
    pub order: u32,
    pub polarity: Polarity,
}

impl Block {
    /// Number of states from the first to the last touched state.
    pub fn span(&self) -> usize {
        self.entries.last().map_or(0, |(o, _)| o + 1)
    }

    pub fn negated(&self) -> Block {
        Block {
            entries: self.entries.iter().map(|(o, v)| (*o, -v.clone())).collect(),
            order: self.order,
            polarity: match self.polarity {
                Polarity::Good => Polarity::Bad,
                Polarity::Bad => Polarity::Good,
            },
        }
    }

    pub fn total(&self) -> Rational {
        self.entries.iter().map(|(_, v)| v.clone()).sum()
    }
}

/// State shifts between the good and bad halves at each recursion level
/// `3..=m`. Every shift must be at least one state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapSpec {
    pub shifts: Vec<usize>,
}

impl GapSpec {
    /// Adjacent halves at every level.
    pub fn minimal(m: u32) -> GapSpec {
        GapSpec {
            shifts: vec![1; m.saturating_sub(2) as usize],
        }
    }

    fn validate(&self, m: u32) -> Result<()> {
        let expected = m.saturating_sub(2) as usize;
        if self.shifts.len() != expected {
            return Err(Error::BadGapSpec(format!(
                "order {m} needs {expected} shifts, got {}",
                self.shifts.len()
            )));
        }
        if let Some(level) = self.shifts.iter().position(|&s| s == 0) {
            return Err(Error::BadGapSpec(format!(
                "shift at level {} is zero; the good half must precede the bad half by at least one state",
                level + 3
            )));
        }
        Ok(())
    }
}

/// Moves states `i < j` toward each other by `x`.
pub fn squeeze(
    lottery: &EqualProbLottery,
    i: usize,
    j: usize,
    x: &Rational,
) -> Result<EqualProbLottery> {
    shift_pair(lottery, i, j, x)
}

/// Moves states `i < j` apart by `x`.
pub fn anti_squeeze(
    lottery: &EqualProbLottery,
    i: usize,
    j: usize,
    x: &Rational,
) -> Result<EqualProbLottery> {
    shift_pair(lottery, i, j, &-x.clone())
}

fn shift_pair(
    lottery: &EqualProbLottery,
    i: usize,
    j: usize,
    x: &Rational,
) -> Result<EqualProbLottery> {
    if i >= j || j >= lottery.n() {
        return Err(Error::Domain(format!(
            "need state indices i < j < {}, got i = {i}, j = {j}",
            lottery.n()
        )));
    }
    let mut outcomes = lottery.outcomes().to_vec();
    outcomes[i] += x;
    outcomes[j] -= x;
    EqualProbLottery::new(outcomes)
}

/// Good and bad blocks of order `m` with magnitude `delta`.
pub fn make_blocks(m: u32, delta: &Rational, gaps: &GapSpec) -> Result<(Block, Block)> {
    if m < 2 {
        return Err(Error::BadGapSpec(format!(
            "block order must be at least 2, got {m}"
        )));
    }
    if !delta.is_positive() {
        return Err(Error::Domain(format!(
            "block magnitude must be positive, got {delta}"
        )));
    }
    gaps.validate(m)?;
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::from([(0, delta.clone())]);
    for &s in &gaps.shifts {
        let mut next = acc.clone();
        for (o, v) in &acc {
            *next.entry(o + s).or_insert_with(Rational::zero) -= v;
        }
        acc = next;
    }
    let good = Block {
        entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        order: m,
        polarity: Polarity::Good,
    };
    let bad = good.negated();
    Ok((good, bad))
}

/// Adds `first` at `pos_first` and `second` at `pos_second` state-wise.
pub fn attach(
    lottery: &EqualProbLottery,
    first: &Block,
    second: &Block,
    pos_first: usize,
    pos_second: usize,
) -> Result<EqualProbLottery> {
    if pos_first >= pos_second {
        return Err(Error::PrecedenceViolation {
            first: pos_first,
            second: pos_second,
        });
    }
    let n = lottery.n();
    for (block, pos) in [(first, pos_first), (second, pos_second)] {
        if pos + block.span() > n {
            return Err(Error::Domain(format!(
                "block of span {} at state {pos} does not fit in {n} states",
                block.span()
            )));
        }
    }
    let mut outcomes = lottery.outcomes().to_vec();
    for (block, pos) in [(first, pos_first), (second, pos_second)] {
        for (o, v) in &block.entries {
            outcomes[pos + o] += v;
        }
    }
    check_ranked(&outcomes)?;
    EqualProbLottery::new(outcomes)
}

/// Replayable description of how a pair was built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub base: Vec<String>,
    pub order: u32,
    pub n: usize,
    pub delta: String,
    pub shifts: Vec<usize>,
    pub pos_first: usize,
    pub pos_second: usize,
    /// Denominator `M` of the parsimonious construction, if used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_denominator: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("provenance serializes")
    }

    pub fn from_json(text: &str) -> Result<Provenance> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })
    }

    /// Rebuilds the pair from the record.
    pub fn replay(&self) -> Result<ApportionmentPair> {
        let parse = |s: &str| {
            parse_rational(s).map_err(|e| Error::Parse {
                line: 0,
                message: e.to_string(),
            })
        };
        let base =
            EqualProbLottery::new(self.base.iter().map(|s| parse(s)).collect::<Result<_>>()?)?;
        let pair = make_pair(
            &base,
            self.order,
            &parse(&self.delta)?,
            &GapSpec {
                shifts: self.shifts.clone(),
            },
            self.pos_first,
            self.pos_second,
        )?;
        Ok(ApportionmentPair {
            provenance: self.clone(),
            ..pair
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApportionmentPair {
    pub c: EqualProbLottery,
    pub d: EqualProbLottery,
    pub order: u32,
    pub provenance: Provenance,
}

impl ApportionmentPair {
    pub fn c_lottery(&self) -> Lottery {
        self.c.to_lottery()
    }

    pub fn d_lottery(&self) -> Lottery {
        self.d.to_lottery()
    }

    /// Per-state `D - C`.
    pub fn increments(&self) -> Vec<Rational> {
        self.d
            .outcomes()
            .iter()
            .zip(self.c.outcomes())
            .map(|(d, c)| d - c)
            .collect()
    }
}

impl fmt::Display for ApportionmentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order {}", self.order)?;
        writeln!(f, "C = {}", self.c)?;
        write!(f, "D = {}", self.d)
    }
}

/// `D` attaches the good block at `pos_first` and the bad one at
/// `pos_second`; `C` swaps them. Both orders must preserve the ranking.
pub fn make_pair(
    base: &EqualProbLottery,
    m: u32,
    delta: &Rational,
    gaps: &GapSpec,
    pos_first: usize,
    pos_second: usize,
) -> Result<ApportionmentPair> {
    let (good, bad) = make_blocks(m, delta, gaps)?;
    let d = attach(base, &good, &bad, pos_first, pos_second)?;
    let c = attach(base, &bad, &good, pos_first, pos_second)?;
    let pair = ApportionmentPair {
        c,
        d,
        order: m,
        provenance: Provenance {
            base: base.outcomes().iter().map(|x| x.to_string()).collect(),
            order: m,
            n: base.n(),
            delta: delta.to_string(),
            shifts: gaps.shifts.clone(),
            pos_first,
            pos_second,
            m_denominator: None,
            seed: None,
        },
    };
    let (cl, dl) = (pair.c_lottery(), pair.d_lottery());
    assert_eq!(mean(&cl), mean(&dl), "construction bug: means differ");
    for k in 1..m {
        assert_eq!(
            dual_moment(&cl, k),
            dual_moment(&dl, k),
            "construction bug: dual moment {k} differs"
        );
    }
    Ok(pair)
}

/// Pair whose `m` consecutive states starting at `j` differ by
/// `(1/M) (-1)^(k-1) C(m-1, k-1)`, `k = 1..m`, with the base lottery
/// halfway between `C` and `D`.
pub fn make_parsimonious_pair(
    base: &EqualProbLottery,
    j: usize,
    m: u32,
    big_m: u64,
) -> Result<ApportionmentPair> {
    if big_m == 0 {
        return Err(Error::Domain("M must be positive".into()));
    }
    if j + m as usize > base.n() {
        return Err(Error::Domain(format!(
            "{m} states starting at {j} do not fit in {} states",
            base.n()
        )));
    }
    let delta = rat(1, 2 * big_m as i64);
    let mut pair = make_pair(base, m, &delta, &GapSpec::minimal(m), j, j + 1)?;
    pair.provenance.m_denominator = Some(big_m);
    Ok(pair)
}

/// `(1/M) (-1)^(k-1) C(m-1, k-1)` for `k = 1..m`.
pub fn binomial_increments(m: u32, big_m: u64) -> Vec<Rational> {
    (0..m)
        .map(|k| {
            let sign = if k % 2 == 0 { int(1) } else { int(-1) };
            sign * binomial(m - 1, k) / int(big_m as i64)
        })
        .collect()
}

/// `V[D] - V[C]`.
pub fn dual_utility_premium(pair: &ApportionmentPair, w: &WeightingSpec) -> Result<Value> {
    Ok(&dt_value(&pair.d_lottery(), w)? - &dt_value(&pair.c_lottery(), w)?)
}

/// Sign of `V[D] - V[C]`. Exact for rational families; floating-point
/// values within `1e-12` of zero count as zero.
pub fn preference_direction(pair: &ApportionmentPair, w: &WeightingSpec) -> Result<Sign> {
    Ok(match dual_utility_premium(pair, w)? {
        Value::Exact(r) => rational::sign_of(&r),
        Value::Real(x) if x.abs() <= 1e-12 => Sign::Zero,
        Value::Real(x) => Sign::of_f64(x),
    })
}

/// Random pair of order `m`: integer base outcomes with gaps in `1..=4`,
/// random shifts in `1..=3`, and a block magnitude small enough that no
/// state moves by a quarter or more.
pub fn random_pair<R: Rng>(m: u32, rng: &mut R) -> ApportionmentPair {
    let shifts: Vec<usize> = (0..m.saturating_sub(2))
        .map(|_| rng.gen_range(1..=3))
        .collect();
    let gaps = GapSpec { shifts };
    let (unit, _) = make_blocks(m, &int(1), &gaps).expect("valid gap spec");
    let spacing = rng.gen_range(1..=3usize);
    let span = spacing + unit.span();
    let n = span + rng.gen_range(0..=3usize);
    let pos_first = rng.gen_range(0..=n - span);
    let pos_second = pos_first + spacing;
    let mut x = int(rng.gen_range(1..=3));
    let mut base = Vec::with_capacity(n);
    for _ in 0..n {
        base.push(x.clone());
        x += int(rng.gen_range(1..=4));
    }
    let base = EqualProbLottery::new(base).expect("increasing positive outcomes");
    let max_unit = unit
        .entries
        .iter()
        .map(|(_, v)| v.abs())
        .max()
        .unwrap_or_else(Rational::one);
    let scale = int(rng.gen_range(1..=7));
    let delta = Rational::one() / (int(8) * max_unit * scale);
    make_pair(&base, m, &delta, &gaps, pos_first, pos_second).expect("rank-preserving construction")
}
