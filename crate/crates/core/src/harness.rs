//! Randomized verification of the preference theorems.
//!
//! Direct theorems: for a pair of order `m` and any `h` with
//! `(-1)^(m-1) h^(m) >= 0`, `D` is weakly preferred to `C` (and weakly
//! dispreferred under the flipped sign). Converse theorems: if the
//! equidistant `m`-th differences of `h` have mixed signs, some
//! parsimonious pair is ranked each wrong way.
//!
//! Every trial draws from its own ChaCha stream, so results do not depend on
//! thread scheduling.

use num::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::apportionment::{
    make_parsimonious_pair, preference_direction, random_pair, ApportionmentPair,
};
use crate::error::Result;
use crate::lottery::EqualProbLottery;
use crate::rational::{int, rat, Rational};
use crate::value::Sign;
use crate::weighting::{SignCertificate, SignWitness, WeightingSpec};

/// Deterministic generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Sign of `h^(m)` that makes `D` weakly preferred: `(-1)^(m-1)`.
pub fn prudent_sign(m: u32) -> Sign {
    if m % 2 == 1 {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// Random polynomial weighting of degree `degree >= m` whose `m`-th
/// derivative has sign `sign` on `(0, 1)` and is not identically zero.
///
/// Built from Bernstein coefficients: the `m`-th differences of the
/// coefficients carry the sign, and shifting the first differences to be
/// non-negative keeps `h` increasing.
pub fn random_signed_polynomial<R: Rng>(
    m: u32,
    degree: u32,
    sign: Sign,
    rng: &mut R,
) -> WeightingSpec {
    assert!(m >= 2 && degree >= m && sign != Sign::Zero);
    let d = degree as usize;
    let m_us = m as usize;
    let unit = if sign == Sign::Positive { 1 } else { -1 };
    let mut diffs: Vec<Rational> = (0..=d - m_us)
        .map(|_| int(unit * rng.gen_range(0..=5)))
        .collect();
    if diffs.iter().all(Zero::is_zero) {
        let k = rng.gen_range(0..diffs.len());
        diffs[k] = int(unit * rng.gen_range(1..=5));
    }
    // Integrate m-1 times from the m-th differences to the first ones.
    let mut seq = diffs;
    for _ in 1..m {
        let mut next = Vec::with_capacity(seq.len() + 1);
        let mut acc = int(rng.gen_range(-6..=6));
        next.push(acc.clone());
        for v in &seq {
            acc += v;
            next.push(acc.clone());
        }
        seq = next;
    }
    let min = seq.iter().min().cloned().unwrap();
    let lift = int(rng.gen_range(0..=3));
    let firsts: Vec<Rational> = seq.iter().map(|a| a - &min + &lift).collect();
    let mut coeffs = vec![Rational::zero()];
    let mut acc = Rational::zero();
    for a in &firsts {
        acc += a;
        coeffs.push(acc.clone());
    }
    if acc.is_zero() {
        // All first differences vanished only if every m-th difference did.
        unreachable!("non-zero m-th differences give a non-constant h");
    }
    let normalized: Vec<Rational> = coeffs.iter().map(|b| b / &acc).collect();
    WeightingSpec::bernstein(&normalized).expect("monotone by construction")
}

/// Random polynomial weighting of degree `degree >= m` with
/// `(-1)^(k-1) h^(k) >= 0` on `(0, 1)` for every `k = 1..=m`.
///
/// The Bernstein coefficients get alternating-sign differences of every
/// order up to `m`: each integration step starts far enough from zero that
/// the partial sums, which move toward zero, never change sign.
pub fn random_alternating_polynomial<R: Rng>(m: u32, degree: u32, rng: &mut R) -> WeightingSpec {
    assert!(m >= 1 && degree >= m);
    let sign_of_order = |k: u32| if k % 2 == 1 { 1 } else { -1 };
    let mut seq: Vec<Rational> = (0..=(degree - m))
        .map(|_| int(sign_of_order(m) * rng.gen_range(0..=5)))
        .collect();
    for k in (1..m).rev() {
        let total: Rational = seq.iter().cloned().sum();
        let start = int(sign_of_order(k)) * (num::Signed::abs(&total) + int(rng.gen_range(0..=3)));
        let mut next = Vec::with_capacity(seq.len() + 1);
        let mut acc = start;
        next.push(acc.clone());
        for v in &seq {
            acc += v;
            next.push(acc.clone());
        }
        seq = next;
    }
    if seq.iter().all(Zero::is_zero) {
        seq = vec![int(1); seq.len()];
    }
    let mut coeffs = vec![Rational::zero()];
    let mut acc = Rational::zero();
    for a in &seq {
        acc += a;
        coeffs.push(acc.clone());
    }
    let normalized: Vec<Rational> = coeffs.iter().map(|b| b / &acc).collect();
    WeightingSpec::bernstein(&normalized).expect("monotone by construction")
}

/// Random piecewise-linear weighting with knots at `i / knots`.
pub fn random_tabulated<R: Rng>(knots: u32, rng: &mut R) -> WeightingSpec {
    let mut steps: Vec<i64> = (0..knots).map(|_| rng.gen_range(0..=9)).collect();
    if steps.iter().all(|&s| s == 0) {
        steps = vec![1; knots as usize];
    }
    let total: i64 = steps.iter().sum();
    let mut acc = 0;
    let mut pts = vec![(int(0), int(0))];
    for (i, s) in steps.iter().enumerate() {
        acc += s;
        pts.push((rat(i as i64 + 1, knots as i64), rat(acc, total)));
    }
    WeightingSpec::tabulated(pts).expect("valid knots")
}

/// Pair whose premium is `(1/M) (-1)^(m-1)` times the `m`-th difference of
/// `h` at `j/n` with step `1/n`. Outcomes `1..=n`, `M = 2^m`, so ranks are
/// strict.
pub fn witness_pair(n: usize, j: usize, m: u32) -> Result<ApportionmentPair> {
    let base = EqualProbLottery::new((1..=n as i64).map(int).collect())?;
    make_parsimonious_pair(&base, j, m, 1u64 << m)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConverseHit {
    pub n: usize,
    pub j: usize,
    pub premium_sign: String,
    pub provenance: String,
}

/// For a `Mixed` certificate, finds parsimonious pairs ranked each way:
/// returns `(pair with V[D] < V[C], pair with V[D] > V[C])`. Uses the direct map `(p, s) -> (n = 1/s, j = p/s)` when it is
/// integral, else scans every start on the finer grid `n = G`, where a
/// difference of the required sign must exist.
pub fn converse_search(
    w: &WeightingSpec,
    m: u32,
    grid_count: u32,
    certificate: &SignCertificate,
) -> Result<Option<(ConverseHit, ConverseHit)>> {
    let SignCertificate::Mixed { negative, positive } = certificate else {
        return Ok(None);
    };
    let find = |witness: &SignWitness, target: Sign| -> Result<Option<ConverseHit>> {
        let mut candidates: Vec<(usize, usize)> = Vec::new();
        let g = grid_count as usize;
        let a = (&witness.point * int(g as i64))
            .to_integer()
            .to_usize()
            .unwrap();
        let b = (&witness.step * int(g as i64))
            .to_integer()
            .to_usize()
            .unwrap();
        if g.is_multiple_of(b) && a.is_multiple_of(b) {
            candidates.push((g / b, a / b));
        }
        candidates.extend((0..=g - m as usize).map(|j| (g, j)));
        for (n, j) in candidates {
            let pair = witness_pair(n, j, m)?;
            let sign = preference_direction(&pair, w)?;
            if sign == target {
                return Ok(Some(ConverseHit {
                    n,
                    j,
                    premium_sign: sign.to_string(),
                    provenance: pair.provenance.to_json(),
                }));
            }
        }
        Ok(None)
    };
    // Premium sign is (-1)^(m-1) times the difference sign.
    let flip = |s: Sign| if m % 2 == 1 { s } else { s.flip() };
    let from_negative = find(negative, flip(Sign::Negative))?;
    let from_positive = find(positive, flip(Sign::Positive))?;
    Ok(match (from_negative, from_positive) {
        (Some(a), Some(b)) => {
            if m % 2 == 1 {
                Some((a, b))
            } else {
                Some((b, a))
            }
        }
        _ => None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureRecord {
    pub trial: u64,
    pub order: u32,
    pub weighting: String,
    pub expected: String,
    pub observed: String,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub theorem: u32,
    pub orders: Vec<u32>,
    pub seed: u64,
    pub trials: u64,
    pub checks: u64,
    /// Converse trials whose certificate was not mixed.
    pub vacuous: u64,
    pub failures: Vec<FailureRecord>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        format!(
            "theorem {}: {status} ({} trials, {} checks, {} vacuous, {} failures; orders {:?}, seed {})",
            self.theorem,
            self.trials,
            self.checks,
            self.vacuous,
            self.failures.len(),
            self.orders,
            self.seed
        )
    }
}

/// Which order(s) a theorem speaks about.
pub fn theorem_orders(theorem: u32, general_order: u32) -> Vec<u32> {
    match theorem {
        1 | 2 => vec![3],
        3 | 4 => vec![4],
        _ => vec![general_order],
    }
}

pub fn is_converse(theorem: u32) -> bool {
    theorem.is_multiple_of(2)
}

/// Direct-theorem trial: one random pair of order `m`, checked against
/// `DualPower(j)` for `j = m..m+3` and a random polynomial of each sign.
fn direct_trial(m: u32, seed: u64, trial: u64) -> Result<(u64, Vec<FailureRecord>)> {
    let mut rng = trial_rng(seed, trial);
    let pair = random_pair(m, &mut rng);
    let mut cases: Vec<(WeightingSpec, Sign)> = (m..m + 4)
        .map(|j| (WeightingSpec::dual_power(j).unwrap(), Sign::Positive))
        .collect();
    for premium in [Sign::Positive, Sign::Negative] {
        let deriv = if premium == Sign::Positive {
            prudent_sign(m)
        } else {
            prudent_sign(m).flip()
        };
        let degree = m + rng.gen_range(0..=3);
        cases.push((
            random_signed_polynomial(m, degree, deriv, &mut rng),
            premium,
        ));
    }
    let mut failures = Vec::new();
    let checks = cases.len() as u64;
    for (w, expected) in cases {
        let got = preference_direction(&pair, &w)?;
        if got == expected.flip() {
            failures.push(FailureRecord {
                trial,
                order: m,
                weighting: w.to_string(),
                expected: format!("{expected} or zero"),
                observed: got.to_string(),
                provenance: pair.provenance.to_json(),
            });
        }
    }
    Ok((checks, failures))
}

/// Converse-theorem trial: a random tabulated `h` (or the supplied one)
/// whose certificate is mixed must yield pairs ranked both ways.
fn converse_trial(
    m: u32,
    seed: u64,
    trial: u64,
    fixed: Option<&WeightingSpec>,
) -> Result<(u64, bool, Vec<FailureRecord>)> {
    let mut rng = trial_rng(seed, trial);
    let (w, grid) = match fixed {
        Some(w) => (w.clone(), 24),
        None => loop {
            let knots = rng.gen_range(4..=8);
            let w = random_tabulated(knots, &mut rng);
            let grid = knots * 3;
            if w.finite_difference_sign(m, grid).is_mixed() {
                break (w, grid);
            }
        },
    };
    let cert = w.finite_difference_sign(m, grid);
    if !cert.is_mixed() {
        return Ok((0, true, Vec::new()));
    }
    let failures = match converse_search(&w, m, grid, &cert)? {
        Some(_) => Vec::new(),
        None => vec![FailureRecord {
            trial,
            order: m,
            weighting: w.to_string(),
            expected: "pairs ranked both ways".into(),
            observed: "no violating parsimonious pair found".into(),
            provenance: String::new(),
        }],
    };
    Ok((1, false, failures))
}

/// Runs `trials` trials of a theorem. `general_order` is used by theorems
/// 5 and 6; `fixed` pins the weighting function of a converse run.
pub fn verify_theorem(
    theorem: u32,
    trials: u64,
    seed: u64,
    general_order: u32,
    fixed: Option<&WeightingSpec>,
) -> Result<VerifyReport> {
    let orders = theorem_orders(theorem, general_order);
    let m = orders[0];
    let results: Vec<(u64, bool, Vec<FailureRecord>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            if is_converse(theorem) {
                converse_trial(m, seed, t, fixed)
            } else {
                direct_trial(m, seed, t).map(|(c, f)| (c, false, f))
            }
        })
        .collect::<Result<_>>()?;
    let mut report = VerifyReport {
        theorem,
        orders,
        seed,
        trials,
        checks: 0,
        vacuous: 0,
        failures: Vec::new(),
    };
    for (checks, vacuous, failures) in results {
        report.checks += checks;
        report.vacuous += vacuous as u64;
        report.failures.extend(failures);
    }
    Ok(report)
}

/// Sign of a finite-difference witness value, for display.
pub fn witness_sign(w: &SignWitness) -> Sign {
    w.value.sign()
}

/// Exact `m`-th forward difference of `h` at `p` with step `s`.
pub fn forward_difference(
    w: &WeightingSpec,
    m: u32,
    p: &Rational,
    s: &Rational,
) -> Result<Rational> {
    let mut total = Rational::zero();
    for k in 0..=m {
        let c = crate::rational::binomial(m, k);
        let v = w
            .eval_exact(&(p + s * int(k as i64)))?
            .expect("exact weighting family");
        if (m - k).is_multiple_of(2) {
            total += c * v;
        } else {
            total -= c * v;
        }
    }
    Ok(total)
}

/// True when the weighting's dual premium on a pair agrees with the
/// `(1/M)(-1)^(m-1) Delta^m h` closed form.
pub fn premium_matches_difference(w: &WeightingSpec, n: usize, j: usize, m: u32) -> Result<bool> {
    let pair = witness_pair(n, j, m)?;
    let premium = crate::apportionment::dual_utility_premium(&pair, w)?
        .into_exact()
        .expect("exact weighting family");
    let diff = forward_difference(w, m, &rat(j as i64, n as i64), &rat(1, n as i64))?;
    let sign = if m % 2 == 1 {
        Rational::one()
    } else {
        -Rational::one()
    };
    let scale = Rational::one() / int(1i64 << m);
    Ok(premium == sign * scale * diff)
}
