//! Probability weighting functions `h` and their dual form
//! `hbar(p) = 1 - h(1 - p)`.
//!
//! Polynomial families and tabulated (piecewise-linear) functions evaluate
//! exactly on rationals. Tversky–Kahneman, Prelec and non-integer powers are
//! evaluated in `f64`.

use std::fmt;
use std::str::FromStr;

use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{self, binomial, int, parse_rational, rat, Rational};
use crate::value::{Sign, Value};

/// Grid size used for finite-difference certificates unless overridden.
pub const DEFAULT_GRID_COUNT: u32 = 256;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Identity,
    /// `h(p) = (1 + beta) p - beta p^2`, `0 <= beta <= 1`.
    Quadratic {
        beta: Rational,
    },
    /// `h(p) = p^k`.
    Power {
        k: Rational,
    },
    /// `h(p) = 1 - (1 - p)^m`, so that `hbar(p) = p^m`.
    DualPower {
        m: u32,
    },
    TverskyKahneman {
        gamma: f64,
    },
    Prelec {
        a: f64,
        b: f64,
    },
    /// Piecewise-linear through the knots `(p, h(p))`.
    Tabulated {
        knots: Vec<(Rational, Rational)>,
    },
    /// Monomial coefficients, ascending.
    Polynomial {
        coeffs: Vec<Rational>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightingSpec {
    family: Family,
    poly: Option<Poly>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignWitness {
    pub point: Rational,
    /// Grid step of a finite-difference witness; zero for a pointwise
    /// derivative witness.
    pub step: Rational,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SignCertificate {
    Zero,
    NonNegative,
    NonPositive,
    Mixed {
        negative: SignWitness,
        positive: SignWitness,
    },
}

impl SignCertificate {
    /// True when every tested value is `>= 0` (includes `Zero`).
    pub fn allows_nonnegative(&self) -> bool {
        matches!(self, SignCertificate::Zero | SignCertificate::NonNegative)
    }

    pub fn allows_nonpositive(&self) -> bool {
        matches!(self, SignCertificate::Zero | SignCertificate::NonPositive)
    }

    pub fn is_mixed(&self) -> bool {
        matches!(self, SignCertificate::Mixed { .. })
    }

    /// Certificate of `-f` given the certificate of `f`.
    pub fn negated(self) -> SignCertificate {
        match self {
            SignCertificate::Zero => SignCertificate::Zero,
            SignCertificate::NonNegative => SignCertificate::NonPositive,
            SignCertificate::NonPositive => SignCertificate::NonNegative,
            SignCertificate::Mixed { negative, positive } => SignCertificate::Mixed {
                negative: SignWitness {
                    value: -positive.value,
                    ..positive
                },
                positive: SignWitness {
                    value: -negative.value,
                    ..negative
                },
            },
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SignCertificate::Zero => "zero",
            SignCertificate::NonNegative => "non-negative",
            SignCertificate::NonPositive => "non-positive",
            SignCertificate::Mixed { .. } => "mixed",
        }
    }
}

fn check_unit(p: &Rational) -> Result<()> {
    if p.is_negative() || p > &Rational::one() {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

fn check_unit_f64(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

impl WeightingSpec {
    pub fn identity() -> WeightingSpec {
        WeightingSpec {
            family: Family::Identity,
            poly: Some(Poly::x()),
        }
    }

    pub fn quadratic(beta: Rational) -> Result<WeightingSpec> {
        if beta.is_negative() || beta > Rational::one() {
            return Err(Error::InvalidWeighting(format!(
                "quadratic weighting needs 0 <= beta <= 1, got {beta}"
            )));
        }
        let poly = Poly::from_coeffs(vec![
            Rational::zero(),
            Rational::one() + &beta,
            -beta.clone(),
        ]);
        Ok(WeightingSpec {
            family: Family::Quadratic { beta },
            poly: Some(poly),
        })
    }

    pub fn power(k: Rational) -> Result<WeightingSpec> {
        if !k.is_positive() {
            return Err(Error::InvalidWeighting(format!(
                "power weighting needs k > 0, got {k}"
            )));
        }
        let poly = if k.is_integer() {
            let e = k
                .to_integer()
                .to_u32()
                .ok_or_else(|| Error::InvalidWeighting(format!("power exponent {k} too large")))?;
            Some(Poly::monomial(Rational::one(), e as usize))
        } else {
            None
        };
        Ok(WeightingSpec {
            family: Family::Power { k },
            poly,
        })
    }

    pub fn dual_power(m: u32) -> Result<WeightingSpec> {
        if m == 0 {
            return Err(Error::InvalidWeighting("dual power needs m >= 1".into()));
        }
        let one_minus = Poly::from_coeffs(vec![Rational::one(), -Rational::one()]);
        let poly = &Poly::constant(Rational::one()) - &one_minus.pow(m);
        Ok(WeightingSpec {
            family: Family::DualPower { m },
            poly: Some(poly),
        })
    }

    pub fn tversky_kahneman(gamma: f64) -> Result<WeightingSpec> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidWeighting(format!(
                "TK gamma must be positive, got {gamma}"
            )));
        }
        let w = WeightingSpec {
            family: Family::TverskyKahneman { gamma },
            poly: None,
        };
        w.check_monotone_on_grid()?;
        Ok(w)
    }

    pub fn prelec(a: f64, b: f64) -> Result<WeightingSpec> {
        if !(a.is_finite() && a > 0.0 && b.is_finite() && b > 0.0) {
            return Err(Error::InvalidWeighting(format!(
                "Prelec parameters must be positive, got a={a}, b={b}"
            )));
        }
        Ok(WeightingSpec {
            family: Family::Prelec { a, b },
            poly: None,
        })
    }

    pub fn tabulated(knots: Vec<(Rational, Rational)>) -> Result<WeightingSpec> {
        let bad = |msg: String| Err(Error::InvalidWeighting(msg));
        if knots.len() < 2 {
            return bad("tabulated weighting needs at least two knots".into());
        }
        if knots[0] != (Rational::zero(), Rational::zero()) {
            return bad("tabulated weighting must start at (0, 0)".into());
        }
        if knots[knots.len() - 1] != (Rational::one(), Rational::one()) {
            return bad("tabulated weighting must end at (1, 1)".into());
        }
        for w in knots.windows(2) {
            if w[0].0 >= w[1].0 {
                return bad(format!("knot abscissae not increasing at {}", w[1].0));
            }
            if w[0].1 > w[1].1 {
                return bad(format!("tabulated weighting decreases at p = {}", w[1].0));
            }
        }
        Ok(WeightingSpec {
            family: Family::Tabulated { knots },
            poly: None,
        })
    }

    /// General polynomial weighting with exact validation of `h(0) = 0`,
    /// `h(1) = 1` and `h' >= 0` on `[0, 1]`.
    pub fn polynomial(coeffs: Vec<Rational>) -> Result<WeightingSpec> {
        let poly = Poly::from_coeffs(coeffs.clone());
        if !poly.eval(&Rational::zero()).is_zero() {
            return Err(Error::InvalidWeighting(
                "polynomial weighting must vanish at 0".into(),
            ));
        }
        if !poly.eval(&Rational::one()).is_one() {
            return Err(Error::InvalidWeighting(
                "polynomial weighting must equal 1 at 1".into(),
            ));
        }
        let scan = poly
            .derivative()
            .sign_scan(&Rational::zero(), &Rational::one(), true);
        if let Some((p, _)) = scan.negative {
            return Err(Error::InvalidWeighting(format!(
                "polynomial weighting decreases near p = {p}"
            )));
        }
        Ok(WeightingSpec {
            family: Family::Polynomial {
                coeffs: poly.coeffs().to_vec(),
            },
            poly: Some(poly),
        })
    }

    /// Polynomial weighting from Bernstein coefficients `b_0 = 0 <= ... <= b_d = 1`.
    pub fn bernstein(coeffs: &[Rational]) -> Result<WeightingSpec> {
        WeightingSpec::polynomial(bernstein_to_monomial(coeffs).coeffs().to_vec())
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Exact polynomial form, when the family has one.
    pub fn as_poly(&self) -> Option<&Poly> {
        self.poly.as_ref()
    }

    /// Evaluation stays in the rationals.
    pub fn is_exact(&self) -> bool {
        self.poly.is_some() || matches!(self.family, Family::Tabulated { .. })
    }

    pub fn eval_h(&self, p: &Rational) -> Result<Value> {
        check_unit(p)?;
        if let Some(poly) = &self.poly {
            return Ok(Value::Exact(poly.eval(p)));
        }
        if let Family::Tabulated { knots } = &self.family {
            return Ok(Value::Exact(interpolate(knots, p)));
        }
        self.eval_h_f64(rational::to_f64(p)).map(Value::Real)
    }

    /// Exact `h(p)`; `None` for families evaluated in floating point.
    pub fn eval_exact(&self, p: &Rational) -> Result<Option<Rational>> {
        Ok(self.eval_h(p)?.into_exact())
    }

    pub fn eval_h_f64(&self, p: f64) -> Result<f64> {
        check_unit_f64(p)?;
        if p == 0.0 {
            return Ok(0.0);
        }
        if p == 1.0 {
            return Ok(1.0);
        }
        Ok(match &self.family {
            Family::Identity => p,
            Family::Quadratic { beta } => {
                let b = rational::to_f64(beta);
                (1.0 + b) * p - b * p * p
            }
            Family::Power { k } => p.powf(rational::to_f64(k)),
            Family::DualPower { m } => 1.0 - (1.0 - p).powi(*m as i32),
            Family::TverskyKahneman { gamma } => {
                let g = *gamma;
                let num = p.powf(g);
                num / (num + (1.0 - p).powf(g)).powf(1.0 / g)
            }
            Family::Prelec { a, b } => (-b * (-p.ln()).powf(*a)).exp(),
            Family::Tabulated { knots } => {
                let x = rational::from_f64(p).expect("finite");
                rational::to_f64(&interpolate(knots, &x))
            }
            Family::Polynomial { .. } => self.poly.as_ref().unwrap().eval_f64(p),
        })
    }

    pub fn eval_hbar(&self, p: &Rational) -> Result<Value> {
        check_unit(p)?;
        let h = self.eval_h(&(Rational::one() - p))?;
        Ok(&Value::Exact(Rational::one()) - &h)
    }

    pub fn eval_hbar_f64(&self, p: f64) -> Result<f64> {
        check_unit_f64(p)?;
        Ok(1.0 - self.eval_h_f64(1.0 - p)?)
    }

    /// Exact `h'(p)` for polynomial families.
    pub fn derivative_exact(&self, p: &Rational) -> Option<Rational> {
        self.poly.as_ref().map(|poly| poly.derivative().eval(p))
    }

    /// `h'(p)`: analytic for closed families, central difference with step
    /// `1e-6` for tabulated ones (one-sided at the ends).
    pub fn derivative_f64(&self, p: f64) -> Result<f64> {
        check_unit_f64(p)?;
        if let Some(poly) = &self.poly {
            return Ok(poly.derivative().eval_f64(p));
        }
        Ok(match &self.family {
            Family::Power { k } => {
                let k = rational::to_f64(k);
                k * p.powf(k - 1.0)
            }
            Family::TverskyKahneman { gamma } => {
                let g = *gamma;
                let q = 1.0 - p;
                let s = p.powf(g) + q.powf(g);
                p.powf(g - 1.0) * s.powf(-1.0 / g - 1.0) * (g * s - p.powf(g) + p * q.powf(g - 1.0))
            }
            Family::Prelec { a, b } => {
                let l = -p.ln();
                self.eval_h_f64(p)? * a * b * l.powf(a - 1.0) / p
            }
            _ => {
                let s = 1e-6;
                let lo = (p - s).max(0.0);
                let hi = (p + s).min(1.0);
                (self.eval_h_f64(hi)? - self.eval_h_f64(lo)?) / (hi - lo)
            }
        })
    }

    /// The weighting function whose `h` is this function's `hbar`.
    pub fn dual(&self) -> Option<WeightingSpec> {
        match &self.family {
            Family::Identity => Some(WeightingSpec::identity()),
            Family::DualPower { m } => WeightingSpec::power(int(*m as i64)).ok(),
            Family::Power { k } if k.is_integer() => {
                WeightingSpec::dual_power(k.to_integer().to_u32()?).ok()
            }
            Family::Tabulated { knots } => {
                let one = Rational::one();
                let flipped = knots
                    .iter()
                    .rev()
                    .map(|(p, h)| (&one - p, &one - h))
                    .collect();
                WeightingSpec::tabulated(flipped).ok()
            }
            Family::Quadratic { .. } | Family::Polynomial { .. } => {
                let poly = self.poly.as_ref()?;
                let one = Rational::one();
                let hbar = &Poly::constant(one.clone()) - &poly.compose_affine(&one, &-one.clone());
                WeightingSpec::polynomial(hbar.coeffs().to_vec()).ok()
            }
            _ => None,
        }
    }

    /// Signs of the `m`-th forward differences
    /// `sum_k (-1)^(m-k) C(m,k) h(p + k s)` over every start `p` and step
    /// `s` on the grid `{0, 1/G, ..., 1}` with `p + m s <= 1`.
    pub fn finite_difference_sign(&self, m: u32, grid_count: u32) -> SignCertificate {
        assert!(m >= 1, "difference order must be positive");
        assert!(grid_count > m, "grid_count must be at least m + 1");
        let g = grid_count as usize;
        let m_us = m as usize;
        let weights: Vec<i64> = (0..=m)
            .map(|k| {
                let c = binomial(m, k).to_integer().to_i64().unwrap();
                if (m - k).is_multiple_of(2) {
                    c
                } else {
                    -c
                }
            })
            .collect();
        let grid_point = |i: usize| rat(i as i64, g as i64);

        let mut negative: Option<SignWitness> = None;
        let mut positive: Option<SignWitness> = None;
        if self.is_exact() {
            let values: Vec<Rational> = (0..=g)
                .map(|i| self.eval_h(&grid_point(i)).unwrap().into_exact().unwrap())
                .collect();
            let weights: Vec<Rational> = weights.iter().map(|&w| int(w)).collect();
            for step in 1..=g / m_us {
                for start in 0..=(g - m_us * step) {
                    let mut d = Rational::zero();
                    for (k, w) in weights.iter().enumerate() {
                        if !w.is_zero() {
                            d += w * &values[start + k * step];
                        }
                    }
                    record_witness(&mut negative, &mut positive, rational::sign_of(&d), || {
                        SignWitness {
                            point: grid_point(start),
                            step: grid_point(step),
                            value: Value::Exact(d.clone()),
                        }
                    });
                }
            }
        } else {
            let values: Vec<f64> = (0..=g)
                .map(|i| self.eval_h_f64(i as f64 / g as f64).unwrap())
                .collect();
            let tol = 1e-12 * f64::powi(2.0, m as i32);
            for step in 1..=g / m_us {
                for start in 0..=(g - m_us * step) {
                    let d: f64 = weights
                        .iter()
                        .enumerate()
                        .map(|(k, &w)| w as f64 * values[start + k * step])
                        .sum();
                    let sign = if d.abs() <= tol {
                        Sign::Zero
                    } else {
                        Sign::of_f64(d)
                    };
                    record_witness(&mut negative, &mut positive, sign, || SignWitness {
                        point: grid_point(start),
                        step: grid_point(step),
                        value: Value::Real(d),
                    });
                }
            }
        }
        certificate(negative, positive)
    }

    /// Exact sign of `h^(m)` on `(0, 1)` for polynomial families (and the
    /// constant sign of `k (k-1) ... (k-m+1) p^(k-m)` for real powers).
    pub fn analytic_derivative_sign(&self, m: u32) -> Result<SignCertificate> {
        if let Some(poly) = &self.poly {
            let d = poly.nth_derivative(m);
            if d.is_zero() {
                return Ok(SignCertificate::Zero);
            }
            let scan = d.sign_scan(&Rational::zero(), &Rational::one(), false);
            let to_witness = |(point, value): (Rational, Rational)| SignWitness {
                point,
                step: Rational::zero(),
                value: Value::Exact(value),
            };
            return Ok(certificate(
                scan.negative.map(to_witness),
                scan.positive.map(to_witness),
            ));
        }
        if let Family::Power { k } = &self.family {
            let falling = (0..m).fold(Rational::one(), |acc, i| acc * (k - int(i as i64)));
            return Ok(match rational::sign_of(&falling) {
                Sign::Zero => SignCertificate::Zero,
                Sign::Positive => SignCertificate::NonNegative,
                Sign::Negative => SignCertificate::NonPositive,
            });
        }
        Err(Error::UnsupportedFamily(self.family_name().to_string()))
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Identity => "identity",
            Family::Quadratic { .. } => "quadratic",
            Family::Power { .. } => "power",
            Family::DualPower { .. } => "dualpower",
            Family::TverskyKahneman { .. } => "tk",
            Family::Prelec { .. } => "prelec",
            Family::Tabulated { .. } => "tabulated",
            Family::Polynomial { .. } => "poly",
        }
    }

    fn check_monotone_on_grid(&self) -> Result<()> {
        let g = DEFAULT_GRID_COUNT;
        let mut prev = 0.0;
        for i in 1..=g {
            let v = self.eval_h_f64(i as f64 / g as f64)?;
            if v < prev - 1e-12 {
                return Err(Error::InvalidWeighting(format!(
                    "{} weighting decreases near p = {}",
                    self.family_name(),
                    i as f64 / g as f64
                )));
            }
            prev = v;
        }
        Ok(())
    }
}

fn record_witness(
    negative: &mut Option<SignWitness>,
    positive: &mut Option<SignWitness>,
    sign: Sign,
    make: impl FnOnce() -> SignWitness,
) {
    match sign {
        Sign::Negative if negative.is_none() => *negative = Some(make()),
        Sign::Positive if positive.is_none() => *positive = Some(make()),
        _ => {}
    }
}

fn certificate(negative: Option<SignWitness>, positive: Option<SignWitness>) -> SignCertificate {
    match (negative, positive) {
        (None, None) => SignCertificate::Zero,
        (None, Some(_)) => SignCertificate::NonNegative,
        (Some(_), None) => SignCertificate::NonPositive,
        (Some(negative), Some(positive)) => SignCertificate::Mixed { negative, positive },
    }
}

fn interpolate(knots: &[(Rational, Rational)], p: &Rational) -> Rational {
    let idx = knots.partition_point(|(x, _)| x < p);
    if idx == 0 {
        return knots[0].1.clone();
    }
    let (x1, y1) = &knots[idx];
    if x1 == p {
        return y1.clone();
    }
    let (x0, y0) = &knots[idx - 1];
    y0 + (y1 - y0) * (p - x0) / (x1 - x0)
}

/// `sum_k b_k C(d,k) p^k (1-p)^(d-k)` in monomial form.
pub fn bernstein_to_monomial(coeffs: &[Rational]) -> Poly {
    let d = coeffs.len().saturating_sub(1) as u32;
    let one = Rational::one();
    let one_minus = Poly::from_coeffs(vec![one.clone(), -one.clone()]);
    let mut acc = Poly::zero();
    for (k, b) in coeffs.iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let k = k as u32;
        let basis = &Poly::monomial(b * binomial(d, k), k as usize) * &one_minus.pow(d - k);
        acc = &acc + &basis;
    }
    acc
}

impl fmt::Display for WeightingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<String>| v.join(";");
        match &self.family {
            Family::Identity => write!(f, "identity"),
            Family::Quadratic { beta } => write!(f, "quadratic:beta={beta}"),
            Family::Power { k } => write!(f, "power:k={k}"),
            Family::DualPower { m } => write!(f, "dualpower:m={m}"),
            Family::TverskyKahneman { gamma } => write!(f, "tk:gamma={gamma}"),
            Family::Prelec { a, b } => write!(f, "prelec:a={a},b={b}"),
            Family::Tabulated { knots } => write!(
                f,
                "tabulated:{}",
                join(knots.iter().map(|(p, h)| format!("{p}:{h}")).collect())
            ),
            Family::Polynomial { coeffs } => {
                write!(
                    f,
                    "poly:{}",
                    join(coeffs.iter().map(|c| c.to_string()).collect())
                )
            }
        }
    }
}

impl FromStr for WeightingSpec {
    type Err = Error;

    /// `identity`, `quadratic:beta=1/2`, `power:k=2`, `dualpower:m=3`,
    /// `tk:gamma=0.61`, `prelec:a=0.65,b=1`, `tabulated:0:0;1/2:3/4;1:1`,
    /// `poly:0;0;3;-2`, `bernstein:0;0;1;1`.
    fn from_str(s: &str) -> Result<WeightingSpec> {
        let bad = |msg: &str| Error::InvalidWeighting(format!("`{s}`: {msg}"));
        let (name, rest) = match s.trim().split_once(':') {
            Some((n, r)) => (n.trim().to_ascii_lowercase(), r.trim()),
            None => (s.trim().to_ascii_lowercase(), ""),
        };
        let params = || -> Result<Vec<(String, String)>> {
            rest.split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|kv| {
                    kv.split_once('=')
                        .map(|(k, v)| (k.trim().to_ascii_lowercase(), v.trim().to_string()))
                        .ok_or_else(|| bad("expected key=value"))
                })
                .collect()
        };
        let get = |key: &str| -> Result<String> {
            params()?
                .into_iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v)
                .ok_or_else(|| bad(&format!("missing parameter `{key}`")))
        };
        let rat_param = |key: &str| -> Result<Rational> {
            parse_rational(&get(key)?).map_err(|e| bad(&e.to_string()))
        };
        let real_param = |key: &str| -> Result<f64> {
            let v = get(key)?;
            v.parse::<f64>()
                .ok()
                .or_else(|| parse_rational(&v).ok().map(|r| rational::to_f64(&r)))
                .ok_or_else(|| bad(&format!("invalid number `{v}`")))
        };
        let rational_list = |text: &str| -> Result<Vec<Rational>> {
            text.split(';')
                .map(|t| parse_rational(t).map_err(|e| bad(&e.to_string())))
                .collect()
        };
        match name.as_str() {
            "identity" | "linear" => Ok(WeightingSpec::identity()),
            "quadratic" => WeightingSpec::quadratic(rat_param("beta")?),
            "power" => WeightingSpec::power(rat_param("k")?),
            "dualpower" => {
                let m = get("m")?
                    .parse::<u32>()
                    .map_err(|_| bad("m must be a positive integer"))?;
                WeightingSpec::dual_power(m)
            }
            "tk" => WeightingSpec::tversky_kahneman(real_param("gamma")?),
            "prelec" => WeightingSpec::prelec(real_param("a")?, real_param("b")?),
            "tabulated" => {
                let knots = rest
                    .split(';')
                    .map(|pair| {
                        let (p, h) = pair.split_once(':').ok_or_else(|| bad("knots are `p:h`"))?;
                        Ok((
                            parse_rational(p).map_err(|e| bad(&e.to_string()))?,
                            parse_rational(h).map_err(|e| bad(&e.to_string()))?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                WeightingSpec::tabulated(knots)
            }
            "poly" => WeightingSpec::polynomial(rational_list(rest)?),
            "bernstein" => WeightingSpec::bernstein(&rational_list(rest)?),
            _ => Err(bad("unknown weighting family")),
        }
    }
}
