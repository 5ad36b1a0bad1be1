//! Dense polynomials over the rationals and piecewise polynomials.
//!
//! Sign questions ("is this polynomial non-negative on `[a, b]`?") are
//! decided exactly: the square-free part is isolated with Sturm sequences and
//! the polynomial is evaluated at one rational point inside every interval
//! between consecutive real roots.

use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use crate::rational::{self, Rational};

/// Coefficients in ascending order, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Poly {
        Poly::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn monomial(c: Rational, degree: usize) -> Poly {
        let mut coeffs = vec![Rational::zero(); degree];
        coeffs.push(c);
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational::to_f64(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer((k as i64).into()))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, m: u32) -> Poly {
        (0..m).fold(self.clone(), |p, _| p.derivative())
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Poly {
        let mut coeffs = vec![Rational::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / Rational::from_integer(((k + 1) as i64).into()));
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::constant(Rational::one()), |acc, _| &acc * self)
    }

    /// `p(a + b x)`.
    pub fn compose_affine(&self, a: &Rational, b: &Rational) -> Poly {
        let inner = Poly::from_coeffs(vec![a.clone(), b.clone()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &inner) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dl = d
            .leading()
            .expect("division by the zero polynomial")
            .clone();
        let dd = d.degree().unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let factor = rem.last().unwrap() / &dl;
            for (i, c) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &factor * c;
            }
            quot[k] = factor;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&(Rational::one() / l)),
            None => Poly::zero(),
        }
    }

    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// The product of the distinct irreducible factors (same real roots,
    /// all simple).
    pub fn square_free(&self) -> Poly {
        let g = Poly::gcd(self, &self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }

    /// Looks for points of each strict sign on `[lo, hi]` (endpoints
    /// included when `closed`), or on the open interval otherwise.
    pub fn sign_scan(&self, lo: &Rational, hi: &Rational, closed: bool) -> SignScan {
        let mut scan = SignScan::default();
        if self.is_zero() || lo > hi {
            return scan;
        }
        if closed {
            scan.record(lo, self.eval(lo));
            scan.record(hi, self.eval(hi));
        }
        if lo == hi {
            return scan;
        }
        for t in self.region_representatives(lo, hi) {
            let v = self.eval(&t);
            scan.record(&t, v);
        }
        scan
    }

    /// One rational point inside each maximal open sub-interval of
    /// `(lo, hi)` on which `self` has no root.
    fn region_representatives(&self, lo: &Rational, hi: &Rational) -> Vec<Rational> {
        let sf = self.square_free();
        if sf.degree().unwrap_or(0) == 0 {
            return vec![midpoint(lo, hi)];
        }
        let sturm = SturmSequence::new(&sf);
        let roots_open = |a: &Rational, b: &Rational| {
            let c = sturm.count(a, b);
            if sf.eval(b).is_zero() {
                c - 1
            } else {
                c
            }
        };

        // Inner endpoints that bracket every root in (lo, hi) and are not
        // themselves roots.
        let mut lo_in = midpoint(lo, hi);
        while sturm.count(lo, &lo_in) > 0 {
            lo_in = midpoint(lo, &lo_in);
        }
        let mut hi_in = midpoint(lo, hi);
        while roots_open(&hi_in, hi) > 0 || sf.eval(&hi_in).is_zero() {
            hi_in = midpoint(&hi_in, hi);
        }
        if lo_in >= hi_in {
            // No roots at all in (lo, hi).
            return vec![lo_in];
        }
        let mut points = vec![lo_in.clone()];
        let mut stack = vec![(lo_in, hi_in.clone())];
        let mut isolated = Vec::new();
        while let Some((a, b)) = stack.pop() {
            match sturm.count(&a, &b) {
                0 => {}
                1 => isolated.push((a, b)),
                _ => {
                    let split = non_root_split(&sf, &a, &b);
                    stack.push((a, split.clone()));
                    stack.push((split, b));
                }
            }
        }
        isolated.sort_by(|x, y| x.0.cmp(&y.0));
        for (_, b) in isolated {
            points.push(b);
        }
        points.push(hi_in);
        points
    }

    /// Number of distinct real roots in the open interval `(lo, hi)`.
    pub fn count_roots_open(&self, lo: &Rational, hi: &Rational) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let sf = self.square_free();
        if sf.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let sturm = SturmSequence::new(&sf);
        let c = sturm.count(lo, hi);
        if sf.eval(hi).is_zero() {
            c - 1
        } else {
            c
        }
    }
}

fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / Rational::from_integer(2.into())
}

/// A point strictly inside `(a, b)` that is not a root of `sf`.
fn non_root_split(sf: &Poly, a: &Rational, b: &Rational) -> Rational {
    let width = b - a;
    for den in 2i64.. {
        for num_ in 1..den {
            let t = a + &width * rational::rat(num_, den);
            if !sf.eval(&t).is_zero() {
                return t;
            }
        }
    }
    unreachable!()
}

/// Points where a polynomial takes each strict sign, if any.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SignScan {
    pub negative: Option<(Rational, Rational)>,
    pub positive: Option<(Rational, Rational)>,
}

impl SignScan {
    fn record(&mut self, x: &Rational, v: Rational) {
        if v.is_negative() {
            if self.negative.as_ref().is_none_or(|(_, old)| &v < old) {
                self.negative = Some((x.clone(), v));
            }
        } else if v.is_positive() && self.positive.as_ref().is_none_or(|(_, old)| &v > old) {
            self.positive = Some((x.clone(), v));
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.negative.is_none()
    }

    pub fn is_nonpositive(&self) -> bool {
        self.positive.is_none()
    }
}

struct SturmSequence {
    seq: Vec<Poly>,
}

impl SturmSequence {
    fn new(p: &Poly) -> SturmSequence {
        let mut seq = vec![normalize(p), normalize(&p.derivative())];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            if seq[n - 1].degree() == Some(0) {
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(normalize(&-r));
        }
        SturmSequence { seq }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut count = 0;
        let mut last = 0i32;
        for p in &self.seq {
            let s = rational::sign_of(&p.eval(x)).as_i32();
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Distinct roots in `(a, b]`.
    fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Positive rescaling so the leading coefficient has magnitude one.
fn normalize(p: &Poly) -> Poly {
    match p.leading() {
        Some(l) => p.scale(&(Rational::one() / l.abs())),
        None => Poly::zero(),
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        Poly::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        Poly::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) - rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

/// A function on `[b_0, b_K]` given by one polynomial per interval
/// `(b_k, b_{k+1}]`; the first interval also owns `b_0`.
///
/// Pieces are expressed in the global variable, not shifted per interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewisePoly {
    breakpoints: Vec<Rational>,
    pieces: Vec<Poly>,
}

impl PiecewisePoly {
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Poly>) -> PiecewisePoly {
        assert!(breakpoints.len() >= 2, "need at least one interval");
        assert_eq!(
            pieces.len() + 1,
            breakpoints.len(),
            "one piece per interval"
        );
        assert!(
            breakpoints.windows(2).all(|w| w[0] < w[1]),
            "breakpoints must be strictly increasing"
        );
        PiecewisePoly {
            breakpoints,
            pieces,
        }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn lower(&self) -> &Rational {
        &self.breakpoints[0]
    }

    pub fn upper(&self) -> &Rational {
        self.breakpoints.last().unwrap()
    }

    pub fn max_degree(&self) -> usize {
        self.pieces
            .iter()
            .filter_map(Poly::degree)
            .max()
            .unwrap_or(0)
    }

    fn piece_index(&self, x: &Rational) -> Option<usize> {
        if x < self.lower() || x > self.upper() {
            return None;
        }
        // First k with x <= b_{k+1}.
        let idx = self.breakpoints[1..].partition_point(|b| b < x);
        Some(idx.min(self.pieces.len() - 1))
    }

    /// `None` outside `[b_0, b_K]`.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        self.piece_index(x).map(|k| self.pieces[k].eval(x))
    }

    pub fn eval_f64(&self, x: f64) -> Option<f64> {
        let lo = rational::to_f64(self.lower());
        let hi = rational::to_f64(self.upper());
        if !(lo..=hi).contains(&x) {
            return None;
        }
        let idx = self.breakpoints[1..].partition_point(|b| rational::to_f64(b) < x);
        Some(self.pieces[idx.min(self.pieces.len() - 1)].eval_f64(x))
    }

    /// Continuous antiderivative vanishing at `b_0`.
    pub fn integral(&self) -> PiecewisePoly {
        let mut pieces = Vec::with_capacity(self.pieces.len());
        let mut carry = Rational::zero();
        for (k, p) in self.pieces.iter().enumerate() {
            let anti = p.antiderivative();
            let start = &self.breakpoints[k];
            let end = &self.breakpoints[k + 1];
            let offset = &carry - &anti.eval(start);
            let piece = &anti + &Poly::constant(offset);
            carry = piece.eval(end);
            pieces.push(piece);
        }
        PiecewisePoly::new(self.breakpoints.clone(), pieces)
    }

    /// The same function over a refined breakpoint set (must contain the
    /// current breakpoints and share both ends).
    pub fn refine(&self, breakpoints: &[Rational]) -> PiecewisePoly {
        assert_eq!(breakpoints.first(), Some(self.lower()));
        assert_eq!(breakpoints.last(), Some(self.upper()));
        let pieces = breakpoints
            .windows(2)
            .map(|w| {
                let mid = midpoint(&w[0], &w[1]);
                self.pieces[self.piece_index(&mid).unwrap()].clone()
            })
            .collect();
        PiecewisePoly::new(breakpoints.to_vec(), pieces)
    }

    /// `self - other` on the union of both breakpoint sets. Both must cover
    /// the same interval.
    pub fn difference(&self, other: &PiecewisePoly) -> PiecewisePoly {
        let merged = merge_breakpoints(&self.breakpoints, &other.breakpoints);
        let a = self.refine(&merged);
        let b = other.refine(&merged);
        let pieces = a.pieces.iter().zip(&b.pieces).map(|(p, q)| p - q).collect();
        PiecewisePoly::new(merged, pieces)
    }

    /// Smallest-value witness of a negative point on the closed domain, if
    /// any. Exact.
    pub fn find_negative(&self) -> Option<(Rational, Rational)> {
        // Breakpoint pre-check before the root isolation.
        let mut worst: Option<(Rational, Rational)> = None;
        for (k, p) in self.pieces.iter().enumerate() {
            for b in [&self.breakpoints[k], &self.breakpoints[k + 1]] {
                let v = p.eval(b);
                if v.is_negative() && worst.as_ref().is_none_or(|(_, w)| &v < w) {
                    worst = Some((b.clone(), v));
                }
            }
        }
        if worst.is_some() {
            return worst;
        }
        for (k, p) in self.pieces.iter().enumerate() {
            let scan = p.sign_scan(&self.breakpoints[k], &self.breakpoints[k + 1], true);
            if let Some(neg) = scan.negative {
                return Some(neg);
            }
        }
        None
    }
}

pub fn merge_breakpoints(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut all: Vec<Rational> = a.iter().chain(b.iter()).cloned().collect();
    all.sort();
    all.dedup();
    all
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn p(cs: &[i64]) -> Poly {
        Poly::from_coeffs(cs.iter().map(|&c| int(c)).collect())
    }

    #[test]
    fn arithmetic_and_calculus() {
        let a = p(&[1, 2, 3]);
        assert_eq!(a.eval(&int(2)), int(17));
        assert_eq!(a.derivative(), p(&[2, 6]));
        assert_eq!(a.antiderivative().derivative(), a);
        assert_eq!(&a * &p(&[0, 1]), p(&[0, 1, 2, 3]));
        assert_eq!(p(&[1, 1]).pow(3), p(&[1, 3, 3, 1]));
        // (1-x)^2 via composition of x^2 with 1 - x
        assert_eq!(
            p(&[0, 0, 1]).compose_affine(&int(1), &int(-1)),
            p(&[1, -2, 1])
        );
        let (q, r) = p(&[-1, 0, 1]).div_rem(&p(&[-1, 1]));
        assert_eq!(q, p(&[1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn square_free_and_root_counts() {
        // (x - 1/2)^2 (x - 1/4)
        let f = &(&p(&[-1, 2]) * &p(&[-1, 2])) * &p(&[-1, 4]);
        assert_eq!(f.square_free().degree(), Some(2));
        assert_eq!(f.count_roots_open(&int(0), &int(1)), 2);
        assert_eq!(f.count_roots_open(&rat(1, 4), &rat(1, 2)), 0);
        assert_eq!(f.count_roots_open(&rat(1, 8), &int(1)), 2);
    }

    #[test]
    fn sign_scan_detects_touching_and_crossing() {
        // (x - 1/2)^2 >= 0 touches zero without a sign change.
        let touch = p(&[-1, 2]).pow(2);
        let s = touch.sign_scan(&int(0), &int(1), true);
        assert!(s.is_nonnegative());
        assert!(s.positive.is_some());
        // x^2 - 1/10 changes sign near 0.316.
        let cross = &p(&[0, 0, 1]) - &Poly::constant(rat(1, 10));
        let s = cross.sign_scan(&int(0), &int(1), true);
        assert!(!s.is_nonnegative());
        assert!(!s.is_nonpositive());
        // A narrow dip strictly inside the interval, invisible at both ends
        // and at the midpoint: 1000 (x - 0.3)(x - 0.3001) + tiny.
        let dip = &(&p(&[-3000, 10000]) * &p(&[-3001, 10000])) - &Poly::constant(int(0));
        let s = dip.sign_scan(&int(0), &int(1), true);
        let (x, v) = s.negative.expect("dip found");
        assert!(v.is_negative());
        assert!(x > rat(3, 10) && x < rat(3001, 10000));
    }

    #[test]
    fn piecewise_integral_of_step() {
        // Quantile of A = [0 @1/6; 3 @5/6]
        let f = PiecewisePoly::new(
            vec![int(0), rat(1, 6), int(1)],
            vec![Poly::constant(int(0)), Poly::constant(int(3))],
        );
        let g = f.integral();
        assert_eq!(g.eval(&rat(1, 2)).unwrap(), int(1));
        assert_eq!(g.eval(&int(1)).unwrap(), rat(5, 2));
        assert_eq!(g.eval(&int(0)).unwrap(), int(0));
        assert!(g.eval(&int(2)).is_none());
        let refined = g.refine(&[int(0), rat(1, 12), rat(1, 6), rat(1, 2), int(1)]);
        for q in [rat(1, 24), rat(1, 7), rat(1, 3), rat(9, 10)] {
            assert_eq!(refined.eval(&q), g.eval(&q));
        }
        assert!(g.difference(&g).find_negative().is_none());
    }
}
