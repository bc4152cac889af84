//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! All symbolic work (ring operations, differentiation, division) is exact;
//! floating point enters only at the evaluation boundary. Monomials are
//! ordered graded-lexicographically, which fixes the division algorithm and
//! makes every result reproducible.

mod parse;

pub use parse::parse_poly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Exact coefficient type: arbitrary-precision rational, always in lowest
/// terms with positive denominator.
pub type Rational = BigRational;

/// Maximum total degree accepted by the parser.
pub const MAX_DEGREE: u32 = 64;
/// Maximum number of variables accepted by the parser.
pub const MAX_VARS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("negative exponent at position {pos}")]
    NegativeExponent { pos: usize },
    #[error("monomial degree {degree} exceeds cap {MAX_DEGREE}")]
    DegreeTooLarge { degree: u32 },
    #[error("{n} variables exceeds cap {MAX_VARS}")]
    TooManyVariables { n: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Exponent vector of a single monomial. Length equals the ambient
/// dimension of the polynomial it belongs to.
///
/// `Ord` is graded lexicographic: total degree first, then lexicographic
/// comparison of the exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    /// The monomial 1 in dimension `n`.
    pub fn unit(n: usize) -> Self {
        Monomial { exps: vec![0; n] }
    }

    /// The monomial x_i in dimension `n`.
    pub fn var(n: usize, i: usize) -> Self {
        assert!(i < n, "variable index {i} out of range for dimension {n}");
        let mut exps = vec![0; n];
        exps[i] = 1;
        Monomial { exps }
    }

    pub fn dim(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    /// Total degree: sum of all exponents.
    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.len() == other.exps.len()
            && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Quotient monomial; caller guarantees `other.divides(self)`.
    fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), &self.exps).cmp(&(other.degree(), &other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over the rationals.
///
/// Invariants: no zero coefficients are stored and every monomial has
/// length `n`. The zero polynomial has an empty term map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    n: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        MultiPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut p = MultiPoly::zero(n);
        if !c.is_zero() {
            p.terms.insert(Monomial::unit(n), c);
        }
        p
    }

    pub fn one(n: usize) -> Self {
        MultiPoly::constant(n, Rational::one())
    }

    /// The coordinate polynomial x_i.
    pub fn variable(n: usize, i: usize) -> Self {
        let mut p = MultiPoly::zero(n);
        p.terms.insert(Monomial::var(n, i), Rational::one());
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = MultiPoly::zero(n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        assert_eq!(m.dim(), self.n, "monomial dimension mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Coefficient of the constant monomial; this is the value at 0.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::unit(self.n))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Leading term in graded-lexicographic order.
    fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.n, other.n, "dimension mismatch in add");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.n, other.n, "dimension mismatch in sub");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.n);
        }
        MultiPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.n, other.n, "dimension mismatch in mul");
        let mut out = MultiPoly::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = MultiPoly::one(self.n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Exact symbolic partial derivative with respect to x_i.
    pub fn partial(&self, i: usize) -> MultiPoly {
        assert!(i < self.n, "variable index {i} out of range");
        let mut out = MultiPoly::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[i] = e - 1;
            out.add_term(
                Monomial::new(exps),
                c * Rational::from(BigInt::from(e)),
            );
        }
        out
    }

    /// Iterated partial derivative `∂^alpha`. Differentiation order is
    /// irrelevant in exact arithmetic.
    pub fn higher_partial(&self, alpha: &Monomial) -> MultiPoly {
        assert_eq!(alpha.dim(), self.n, "multi-index dimension mismatch");
        let mut out = self.clone();
        for (i, &e) in alpha.exps.iter().enumerate() {
            for _ in 0..e {
                out = out.partial(i);
                if out.is_zero() {
                    return out;
                }
            }
        }
        out
    }

    /// Gradient as a vector of n polynomials.
    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.n).map(|i| self.partial(i)).collect()
    }

    /// Double-precision evaluation by monomial summation.
    pub fn eval(&self, point: &[f64]) -> f64 {
        assert_eq!(point.len(), self.n, "point dimension mismatch in eval");
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = c.to_f64().expect("rational representable as f64");
            for (x, &e) in point.iter().zip(&m.exps) {
                if e > 0 {
                    t *= x.powi(e as i32);
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.n, "point dimension mismatch in eval_exact");
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.exps) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Single-divisor multivariate division in graded-lexicographic order.
    ///
    /// Returns `(quotient, divisible)`; `divisible` is true exactly when
    /// `self == q * quotient`. For a single divisor a zero remainder is
    /// equivalent to divisibility, so the loop can stop at the first
    /// non-divisible leading term.
    pub fn divide_exact(&self, q: &MultiPoly) -> Result<(MultiPoly, bool), PolyError> {
        assert_eq!(self.n, q.n, "dimension mismatch in divide_exact");
        if q.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (lm, lc) = q.leading_term().expect("nonzero divisor");
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.n);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return Ok((quot, false));
            }
            let tm = m.div(&lm);
            let tc = c / &lc;
            let mut t = MultiPoly::zero(self.n);
            t.terms.insert(tm, tc);
            rem = rem.sub(&t.mul(q));
            quot = quot.add(&t);
        }
        Ok((quot, true))
    }
}

impl fmt::Display for MultiPoly {
    /// Canonical form, re-parseable by the polynomial grammar: terms in
    /// descending graded-lex order, explicit coefficients, e.g.
    /// `2*x^2 y - 1/2*y^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let factors: Vec<String> = m
                .exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = var_name(i);
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join(" "))?;
            } else {
                write!(f, "{}*{}", abs, factors.join(" "))?;
            }
        }
        Ok(())
    }
}

fn var_name(i: usize) -> String {
    const NAMES: [&str; 8] = ["x", "y", "z", "w", "u", "v", "s", "t"];
    NAMES.get(i).map(|s| s.to_string()).unwrap_or(format!("x{i}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(BigInt::from(a), BigInt::from(b))
    }

    fn p(text: &str, vars: &[&str]) -> MultiPoly {
        parse_poly(text, vars).unwrap()
    }

    #[test]
    fn eval_sum_of_squares() {
        let f = p("1*x^2 + 1*y^2", &["x", "y"]);
        assert!((f.eval(&[0.1, 0.2]) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn eval_at_origin_is_constant_term() {
        let f = p("3*x^2 + 2", &["x"]);
        assert_eq!(f.eval(&[0.0]), 2.0);
        assert_eq!(f.constant_term(), q(2, 1));
    }

    #[test]
    fn eval_monomial_power() {
        let f = p("x^6", &["x"]);
        let v = f.eval(&[0.1]);
        assert!((v - 1e-6).abs() < 1e-18 * (1.0 + v.abs()) * 1e6);
        assert!(((v - 1e-6) / 1e-6).abs() < 1e-12);
    }

    #[test]
    fn eval_exact_examples() {
        let f = p("x^2", &["x"]);
        assert_eq!(f.eval_exact(&[q(1, 3)]), q(1, 9));
        let g = p("x^2 + y^2", &["x", "y"]);
        assert_eq!(g.eval_exact(&[q(1, 2), q(1, 2)]), q(1, 2));
        let h = f.pow(3);
        assert_eq!(h.eval_exact(&[q(1, 2)]), q(1, 64));
    }

    #[test]
    fn partial_examples() {
        let f = p("x^2 + y^2", &["x", "y"]);
        assert_eq!(f.partial(0), p("2*x", &["x", "y"]));
        let g = p("x^6", &["x"]);
        assert_eq!(g.partial(0), p("6*x^5", &["x"]));
        let h = p("x^2", &["x", "y"]);
        assert!(h.partial(1).is_zero());
    }

    #[test]
    fn higher_partial_examples() {
        let f = p("x^2 y", &["x", "y"]);
        assert_eq!(f.higher_partial(&Monomial::new(vec![2, 0])), p("2*y", &["x", "y"]));
        assert_eq!(f.higher_partial(&Monomial::new(vec![1, 1])), p("2*x", &["x", "y"]));
        assert!(f.higher_partial(&Monomial::new(vec![0, 3])).is_zero());
    }

    #[test]
    fn ring_op_examples() {
        let x2 = p("x^2", &["x"]);
        assert_eq!(x2.pow(3), p("x^6", &["x"]));
        assert!(x2.add(&x2.scale(&q(-1, 1))).is_zero());
        let a = p("x + y", &["x", "y"]);
        let b = p("x - y", &["x", "y"]);
        assert_eq!(a.mul(&b), p("x^2 - y^2", &["x", "y"]));
    }

    #[test]
    fn divide_exact_identity() {
        let x6 = p("x^6", &["x"]);
        let x2cubed = p("x^2", &["x"]).pow(3);
        let (quot, ok) = x6.divide_exact(&x2cubed).unwrap();
        assert!(ok);
        assert_eq!(quot, p("1", &["x"]));
    }

    #[test]
    fn divide_exact_counterexample_fails_membership() {
        // g - f = -2x^2 against f^{r+2} = x^6: not divisible.
        let d = p("-2*x^2", &["x"]);
        let x6 = p("x^6", &["x"]);
        let (_, ok) = d.divide_exact(&x6).unwrap();
        assert!(!ok);
    }

    #[test]
    fn divide_exact_multiply_back() {
        let f = p("x^2 + y^2", &["x", "y"]).pow(2);
        let numer = f.mul(&p("1 + x", &["x", "y"]));
        let (quot, ok) = numer.divide_exact(&f).unwrap();
        assert!(ok);
        assert_eq!(quot, p("1 + x", &["x", "y"]));
        assert_eq!(f.mul(&quot), numer);
    }

    #[test]
    fn divide_by_zero_polynomial() {
        let f = p("x^2", &["x"]);
        assert_eq!(
            f.divide_exact(&MultiPoly::zero(1)).unwrap_err(),
            PolyError::DivisionByZero
        );
    }

    #[test]
    fn divide_zero_by_anything() {
        let z = MultiPoly::zero(1);
        let f = p("x^2", &["x"]);
        let (quot, ok) = z.divide_exact(&f).unwrap();
        assert!(ok);
        assert!(quot.is_zero());
    }

    #[test]
    fn display_roundtrip() {
        let f = p("2*x^2 y - 1/2*y^3 + 1", &["x", "y"]);
        let shown = f.to_string();
        assert_eq!(p(&shown, &["x", "y"]), f);
        assert_eq!(MultiPoly::zero(2).to_string(), "0");
    }

    #[test]
    fn eval_eval_exact_agreement() {
        let f = p("x^2 + 3*x y - 1/4*y^3", &["x", "y"]);
        let pt = [q(1, 4), q(-3, 8)];
        let exact = f.eval_exact(&pt).to_f64().unwrap();
        let approx = f.eval(&[0.25, -0.375]);
        assert!((approx - exact).abs() <= 1e-12 * (1.0 + exact.abs()));
    }

    // Randomized structural properties (exact arithmetic, no tolerances).
    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly(n: usize) -> impl Strategy<Value = MultiPoly> {
            let term = (
                proptest::collection::vec(0u32..4, n),
                -5i64..=5,
                1i64..=4,
            );
            proptest::collection::vec(term, 0..5).prop_map(move |ts| {
                MultiPoly::from_terms(
                    n,
                    ts.into_iter()
                        .map(|(e, num, den)| (Monomial::new(e), q(num, den))),
                )
            })
        }

        proptest! {
            #[test]
            fn add_associative(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
                prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            }

            #[test]
            fn mul_distributes(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
                prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            }

            #[test]
            fn higher_partial_order_independent(a in arb_poly(2)) {
                let dx_then_dy = a.partial(0).partial(1);
                let dy_then_dx = a.partial(1).partial(0);
                prop_assert_eq!(&dx_then_dy, &dy_then_dx);
                prop_assert_eq!(a.higher_partial(&Monomial::new(vec![1, 1])), dx_then_dy);
            }

            #[test]
            fn divide_exact_sound(a in arb_poly(2), b in arb_poly(2)) {
                prop_assume!(!b.is_zero());
                let numer = a.mul(&b);
                let (quot, ok) = numer.divide_exact(&b).unwrap();
                prop_assert!(ok);
                prop_assert_eq!(b.mul(&quot), numer);
            }

            #[test]
            fn eval_matches_eval_exact(a in arb_poly(2), xn in -8i64..=8, yn in -8i64..=8) {
                let pt = [q(xn, 16), q(yn, 16)];
                let exact = a.eval_exact(&pt).to_f64().unwrap();
                let approx = a.eval(&[xn as f64 / 16.0, yn as f64 / 16.0]);
                prop_assert!((approx - exact).abs() <= 1e-12 * (1.0 + exact.abs()));
            }
        }
    }

    #[test]
    fn rational_from_f64_roundtrip_sanity() {
        // Guard for the f64 boundary used by eval.
        let half = Rational::from_f64(0.5).unwrap();
        assert_eq!(half, q(1, 2));
    }
}
