//! Problem instances and the hypothesis gate.
//!
//! A case holds polynomial representatives `f`, `g` (optionally a witness
//! `h` with `g = f + h*f^{r+2}`) and the target smoothness order `r`.
//! The gate checks `f(0) = 0`, `g(0) = 0`, `∇f(0) = 0` and membership of
//! `g − f` in the principal-ideal power `(f)^{r+2}`, all in exact
//! arithmetic. Membership for polynomials reduces to exact divisibility by
//! `f^{r+2}`; divisibility is the documented criterion here, sufficient for
//! every witness-constructed case.

use crate::analysis::SampleGrid;
use crate::poly::{Monomial, MultiPoly, Rational};
use num_traits::Zero;
use serde::Serialize;

/// Denominator floor for the grid portion of the Lemma 1 ratio scan.
pub const LEMMA1_EPS_FLOOR: f64 = 1e-30;

/// A problem instance: dimension, `f`, `g`, order `r`, optional witness `h`.
#[derive(Debug, Clone)]
pub struct GermCase {
    pub n: usize,
    pub f: MultiPoly,
    pub g: MultiPoly,
    pub r: u32,
    pub h: Option<MultiPoly>,
    pub label: String,
}

impl GermCase {
    /// Case given as `(f, h, r)`; `g` is constructed as `f + h*f^{r+2}`.
    pub fn from_witness(f: MultiPoly, h: MultiPoly, r: u32, label: impl Into<String>) -> Self {
        assert!(r >= 1, "r must be a positive integer");
        let g = build_g(&f, &h, r);
        GermCase {
            n: f.dim(),
            g,
            f,
            r,
            h: Some(h),
            label: label.into(),
        }
    }

    /// Case given as `(f, g, r)` directly.
    pub fn from_pair(f: MultiPoly, g: MultiPoly, r: u32, label: impl Into<String>) -> Self {
        assert!(r >= 1, "r must be a positive integer");
        assert_eq!(f.dim(), g.dim(), "f and g dimension mismatch");
        GermCase {
            n: f.dim(),
            f,
            g,
            r,
            h: None,
            label: label.into(),
        }
    }

    /// `d = g − f`, the homotopy direction.
    pub fn difference(&self) -> MultiPoly {
        self.g.sub(&self.f)
    }
}

/// `g = f + h*f^{r+2}`, exact. This is the witness form in which the
/// membership hypothesis always holds by construction.
pub fn build_g(f: &MultiPoly, h: &MultiPoly, r: u32) -> MultiPoly {
    assert_eq!(f.dim(), h.dim(), "f and h dimension mismatch");
    f.add(&h.mul(&f.pow(r + 2)))
}

/// Outcome of the hypothesis gate. Every flag must be true for the
/// pipeline to proceed without `--force`.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub f_vanishes: bool,
    pub g_vanishes: bool,
    pub grad_f_vanishes: bool,
    pub membership: bool,
    pub quotient: Option<String>,
    pub messages: Vec<String>,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.f_vanishes && self.g_vanishes && self.grad_f_vanishes && self.membership
    }
}

/// Evaluate the Main-Theorem hypotheses exactly. Reports failures instead
/// of raising; a case that fails here is representable on purpose (the
/// counterexample demo depends on it).
pub fn check_hypotheses(case: &GermCase) -> HypothesisReport {
    let mut messages = Vec::new();

    let f0 = case.f.constant_term();
    let g0 = case.g.constant_term();
    let f_vanishes = f0.is_zero();
    let g_vanishes = g0.is_zero();
    if !f_vanishes {
        messages.push(format!("f(0) = {f0}, expected 0"));
    }
    if !g_vanishes {
        messages.push(format!("g(0) = {g0}, expected 0"));
    }

    let grad_at_zero: Vec<Rational> = (0..case.n)
        .map(|i| case.f.partial(i).constant_term())
        .collect();
    let grad_f_vanishes = grad_at_zero.iter().all(Rational::is_zero);
    if !grad_f_vanishes {
        messages.push(format!(
            "gradient of f at 0 is ({}) != 0",
            grad_at_zero
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }

    let d = case.difference();
    let modulus = case.f.pow(case.r + 2);
    let (membership, quotient) = if modulus.is_zero() {
        // (0)^M = {0}: only the zero polynomial is a member.
        (d.is_zero(), d.is_zero().then(|| MultiPoly::zero(case.n)))
    } else {
        match d.divide_exact(&modulus) {
            Ok((q, true)) => (true, Some(q)),
            Ok((_, false)) => (false, None),
            Err(_) => unreachable!("modulus checked nonzero"),
        }
    };
    if !membership {
        messages.push(format!(
            "g - f is not divisible by f^{} (membership in (f)^{} fails)",
            case.r + 2,
            case.r + 2
        ));
    }

    if let (Some(h), Some(q)) = (&case.h, &quotient) {
        if h != q {
            messages.push(format!(
                "supplied witness h = {h} differs from computed quotient {q}"
            ));
        }
    }

    HypothesisReport {
        f_vanishes,
        g_vanishes,
        grad_f_vanishes,
        membership,
        quotient: quotient.map(|q| q.to_string()),
        messages,
    }
}

/// Result of the derivative/ratio check for powers of a principal ideal.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma1Report {
    pub m: u32,
    pub r: u32,
    /// Part (i): every `∂^α p` with `|α| ≤ r` divides exactly by `f^{M−|α|}`.
    pub part_i_ok: bool,
    pub part_i_failures: Vec<String>,
    /// Part (ii): fitted constant `max |p(x)| / |f(x)|^M` on the grid.
    pub c_hat: f64,
    pub part_ii_samples: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum Lemma1Error {
    #[error("precondition failed: p is not divisible by f^{0}")]
    NotAMember(u32),
    #[error("precondition failed: M = {m} must exceed r = {r}")]
    OrderTooSmall { m: u32, r: u32 },
}

/// Check that membership `p ∈ (f)^M` propagates through differentiation:
/// symbolically for part (i), by a grid ratio scan for part (ii).
pub fn lemma1_check(
    p: &MultiPoly,
    f: &MultiPoly,
    m: u32,
    r: u32,
    grid: &SampleGrid,
) -> Result<Lemma1Report, Lemma1Error> {
    if m <= r {
        return Err(Lemma1Error::OrderTooSmall { m, r });
    }
    let f_m = f.pow(m);
    let member = if f_m.is_zero() {
        p.is_zero()
    } else {
        p.divide_exact(&f_m).map(|(_, ok)| ok).unwrap_or(false)
    };
    if !member {
        return Err(Lemma1Error::NotAMember(m));
    }

    let n = p.dim();
    let mut part_i_failures = Vec::new();
    for alpha in multi_indices_up_to(n, r) {
        let order = alpha.degree();
        if order == 0 {
            continue; // membership itself, already verified
        }
        let deriv = p.higher_partial(&alpha);
        let modulus = f.pow(m - order);
        let ok = if modulus.is_zero() {
            deriv.is_zero()
        } else {
            deriv.divide_exact(&modulus).map(|(_, d)| d).unwrap_or(false)
        };
        if !ok {
            part_i_failures.push(format!(
                "∂^{:?} p not divisible by f^{}",
                alpha.exps(),
                m - order
            ));
        }
    }

    let mut c_hat: f64 = 0.0;
    let mut samples = 0usize;
    for x in grid.points(n) {
        let fv = f.eval(&x).abs();
        if fv <= LEMMA1_EPS_FLOOR {
            continue;
        }
        let ratio = p.eval(&x).abs() / fv.powi(m as i32);
        if ratio.is_finite() {
            c_hat = c_hat.max(ratio);
            samples += 1;
        }
    }

    Ok(Lemma1Report {
        m,
        r,
        part_i_ok: part_i_failures.is_empty(),
        part_i_failures,
        c_hat,
        part_ii_samples: samples,
    })
}

/// All multi-indices in `n` variables with total order ≤ `max_order`.
pub fn multi_indices_up_to(n: usize, max_order: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fill_indices(n, max_order, 0, &mut current, &mut out);
    out
}

fn fill_indices(n: usize, budget: u32, pos: usize, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if pos == n {
        out.push(Monomial::new(current.clone()));
        return;
    }
    for e in 0..=budget {
        current[pos] = e;
        fill_indices(n, budget - e, pos + 1, current, out);
    }
    current[pos] = 0;
}
