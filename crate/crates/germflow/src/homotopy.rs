//! The homotopy `F(ξ,x) = f(x) + ξ(g−f)(x)`, its gradient field, and the
//! induced vector fields `X` and `W`.
//!
//! `X = (g−f)·∇F/|∇F|²` away from the critical set, extended by zero where
//! `|∇F|²` falls below the singular cutoff. `W` divides the spatial part
//! of `X` by `X₁ − 1`, which is legitimate only while `|X₁ − 1| > 1/2`;
//! crossing that gap is reported as a violation, never clamped. A domain
//! certificate records that the gap and the gradient-comparability
//! constants hold at every sample of a given ball.

use crate::analysis::{zero_sample, SampleGrid};
use crate::germ::GermCase;
use crate::poly::MultiPoly;
use serde::Serialize;

/// Cutoff on `|∇F|²` below which `X` is set to its continuous extension 0.
pub const EPS_SING: f64 = 1e-24;
/// Half-width of the ξ-slab on which the field is considered.
pub const XI_SLAB_HALF_WIDTH: f64 = 3.0;
/// The divisor `X₁ − 1` must stay at least this far from zero.
pub const GAP_THRESHOLD: f64 = 0.5;

/// Precomputed polynomial data for `F`, `∇F`, `X` and `W`.
///
/// `grad_full(ξ,x)` has `n+1` components: the ξ-component is `d = g − f`
/// (identically `∂F/∂ξ`), the spatial components are `∇f + ξ∇d`.
#[derive(Debug, Clone)]
pub struct HomotopyField {
    pub case: GermCase,
    pub d: MultiPoly,
    pub grad_f: Vec<MultiPoly>,
    pub grad_d: Vec<MultiPoly>,
    pub eps_sing: f64,
    pub delta: f64,
}

/// Raised when `|X₁ − 1| ≤ 1/2` at an evaluation point. This is the
/// detection channel for inputs that only pretend to satisfy the
/// hypothesis gate.
#[derive(Debug, Clone, thiserror::Error)]
#[error("gap violation at xi = {xi}: |X1 - 1| = {gap} <= 1/2 at x = {x:?}")]
pub struct GapViolation {
    pub xi: f64,
    pub x: Vec<f64>,
    pub gap: f64,
}

/// One field evaluation, for serialization and certification scans.
#[derive(Debug, Clone, Serialize)]
pub struct FieldSample {
    pub xi: f64,
    pub x: Vec<f64>,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "gradF")]
    pub grad: Vec<f64>,
    #[serde(rename = "X")]
    pub x_field: Vec<f64>,
    #[serde(rename = "W")]
    pub w: Option<Vec<f64>>,
    pub on_cutoff: bool,
}

impl HomotopyField {
    pub fn new(case: GermCase) -> Self {
        let d = case.difference();
        let grad_f = case.f.gradient();
        let grad_d = d.gradient();
        HomotopyField {
            d,
            grad_f,
            grad_d,
            eps_sing: EPS_SING,
            delta: XI_SLAB_HALF_WIDTH,
            case,
        }
    }

    pub fn dim(&self) -> usize {
        self.case.n
    }

    /// `F(ξ,x) = f(x) + ξ·(g−f)(x)`.
    pub fn f_eval(&self, xi: f64, x: &[f64]) -> f64 {
        self.case.f.eval(x) + xi * self.d.eval(x)
    }

    /// `∇F(ξ,x) = (d(x), ∇f(x) + ξ∇d(x))`, length `n+1`.
    pub fn grad_f_eval(&self, xi: f64, x: &[f64]) -> Vec<f64> {
        let mut grad = Vec::with_capacity(self.case.n + 1);
        grad.push(self.d.eval(x));
        for (df, dd) in self.grad_f.iter().zip(&self.grad_d) {
            grad.push(df.eval(x) + xi * dd.eval(x));
        }
        grad
    }

    /// `X(ξ,x) = d(x)·∇F/|∇F|²`, or 0 on the singular cutoff. The first
    /// component is `d²/|∇F|² ≥ 0` always.
    pub fn x_eval(&self, xi: f64, x: &[f64]) -> Vec<f64> {
        let grad = self.grad_f_eval(xi, x);
        let s: f64 = grad.iter().map(|c| c * c).sum();
        if s <= self.eps_sing {
            return vec![0.0; self.case.n + 1];
        }
        let scale = grad[0] / s;
        grad.iter().map(|c| scale * c).collect()
    }

    /// `W(ξ,x) = (X₂,…,X_{n+1})/(X₁−1)`, defined only while the divisor
    /// keeps the guaranteed gap from zero.
    pub fn w_eval(&self, xi: f64, x: &[f64]) -> Result<Vec<f64>, GapViolation> {
        let xf = self.x_eval(xi, x);
        let divisor = xf[0] - 1.0;
        if divisor.abs() <= GAP_THRESHOLD {
            return Err(GapViolation {
                xi,
                x: x.to_vec(),
                gap: divisor.abs(),
            });
        }
        Ok(xf[1..].iter().map(|c| c / divisor).collect())
    }

    /// Full record of one evaluation.
    pub fn sample(&self, xi: f64, x: &[f64]) -> FieldSample {
        let grad = self.grad_f_eval(xi, x);
        let s: f64 = grad.iter().map(|c| c * c).sum();
        let on_cutoff = s <= self.eps_sing;
        let x_field = if on_cutoff {
            vec![0.0; self.case.n + 1]
        } else {
            let scale = grad[0] / s;
            grad.iter().map(|c| scale * c).collect()
        };
        let divisor = x_field[0] - 1.0;
        let w = (divisor.abs() > GAP_THRESHOLD)
            .then(|| x_field[1..].iter().map(|c| c / divisor).collect());
        FieldSample {
            xi,
            x: x.to_vec(),
            f: self.f_eval(xi, x),
            grad,
            x_field,
            w,
            on_cutoff,
        }
    }
}

/// Nearest-neighbor distance from `x` to a sampled zero set; 1 when the
/// sample set is empty (distance-to-empty-set convention).
pub fn dist_to_z_proxy(x: &[f64], z_samples: &[Vec<f64>]) -> f64 {
    z_samples
        .iter()
        .map(|z| {
            x.iter()
                .zip(z)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        })
        .min_by(|a, b| a.total_cmp(b))
        .unwrap_or(1.0)
}

/// Empirical certificate that the working ball supports the construction:
/// the gap `|X₁ − 1| > 1/2` and the gradient-comparability constants hold
/// at every sample with `|ξ| ≤ 1`, `|x|∞ ≤ radius`.
#[derive(Debug, Clone, Serialize)]
pub struct DomainCertificate {
    pub radius: f64,
    pub grid_spec: SampleGrid,
    /// min over samples of `|X₁ − 1|`.
    pub min_gap: f64,
    /// max over admissible samples of `|∇f|/|∇F|`.
    pub c1_hat: f64,
    /// min over admissible samples of `|∇F|/|∇f|`; collapses toward 0
    /// when the spatial gradient of `F` degenerates somewhere in the slab.
    pub c3_hat: f64,
    /// max of `|∇f(x)|/dist(x,Z)` against the sampled critical set.
    pub a_hat: f64,
    pub ok: bool,
}

/// Sample the ball `|ξ| ≤ 1`, `|x|∞ ≤ radius` and record the worst
/// constants seen. `ok` means the gap never dipped to 1/2.
pub fn certify_domain(field: &HomotopyField, radius: f64, grid: &SampleGrid) -> DomainCertificate {
    assert!(radius > 0.0, "certification radius must be positive");
    let n = field.dim();
    let spatial = SampleGrid { radius, ..grid.clone() };
    let points = spatial.points(n);
    let xis = crate::analysis::linspace(-1.0, 1.0, grid.points_per_axis);

    let z_samples = zero_sample(&field.grad_f, &spatial);

    let mut min_gap = f64::INFINITY;
    let mut c1_hat: f64 = 0.0;
    let mut c3_hat = f64::INFINITY;
    let mut a_hat: f64 = 0.0;
    let floor = grid.exclusion.max(1e-300);

    for x in &points {
        let grad_f_norm = crate::analysis::norm2(
            &field.grad_f.iter().map(|p| p.eval(x)).collect::<Vec<_>>(),
        );
        let dist = dist_to_z_proxy(x, &z_samples);
        if dist > 0.0 {
            a_hat = a_hat.max(grad_f_norm / dist);
        }
        for &xi in &xis {
            let s = field.sample(xi, x);
            min_gap = min_gap.min((s.x_field[0] - 1.0).abs());
            if s.on_cutoff {
                continue;
            }
            let grad_full_norm = crate::analysis::norm2(&s.grad);
            if grad_full_norm > floor {
                c1_hat = c1_hat.max(grad_f_norm / grad_full_norm);
            }
            if grad_f_norm > floor {
                c3_hat = c3_hat.min(grad_full_norm / grad_f_norm);
            }
        }
    }

    if !c3_hat.is_finite() {
        c3_hat = 0.0;
    }
    DomainCertificate {
        radius,
        grid_spec: spatial,
        min_gap,
        c1_hat,
        c3_hat,
        a_hat,
        ok: min_gap > GAP_THRESHOLD,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::GermCase;
    use crate::poly::parse_poly;

    fn case(f: &str, g: &str, vars: &[&str], r: u32) -> GermCase {
        GermCase::from_pair(
            parse_poly(f, vars).unwrap(),
            parse_poly(g, vars).unwrap(),
            r,
            f,
        )
    }

    fn field(f: &str, g: &str, vars: &[&str], r: u32) -> HomotopyField {
        HomotopyField::new(case(f, g, vars, r))
    }

    #[test]
    fn homotopy_endpoints() {
        let fld = field("x^2 + y^2", "x^2 + y^2 + x y^3", &["x", "y"], 1);
        for x in [[0.1, 0.2], [-0.25, 0.05], [0.0, 0.0]] {
            let f = fld.case.f.eval(&x);
            let g = fld.case.g.eval(&x);
            assert!((fld.f_eval(0.0, &x) - f).abs() <= 1e-14 * (1.0 + f.abs()));
            assert!((fld.f_eval(1.0, &x) - g).abs() <= 1e-14 * (1.0 + g.abs()));
        }
    }

    #[test]
    fn f_eval_counterexample_closed_form() {
        // F = (1 - 2ξ)x² vanishes at ξ = 1/2.
        let fld = field("x^2", "-1*x^2", &["x"], 1);
        assert_eq!(fld.f_eval(0.5, &[0.1]), 0.0);
    }

    #[test]
    fn grad_eval_examples() {
        let fld = field("x^2", "x^2 + x^6", &["x"], 1);
        let g = fld.grad_f_eval(0.0, &[0.1]);
        assert!((g[0] - 1e-6).abs() < 1e-18);
        assert!((g[1] - 0.2).abs() < 1e-15);

        let trivial = field("x^2", "x^2", &["x"], 1);
        let g = trivial.grad_f_eval(0.7, &[0.1]);
        assert_eq!(g[0], 0.0);
        assert!((g[1] - 0.2).abs() < 1e-15);

        let cx = field("x^2", "-1*x^2", &["x"], 1);
        let g = cx.grad_f_eval(0.5, &[0.1]);
        assert!((g[0] + 0.02).abs() < 1e-15);
        assert_eq!(g[1], 0.0);
    }

    #[test]
    fn x_eval_matches_exact_rational_oracle() {
        // Oracle at x = 1/10, ξ = 0: X = (25, 5·10⁶)/1000000000025.
        let fld = field("x^2", "x^2 + x^6", &["x"], 1);
        let x = fld.x_eval(0.0, &[0.1]);
        let oracle0 = 25.0 / 1.000000000025e12;
        let oracle1 = 5.0e6 / 1.000000000025e12;
        assert!((x[0] - oracle0).abs() <= 1e-9 * oracle0);
        assert!((x[1] - oracle1).abs() <= 1e-9 * oracle1);
    }

    #[test]
    fn x_eval_zero_for_equal_germs() {
        let fld = field("x^2 + y^2", "x^2 + y^2", &["x", "y"], 1);
        assert_eq!(fld.x_eval(0.3, &[0.1, -0.2]), vec![0.0; 3]);
    }

    #[test]
    fn x_eval_counterexample_unit_first_component() {
        // X = (d/|∇F|²)(d, 0) = (1, 0) at ξ = 1/2.
        let fld = field("x^2", "-1*x^2", &["x"], 1);
        let x = fld.x_eval(0.5, &[0.1]);
        assert!((x[0] - 1.0).abs() < 1e-14);
        assert_eq!(x[1], 0.0);
    }

    #[test]
    fn w_eval_examples() {
        let trivial = field("x^2", "x^2", &["x"], 1);
        assert_eq!(trivial.w_eval(0.2, &[0.1]).unwrap(), vec![0.0]);

        let fld = field("x^2", "x^2 + x^6", &["x"], 1);
        let w = fld.w_eval(0.0, &[0.1]).unwrap();
        let oracle = (5.0e6 / 1.000000000025e12) / (25.0 / 1.000000000025e12 - 1.0);
        assert!((w[0] - oracle).abs() <= 1e-12 * oracle.abs());
        assert!((w[0] + 5.0e-6).abs() <= 1e-9 * 5.0e-6);

        let cx = field("x^2", "-1*x^2", &["x"], 1);
        let err = cx.w_eval(0.5, &[0.1]).unwrap_err();
        assert!(err.gap < 1e-12);
    }

    #[test]
    fn x_first_component_nonnegative() {
        let fld = field("x^2 + y^4", "x^2 + y^4 + x y^2", &["x", "y"], 1);
        for xi in [-1.0, -0.3, 0.0, 0.4, 1.0] {
            for x in [[0.1, 0.2], [-0.2, -0.1], [0.05, -0.29]] {
                assert!(fld.x_eval(xi, &x)[0] >= 0.0);
            }
        }
    }

    #[test]
    fn gradient_pairing_recovers_difference() {
        // <∇F, X> = d off the cutoff; the algebraic identity behind
        // conservation of F along the flow.
        let fld = field("x^2 + y^2", "x^2 + y^2 + x y^3", &["x", "y"], 1);
        for xi in [-0.8, 0.0, 0.5, 1.0] {
            for x in [[0.12, 0.2], [-0.22, 0.17], [0.01, -0.08]] {
                let grad = fld.grad_f_eval(xi, &x);
                let xf = fld.x_eval(xi, &x);
                let pairing: f64 = grad.iter().zip(&xf).map(|(a, b)| a * b).sum();
                let d = fld.d.eval(&x);
                assert!((pairing - d).abs() <= 1e-10 * (1.0 + d.abs()));
            }
        }
    }

    #[test]
    fn dist_proxy_examples() {
        assert_eq!(dist_to_z_proxy(&[0.1], &[vec![0.0]]), 0.1);
        assert_eq!(dist_to_z_proxy(&[0.1], &[]), 1.0);
        // line Z = {x = 0} sampled along the y-axis
        let z: Vec<Vec<f64>> = (-10..=10).map(|k| vec![0.0, k as f64 * 0.05]).collect();
        let d = dist_to_z_proxy(&[0.2, 0.5], &z);
        assert!((d - 0.2).abs() < 1e-12);
    }

    #[test]
    fn certify_passing_case() {
        let fld = field("x^2", "x^2 + x^6", &["x"], 1);
        let cert = certify_domain(&fld, 0.3, &SampleGrid::cube(0.3, 101));
        assert!(cert.ok);
        assert!(cert.min_gap >= 0.99);
        // A from the closed form |∇f|/|x| = 2
        assert!((cert.a_hat - 2.0).abs() < 1e-6);
    }

    #[test]
    fn certify_trivial_case_has_unit_gap() {
        let fld = field("x^2 + y^2", "x^2 + y^2", &["x", "y"], 1);
        let cert = certify_domain(&fld, 0.2, &SampleGrid::cube(0.2, 11));
        assert!(cert.ok);
        assert_eq!(cert.min_gap, 1.0);
        assert!((cert.c1_hat - 1.0).abs() < 1e-12);
        assert!((cert.c3_hat - 1.0).abs() < 1e-12);
    }

    #[test]
    fn certify_counterexample_fails() {
        let fld = field("x^2", "-1*x^2", &["x"], 1);
        let cert = certify_domain(&fld, 0.1, &SampleGrid::cube(0.1, 21));
        assert!(!cert.ok);
        assert!(cert.min_gap < 0.5);
    }

    #[test]
    fn decay_rate_fitted_then_verified() {
        // |X| ≤ A'·dist^{r+1}: fit A' on a coarse shell set, verify no
        // fine-grid sample exceeds 1.1 × the fitted bound.
        let fld = field("x^2", "x^2 + x^6", &["x"], 1);
        let r = fld.case.r;
        let z = vec![vec![0.0]];
        let fit_max = |count: usize| -> f64 {
            let mut worst: f64 = 0.0;
            for j in 1..=count {
                let x = [0.3 * j as f64 / count as f64];
                let dist = dist_to_z_proxy(&x, &z);
                for xi in [-1.0, -0.5, 0.0, 0.5, 1.0] {
                    let mag = crate::analysis::norm2(&fld.x_eval(xi, &x));
                    worst = worst.max(mag / dist.powi((r + 1) as i32));
                }
            }
            worst
        };
        let a_coarse = fit_max(12);
        let a_fine = fit_max(97);
        assert!(a_fine <= 1.1 * a_coarse, "fine {a_fine} vs coarse {a_coarse}");
    }
}
