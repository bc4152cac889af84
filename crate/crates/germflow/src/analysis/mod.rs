//! Numerical and symbolic verification of the estimates behind the
//! construction: Łojasiewicz-type ratio scans, distance-to-variety bounds,
//! derivative expansions of `1/ξ`, and the decay laws of the homotopy
//! field near the critical set.

mod grid;
mod lemtech;
mod scans;

pub use grid::{
    linspace, norm2, ols_slope, random_ball_points, unit_directions, GridPattern, SampleGrid,
    DEFAULT_SEED,
};
pub use lemtech::{inv_power_expand, lemtech_bound_scan, LemtechReport, RationalFn};
pub use scans::{
    fd_partial_x_field, grad_comparability_scan, lemma2_scan, loja_gradient_scan,
    step_scaling_check, zero_sample, ComparabilityReport, Lemma2Report, LojaReport, ScalingReport,
};

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("no admissible samples above the exclusion floor")]
    NoAdmissibleSamples,
    #[error("the zero polynomial has no reciprocal")]
    ZeroXi,
    #[error("derivative order must be at least 1")]
    OrderTooSmall,
    #[error("insufficient shell coverage for a log-log fit ({bins} occupied bins)")]
    InsufficientShellCoverage { bins: usize },
    #[error("multi-index order {order} exceeds the case order r = {r}")]
    OrderAboveR { order: u32, r: u32 },
}
