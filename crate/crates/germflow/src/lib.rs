//! Desk-scale construction and verification of C^r right-equivalence
//! diffeomorphisms for polynomial germs.
//!
//! Given polynomial representatives `f`, `g` with `∇f(0) = 0` and
//! `g − f` divisible by `f^{r+2}`, the toolkit builds the linear homotopy
//! `F(ξ,x) = f(x) + ξ(g−f)(x)`, the associated Kuiper–Kuo vector field,
//! and integrates the induced flow on `t ∈ [0,1]` to produce a map `φ`
//! with `g(φ(x)) = f(x)` near the origin. Every analytic estimate the
//! construction relies on (gradient comparability, decay laws, the
//! Łojasiewicz inequality) is checked numerically on sample grids.

pub mod analysis;
pub mod cli;
pub mod flow;
pub mod germ;
pub mod homotopy;
pub mod poly;

pub use germ::{GermCase, HypothesisReport};
pub use homotopy::{DomainCertificate, FieldSample, HomotopyField};
pub use poly::{parse_poly, Monomial, MultiPoly, PolyError, Rational};
