//! Infinite graphs on `Z` (with optional chords `(k, −k)`) described by
//! closed-form weight rules, and finite-window analyses of them.
//!
//! Every analysis quantifies over functions supported in a window
//! `{−N, …, N}`, which are compactly supported on the infinite graph.
//! Lower bounds that hold for all compactly supported functions therefore
//! apply to the window results without correction.

mod family;
mod forms;
mod gap;
mod series;

pub use family::{LineFamily, Truncation, BUILTIN_NAMES};
pub use forms::{
    g2_harmonic_basis, harmonic_line_form, smooth_cutoff, tapered_harmonic_form, tent_wave,
    weyl_residual, G2Basis, HarmonicLineForm, WindowFunction,
};
pub use gap::{
    chi_certificate, chi_cutoff, dirichlet_gap, dirichlet_operator, g1_witness,
    exponential_witness, gap_certificate, ChiCertificate, ChiRow, GapCertificate,
};
pub use series::{
    bgj_series, ker_delta_criterion, BgjReport, KerDeltaReport, NeumaierSum, TailTest, Verdict,
};

use thiserror::Error;

use crate::expr::ExprError;
use crate::graph::GraphError;
use crate::operators::OperatorError;
use crate::spectra::SpectraError;

#[derive(Debug, Error)]
pub enum InfiniteError {
    #[error("unknown family {0:?} (builtins: simple-Z, G1, exponential, G2)")]
    UnknownFamily(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("rule {rule} gives {value} at n = {n}; weights must be positive and finite")]
    BadRuleValue { rule: String, n: i64, value: f64 },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("family file: {0}")]
    Parse(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("window radius {radius} is below the minimum {min}")]
    WindowTooSmall { radius: usize, min: usize },
    #[error("this analysis is stated for Z without chords")]
    ChordsUnsupported,
    #[error("this analysis needs unit masses; m({n}) = {mass}")]
    NonUnitMass { n: i64, mass: f64 },
    #[error("witness mismatch at edge ({n}, {}): A² = {a_sq}, c = {c}", n + 1)]
    WitnessMismatch { n: i64, a_sq: f64, c: f64 },
    #[error("no positive gap: increment A(n,n+1) − A(n−1,n) = {increment} at n = {n}")]
    NoPositiveGap { n: i64, increment: f64 },
    #[error("support radius {support} needs a window of at least {needed}, got {radius}")]
    SupportTooCloseToBoundary {
        support: usize,
        needed: usize,
        radius: usize,
    },
}
