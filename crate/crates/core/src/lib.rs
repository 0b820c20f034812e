//! Finite atomic models of the sup-completion `X^s` of a Dedekind complete
//! vector lattice `X`.
//!
//! `X = ℝ^Ω` for a finite set of atoms `Ω` carrying strictly positive
//! weights, and `X^s = (ℝ ∪ {+∞})^Ω`. The crate provides the cone
//! operations, band projections, symbolic sequences with exact limits,
//! conditional expectations, filtrations and the martingale and
//! Borel–Cantelli checks built on them. All algorithms are generic over a
//! [`Scalar`] backend: exact rationals or `f64`.

pub mod band;
pub mod borel_cantelli;
pub mod error;
pub mod expectation;
pub mod martingale;
pub mod monotone;
pub mod oracle;
pub mod report;
pub mod scalar;
pub mod seq;
pub mod space;
pub mod vector;

pub use band::{
    band_residual_limit, finite_part, infinite_band_by_truncation, infinite_part, split_parts,
    Band,
};
pub use borel_cantelli::{bcl1, bcl1_off_band, bcl2, product_harness, product_space};
pub use error::{Error, Result};
pub use expectation::{CondExp, IndependenceViolation, TpConfig, INDEPENDENCE_LIMIT};
pub use martingale::{
    stop_process, tau_k, AdaptedProcess, Filtration, StoppingTime, TauK,
};
pub use monotone::{extend_map, Limit, MonotoneMap, ScalarFn};
pub use report::{Report, Status};
pub use scalar::{float_tolerance, ratio, Backend, Ext, Rational, Scalar};
pub use seq::{ProjSeq, ProjTail, TailRule, VecSeq};
pub use space::AtomicSpace;
pub use vector::{ext_ints, ExtVec, LatVec};
