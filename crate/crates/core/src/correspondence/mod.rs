//! From braces to pre-Lie rings and back.
//!
//! [`derived`] builds `•` on `A/ann(p^2)`, [`fmap`] covers `f`, `g` and the
//! `α`/`γ` reconstruction identities, [`shift`] solves for the coefficients,
//! and [`pipeline`] checks that `A/ann(p^4)` is a group of flows.

pub mod derived;
pub mod fmap;
pub mod pipeline;
pub mod shift;

pub use derived::{derive, DerivedPreLie};
pub use fmap::{f_map, g_map, FPermutation};
pub use pipeline::{check_reconstruction, reconstruct_brace, verify_flows_scaling};
pub use shift::{alpha_coefficients, gamma_coefficients, ShiftSeries};
