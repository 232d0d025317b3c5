//! Left braces and left-nilpotent pre-Lie rings over finite abelian p-groups.
//!
//! The crate works over groups `A = Z/p^{e_1} x ... x Z/p^{e_r}` of order
//! `p^n` with `p > n + 1`, and implements both directions of the passage
//! between the two structures:
//!
//! * [`flows`] builds a brace (the group of flows) from a left-nilpotent
//!   pre-Lie ring.
//! * [`correspondence`] derives a pre-Lie ring on `A/ann(p^2)` from a brace,
//!   together with the `f`/`g` machinery and the reconstruction pipeline that
//!   recovers `A/ann(p^4)` as a group of flows.
//!
//! Everything is exact modular arithmetic; there are no tolerances. All
//! verifiers return a [`Report`] instead of panicking so that counterexamples
//! can be printed with witnesses.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod brace;
pub mod correspondence;
pub mod error;
pub mod flows;
pub mod group;
pub mod identities;
pub mod prelie;
pub mod report;
pub mod sample;
pub mod scalar;

pub use brace::Brace;
pub use error::{Error, Result};
pub use group::{Element, PGroup, Quotient, Span, Subgroup};
pub use prelie::PreLieRing;
pub use report::{Check, Report};
pub use sample::Coverage;
pub use scalar::ScalarRing;
