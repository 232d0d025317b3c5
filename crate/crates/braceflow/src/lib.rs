//! Text formats, fixtures and the `braceflow` command line on top of
//! [`braceflow_core`].
//!
//! * [`format`] reads and writes `prelie v1` and `brace v1` documents.
//! * [`fixtures`] holds the example inputs and the generators that rebuild
//!   them.
//! * [`selftest`] is the acceptance suite, one function per criterion.
//! * [`cli`] binds everything into subcommands with stable exit codes.

pub mod cli;
pub mod fixtures;
pub mod format;
pub mod selftest;
