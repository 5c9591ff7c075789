//! Library side of the `xpdcal` command line: campaign configuration,
//! orchestration of the simulate/analyze/verify pipeline, and report
//! persistence. The binary in `main.rs` is a thin argument parser over
//! these modules.

// Validation uses the negated form `!(x > 0)` on purpose: it rejects NaN,
// which `x <= 0` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod pipeline;
pub mod report;
