//! Log-domain tail probabilities for products of independent beta and
//! generalized gamma random variables.
//!
//! For `B ~ Beta(a, b)` and `Z ~ GGa(c, p)` (density
//! `p x^{c-1} e^{-x^p} / Γ(c/p)` on `x > 0`), this crate computes
//! `ln P(B·Z > t)` three independent ways and quantifies how far apart
//! they are:
//!
//! - [`exact_tail`]: adaptive log-space quadrature of the defining
//!   integral, with controlled relative error.
//! - [`asymptotics`]: the closed-form large-`t` tail formula, the
//!   four-step approximation chain behind it, and rigorous closed-form
//!   bounds on every gap in that chain.
//! - [`montecarlo`]: naive simulation and a conditional (overshoot)
//!   rare-event estimator whose relative error does not degrade deep in
//!   the tail.
//!
//! Everything is carried as natural logarithms ([`LogReal`] /
//! [`LogProb`]) and combined with log-sum-exp, so tails far below the
//! smallest positive `f64` remain representable.
//!
//! The crate is `no_std` (with `alloc`); all float math goes through
//! `libm`, which keeps results bit-identical across platforms.

#![cfg_attr(not(test), no_std)]
// NaN-rejecting comparisons (`!(x > 0.0)`) and quadrature tables kept at
// their published precision trip these two style lints all over a
// numerics crate.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

extern crate alloc;

pub mod asymptotics;
pub mod distributions;
pub mod exact_tail;
mod fmath;
pub mod logspace;
pub mod montecarlo;
pub mod quadrature;
pub mod rng;
pub mod specfun;

mod error;

pub use error::{Error, Result};
pub use logspace::{LogProb, LogReal};
