//! Construction and numerical verification of Bonnet hypersurface pairs.
//!
//! The crate is organised bottom-up:
//!
//! * [`fieldcore`]: uniform grids, sampled fields, finite differences, norms.
//! * [`exprlang`]: the closed-form expression language used by scenarios.
//! * [`framegeom`]: frame scalars `k`, `k̄`, `t` and the reduced Codazzi/Gauss systems.
//! * [`tensorlab`]: Christoffel symbols, Riemann curvature and the general
//!   Gauss–Codazzi residuals, principal curvatures, A-net detection and the
//!   coordinate rescaling to `g11 = g22`, `g_pp = 1`.
//! * [`bonnet`]: fundamental tensors of a pair `(M, M′)` built from `(𝕳, 𝕵, θ)`,
//!   the master constraints and the pair/round-trip verification.
//! * [`solver`]: quadrature and damped Gauss–Newton solvers for the constraints.
//!
//! Mean curvature follows the convention `H = (k1 + k2) / 2` throughout,
//! not `trace / n`.

// `!(x > 0.0)` is used on purpose so that NaN fails the same guards.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bonnet;
pub mod exec;
pub mod exprlang;
pub mod fieldcore;
pub mod fixtures;
pub mod framegeom;
pub mod report;
pub mod solver;
pub mod tensorlab;
