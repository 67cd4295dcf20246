//! Exact-arithmetic computations for affine Lie algebra modules at finite
//! grading depth.
//!
//! The crate builds depth-truncated generalized Weyl modules for an affine
//! Lie algebra ĝ over an exact base field (rationals, or rational functions
//! in the parameter κ), equips them with Segal-Sugawara operators and vertex
//! operator modes, and computes two constructions of the fusion tensor
//! product space inside the dual of a module pair:
//!
//! * the annihilator spaces `Z^N` of products of functions vanishing at the
//!   output puncture, with their stabilized union (`fusion::compute_circ`);
//! * the space cut out by the strong lower truncation condition on a
//!   generating set, together with the local grading surrogate
//!   (`fusion::compute_hboxtr`).
//!
//! Everything is computed over an exact field; every truncated object
//! carries an explicit validity window and values outside it are treated as
//! unknown rather than zero.
//!
//! Module map:
//!
//! * [`scalar`] — exact base field elements (ℚ or ℚ(κ)),
//! * [`linalg`] — sparse exact linear algebra (RREF, kernels),
//! * [`formal`] — the function ring on the thrice-punctured sphere,
//!   expansions at the punctures, residue pairings, truncated series,
//! * [`liealg`] — finite-dimensional semisimple Lie algebras and their
//!   highest-weight modules,
//! * [`affine`] — the affine algebra, depth-truncated induced modules and
//!   contragredients,
//! * [`sugawara`] — Segal-Sugawara operators and Virasoro relation checks,
//! * [`voa`] — vertex operator modes, opposite/contragredient operators,
//!   Jacobi coefficient checks, C₁ quotients,
//! * [`fusion`] — dual-space actions and the two fusion space constructions.

pub mod affine;
pub mod error;
pub mod formal;
pub mod fusion;
pub mod liealg;
pub mod linalg;
pub mod rng;
pub mod scalar;
pub mod sugawara;
pub mod voa;

pub use error::{Error, Result};
pub use scalar::Scalar;
