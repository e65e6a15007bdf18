//! Surface regularity of self-affine attractors and tiles.
//!
//! Given an expanding integer matrix `M` and a digit set `D`, the attractor
//! `G(M, D)` is the compact set of points whose `M`-adic expansion has zero
//! integer part. This crate computes the surface regularity `s` of such sets
//! (the growth exponent of `|G_eps| - |G|`), the surface dimension `d = n - s`,
//! and the L1 Hölder exponent of the indicator function, all through exact
//! spectral formulas: transition matrices restricted to the zero-sum subspace,
//! a lifted operator on symmetric matrices, and its Perron eigenvalue.
//!
//! Three independent pipelines cross-check each other:
//!
//! * [`spectral`] — the eigenvalue route: `s = -2 ln rho_2 / ln r`;
//! * [`oracle`] — brute-force geometry: point clouds, rasterization, exact
//!   distance transforms, log–log slope fits, plus exact 1-D interval fixtures;
//! * [`automata`] — the combinatorial route: the same transition family read
//!   as a deterministic finite automaton, whose parameter of synchronization
//!   `p = lim P_k^{1/k}` equals `r^{-s}` for tiles.
//!
//! [`render`] emits bit-exact PGM/PPM images of tiles and tilings, and
//! [`fixtures`] carries the built-in systems used by the test suite and CLI.

pub mod algebra;
pub mod attractor;
// pub mod automata;
// pub mod fixtures;
pub mod lattice;
pub mod oracle;
// pub mod render;
// pub mod rng;
pub mod spectral;
pub mod transition;
// pub mod verify;

pub use algebra::{IntMatrix, SpectralProfile};
