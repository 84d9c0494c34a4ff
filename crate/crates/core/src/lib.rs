//! Exact arithmetic for counting newforms with prescribed ramified
//! supercuspidal local components.
//!
//! The library computes, for even weight `k >= 4` and a level of the shape
//! `N = M * prod_{p | T} p^(2r_p + 1)` with `T >= 5` odd and squarefree, the
//! dimension of the subspace of `S_k^new(N)` spanned by newforms whose local
//! component at each `p | T` is a fixed ramified supercuspidal representation
//! of `PGL_2(Q_p)`.  The answer is a main term (a product of formal degrees)
//! plus a bias term gated by an indicator `Delta` and the product of local
//! root numbers, with the bias magnitude expressed through the trace of the
//! Atkin-Lehner operator `W_T` on the full newspace.
//!
//! Everything is computed in exact rational arithmetic; integrality of every
//! final dimension is asserted rather than assumed, which doubles as a
//! self-test of the bookkeeping.
//!
//! Module map:
//!
//! * [`arith`] - factored integers, quadratic residue symbols, and the
//!   multiplicative functions entering the formulas.
//! * [`class_number`] - class numbers of imaginary quadratic fields by
//!   exhaustive enumeration of reduced binary quadratic forms.
//! * [`dims`] - classical dimensions of `S_k(Gamma_0(N))` and `S_k^new(N)`.
//! * [`atkin_lehner`] - traces of `W_T` on newspaces in the two explicitly
//!   known cases (`M = 1`, or `T` prime), plus the `S`-minimal trace helper.
//! * [`census`] - the local-component bookkeeping and the dimension formulas
//!   themselves.
//! * [`local_oracle`] - brute-force verification of the local unit-group
//!   structure underlying the Galois-orbit parametrization, by explicit
//!   finite-ring enumeration.

pub mod arith;
pub mod atkin_lehner;
pub mod census;
pub mod class_number;
pub mod dims;
mod error;
pub mod local_oracle;

pub use error::{Error, Result};
