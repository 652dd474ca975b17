//! # freecap
//!
//! Free encoding capacity of quantum states.
//!
//! A sender holds a state `ρ` and may only encode classical messages by
//! applying *free* operations of a quantum resource theory. The capacity of
//! that restricted encoding, optimized over ensembles `{p_x, N_x}`, is
//!
//! ```text
//! C_R(ρ) = max  S(Σ_x p_x N_x(ρ)) − Σ_x p_x S(N_x(ρ))
//!        = max  Σ_x p_x D(N_x(ρ) ‖ ρ̄)
//! ```
//!
//! This crate provides:
//!
//! - [`linalg`]: Hermitian eigendecomposition (complex Jacobi), spectral
//!   functions, seeded sampling of Haar unitaries and random states.
//! - [`qcore`]: density matrices, Kraus channels, POVMs, entropies, the
//!   Holevo quantity, passive states and ergotropy.
//! - [`theories`]: purity, activity, pointed and basis-containing resource
//!   theories, with free-state/free-channel tests and channel pools.
//! - [`fec`]: the capacity engine, a multiplicative fixed-point optimizer
//!   with a two-sided certificate, closed forms, and transformation bounds.
//! - [`protocol`]: encode/decode simulation with POVMs and shot sampling.
//! - [`verify`]: seeded randomized checks of the structural properties of the
//!   capacity (boundedness, monotonicity, convexity, faithfulness, ...).
//! - [`problem`]: the JSON problem-document format used by the CLI.
//!
//! All information quantities are in bits.

#![forbid(unsafe_code)]

pub mod error;
pub mod fec;
pub mod linalg;
pub mod problem;
pub mod protocol;
pub mod qcore;
pub mod theories;
pub mod verify;

pub use error::{Error, Result};
