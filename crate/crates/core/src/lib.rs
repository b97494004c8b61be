//! Constant-dimension subspace codes over finite fields.
//!
//! The crate covers exact GF(q) arithmetic, Grassmannian linear algebra,
//! rank-metric codes, explicit code constructions, a bound engine for
//! `A_q(n,d;k)` with provenance trees, and brute-force verification.
//!
//! It is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod bounds;
pub mod constructions;
pub mod divisible;
pub mod gfq;
pub mod provenance;
pub mod qcombi;
pub mod rankmetric;
pub mod spaces;
pub mod verify;

pub use num_bigint::BigInt;
