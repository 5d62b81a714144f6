//! Exact desk-scale analysis of discernibility for identical particles.
//!
//! States live in the n-fold tensor power of a d-dimensional single-particle
//! space. The crate builds (anti)symmetrized states, evaluates conditional
//! probabilities of single-particle propositions from ordered products of
//! eigenprojectors, and decides whether two particles can be told apart by
//! any such probability.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod catalog;
pub mod claims;
pub mod discern;
pub mod error;
pub mod exact;
pub mod ket;
pub mod observable;
pub mod perm;
pub mod probability;
pub mod suite;
pub mod tolerance;

pub use error::{Error, Result};
pub use ket::{BasisTuple, MultiKet, RayRelation};
pub use num_complex::Complex64 as C64;
