//! Exact-arithmetic cohomology for morphisms of differential algebras.
//!
//! A differential algebra of weight `λ` is an associative unital algebra `A`
//! together with a linear operator `d` satisfying
//! `d(uv) = d(u)v + u d(v) + λ d(u)d(v)`. This crate works with
//! finite-dimensional such algebras over the rationals, presented by
//! structure constants, and with morphisms `φ: A → B` between them.
//!
//! What it computes, all in exact rational arithmetic:
//!
//! * Hochschild-style cochain complexes attached to an algebra, to a
//!   differential algebra, and to a morphism of differential algebras
//!   ([`complexes`]), as explicit sparse matrices;
//! * cohomology: Betti numbers and representative cocycles ([`cohomology`]);
//! * a comparison certificate relating the morphism cohomology of `φ` to the
//!   differential-algebra cohomology of an auxiliary mapping ring `φ!`
//!   ([`cct`]);
//! * validity, equivalence, and trivialization of truncated formal
//!   deformations of `(A, B, φ)` ([`deformation`]).
//!
//! Layering is strict: [`exactlin`] knows nothing about algebras,
//! [`structures`] nothing about complexes, and so on up. Every type is plain
//! owned data, so values can be shared freely across threads.
//!
//! The crate is `no_std` by default-off: disable the `std` feature to build
//! against `core` + `alloc` only.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod cct;
pub mod cohomology;
pub mod complexes;
pub mod deformation;
pub mod error;
pub mod exactlin;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod structures;

pub use error::Error;
pub use exactlin::{Matrix, Scalar, Subspace};
