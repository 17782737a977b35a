//! Pointwise algebra of twistor spaces `J(M, g)`.
//!
//! Everything here lives on a single model tangent space `V = R^{2n}` carrying
//! either a pseudo-Riemannian structure of signature `(2p, 2q)` or a symplectic
//! form. The crate provides
//!
//! * the fibre of compatible complex structures as a group orbit of `j0`
//!   ([`spaces`]),
//! * algebraic curvature tensors, their Ricci/Weyl decompositions and the
//!   four-dimensional Hodge splitting ([`curvature`]),
//! * the canonical 2-form, the Nijenhuis tensors of `J+` and `J-`, the
//!   `j`-action obstruction and the integrability / type-(1,1) verdicts
//!   ([`twistor`]),
//! * finite-difference curvature of concrete coordinate metrics and symplectic
//!   point fixtures ([`charts`]).
//!
//! The crate is `no_std` (with `alloc`). The `std` feature only adds
//! `std::error::Error` plumbing; `parallel` turns on rayon-backed fibre
//! sampling, which is reduced in index order so results never depend on the
//! thread count.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod charts;
pub mod curvature;
mod error;
pub mod linalg;
pub mod spaces;
pub mod tensor;
mod tolerance;
pub mod twistor;

pub use error::{Error, Result};
pub use tolerance::Tolerances;

pub use nalgebra::{DMatrix, DVector};
