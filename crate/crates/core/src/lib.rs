//! Mechanical verification of six-dimensional homogeneous nearly Kähler
//! structures.
//!
//! The crate is layered bottom-up:
//!
//! * [`scalar`], [`linalg`], [`exterior`]: exact or floating exterior algebra.
//! * [`lie`]: Lie algebras, reductive splittings, invariant exterior
//!   differential, Nomizu connections and curvature.
//! * [`hitchin`]: stable forms in dimension six and the nearly Kähler system.
//! * [`s3xs3`]: invariant forms on S³×S³ and the uniqueness argument.
//! * [`catalog`]: model spaces (Ledger–Obata, flags, ℂP³, octonions, cones).
//! * [`spec_io`] and [`report`]: JSON input documents and verification reports.

pub mod catalog;
pub mod commands;
pub mod error;
pub mod exterior;
pub mod hitchin;
pub mod lie;
pub mod linalg;
pub mod report;
pub mod s3xs3;
pub mod scalar;
pub mod spec_io;

pub use error::{Error, Result};
pub use exterior::{lambda5_to_vector, KForm};
pub use linalg::{Endo, Gram, Matrix, Vector};
pub use scalar::{QSqrt3, Rational, Scalar, DEFAULT_TOLERANCE};
