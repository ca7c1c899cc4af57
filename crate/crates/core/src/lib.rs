//! Adelic descent on the projective line and finite posets.

#![allow(clippy::needless_range_loop)]

pub mod adele;
pub mod cosimplicial;
pub mod descent;
pub mod cohomology;
pub mod divisor;
pub mod error;
pub mod field;
pub mod json;
pub mod linalg;
pub mod local;
pub mod module;
pub mod point;
pub mod poly;
pub mod rat;
pub mod scheme;
pub mod series;
pub mod specz;
pub mod suites;
pub mod window;

pub use error::{AdeleError, Result};

/// Working precision for series arithmetic when none is given.
pub const DEFAULT_PRECISION: i64 = 16;
