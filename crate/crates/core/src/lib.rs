//! Exact arithmetic for power series over rings of integers of number
//! fields: bounded-remainder and Weierstrass division, additive splittings,
//! matrix factorization, Hensel and Kummer lifting, recursive root
//! extraction, and assembly of Galois patching data.
//!
//! Every identity is exact modulo `t^N`. Archimedean norm bounds are
//! certified with rational enclosures; when an enclosure cannot decide a
//! strict inequality within the precision cap the result is reported as
//! [`Verdict::Undecidable`] rather than passed.

pub mod config;
pub mod error;
pub mod kummer;
pub mod matfact;
pub mod numfield;
pub mod patch;
pub mod regroot;
pub mod report;
pub mod series;

pub use config::Config;
pub use error::{Error, Result};
pub use report::{CheckEntry, Verdict};
