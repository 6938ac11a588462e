use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default upper limit, in bits, for embedding precision escalation.
pub const DEFAULT_PRECISION_CAP: u32 = 512;

/// Starting precision for norm enclosures.
pub const BASE_PRECISION: u32 = 48;

/// Knobs shared by the long-running operations.
#[derive(Clone, Debug)]
pub struct Config {
    /// Highest embedding precision (bits) used before a strict bound check
    /// is reported as undecidable.
    pub precision_cap: u32,
    cancel: Option<Arc<AtomicBool>>,
}

impl Default for Config {
    fn default() -> Self {
        Config { precision_cap: DEFAULT_PRECISION_CAP, cancel: None }
    }
}

impl Config {
    pub fn with_precision_cap(mut self, bits: u32) -> Self {
        self.precision_cap = bits.max(BASE_PRECISION);
        self
    }

    /// Attaches a cooperative cancellation flag. Long loops poll it and
    /// return [`Error::Cancelled`] once it is set.
    pub fn with_cancel_token(mut self, token: Arc<AtomicBool>) -> Self {
        self.cancel = Some(token);
        self
    }

    pub fn check_cancelled(&self) -> Result<()> {
        match &self.cancel {
            Some(flag) if flag.load(Ordering::Relaxed) => Err(Error::Cancelled),
            _ => Ok(()),
        }
    }

    /// Precisions tried by a strict bound check, in order: the base
    /// precision doubled while it stays within the cap.
    pub fn precision_ladder(&self) -> impl Iterator<Item = u32> {
        let cap = self.precision_cap.max(BASE_PRECISION);
        std::iter::successors(Some(BASE_PRECISION), move |&p| p.checked_mul(2).filter(|&q| q <= cap))
    }
}
