//! Working precision for [`crate::BigFloat`].
//!
//! Precision is thread-scoped. A [`PrecisionContext`] carries the nominal
//! bit count (which fixes the equality tolerance `2^(-bits/2)`); entering it
//! installs a working precision on the current thread, optionally widened by
//! guard bits for high Hermite orders, and restores the previous setting on
//! drop.
//!
//! Monomial-basis Gaussian moments cancel heavily: an inner product of two
//! degree-`n` Hermite functions loses roughly `1.57 n` bits. The guard is
//! therefore `2 n + 64` bits, which keeps results correct to the nominal
//! precision up to the basis cap.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_BITS: u32 = 256;
pub const MIN_BITS: u32 = 64;

thread_local! {
    static ACTIVE: Cell<(u32, u32)> = const { Cell::new((DEFAULT_BITS, DEFAULT_BITS)) };
}

/// Nominal precision of the current thread.
pub fn nominal_bits() -> u32 {
    ACTIVE.with(|a| a.get().0)
}

/// Precision new `BigFloat` values are rounded to on the current thread.
pub fn working_bits() -> u32 {
    ACTIVE.with(|a| a.get().1)
}

/// Extra bits required to keep order-`n` Hermite arithmetic accurate.
pub fn guard_bits(order: usize) -> u32 {
    2 * order as u32 + 64
}

/// Runs `f` with the given `(nominal, working)` pair installed.
///
/// Used to carry the caller's precision onto worker threads.
pub fn with_bits<T>(bits: (u32, u32), f: impl FnOnce() -> T) -> T {
    let prev = ACTIVE.with(|a| a.replace(bits));
    let out = f();
    ACTIVE.with(|a| a.set(prev));
    out
}

/// The `(nominal, working)` pair of the current thread.
pub fn snapshot() -> (u32, u32) {
    ACTIVE.with(|a| a.get())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionContext {
    bits: u32,
    tol_override: Option<f64>,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            bits: DEFAULT_BITS,
            tol_override: None,
        }
    }
}

impl PrecisionContext {
    pub fn new(bits: u32) -> Result<Self> {
        if bits < MIN_BITS {
            return Err(Error::Precision(format!(
                "precision of {bits} bits is below the minimum of {MIN_BITS}"
            )));
        }
        Ok(PrecisionContext {
            bits,
            tol_override: None,
        })
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol_override = Some(tol);
        self
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Equality tolerance as an `f64` (`2^(-bits/2)` unless overridden).
    pub fn tol(&self) -> f64 {
        self.tol_override
            .unwrap_or_else(|| 2f64.powi(-(self.bits as i32 / 2)))
    }

    /// Working precision used for computations up to Hermite order `order`.
    pub fn working_bits_for(&self, order: usize) -> u32 {
        self.bits + guard_bits(order)
    }

    /// Installs this precision (no guard bits) on the current thread.
    pub fn enter(&self) -> PrecisionGuard {
        self.install(self.bits)
    }

    /// Installs this precision widened for Hermite orders up to `order`.
    pub fn enter_for_order(&self, order: usize) -> PrecisionGuard {
        self.install(self.working_bits_for(order))
    }

    fn install(&self, working: u32) -> PrecisionGuard {
        let prev = ACTIVE.with(|a| a.replace((self.bits, working)));
        PrecisionGuard { prev }
    }
}

/// Restores the previous thread precision when dropped.
#[must_use = "precision is restored as soon as the guard is dropped"]
pub struct PrecisionGuard {
    prev: (u32, u32),
}

impl Drop for PrecisionGuard {
    fn drop(&mut self) {
        ACTIVE.with(|a| a.set(self.prev));
    }
}
