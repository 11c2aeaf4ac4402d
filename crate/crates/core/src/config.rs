use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable overriding the term cache directory.
pub const CACHE_DIR_ENV: &str = "LUCASDEP_CACHE_DIR";

/// Hard cap for precision doubling.
pub const MAX_BITS: u32 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionContext {
    pub working_bits: u32,
    pub guard_bits: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext { working_bits: 256, guard_bits: 64 }
    }
}

impl PrecisionContext {
    pub fn new(working_bits: u32, guard_bits: u32) -> Result<Self> {
        if working_bits < 64 || guard_bits < 32 {
            return Err(Error::domain(format!(
                "precision context needs working_bits >= 64 and guard_bits >= 32 (got {working_bits}, {guard_bits})"
            )));
        }
        Ok(PrecisionContext { working_bits, guard_bits })
    }

    pub fn with_bits(working_bits: u32) -> Self {
        PrecisionContext { working_bits: working_bits.max(64), guard_bits: 64 }
    }

    /// Total internal precision.
    pub fn total(&self) -> u32 {
        self.working_bits + self.guard_bits
    }

    pub fn doubled(&self, context: &str) -> Result<Self> {
        let next = self.working_bits.saturating_mul(2);
        if next > MAX_BITS {
            return Err(Error::PrecisionExhausted { context: context.to_string(), bits: self.working_bits });
        }
        Ok(PrecisionContext { working_bits: next, guard_bits: self.guard_bits })
    }

    /// Raise to at least `bits`, respecting the cap.
    pub fn at_least(&self, bits: u32, context: &str) -> Result<Self> {
        if bits > MAX_BITS {
            return Err(Error::PrecisionExhausted { context: context.to_string(), bits });
        }
        Ok(PrecisionContext { working_bits: self.working_bits.max(bits), guard_bits: self.guard_bits })
    }
}

/// Run `f` with increasing precision until it stops asking for more.
pub fn with_retry<T>(ctx: PrecisionContext, context: &str, mut f: impl FnMut(PrecisionContext) -> Result<T>) -> Result<T> {
    let mut ctx = ctx;
    loop {
        match f(ctx) {
            Err(Error::NeedsPrecision { suggested_bits, .. }) => {
                let doubled = ctx.doubled(context)?;
                ctx = doubled.at_least(suggested_bits.min(MAX_BITS), context)?;
                log::debug!("{context}: retrying at {} bits", ctx.working_bits);
            }
            other => return other,
        }
    }
}

/// Cache directory: explicit argument, then the environment, else none.
pub fn cache_dir(explicit: Option<PathBuf>) -> Option<PathBuf> {
    explicit.or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_contexts() {
        assert!(PrecisionContext::new(32, 64).is_err());
        assert!(PrecisionContext::new(64, 16).is_err());
        assert!(PrecisionContext::new(64, 32).is_ok());
    }

    #[test]
    fn doubling_is_capped() {
        let mut c = PrecisionContext::new(64, 32).unwrap();
        let mut steps = 0;
        while let Ok(n) = c.doubled("t") {
            c = n;
            steps += 1;
        }
        assert_eq!(c.working_bits, MAX_BITS);
        assert_eq!(steps, 14);
    }

    #[test]
    fn retry_escalates() {
        let r = with_retry(PrecisionContext::default(), "t", |c| {
            if c.working_bits < 2000 {
                Err(Error::needs_precision("t", c.working_bits))
            } else {
                Ok(c.working_bits)
            }
        });
        assert_eq!(r.unwrap(), 2048);
    }
}
