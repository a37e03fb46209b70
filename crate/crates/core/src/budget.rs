use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Shared step counter that caps Buchberger work.
///
/// A `Budget` is cloned freely; all clones draw from the same counter, so a
/// single cap covers every basis computed while answering one query. The
/// unlimited budget never charges anything.
#[derive(Clone, Debug, Default)]
pub struct Budget(Option<Arc<AtomicU64>>);

impl Budget {
    pub fn unlimited() -> Self {
        Budget(None)
    }

    pub fn with_steps(steps: u64) -> Self {
        Budget(Some(Arc::new(AtomicU64::new(steps))))
    }

    /// Consumes `n` steps, failing once the counter runs dry.
    pub fn charge(&self, n: u64) -> Result<()> {
        let Some(counter) = &self.0 else {
            return Ok(());
        };
        let mut cur = counter.load(Ordering::Relaxed);
        loop {
            if cur < n {
                return Err(Error::BudgetExhausted);
            }
            match counter.compare_exchange_weak(cur, cur - n, Ordering::Relaxed, Ordering::Relaxed)
            {
                Ok(_) => return Ok(()),
                Err(seen) => cur = seen,
            }
        }
    }
}
