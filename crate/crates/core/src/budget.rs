use crate::error::{Error, Result};

/// Step counter shared by the exponential searches. Running out is reported
/// as [`Error::BudgetExceeded`], never as a negative verdict.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: Option<u64>,
    used: u64,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget { limit: None, used: 0 }
    }

    pub fn new(limit: u64) -> Self {
        Budget { limit: Some(limit), used: 0 }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> Option<u64> {
        self.limit
    }

    #[inline]
    pub fn tick(&mut self, what: &str) -> Result<()> {
        self.used += 1;
        match self.limit {
            Some(limit) if self.used > limit => Err(Error::BudgetExceeded {
                what: what.to_string(),
                limit,
            }),
            _ => Ok(()),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}
