//! Outcome of an exact identity check.

use std::fmt;

/// One comparison. `witness` is set exactly when it failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub what: String,
    pub witness: Option<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Result of checking a family of exact identities, in the order checked.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Verdict {
    pub outcomes: Vec<Outcome>,
}

impl Verdict {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(Outcome::passed)
    }

    /// Number of individual comparisons performed.
    pub fn checked(&self) -> usize {
        self.outcomes.len()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| !o.passed())
    }

    /// Records one comparison; `witness` is only evaluated on failure.
    pub fn record(&mut self, ok: bool, what: impl Into<String>, witness: impl FnOnce() -> String) {
        let witness = (!ok).then(witness);
        self.outcomes.push(Outcome {
            what: what.into(),
            witness,
        });
    }

    pub fn merge(&mut self, other: Verdict) {
        self.outcomes.extend(other.outcomes);
    }

    /// First failure's witness, if any.
    pub fn witness(&self) -> Option<String> {
        self.failures()
            .next()
            .map(|f| format!("{}: {}", f.what, f.witness.as_deref().unwrap_or("")))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "pass ({} comparisons)", self.checked())
        } else {
            write!(
                f,
                "FAIL ({} of {} comparisons)",
                self.failures().count(),
                self.checked()
            )?;
            if let Some(w) = self.witness() {
                write!(f, "; first: {w}")?;
            }
            Ok(())
        }
    }
}
