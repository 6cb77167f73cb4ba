use std::fmt;

/// Outcome of walking a family of axiom instances over finite tables.
///
/// `checked` counts instances whose lookups all resolved and were compared;
/// `skipped` counts instances that touched a table entry outside the stored
/// bounds (partial tables are legal data, so a miss is not a violation).
#[derive(Debug, Default, Clone)]
pub struct ValidationReport {
    pub violations: Vec<String>,
    pub checked: u64,
    pub skipped: u64,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn note_violation(&mut self, msg: String) {
        // Keep a bounded sample; the count is what matters for reporting.
        if self.violations.len() < 32 {
            self.violations.push(msg);
        } else if self.violations.len() == 32 {
            self.violations.push("... further violations elided".to_string());
        }
    }

    pub fn absorb(&mut self, other: ValidationReport) {
        for v in other.violations {
            self.note_violation(v);
        }
        self.checked += other.checked;
        self.skipped += other.skipped;
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violations, {} checked, {} skipped (out of bounds)",
            self.violations.len(),
            self.checked,
            self.skipped
        )?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}
