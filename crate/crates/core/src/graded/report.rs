//! Violation reports for axiom checks.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub check: String,
    pub witness: String,
}

/// Ordered list of violated identities; empty means every check passed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn push(&mut self, check: &str, witness: String) {
        self.violations.push(Violation { check: check.to_string(), witness });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    /// Appends `other` with every check name prefixed by `scope`.
    pub fn extend_scoped(&mut self, scope: &str, other: ValidationReport) {
        for v in other.violations {
            self.violations.push(Violation { check: format!("{scope}: {}", v.check), witness: v.witness });
        }
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "{}: {}", v.check, v.witness)?;
        }
        Ok(())
    }
}
