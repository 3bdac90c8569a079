//! Deterministic check reports with exact residual listings.

use std::time::Instant;

use lrkit::graded::{BaseAlgebra, ValidationReport};
use lrkit::symtensor::{Derivation, Generator, SymAlgebra, SymElement};
use serde::Serialize;

use crate::schema::Caps;

/// One nonzero residual coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidualEntry {
    pub location: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficient: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<ResidualEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl Check {
    pub fn new(name: impl Into<String>, residuals: Vec<ResidualEntry>) -> Self {
        Check { name: name.into(), passed: residuals.is_empty(), note: None, residuals, elapsed_ms: None }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn from_validation(name: impl Into<String>, report: &ValidationReport) -> Self {
        let residuals = report
            .violations()
            .iter()
            .map(|v| ResidualEntry { location: format!("{}: {}", v.check, v.witness), weight: None, word: None, coefficient: None })
            .collect();
        Check::new(name, residuals)
    }

    /// Runs `f` and records its wall time.
    pub fn timed(f: impl FnOnce() -> Check) -> Check {
        let start = Instant::now();
        let mut c = f();
        c.elapsed_ms = Some(start.elapsed().as_millis());
        c
    }
}

/// Every term of a symmetric-algebra residual at a named location.
pub fn sym_residuals(sym: &SymAlgebra, location: &str, value: &SymElement) -> Vec<ResidualEntry> {
    value
        .terms()
        .map(|(w, c)| ResidualEntry {
            location: location.to_string(),
            weight: Some(w.weight()),
            word: Some(sym.display_word(w)),
            coefficient: Some(sym.base().display(c)),
        })
        .collect()
}

pub fn generator_name(sym: &SymAlgebra, g: Generator) -> String {
    match g {
        Generator::Base(a) => sym.base().name(a).to_string(),
        Generator::Letter(i) => sym.letter_name(i).to_string(),
    }
}

/// Residuals of `a − b` as derivations on the same algebra.
pub fn derivation_difference(sym: &SymAlgebra, a: &Derivation, b: &Derivation) -> Vec<ResidualEntry> {
    let mut out = Vec::new();
    if a.degree() != b.degree() {
        out.push(ResidualEntry { location: format!("degrees {} and {}", a.degree(), b.degree()), weight: None, word: None, coefficient: None });
        return out;
    }
    for ((g, x), (_, y)) in a.values().zip(b.values()) {
        let diff = x.sub(y);
        out.extend(sym_residuals(sym, &generator_name(sym, g), &diff));
    }
    out
}

/// `D²` on generators, localised by weight shift.
pub fn square_residuals(sym: &SymAlgebra, d: &Derivation) -> (Vec<ResidualEntry>, Option<usize>) {
    let comps = d.square_components(sym);
    let lowest = comps.keys().next().copied();
    let mut out = Vec::new();
    for (shift, values) in &comps {
        for (g, v) in values {
            out.extend(sym_residuals(sym, &format!("shift {shift}: D²({})", generator_name(sym, *g)), v));
        }
    }
    (out, lowest)
}

pub fn algebra_residual(base: &BaseAlgebra, location: String, value: &lrkit::graded::AlgebraElement) -> ResidualEntry {
    ResidualEntry { location, weight: None, word: None, coefficient: Some(base.display(value)) }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub model: String,
    pub kind: String,
    pub effective_caps: Caps,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub output: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn strip_timing(&mut self) {
        for c in &mut self.checks {
            c.elapsed_ms = None;
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} on {} ({}), caps weight {} arity {}\n",
            self.command, self.model, self.kind, self.effective_caps.weight, self.effective_caps.arity
        );
        for line in &self.output {
            s.push_str(&format!("  {line}\n"));
        }
        for c in &self.checks {
            let time = c.elapsed_ms.map(|t| format!(" [{t} ms]")).unwrap_or_default();
            s.push_str(&format!("{} {}{time}\n", if c.passed { "PASS" } else { "FAIL" }, c.name));
            if let Some(n) = &c.note {
                s.push_str(&format!("  note: {n}\n"));
            }
            for r in &c.residuals {
                s.push_str(&format!("  {}", r.location));
                if let Some(w) = r.weight {
                    s.push_str(&format!(" weight {w}"));
                }
                if let Some(w) = &r.word {
                    s.push_str(&format!(" word {w}"));
                }
                if let Some(c) = &r.coefficient {
                    s.push_str(&format!(" coefficient {c}"));
                }
                s.push('\n');
            }
        }
        s.push_str(if self.passed() { "result: pass\n" } else { "result: residuals found\n" });
        s
    }
}
