//! Finitely generated free graded modules with a differential.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::report::ValidationReport;
use crate::graded::{AlgebraElement, BaseAlgebra, Scalar};

/// `Σ a_i g_i` with coefficients in the base algebra, stored sparsely.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ModuleElement {
    coeffs: BTreeMap<usize, AlgebraElement>,
}

impl ModuleElement {
    pub fn zero() -> Self {
        ModuleElement::default()
    }

    /// `a·g_i`.
    pub fn term(i: usize, a: AlgebraElement) -> Self {
        let mut m = ModuleElement::zero();
        m.add_term(i, &a);
        m
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> AlgebraElement {
        self.coeffs.get(&i).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &AlgebraElement)> {
        self.coeffs.iter().map(|(&i, a)| (i, a))
    }

    pub fn add_term(&mut self, i: usize, a: &AlgebraElement) {
        if a.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(i).or_default();
        entry.add_assign(a);
        if entry.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    pub fn add_scaled(&mut self, other: &ModuleElement, s: &Scalar) {
        for (i, a) in other.terms() {
            self.add_term(i, &a.scale(s));
        }
    }

    pub fn add_assign(&mut self, other: &ModuleElement) {
        for (i, a) in other.terms() {
            self.add_term(i, a);
        }
    }

    pub fn sub_assign(&mut self, other: &ModuleElement) {
        self.add_scaled(other, &Scalar::from_int(-1));
    }

    pub fn scale(&self, s: &Scalar) -> ModuleElement {
        let mut m = ModuleElement::zero();
        m.add_scaled(self, s);
        m
    }
}

impl fmt::Debug for ModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(i, a)| format!("[{a:?}]g{i}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A free graded module `L = ⊕ A·g_i` with differential `d_L` given on
/// generators and extended by `d_L(a g) = d_A(a) g + (−1)^{|a|} a d_L(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModule {
    base: Arc<BaseAlgebra>,
    names: Vec<String>,
    degrees: Vec<i64>,
    differential: Vec<ModuleElement>,
}

impl FreeModule {
    /// Generators named `g0, g1, …` with the given degrees and `d_L = 0`.
    pub fn new(base: Arc<BaseAlgebra>, degrees: Vec<i64>) -> Self {
        let names = (0..degrees.len()).map(|i| format!("g{i}")).collect();
        let differential = vec![ModuleElement::zero(); degrees.len()];
        FreeModule { base, names, degrees, differential }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.rank() {
            return Err(Error::SizeMismatch { expected: self.rank(), found: names.len() });
        }
        self.names = names;
        Ok(self)
    }

    /// Sets `d_L(g_i)`; indices are checked, degrees are left to [`FreeModule::validate`].
    pub fn with_differential(mut self, values: BTreeMap<usize, ModuleElement>) -> Result<Self> {
        for (i, v) in values {
            if i >= self.rank() {
                return Err(Error::Index(format!("differential of generator {i} outside rank {}", self.rank())));
            }
            self.check_indices(&v)?;
            self.differential[i] = v;
        }
        Ok(self)
    }

    fn check_indices(&self, v: &ModuleElement) -> Result<()> {
        for (j, a) in v.terms() {
            if j >= self.rank() {
                return Err(Error::Index(format!("generator {j} outside rank {}", self.rank())));
            }
            if let Some((k, _)) = a.terms().find(|&(k, _)| k >= self.base.dim()) {
                return Err(Error::Index(format!("basis element {k} outside the base")));
            }
        }
        Ok(())
    }

    /// The generator `g_i` as an element.
    pub fn generator(&self, i: usize) -> ModuleElement {
        ModuleElement::term(i, self.base.one())
    }

    pub fn base(&self) -> &Arc<BaseAlgebra> {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_differential(&self, i: usize) -> &ModuleElement {
        &self.differential[i]
    }

    /// Degree of a homogeneous element; zero yields `fallback`.
    pub fn degree_of(&self, v: &ModuleElement, fallback: i64) -> Result<i64> {
        let mut found: Option<i64> = None;
        for (i, a) in v.terms() {
            for (k, _) in a.terms() {
                let d = self.base.degree(k) + self.degrees[i];
                match found {
                    None => found = Some(d),
                    Some(e) if e != d => return Err(Error::Inhomogeneous(format!("{v:?}"))),
                    _ => {}
                }
            }
        }
        Ok(found.unwrap_or(fallback))
    }

    /// Left action `a·v`.
    pub fn act(&self, a: &AlgebraElement, v: &ModuleElement) -> ModuleElement {
        let mut out = ModuleElement::zero();
        for (i, b) in v.terms() {
            out.add_term(i, &self.base.mul(a, b));
        }
        out
    }

    /// `d_L`, extended by the Leibniz rule over `d_A`.
    pub fn d(&self, v: &ModuleElement) -> ModuleElement {
        let mut out = ModuleElement::zero();
        for (i, a) in v.terms() {
            out.add_term(i, &self.base.d(a));
            for (k, c) in a.terms() {
                let odd = self.base.degree(k) & 1 == 1;
                let t = self.act(&AlgebraElement::term(k, c.clone()), &self.differential[i]);
                out.add_scaled(&t, &Scalar::sign(odd));
            }
        }
        out
    }

    pub fn display(&self, v: &ModuleElement) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.terms()
            .map(|(i, a)| format!("({})·{}", self.base.display(a), self.names[i]))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Checks the degree of every `d_L(g_i)` and `d_L² = 0` on generators.
    /// With correct degrees, `d_L²` is `A`-linear, so generators suffice.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for i in 0..self.rank() {
            let v = &self.differential[i];
            match self.degree_of(v, self.degrees[i] + 1) {
                Ok(d) if d == self.degrees[i] + 1 => {}
                _ => report.push("degree of d_L", format!("d({}) = {}", self.names[i], self.display(v))),
            }
            let dd = self.d(v);
            if !dd.is_zero() {
                report.push("d_L² = 0", format!("d²({}) = {}", self.names[i], self.display(&dd)));
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::models;

    #[test]
    fn zero_differential_passes() {
        let a = Arc::new(models::exterior(&["e"]));
        assert!(FreeModule::new(a, vec![0, 1]).validate().is_ok());
    }

    #[test]
    fn odd_twist_squares_to_zero() {
        let a = Arc::new(models::exterior(&["e"]));
        let mut d = BTreeMap::new();
        d.insert(0, ModuleElement::term(0, AlgebraElement::basis(1)));
        let m = FreeModule::new(a, vec![0]).with_differential(d).unwrap();
        assert!(m.validate().is_ok());
    }

    #[test]
    fn even_twist_with_nonzero_square_is_reported() {
        // d(g0) = u·g1, d(g1) = u·g2 over K[u]/(u³): d²(g0) = u²·g2.
        let a = Arc::new(models::truncated_even(3));
        let mut d = BTreeMap::new();
        d.insert(0, ModuleElement::term(1, AlgebraElement::basis(1)));
        d.insert(1, ModuleElement::term(2, AlgebraElement::basis(1)));
        let m = FreeModule::new(a, vec![0, -1, -2]).with_differential(d).unwrap();
        let report = m.validate();
        assert_eq!(report.violations().len(), 1);
        assert_eq!(report.violations()[0].check, "d_L² = 0");
        assert_eq!(m.d(&m.d(&m.generator(0))), ModuleElement::term(2, AlgebraElement::basis(2)));
    }

    #[test]
    fn leibniz_on_coefficients() {
        let a = Arc::new(models::twisted_dual_numbers());
        let m = FreeModule::new(a.clone(), vec![0]);
        // d(x·g) = d_A(x)·g = ex·g when d_L = 0.
        let v = ModuleElement::term(0, AlgebraElement::basis(1));
        assert_eq!(m.d(&v), ModuleElement::term(0, AlgebraElement::basis(3)));
    }
}
