//! Finite-dimensional graded commutative unital dgas given by a basis,
//! structure constants and a differential.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::graded::report::ValidationReport;
use crate::graded::Scalar;

/// A sparse linear combination of basis elements of a [`BaseAlgebra`].
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct AlgebraElement {
    coeffs: BTreeMap<usize, Scalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn basis(index: usize) -> Self {
        AlgebraElement::term(index, Scalar::one())
    }

    pub fn term(index: usize, c: Scalar) -> Self {
        let mut e = AlgebraElement::zero();
        e.add_term(index, &c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (usize, Scalar)>>(terms: I) -> Self {
        let mut e = AlgebraElement::zero();
        for (i, c) in terms {
            e.add_term(i, &c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, index: usize) -> Scalar {
        self.coeffs.get(&index).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, index: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(index).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&index);
        }
    }

    pub fn add_assign(&mut self, other: &AlgebraElement) {
        for (i, c) in other.terms() {
            self.add_term(i, c);
        }
    }

    pub fn add_scaled(&mut self, other: &AlgebraElement, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        for (i, c) in other.terms() {
            self.add_term(i, &(c * s));
        }
    }

    pub fn sub_assign(&mut self, other: &AlgebraElement) {
        self.add_scaled(other, &Scalar::from_int(-1));
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut e = self.clone();
        e.add_assign(other);
        e
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut e = self.clone();
        e.sub_assign(other);
        e
    }

    pub fn scale(&self, s: &Scalar) -> AlgebraElement {
        if s.is_zero() {
            return AlgebraElement::zero();
        }
        AlgebraElement { coeffs: self.coeffs.iter().map(|(&i, c)| (i, c * s)).collect() }
    }

    pub fn neg(&self) -> AlgebraElement {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn negate_if(self, odd: bool) -> AlgebraElement {
        if odd {
            self.neg()
        } else {
            self
        }
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms().map(|(i, c)| format!("({c})e{i}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
}

/// A graded commutative unital dga `(A, d_A)` with a fixed homogeneous basis.
///
/// Products are stored as a dense `dim × dim` table of sparse elements; the
/// constructor fills products with the unit when the caller leaves them out.
/// Axioms are not enforced at construction; see [`BaseAlgebra::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseAlgebra {
    basis: Vec<BasisElement>,
    unit: usize,
    products: Vec<Vec<AlgebraElement>>,
    differential: Vec<AlgebraElement>,
}

impl BaseAlgebra {
    /// Builds an algebra from sparse product and differential tables.
    ///
    /// Only indices are checked here; degree bookkeeping and the dga axioms
    /// are reported by [`BaseAlgebra::validate`].
    pub fn new(
        basis: Vec<BasisElement>,
        unit: usize,
        products: BTreeMap<(usize, usize), AlgebraElement>,
        differential: BTreeMap<usize, AlgebraElement>,
    ) -> Result<Self> {
        let dim = basis.len();
        if unit >= dim {
            return Err(Error::Index(format!("unit {unit} outside basis of size {dim}")));
        }
        let mut table = vec![vec![AlgebraElement::zero(); dim]; dim];
        for i in 0..dim {
            table[unit][i] = AlgebraElement::basis(i);
            table[i][unit] = AlgebraElement::basis(i);
        }
        let mut alg = BaseAlgebra { basis, unit, products: Vec::new(), differential: Vec::new() };
        for ((a, b), v) in products {
            if a >= dim || b >= dim {
                return Err(Error::Index(format!("product ({a}, {b}) outside basis")));
            }
            alg.check_indices(&v)?;
            table[a][b] = v;
        }
        let mut diff = vec![AlgebraElement::zero(); dim];
        for (a, v) in differential {
            if a >= dim {
                return Err(Error::Index(format!("differential of e{a} outside basis")));
            }
            alg.check_indices(&v)?;
            diff[a] = v;
        }
        alg.products = table;
        alg.differential = diff;
        Ok(alg)
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground() -> Self {
        BaseAlgebra::new(
            vec![BasisElement { name: "1".into(), degree: 0 }],
            0,
            BTreeMap::new(),
            BTreeMap::new(),
        )
        .expect("ground field")
    }

    fn check_indices(&self, v: &AlgebraElement) -> Result<()> {
        match v.terms().find(|&(i, _)| i >= self.dim()) {
            Some((i, _)) => Err(Error::Index(format!("e{i} outside basis of size {}", self.dim()))),
            None => Ok(()),
        }
    }

    fn wrong_degree(&self, v: &AlgebraElement, expected: i64) -> bool {
        v.terms().any(|(i, _)| self.degree(i) != expected)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].degree
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn one(&self) -> AlgebraElement {
        AlgebraElement::basis(self.unit)
    }

    pub fn scalar(&self, c: Scalar) -> AlgebraElement {
        AlgebraElement::term(self.unit, c)
    }

    /// Stored product of two basis elements.
    pub fn basis_product(&self, a: usize, b: usize) -> &AlgebraElement {
        &self.products[a][b]
    }

    /// Stored differential of a basis element.
    pub fn basis_differential(&self, a: usize) -> &AlgebraElement {
        &self.differential[a]
    }

    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                let p = &self.products[a][b];
                if !p.is_zero() {
                    out.add_scaled(p, &(ca * cb));
                }
            }
        }
        out
    }

    /// `d_A`, extended linearly.
    pub fn d(&self, x: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (a, c) in x.terms() {
            out.add_scaled(&self.differential[a], c);
        }
        out
    }

    /// The common degree of all terms; `None` for zero or mixed elements.
    pub fn homogeneous_degree(&self, x: &AlgebraElement) -> Option<i64> {
        let mut it = x.terms().map(|(i, _)| self.degree(i));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Degree of a homogeneous element; zero is accepted with `fallback`.
    pub fn degree_of(&self, x: &AlgebraElement, fallback: i64) -> Result<i64> {
        if x.is_zero() {
            return Ok(fallback);
        }
        self.homogeneous_degree(x).ok_or_else(|| Error::Inhomogeneous(format!("{x:?}")))
    }

    pub fn homogeneous_parts(&self, x: &AlgebraElement) -> BTreeMap<i64, AlgebraElement> {
        let mut parts: BTreeMap<i64, AlgebraElement> = BTreeMap::new();
        for (i, c) in x.terms() {
            parts.entry(self.degree(i)).or_default().add_term(i, c);
        }
        parts
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.basis.iter().map(|b| b.degree)
    }

    pub fn min_degree(&self) -> i64 {
        self.degrees().min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> i64 {
        self.degrees().max().unwrap_or(0)
    }

    /// Basis indices of a given degree.
    pub fn basis_of_degree(&self, d: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree(i) == d).collect()
    }

    pub fn display(&self, x: &AlgebraElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        x.terms()
            .map(|(i, c)| if c.is_one() { self.name(i).to_string() } else { format!("({c})·{}", self.name(i)) })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Checks unit law, graded commutativity, associativity, the Leibniz
    /// rule for `d_A`, `d_A² = 0` and `|unit| = 0` on all basis tuples.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.dim();
        let u = self.unit;
        if self.degree(u) != 0 {
            report.push("unit degree", format!("|{}| = {}", self.name(u), self.degree(u)));
        }
        for a in 0..n {
            for b in 0..n {
                if self.wrong_degree(&self.products[a][b], self.degree(a) + self.degree(b)) {
                    report.push("degree of products", format!("{}·{}", self.name(a), self.name(b)));
                }
            }
            if self.wrong_degree(&self.differential[a], self.degree(a) + 1) {
                report.push("degree of d_A", format!("d({})", self.name(a)));
            }
        }
        for a in 0..n {
            let ea = AlgebraElement::basis(a);
            if self.products[u][a] != ea || self.products[a][u] != ea {
                report.push("unit law", format!("1·{0} or {0}·1 ≠ {0}", self.name(a)));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let odd = self.degree(a) & self.degree(b) & 1 == 1;
                let ab = &self.products[a][b];
                let ba = self.products[b][a].clone().negate_if(odd);
                if *ab != ba {
                    report.push(
                        "graded commutativity",
                        format!(
                            "{}·{} = {} but (−1)^{{|a||b|}} {}·{} = {}",
                            self.name(a),
                            self.name(b),
                            self.display(ab),
                            self.name(b),
                            self.name(a),
                            self.display(&ba)
                        ),
                    );
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = self.mul(&self.products[a][b], &AlgebraElement::basis(c));
                    let right = self.mul(&AlgebraElement::basis(a), &self.products[b][c]);
                    if left != right {
                        report.push(
                            "associativity",
                            format!("({0}·{1})·{2} ≠ {0}·({1}·{2})", self.name(a), self.name(b), self.name(c)),
                        );
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let lhs = self.d(&self.products[a][b]);
                let mut rhs = self.mul(&self.differential[a], &AlgebraElement::basis(b));
                let tail = self.mul(&AlgebraElement::basis(a), &self.differential[b]);
                rhs.add_scaled(&tail, &Scalar::sign(self.degree(a) & 1 == 1));
                if lhs != rhs {
                    report.push(
                        "Leibniz rule for d_A",
                        format!("d({}·{}): {} vs {}", self.name(a), self.name(b), self.display(&lhs), self.display(&rhs)),
                    );
                }
            }
        }
        for a in 0..n {
            let dd = self.d(&self.differential[a]);
            if !dd.is_zero() {
                report.push("d_A² = 0", format!("d²({}) = {}", self.name(a), self.display(&dd)));
            }
        }
        report
    }
}

/// A homogeneous linear endomorphism of a base algebra, stored by its
/// images of basis elements. Derivations of `A` are the main instances.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraMap {
    pub degree: i64,
    pub images: Vec<AlgebraElement>,
}

impl AlgebraMap {
    pub fn zero(dim: usize, degree: i64) -> Self {
        AlgebraMap { degree, images: vec![AlgebraElement::zero(); dim] }
    }

    pub fn differential(a: &BaseAlgebra) -> Self {
        AlgebraMap { degree: 1, images: a.differential.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(AlgebraElement::is_zero)
    }

    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (i, c) in x.terms() {
            out.add_scaled(&self.images[i], c);
        }
        out
    }

    pub fn compose(&self, other: &AlgebraMap) -> AlgebraMap {
        AlgebraMap {
            degree: self.degree + other.degree,
            images: other.images.iter().map(|v| self.apply(v)).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &AlgebraMap, s: &Scalar) {
        for (mine, theirs) in self.images.iter_mut().zip(&other.images) {
            mine.add_scaled(theirs, s);
        }
    }

    pub fn scale(&self, s: &Scalar) -> AlgebraMap {
        AlgebraMap { degree: self.degree, images: self.images.iter().map(|v| v.scale(s)).collect() }
    }

    /// Graded commutator `[f, g] = f∘g − (−1)^{|f||g|} g∘f`.
    pub fn commutator(&self, other: &AlgebraMap) -> AlgebraMap {
        let mut out = self.compose(other);
        let odd = self.degree & other.degree & 1 == 1;
        out.add_scaled(&other.compose(self), &Scalar::sign(!odd));
        out
    }

    /// Left multiplication by `a` after the map: `x ↦ a·f(x)`.
    pub fn left_multiply(&self, alg: &BaseAlgebra, a: &AlgebraElement, a_degree: i64) -> AlgebraMap {
        AlgebraMap {
            degree: self.degree + a_degree,
            images: self.images.iter().map(|v| alg.mul(a, v)).collect(),
        }
    }

    /// Leibniz defect `f(xy) − f(x)y − (−1)^{|f||x|} x f(y)` on all basis pairs.
    pub fn derivation_defects(&self, alg: &BaseAlgebra) -> Vec<(usize, usize, AlgebraElement)> {
        let n = alg.dim();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let mut r = self.apply(alg.basis_product(a, b));
                r.sub_assign(&alg.mul(&self.images[a], &AlgebraElement::basis(b)));
                let odd = self.degree & alg.degree(a) & 1 == 1;
                let t = alg.mul(&AlgebraElement::basis(a), &self.images[b]);
                r.add_scaled(&t, &Scalar::sign(!odd));
                if !r.is_zero() {
                    out.push((a, b, r));
                }
            }
        }
        out
    }
}
