//! L∞[1]-algebroid structures stored by their values on generators.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{odd, AlgebraElement, AlgebraMap, BaseAlgebra, FreeModule, ModuleElement, Scalar, ValidationReport};
use crate::linfty::{canonicalize, expand_arguments, BracketTable, SymmetricBrackets, Symmetry};

/// Brackets `ℓ_n` (`2 ≤ n ≤ cap`) and multi-anchors `{v_1, …, v_m | −}`
/// (`1 ≤ m ≤ cap`) on a free module over a fixed dga `A`. `ℓ_1 = d_L` and
/// `{|−} = d_A` come from the carrier.
///
/// Anchors are stored per sorted generator tuple as the map
/// `a ↦ {g_t | a}` of degree `|g_t| + 1`. Brackets on general arguments use
/// the Leibniz rule
/// `{w_1, …, w_{n−1}, a g} = {w_1, …, w_{n−1} | a} g + (−1)^{|a|(|w_1|+⋯+|w_{n−1}|+1)} a {w_1, …, w_{n−1}, g}`,
/// anchors on general arguments are `A`-multilinear with the Koszul rule of
/// a degree-one map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebroidStructure {
    carrier: FreeModule,
    cap: usize,
    brackets: Vec<BracketTable>,
    anchors: Vec<BTreeMap<Vec<usize>, AlgebraMap>>,
}

impl AlgebroidStructure {
    /// The structure with `ℓ_1 = d_L`, `{|−} = d_A` and nothing else.
    pub fn new(carrier: FreeModule, cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::Invalid("arity cap must be positive".into()));
        }
        let brackets = (2..=cap).map(|n| BracketTable::new(n, 1, Symmetry::Symmetric)).collect();
        Ok(AlgebroidStructure { carrier, cap, brackets, anchors: vec![BTreeMap::new(); cap] })
    }

    pub fn carrier(&self) -> &FreeModule {
        &self.carrier
    }

    pub fn base(&self) -> &Arc<BaseAlgebra> {
        self.carrier.base()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// `ℓ_n` for `2 ≤ n ≤ cap`.
    pub fn table(&self, n: usize) -> &BracketTable {
        &self.brackets[n - 2]
    }

    /// Anchors with `m` module arguments, keyed by sorted tuples.
    pub fn anchor_table(&self, m: usize) -> &BTreeMap<Vec<usize>, AlgebraMap> {
        &self.anchors[m - 1]
    }

    /// Whether every bracket beyond `ℓ_1` and every anchor vanishes.
    pub fn is_trivial(&self) -> bool {
        self.brackets.iter().all(BracketTable::is_zero) && self.anchors.iter().all(BTreeMap::is_empty)
    }

    /// Sets `ℓ_n(g_tuple) = value`.
    pub fn set_bracket(&mut self, tuple: &[usize], value: ModuleElement) -> Result<()> {
        let n = tuple.len();
        if n < 2 || n > self.cap {
            return Err(Error::ArityOverflow { arity: n, cap: self.cap });
        }
        self.brackets[n - 2].set(&self.carrier, tuple, value)
    }

    /// Sets `{g_tuple | −}` to the given map of degree `|g_tuple| + 1`.
    pub fn set_anchor(&mut self, tuple: &[usize], map: AlgebraMap) -> Result<()> {
        let m = tuple.len();
        if m == 0 || m > self.cap {
            return Err(Error::ArityOverflow { arity: m, cap: self.cap });
        }
        if let Some(&g) = tuple.iter().find(|&&g| g >= self.carrier.rank()) {
            return Err(Error::Index(format!("generator {g} outside rank {}", self.carrier.rank())));
        }
        let base = self.base().clone();
        if map.images.len() != base.dim() {
            return Err(Error::SizeMismatch { expected: base.dim(), found: map.images.len() });
        }
        let expected = self.tuple_degree(tuple) + 1;
        if !map.is_zero() && map.degree != expected {
            return Err(Error::Degree(format!("anchor on {tuple:?} has degree {}, expected {expected}", map.degree)));
        }
        for (a, image) in map.images.iter().enumerate() {
            let d = base.degree_of(image, base.degree(a) + expected)?;
            if d != base.degree(a) + expected {
                return Err(Error::Degree(format!("anchor on {tuple:?} sends basis {a} to degree {d}")));
            }
        }
        match canonicalize(Symmetry::Symmetric, tuple, self.carrier.degrees()) {
            None if map.is_zero() => Ok(()),
            None => Err(Error::Invalid(format!("anchor on {tuple:?} must vanish by symmetry"))),
            Some((key, flip)) => {
                if map.is_zero() {
                    self.anchors[m - 1].remove(&key);
                } else {
                    let stored = AlgebraMap { degree: expected, images: map.scale(&Scalar::sign(flip)).images };
                    self.anchors[m - 1].insert(key, stored);
                }
                Ok(())
            }
        }
    }

    fn tuple_degree(&self, tuple: &[usize]) -> i64 {
        tuple.iter().map(|&g| self.carrier.degree(g)).sum()
    }

    fn degree_of(&self, v: &ModuleElement) -> i64 {
        self.carrier.degree_of(v, 0).expect("homogeneous argument")
    }

    /// `{g_tuple | −}` for any order of the tuple.
    pub fn anchor_on_generators(&self, tuple: &[usize]) -> AlgebraMap {
        let degree = self.tuple_degree(tuple) + 1;
        let zero = AlgebraMap::zero(self.base().dim(), degree);
        if tuple.is_empty() {
            return AlgebraMap::differential(self.base());
        }
        if tuple.len() > self.cap {
            return zero;
        }
        match canonicalize(Symmetry::Symmetric, tuple, self.carrier.degrees()) {
            None => zero,
            Some((key, flip)) => match self.anchors[tuple.len() - 1].get(&key) {
                None => zero,
                Some(m) => m.scale(&Scalar::sign(flip)),
            },
        }
    }

    /// The map `a ↦ {w_1, …, w_m | a}` for homogeneous module elements.
    pub fn anchor(&self, args: &[ModuleElement]) -> AlgebraMap {
        let base = self.base().clone();
        let degree = args.iter().map(|w| self.degree_of(w)).sum::<i64>() + 1;
        let mut out = AlgebraMap::zero(base.dim(), degree);
        if args.is_empty() {
            return AlgebraMap::differential(&base);
        }
        if args.len() > self.cap {
            return out;
        }
        for (c, tuple) in expand_arguments(&base, self.carrier.degrees(), 1, args) {
            let m = self.anchor_on_generators(&tuple);
            if m.is_zero() {
                continue;
            }
            let cd = base.degree_of(&c, 0).expect("homogeneous coefficient");
            out.add_scaled(&m.left_multiply(&base, &c, cd), &Scalar::one());
        }
        out
    }

    /// `{w_1, …, w_m | a}`.
    pub fn anchor_value(&self, args: &[ModuleElement], a: &AlgebraElement) -> AlgebraElement {
        self.anchor(args).apply(a)
    }

    /// Leibniz extension of the brackets from generator values.
    fn extended_bracket(&self, args: &[ModuleElement]) -> ModuleElement {
        let n = args.len();
        let unit = self.base().unit();
        let bare = |w: &ModuleElement| {
            let mut terms = w.terms();
            match (terms.next(), terms.next()) {
                (Some((_, c)), None) => c.len() == 1 && c.coeff(unit).is_one(),
                _ => false,
            }
        };
        let Some(k) = args.iter().position(|w| !bare(w)) else {
            let tuple: Vec<usize> = args.iter().map(|w| w.terms().next().expect("bare generator").0).collect();
            return self.brackets[n - 2].on_generators(self.carrier.degrees(), &tuple);
        };
        let mut out = ModuleElement::zero();
        if args[k].is_zero() {
            return out;
        }
        let base = self.base().clone();
        let degrees: Vec<i64> = args.iter().map(|w| self.degree_of(w)).collect();
        let before: i64 = degrees[..k].iter().sum();
        let after: i64 = degrees[k + 1..].iter().sum();
        let mut rest = args.to_vec();
        rest.remove(k);
        let anchor = self.anchor(&rest);
        let anchor_flip = odd(degrees[k]) && odd(after);
        for (g, b) in args[k].terms() {
            let anchored = anchor.apply(b);
            if !anchored.is_zero() {
                out.add_scaled(&ModuleElement::term(g, anchored), &Scalar::sign(anchor_flip));
            }
            let mut inner_args = args.to_vec();
            inner_args[k] = self.carrier.generator(g);
            let inner = self.extended_bracket(&inner_args);
            if inner.is_zero() {
                continue;
            }
            for (e, s) in b.terms() {
                let flip = odd(base.degree(e)) && !odd(before);
                let coeff = AlgebraElement::term(e, s.clone().negate_if(flip));
                out.add_assign(&self.carrier.act(&coeff, &inner));
            }
        }
        out
    }

    /// Values of each anchor that fail to be derivations of `A`:
    /// `(tuple, a, b, {t|ab} − {t|a}b − (−1)^{|a|(|t|+1)} a{t|b})`.
    pub fn anchor_derivation_defects(&self, m: usize) -> Vec<(Vec<usize>, usize, usize, AlgebraElement)> {
        let base = self.base();
        let mut out = Vec::new();
        for (tuple, map) in &self.anchors[m - 1] {
            for (a, b, r) in map.derivation_defects(base) {
                out.push((tuple.clone(), a, b, r));
            }
        }
        out
    }

    /// Checks that every anchor is a derivation of `A` and that the carrier
    /// is a dg module.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        report.extend_scoped("carrier", self.carrier.validate());
        for m in 1..=self.cap {
            for (tuple, a, b, r) in self.anchor_derivation_defects(m) {
                report.push(
                    "anchor is a derivation",
                    format!("{{{tuple:?} | e{a}·e{b}}} defect {}", self.base().display(&r)),
                );
            }
        }
        report
    }
}

impl SymmetricBrackets for AlgebroidStructure {
    fn carrier(&self) -> &FreeModule {
        &self.carrier
    }

    fn arity_cap(&self) -> usize {
        self.cap
    }

    fn bracket(&self, args: &[ModuleElement]) -> ModuleElement {
        match args.len() {
            0 => ModuleElement::zero(),
            1 => self.carrier.d(&args[0]),
            n if n <= self.cap => {
                if args.iter().any(ModuleElement::is_zero) {
                    ModuleElement::zero()
                } else {
                    self.extended_bracket(args)
                }
            }
            _ => ModuleElement::zero(),
        }
    }
}
