//! The `lrkit-model/1` JSON interchange format.
//!
//! Every scalar is an exact Gaussian rational written as an integer
//! quadruple `{num, den, inum, iden}` meaning `num/den + i·inum/iden`.
//! Unknown fields are rejected. Exactly one of `algebroid`, `derivation` or
//! `geometry` must be present.

use std::collections::BTreeMap;
use std::sync::Arc;

use lrkit::algebroid::AlgebroidStructure;
use lrkit::geometry::{GeometricModel, ModuleMap, Splitting};
use lrkit::graded::{models, AlgebraElement, AlgebraMap, BaseAlgebra, BasisElement, FreeModule, ModuleElement, Scalar};
use lrkit::linfty::{canonical_tuples, Symmetry};
use lrkit::symtensor::{Derivation, SymAlgebra, SymElement, Word};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA: &str = "lrkit-model/1";

fn one() -> i64 {
    1
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quadruple {
    pub num: i64,
    #[serde(default = "one")]
    pub den: i64,
    #[serde(default)]
    pub inum: i64,
    #[serde(default = "one")]
    pub iden: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub basis: usize,
    pub c: Quadruple,
}

pub type AlgebraTerms = Vec<Term>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleTerm {
    pub generator: usize,
    pub coeff: AlgebraTerms,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymTerm {
    pub word: Vec<usize>,
    pub coeff: AlgebraTerms,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Caps {
    pub weight: usize,
    pub arity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSpec {
    pub name: String,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductSpec {
    pub left: usize,
    pub right: usize,
    pub value: AlgebraTerms,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisValue {
    pub basis: usize,
    pub value: AlgebraTerms,
}

/// Either a named preset or an explicit multiplication table. Products
/// with the unit are implied.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<BasisSpec>,
    #[serde(default)]
    pub unit: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub products: Vec<ProductSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<BasisValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorValue {
    pub generator: usize,
    pub value: Vec<ModuleTerm>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub names: Vec<String>,
    pub degrees: Vec<i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<GeneratorValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    pub tuple: Vec<usize>,
    pub value: Vec<ModuleTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnchorSpec {
    pub tuple: Vec<usize>,
    pub images: Vec<BasisValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebroidSpec {
    pub carrier: ModuleSpec,
    #[serde(default)]
    pub brackets: Vec<BracketSpec>,
    #[serde(default)]
    pub anchors: Vec<AnchorSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymValue {
    pub generator: usize,
    pub value: Vec<SymTerm>,
}

/// A degree-one derivation of `Ŝ_A(carrier∨)` by its values on the basis
/// of `A` and on the letters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationSpec {
    pub carrier: ModuleSpec,
    #[serde(default)]
    pub on_base: Vec<SymValue>,
    #[serde(default)]
    pub on_letters: Vec<SymValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorEntry {
    pub index: Vec<usize>,
    pub value: AlgebraTerms,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureEntry {
    pub order: usize,
    pub letter: usize,
    pub value: Vec<SymTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplittingSpec {
    pub iota: Vec<Vec<ModuleTerm>>,
    pub p: Vec<Vec<ModuleTerm>>,
    pub tau: Vec<Vec<ModuleTerm>>,
    pub rho: Vec<Vec<ModuleTerm>>,
}

/// Sparse tensors of a geometric model; index conventions as in
/// `GeometricModel`. `ambient` defaults to `T ⊕ N` with zero differential,
/// `splitting` to the standard one, and `beta` to the induced form when
/// `beta_induced` is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySpec {
    pub tangent: ModuleSpec,
    pub normal: ModuleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<ModuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting: Option<SplittingSpec>,
    #[serde(default)]
    pub holo_diff: Vec<TensorEntry>,
    #[serde(default)]
    pub christoffel: Vec<TensorEntry>,
    #[serde(default)]
    pub shape: Vec<TensorEntry>,
    #[serde(default)]
    pub beta: Vec<TensorEntry>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub beta_induced: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<Vec<TensorEntry>>,
    #[serde(default)]
    pub curvature_perp: Vec<CurvatureEntry>,
    #[serde(default)]
    pub curvature_top: Vec<CurvatureEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature_full: Option<Vec<CurvatureEntry>>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub beta_closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub caps: Caps,
    pub algebra: AlgebraSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebroid: Option<AlgebroidSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivation: Option<DerivationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometrySpec>,
}

/// A parsed and validated model.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Model {
    Algebroid(AlgebroidStructure),
    Derivation { carrier: FreeModule, sym: SymAlgebra, d: Derivation },
    Geometry(GeometricModel),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::Algebroid(_) => "algebroid",
            Model::Derivation { .. } => "derivation",
            Model::Geometry(_) => "geometry",
        }
    }

    pub fn base(&self) -> &Arc<BaseAlgebra> {
        match self {
            Model::Algebroid(s) => s.base(),
            Model::Derivation { carrier, .. } => carrier.base(),
            Model::Geometry(g) => g.base(),
        }
    }
}

/// Reads a model file. JSON syntax errors carry line and column; semantic
/// errors carry the field path.
pub fn parse_str(text: &str) -> Result<ModelFile, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse { line: e.line(), column: e.column(), message: e.to_string() })
}

pub fn parse_file(path: &std::path::Path) -> Result<ModelFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_str(&text)
}

/// Pretty JSON with a trailing newline.
pub fn to_canonical_string(file: &ModelFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("model files serialize");
    s.push('\n');
    s
}

fn schema_err(path: &str, message: impl std::fmt::Display) -> CliError {
    CliError::Schema { path: path.to_string(), message: message.to_string() }
}

fn core_err(path: &str) -> impl Fn(lrkit::Error) -> CliError + '_ {
    move |e| schema_err(path, e)
}

// ---- scalars and elements ----

fn scalar(q: &Quadruple, path: &str) -> Result<Scalar, CliError> {
    Scalar::from_quadruple(q.num, q.den, q.inum, q.iden).map_err(core_err(path))
}

fn quadruple(s: &Scalar) -> Quadruple {
    let (num, den, inum, iden) = s.to_quadruple().expect("coefficients fit in 64 bits");
    Quadruple { num, den, inum, iden }
}

fn algebra_element(terms: &AlgebraTerms, base: &BaseAlgebra, path: &str) -> Result<AlgebraElement, CliError> {
    let mut out = AlgebraElement::zero();
    for (i, t) in terms.iter().enumerate() {
        if t.basis >= base.dim() {
            return Err(schema_err(&format!("{path}[{i}].basis"), format!("{} outside dimension {}", t.basis, base.dim())));
        }
        out.add_term(t.basis, &scalar(&t.c, &format!("{path}[{i}].c"))?);
    }
    Ok(out)
}

fn algebra_terms(x: &AlgebraElement) -> AlgebraTerms {
    x.terms().map(|(basis, c)| Term { basis, c: quadruple(c) }).collect()
}

fn module_element(terms: &[ModuleTerm], base: &BaseAlgebra, rank: usize, path: &str) -> Result<ModuleElement, CliError> {
    let mut out = ModuleElement::zero();
    for (i, t) in terms.iter().enumerate() {
        if t.generator >= rank {
            return Err(schema_err(&format!("{path}[{i}].generator"), format!("{} outside rank {rank}", t.generator)));
        }
        out.add_term(t.generator, &algebra_element(&t.coeff, base, &format!("{path}[{i}].coeff"))?);
    }
    Ok(out)
}

fn module_terms(v: &ModuleElement) -> Vec<ModuleTerm> {
    v.terms().map(|(generator, c)| ModuleTerm { generator, coeff: algebra_terms(c) }).collect()
}

fn sym_element(terms: &[SymTerm], sym: &SymAlgebra, path: &str) -> Result<SymElement, CliError> {
    let mut out = sym.zero();
    for (i, t) in terms.iter().enumerate() {
        if let Some(&l) = t.word.iter().find(|&&l| l >= sym.rank()) {
            return Err(schema_err(&format!("{path}[{i}].word"), format!("letter {l} outside rank {}", sym.rank())));
        }
        if t.word.len() > sym.cap() {
            return Err(schema_err(&format!("{path}[{i}].word"), format!("weight {} exceeds the cap {}", t.word.len(), sym.cap())));
        }
        let c = algebra_element(&t.coeff, sym.base(), &format!("{path}[{i}].coeff"))?;
        out.add_term(Word::from_letters(t.word.clone()), &c);
    }
    Ok(out)
}

fn sym_terms(x: &SymElement) -> Vec<SymTerm> {
    x.terms().map(|(w, c)| SymTerm { word: w.letters().to_vec(), coeff: algebra_terms(c) }).collect()
}

// ---- algebras and modules ----

pub fn build_algebra(spec: &AlgebraSpec) -> Result<BaseAlgebra, CliError> {
    if let Some(preset) = &spec.preset {
        if !spec.basis.is_empty() || !spec.products.is_empty() || !spec.differential.is_empty() {
            return Err(schema_err("algebra", "a preset excludes basis, products and differential"));
        }
        let names: Vec<&str> = spec.generators.iter().flatten().map(String::as_str).collect();
        return match preset.as_str() {
            "ground" => Ok(BaseAlgebra::ground()),
            "exterior" if !names.is_empty() => Ok(models::exterior(&names)),
            "exterior" => Err(schema_err("algebra.generators", "the exterior preset needs generator names")),
            "twisted_dual_numbers" => Ok(models::twisted_dual_numbers()),
            "twisted_dual_numbers_two" => Ok(models::twisted_dual_numbers_two()),
            "truncated_even" => Ok(models::truncated_even(spec.power.unwrap_or(3))),
            other => Err(schema_err("algebra.preset", format!("unknown preset {other:?}"))),
        };
    }
    let basis: Vec<BasisElement> = spec.basis.iter().map(|b| BasisElement { name: b.name.clone(), degree: b.degree }).collect();
    let dim = basis.len();
    let plain = BaseAlgebra::new(basis.clone(), spec.unit, BTreeMap::new(), BTreeMap::new()).map_err(core_err("algebra"))?;
    let mut products = BTreeMap::new();
    for (i, p) in spec.products.iter().enumerate() {
        if p.left >= dim || p.right >= dim {
            return Err(schema_err(&format!("algebra.products[{i}]"), "basis index outside the basis"));
        }
        products.insert((p.left, p.right), algebra_element(&p.value, &plain, &format!("algebra.products[{i}].value"))?);
    }
    let mut differential = BTreeMap::new();
    for (i, v) in spec.differential.iter().enumerate() {
        differential.insert(v.basis, algebra_element(&v.value, &plain, &format!("algebra.differential[{i}].value"))?);
    }
    let alg = BaseAlgebra::new(basis, spec.unit, products, differential).map_err(core_err("algebra"))?;
    let report = alg.validate();
    if !report.is_ok() {
        return Err(schema_err("algebra", report));
    }
    Ok(alg)
}

pub fn algebra_spec(alg: &BaseAlgebra) -> AlgebraSpec {
    let dim = alg.dim();
    let unit = alg.unit();
    let mut products = Vec::new();
    for a in 0..dim {
        for b in 0..dim {
            let v = alg.basis_product(a, b);
            if a != unit && b != unit && !v.is_zero() {
                products.push(ProductSpec { left: a, right: b, value: algebra_terms(v) });
            }
        }
    }
    let differential = (0..dim)
        .filter(|&a| !alg.basis_differential(a).is_zero())
        .map(|a| BasisValue { basis: a, value: algebra_terms(alg.basis_differential(a)) })
        .collect();
    AlgebraSpec {
        basis: alg.basis().iter().map(|b| BasisSpec { name: b.name.clone(), degree: b.degree }).collect(),
        unit,
        products,
        differential,
        ..AlgebraSpec::default()
    }
}

pub fn build_module(spec: &ModuleSpec, base: &Arc<BaseAlgebra>, path: &str) -> Result<FreeModule, CliError> {
    let rank = spec.degrees.len();
    let mut values = BTreeMap::new();
    for (i, v) in spec.differential.iter().enumerate() {
        if v.generator >= rank {
            return Err(schema_err(&format!("{path}.differential[{i}].generator"), format!("outside rank {rank}")));
        }
        values.insert(v.generator, module_element(&v.value, base, rank, &format!("{path}.differential[{i}].value"))?);
    }
    let m = FreeModule::new(base.clone(), spec.degrees.clone())
        .with_names(spec.names.clone())
        .map_err(core_err(&format!("{path}.names")))?
        .with_differential(values)
        .map_err(core_err(&format!("{path}.differential")))?;
    let report = m.validate();
    if !report.is_ok() {
        return Err(schema_err(path, report));
    }
    Ok(m)
}

pub fn module_spec(m: &FreeModule) -> ModuleSpec {
    ModuleSpec {
        names: m.names().to_vec(),
        degrees: m.degrees().to_vec(),
        differential: (0..m.rank())
            .filter(|&g| !m.generator_differential(g).is_zero())
            .map(|g| GeneratorValue { generator: g, value: module_terms(m.generator_differential(g)) })
            .collect(),
    }
}

// ---- algebroids ----

fn build_algebroid(spec: &AlgebroidSpec, base: &Arc<BaseAlgebra>, caps: Caps) -> Result<AlgebroidStructure, CliError> {
    let carrier = build_module(&spec.carrier, base, "algebroid.carrier")?;
    let rank = carrier.rank();
    let mut s = AlgebroidStructure::new(carrier, caps.arity).map_err(core_err("caps.arity"))?;
    for (i, b) in spec.brackets.iter().enumerate() {
        let path = format!("algebroid.brackets[{i}]");
        let v = module_element(&b.value, base, rank, &format!("{path}.value"))?;
        s.set_bracket(&b.tuple, v).map_err(core_err(&path))?;
    }
    for (i, a) in spec.anchors.iter().enumerate() {
        let path = format!("algebroid.anchors[{i}]");
        if let Some(&g) = a.tuple.iter().find(|&&g| g >= rank) {
            return Err(schema_err(&format!("{path}.tuple"), format!("generator {g} outside rank {rank}")));
        }
        let degree = a.tuple.iter().map(|&g| s.carrier().degree(g)).sum::<i64>() + 1;
        let mut map = AlgebraMap::zero(base.dim(), degree);
        for (k, img) in a.images.iter().enumerate() {
            if img.basis >= base.dim() {
                return Err(schema_err(&format!("{path}.images[{k}].basis"), "outside the basis"));
            }
            map.images[img.basis] = algebra_element(&img.value, base, &format!("{path}.images[{k}].value"))?;
        }
        s.set_anchor(&a.tuple, map).map_err(core_err(&path))?;
    }
    Ok(s)
}

pub fn algebroid_spec(s: &AlgebroidStructure) -> AlgebroidSpec {
    let carrier = s.carrier();
    let mut brackets = Vec::new();
    let mut anchors = Vec::new();
    for n in 1..=s.cap() {
        for t in canonical_tuples(Symmetry::Symmetric, n, carrier.degrees()) {
            if n >= 2 {
                let v = s.table(n).on_generators(carrier.degrees(), &t);
                if !v.is_zero() {
                    brackets.push(BracketSpec { tuple: t.clone(), value: module_terms(&v) });
                }
            }
            let a = s.anchor_on_generators(&t);
            if !a.is_zero() {
                let images = a
                    .images
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(basis, v)| BasisValue { basis, value: algebra_terms(v) })
                    .collect();
                anchors.push(AnchorSpec { tuple: t, images });
            }
        }
    }
    AlgebroidSpec { carrier: module_spec(carrier), brackets, anchors }
}

// ---- derivations ----

pub fn carrier_sym(carrier: &FreeModule, cap: usize) -> SymAlgebra {
    SymAlgebra::dual_of(carrier, cap).with_names(carrier.names().iter().map(|n| format!("{n}∨")).collect())
}

fn build_derivation(spec: &DerivationSpec, base: &Arc<BaseAlgebra>, caps: Caps) -> Result<Model, CliError> {
    let carrier = build_module(&spec.carrier, base, "derivation.carrier")?;
    let sym = carrier_sym(&carrier, caps.weight);
    let mut on_base = vec![sym.zero(); base.dim()];
    for (i, v) in spec.on_base.iter().enumerate() {
        let path = format!("derivation.on_base[{i}]");
        let slot = on_base.get_mut(v.generator).ok_or_else(|| schema_err(&format!("{path}.generator"), "outside the basis"))?;
        *slot = sym_element(&v.value, &sym, &format!("{path}.value"))?;
    }
    let mut on_letters = vec![sym.zero(); carrier.rank()];
    for (i, v) in spec.on_letters.iter().enumerate() {
        let path = format!("derivation.on_letters[{i}]");
        let slot = on_letters.get_mut(v.generator).ok_or_else(|| schema_err(&format!("{path}.generator"), "outside the rank"))?;
        *slot = sym_element(&v.value, &sym, &format!("{path}.value"))?;
    }
    let d = Derivation::new(&sym, 1, on_base, on_letters).map_err(core_err("derivation"))?;
    Ok(Model::Derivation { carrier, sym, d })
}

pub fn derivation_spec(carrier: &FreeModule, d: &Derivation) -> DerivationSpec {
    let values = |vals: &[SymElement]| {
        vals.iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(generator, v)| SymValue { generator, value: sym_terms(v) })
            .collect()
    };
    DerivationSpec { carrier: module_spec(carrier), on_base: values(d.on_base()), on_letters: values(d.on_letters()) }
}

// ---- geometry ----

fn module_map(images: &[Vec<ModuleTerm>], base: &BaseAlgebra, source: usize, target: usize, path: &str) -> Result<ModuleMap, CliError> {
    if images.len() != source {
        return Err(schema_err(path, format!("expected {source} images, found {}", images.len())));
    }
    let images = images
        .iter()
        .enumerate()
        .map(|(k, v)| module_element(v, base, target, &format!("{path}[{k}]")))
        .collect::<Result<_, _>>()?;
    Ok(ModuleMap::new(images))
}

fn fill_tensor<const N: usize>(
    entries: &[TensorEntry],
    base: &BaseAlgebra,
    shape: [usize; N],
    path: &str,
    mut set: impl FnMut(&[usize], AlgebraElement),
) -> Result<(), CliError> {
    for (i, e) in entries.iter().enumerate() {
        let p = format!("{path}[{i}]");
        if e.index.len() != N || e.index.iter().zip(shape).any(|(&x, s)| x >= s) {
            return Err(schema_err(&format!("{p}.index"), format!("{:?} does not fit the shape {shape:?}", e.index)));
        }
        set(&e.index, algebra_element(&e.value, base, &format!("{p}.value"))?);
    }
    Ok(())
}

fn curvature(
    entries: &[CurvatureEntry],
    sym: &SymAlgebra,
    rank: usize,
    cap: usize,
    path: &str,
) -> Result<Vec<Vec<SymElement>>, CliError> {
    let mut out: Vec<Vec<SymElement>> = (2..=cap).map(|_| vec![sym.zero(); rank]).collect();
    for (i, e) in entries.iter().enumerate() {
        let p = format!("{path}[{i}]");
        if e.order < 2 || e.order > cap {
            return Err(schema_err(&format!("{p}.order"), format!("order {} outside 2..={cap}", e.order)));
        }
        if e.letter >= rank {
            return Err(schema_err(&format!("{p}.letter"), format!("outside rank {rank}")));
        }
        out[e.order - 2][e.letter] = sym_element(&e.value, sym, &format!("{p}.value"))?;
    }
    Ok(out)
}

fn curvature_entries(list: &[Vec<SymElement>]) -> Vec<CurvatureEntry> {
    let mut out = Vec::new();
    for (idx, values) in list.iter().enumerate() {
        for (letter, v) in values.iter().enumerate() {
            if !v.is_zero() {
                out.push(CurvatureEntry { order: idx + 2, letter, value: sym_terms(v) });
            }
        }
    }
    out
}

fn build_geometry(spec: &GeometrySpec, base: &Arc<BaseAlgebra>, caps: Caps) -> Result<GeometricModel, CliError> {
    let tangent = build_module(&spec.tangent, base, "geometry.tangent")?;
    let normal = build_module(&spec.normal, base, "geometry.normal")?;
    let (t, n) = (tangent.rank(), normal.rank());
    let mut g = GeometricModel::trivial(base.clone(), t, n, caps.weight).map_err(core_err("caps.weight"))?;
    g.tangent = tangent;
    g.normal = normal;
    if let Some(a) = &spec.ambient {
        g.ambient = build_module(a, base, "geometry.ambient")?;
    }
    let y = g.ambient.rank();
    if y != t + n {
        return Err(schema_err("geometry.ambient", format!("rank {y} is not {t} + {n}")));
    }
    g.splitting = match &spec.splitting {
        Some(s) => Splitting {
            iota: module_map(&s.iota, base, t, y, "geometry.splitting.iota")?,
            p: module_map(&s.p, base, y, n, "geometry.splitting.p")?,
            tau: module_map(&s.tau, base, y, t, "geometry.splitting.tau")?,
            rho: module_map(&s.rho, base, n, y, "geometry.splitting.rho")?,
        },
        None => Splitting::standard(base, t, n),
    };
    fill_tensor(&spec.holo_diff, base, [base.dim(), t], "geometry.holo_diff", |i, v| g.holo_diff[i[0]][i[1]] = v)?;
    fill_tensor(&spec.christoffel, base, [n, t, n], "geometry.christoffel", |i, v| g.christoffel[i[0]][i[1]][i[2]] = v)?;
    fill_tensor(&spec.shape, base, [t, t, n], "geometry.shape", |i, v| g.shape[i[0]][i[1]][i[2]] = v)?;
    if let Some(entries) = &spec.connection {
        let mut table = vec![vec![vec![AlgebraElement::zero(); t + n]; t]; t + n];
        fill_tensor(entries, base, [t + n, t, t + n], "geometry.connection", |i, v| table[i[0]][i[1]][i[2]] = v)?;
        g.connection = Some(table);
    }
    if spec.beta_induced {
        if !spec.beta.is_empty() {
            return Err(schema_err("geometry.beta", "explicit β conflicts with beta_induced"));
        }
        g.beta = g.induced_beta().map_err(core_err("geometry.splitting"))?;
    } else {
        fill_tensor(&spec.beta, base, [t, n], "geometry.beta", |i, v| g.beta[i[0]][i[1]] = v)?;
    }
    let sym = g.normal_sym();
    g.curvature_perp = curvature(&spec.curvature_perp, &sym, n, caps.weight, "geometry.curvature_perp")?;
    g.curvature_top = curvature(&spec.curvature_top, &sym, t, caps.weight, "geometry.curvature_top")?;
    if let Some(full) = &spec.curvature_full {
        let frame = g.ambient_frame_sym();
        g.curvature_full = Some(curvature(full, &frame, y, caps.weight, "geometry.curvature_full")?);
    }
    g.beta_closed = spec.beta_closed;
    Ok(g)
}

fn tensor_entries2(x: &[Vec<AlgebraElement>]) -> Vec<TensorEntry> {
    let mut out = Vec::new();
    for (a, row) in x.iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            if !v.is_zero() {
                out.push(TensorEntry { index: vec![a, b], value: algebra_terms(v) });
            }
        }
    }
    out
}

fn tensor_entries3(x: &[Vec<Vec<AlgebraElement>>]) -> Vec<TensorEntry> {
    let mut out = Vec::new();
    for (a, m) in x.iter().enumerate() {
        for mut e in tensor_entries2(m) {
            e.index.insert(0, a);
            out.push(e);
        }
    }
    out
}

pub fn geometry_spec(g: &GeometricModel) -> GeometrySpec {
    let map = |m: &ModuleMap| m.images.iter().map(module_terms).collect();
    let s = &g.splitting;
    GeometrySpec {
        tangent: module_spec(&g.tangent),
        normal: module_spec(&g.normal),
        ambient: Some(module_spec(&g.ambient)),
        splitting: Some(SplittingSpec { iota: map(&s.iota), p: map(&s.p), tau: map(&s.tau), rho: map(&s.rho) }),
        holo_diff: tensor_entries2(&g.holo_diff),
        christoffel: tensor_entries3(&g.christoffel),
        shape: tensor_entries3(&g.shape),
        beta: tensor_entries2(&g.beta),
        beta_induced: false,
        connection: g.connection.as_ref().map(|c| tensor_entries3(c)),
        curvature_perp: curvature_entries(&g.curvature_perp),
        curvature_top: curvature_entries(&g.curvature_top),
        curvature_full: g.curvature_full.as_ref().map(|c| curvature_entries(c)),
        beta_closed: g.beta_closed,
    }
}

// ---- whole files ----

/// Drops every entry of weight or arity above `caps`, so that a file can be
/// read with caps lower than the ones it was written with.
pub fn truncate(file: &ModelFile, caps: Caps) -> ModelFile {
    let mut out = file.clone();
    let keep_terms = |terms: &mut Vec<SymTerm>| terms.retain(|t| t.word.len() <= caps.weight);
    if let Some(a) = &mut out.algebroid {
        a.brackets.retain(|b| b.tuple.len() <= caps.arity);
        a.anchors.retain(|b| b.tuple.len() <= caps.arity);
    }
    if let Some(d) = &mut out.derivation {
        for v in d.on_base.iter_mut().chain(d.on_letters.iter_mut()) {
            keep_terms(&mut v.value);
        }
        d.on_base.retain(|v| !v.value.is_empty());
        d.on_letters.retain(|v| !v.value.is_empty());
    }
    if let Some(g) = &mut out.geometry {
        let trim = |list: &mut Vec<CurvatureEntry>| {
            list.retain(|e| e.order <= caps.weight);
            for e in list.iter_mut() {
                keep_terms(&mut e.value);
            }
            list.retain(|e| !e.value.is_empty());
        };
        trim(&mut g.curvature_perp);
        trim(&mut g.curvature_top);
        if let Some(full) = &mut g.curvature_full {
            trim(full);
        }
    }
    out
}

/// Builds the model with the given effective caps.
pub fn build_model(file: &ModelFile, caps: Caps) -> Result<Model, CliError> {
    if file.schema != SCHEMA {
        return Err(schema_err("schema", format!("unsupported schema {:?}, expected {SCHEMA:?}", file.schema)));
    }
    if caps.weight == 0 || caps.arity == 0 {
        return Err(schema_err("caps", "caps must be positive"));
    }
    let base = Arc::new(build_algebra(&file.algebra)?);
    let present = [file.algebroid.is_some(), file.derivation.is_some(), file.geometry.is_some()];
    if present.iter().filter(|&&p| p).count() != 1 {
        return Err(schema_err("", "exactly one of algebroid, derivation, geometry must be present"));
    }
    if let Some(a) = &file.algebroid {
        if caps.arity > caps.weight {
            return Err(schema_err("caps", "the arity cap of an algebroid cannot exceed the weight cap"));
        }
        return Ok(Model::Algebroid(build_algebroid(a, &base, caps)?));
    }
    if let Some(d) = &file.derivation {
        return build_derivation(d, &base, caps);
    }
    let g = build_geometry(file.geometry.as_ref().expect("one section present"), &base, caps)?;
    Ok(Model::Geometry(g))
}

/// The canonical file of a model: explicit algebra table, sparse sorted
/// entries, every quadruple reduced.
pub fn export_model(model: &Model, caps: Caps, description: Option<String>) -> ModelFile {
    let mut file = ModelFile {
        schema: SCHEMA.to_string(),
        description,
        caps,
        algebra: algebra_spec(model.base()),
        algebroid: None,
        derivation: None,
        geometry: None,
    };
    match model {
        Model::Algebroid(s) => file.algebroid = Some(algebroid_spec(s)),
        Model::Derivation { carrier, d, .. } => file.derivation = Some(derivation_spec(carrier, d)),
        Model::Geometry(g) => file.geometry = Some(geometry_spec(g)),
    }
    file
}
