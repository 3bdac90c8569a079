//! Subcommands: load a model, run the requested checks, assemble a report.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use lrkit::algebroid::{
    algebroid_jacobi_residual, all_residuals_vanish, anchor_morphism_residual, ce_differential, extract_structure,
    leibniz_residual, AlgebroidStructure, LeibnizDefect,
};
use lrkit::geometry::{
    build_frakd, build_kapranov, commutator_lemma_residual, frakd_oracle_residual, retraction_residual,
    structure_from_geometry, transport_lemma_residual, validate_geometric_model, GeometricModel,
};
use lrkit::graded::{FreeModule, ModuleElement};
use lrkit::random;
use lrkit::symtensor::Derivation;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;
use crate::report::{algebra_residual, derivation_difference, square_residuals, Check, Report, ResidualEntry};
use crate::schema::{self, carrier_sym, Caps, Model, ModelFile};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Jacobi { arity: Option<usize> },
    CeBuild,
    CeExtract,
    Roundtrip,
    Leibniz,
    Anchor,
    FrakdBuild,
    FrakdSquare,
    Kapranov,
    Lemmas,
    Mc { seed: u64, samples: usize },
    Duality,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Jacobi { .. } => "jacobi",
            Command::CeBuild => "ce-build",
            Command::CeExtract => "ce-extract",
            Command::Roundtrip => "roundtrip",
            Command::Leibniz => "leibniz",
            Command::Anchor => "anchor",
            Command::FrakdBuild => "frakd-build",
            Command::FrakdSquare => "frakd-square",
            Command::Kapranov => "kapranov",
            Command::Lemmas => "lemmas",
            Command::Mc { .. } => "mc",
            Command::Duality => "duality",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Overrides the weight cap of the file.
    pub weight: Option<usize>,
    /// Overrides the arity cap of the file.
    pub arity: Option<usize>,
    /// Worker threads for independent checks; 0 or 1 runs inline.
    pub threads: usize,
    /// Where `ce-build`, `ce-extract` and `frakd-build` write their result.
    pub out: Option<PathBuf>,
}

/// Worker count from `LRKIT_THREADS`, defaulting to the available
/// parallelism.
pub fn threads_from_env() -> usize {
    std::env::var("LRKIT_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

type Task<'a> = Box<dyn FnOnce() -> Result<Check, CliError> + Send + 'a>;

/// Runs independent checks on up to `threads` workers; the result order is
/// the task order.
fn run_tasks(threads: usize, tasks: Vec<Task<'_>>) -> Result<Vec<Check>, CliError> {
    let n = tasks.len();
    let slots: Vec<Mutex<Option<Task<'_>>>> = tasks.into_iter().map(|t| Mutex::new(Some(t))).collect();
    let results: Vec<Mutex<Option<Result<Check, CliError>>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let work = || loop {
        let i = next.fetch_add(1, Ordering::SeqCst);
        if i >= n {
            break;
        }
        let task = slots[i].lock().expect("task slot").take().expect("each task runs once");
        let start = std::time::Instant::now();
        let result = task().map(|mut c| {
            c.elapsed_ms = Some(start.elapsed().as_millis());
            c
        });
        *results[i].lock().expect("result slot") = Some(result);
    };
    let workers = threads.clamp(1, n.max(1));
    if workers == 1 {
        work();
    } else {
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(work);
            }
        });
    }
    results.into_iter().map(|r| r.into_inner().expect("result slot").expect("every task ran")).collect()
}

pub struct Loaded {
    pub file: ModelFile,
    pub caps: Caps,
    pub model: Model,
}

pub fn load(path: &Path, opts: &Options) -> Result<Loaded, CliError> {
    let file = schema::parse_file(path)?;
    let weight = opts.weight.unwrap_or(file.caps.weight);
    let mut arity = opts.arity.unwrap_or(file.caps.arity);
    if file.algebroid.is_some() && opts.arity.is_none() {
        arity = arity.min(weight);
    }
    let caps = Caps { weight, arity };
    let lowered = caps.weight < file.caps.weight || caps.arity < file.caps.arity;
    let model = if lowered { schema::build_model(&schema::truncate(&file, caps), caps)? } else { schema::build_model(&file, caps)? };
    Ok(Loaded { file, caps, model })
}

fn structure_of(model: &Model) -> Result<AlgebroidStructure, CliError> {
    Ok(match model {
        Model::Algebroid(s) => s.clone(),
        Model::Geometry(g) => structure_from_geometry(g)?,
        Model::Derivation { carrier, sym, d } => extract_structure(carrier, sym, d)?,
    })
}

fn geometry_of<'a>(model: &'a Model, command: &Command) -> Result<&'a GeometricModel, CliError> {
    match model {
        Model::Geometry(g) => Ok(g),
        other => Err(CliError::Usage(format!("{} needs a geometry model, got {}", command.name(), other.kind()))),
    }
}

fn module_residuals(carrier: &FreeModule, what: &str, r: &[(Vec<usize>, ModuleElement)]) -> Vec<ResidualEntry> {
    r.iter()
        .map(|(t, v)| ResidualEntry {
            location: format!("{what} on {}", tuple_names(carrier, t)),
            weight: Some(t.len()),
            word: None,
            coefficient: Some(carrier.display(v)),
        })
        .collect()
}

fn tuple_names(carrier: &FreeModule, t: &[usize]) -> String {
    format!("({})", t.iter().map(|&g| carrier.name(g)).collect::<Vec<_>>().join(", "))
}

fn jacobi_check(s: &AlgebroidStructure, n: usize) -> Result<Check, CliError> {
    let r = algebroid_jacobi_residual(s, n)?;
    Ok(Check::new(format!("Jacobi identity, arity {n}"), module_residuals(s.carrier(), "Jacobi", &r)))
}

fn leibniz_check(s: &AlgebroidStructure, n: usize) -> Result<Check, CliError> {
    let base = s.base();
    let carrier = s.carrier();
    let residuals = leibniz_residual(s, n)?
        .into_iter()
        .map(|d| match d {
            LeibnizDefect::Module { generator, basis, value } => ResidualEntry {
                location: format!("d_L({}·{})", base.name(basis), carrier.name(generator)),
                weight: Some(1),
                word: None,
                coefficient: Some(carrier.display(&value)),
            },
            LeibnizDefect::Anchor { tuple, a, b, value } => algebra_residual(
                base,
                format!("anchor {} on {}·{}", tuple_names(carrier, &tuple), base.name(a), base.name(b)),
                &value,
            ),
            LeibnizDefect::Rule { tuple, generator, basis, value } => ResidualEntry {
                location: format!("bracket {} with {}·{}", tuple_names(carrier, &tuple), base.name(basis), carrier.name(generator)),
                weight: Some(tuple.len() + 1),
                word: None,
                coefficient: Some(carrier.display(&value)),
            },
        })
        .collect();
    Ok(Check::new(format!("Leibniz rule, arity {n}"), residuals))
}

fn anchor_check(s: &AlgebroidStructure, n: usize) -> Result<Check, CliError> {
    let base = s.base();
    let mut residuals = Vec::new();
    for (t, map) in anchor_morphism_residual(s, n)? {
        for (a, v) in map.images.iter().enumerate() {
            if !v.is_zero() {
                residuals.push(algebra_residual(base, format!("anchor morphism on {} at {}", tuple_names(s.carrier(), &t), base.name(a)), v));
            }
        }
    }
    Ok(Check::new(format!("anchor is an L∞[1] morphism, arity {n}"), residuals))
}

fn square_check(name: &str, sym: &lrkit::symtensor::SymAlgebra, d: &Derivation) -> Check {
    let (residuals, lowest) = square_residuals(sym, d);
    let c = Check::new(name, residuals);
    match lowest {
        Some(n) => c.with_note(format!("lowest violating weight shift {n}")),
        None => c,
    }
}

fn write_model(path: &Path, model: &Model, caps: Caps, description: String) -> Result<(), CliError> {
    let text = schema::to_canonical_string(&schema::export_model(model, caps, Some(description)));
    std::fs::write(path, text).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

/// Loads the model, runs the command and returns its report.
pub fn run(command: &Command, path: &Path, opts: &Options) -> Result<Report, CliError> {
    let Loaded { file, caps, model } = load(path, opts)?;
    let arity = caps.arity.min(caps.weight);
    let threads = opts.threads.max(1);
    let mut output = Vec::new();
    let checks: Vec<Check> = match command {
        Command::Validate => vec![match &model {
            Model::Geometry(g) => Check::from_validation("geometric model", &validate_geometric_model(g)),
            Model::Algebroid(s) => Check::from_validation("algebroid structure", &s.validate()),
            Model::Derivation { sym, d, .. } => {
                let residuals = d
                    .base_defects(sym)
                    .into_iter()
                    .flat_map(|(a, b, v)| {
                        let loc = format!("D({}·{})", sym.base().name(a), sym.base().name(b));
                        crate::report::sym_residuals(sym, &loc, &v)
                    })
                    .collect();
                Check::new("derivation of A", residuals)
            }
        }],
        Command::Jacobi { arity: which } => {
            let s = structure_of(&model)?;
            let arities: Vec<usize> = match which {
                Some(n) => vec![*n],
                None => (1..=arity).collect(),
            };
            let s = &s;
            run_tasks(threads, arities.into_iter().map(|n| Box::new(move || jacobi_check(s, n)) as Task).collect())?
        }
        Command::Leibniz => {
            let s = structure_of(&model)?;
            let s = &s;
            run_tasks(threads, (1..=arity).map(|n| Box::new(move || leibniz_check(s, n)) as Task).collect())?
        }
        Command::Anchor => {
            let s = structure_of(&model)?;
            let s = &s;
            run_tasks(threads, (1..=arity).map(|n| Box::new(move || anchor_check(s, n)) as Task).collect())?
        }
        Command::CeBuild => {
            let s = structure_of(&model)?;
            let ce = ce_differential(&s, caps.weight)?;
            output.push(ce.d.display(&ce.sym));
            if let Some(out) = &opts.out {
                let m = Model::Derivation { carrier: s.carrier().clone(), sym: ce.sym.clone(), d: ce.d.clone() };
                write_model(out, &m, caps, "Chevalley–Eilenberg differential".into())?;
            }
            vec![square_check("CE differential squares to zero", &ce.sym, &ce.d)]
        }
        Command::CeExtract => {
            let Model::Derivation { carrier, sym, d } = &model else {
                return Err(CliError::Usage(format!("ce-extract needs a derivation model, got {}", model.kind())));
            };
            let s = extract_structure(carrier, sym, d)?;
            let back = ce_differential(&s, caps.weight)?;
            if let Some(out) = &opts.out {
                write_model(out, &Model::Algebroid(s.clone()), Caps { weight: caps.weight, arity: s.cap() }, "extracted algebroid".into())?;
            }
            output.push(format!("{} brackets and anchors up to arity {}", if s.is_trivial() { "trivial" } else { "nontrivial" }, s.cap()));
            vec![Check::new("CE differential of the extracted structure is the input", derivation_difference(sym, &back.d, d))]
        }
        Command::Roundtrip => {
            let canonical = schema::export_model(&model, caps, file.description.clone());
            let text = schema::to_canonical_string(&canonical);
            let reparsed = schema::parse_str(&text)?;
            let rebuilt = schema::build_model(&reparsed, caps)?;
            let again = schema::to_canonical_string(&schema::export_model(&rebuilt, caps, file.description.clone()));
            let mut file_residuals = Vec::new();
            if again != text {
                file_residuals.push(ResidualEntry { location: "canonical text changes on re-serialisation".into(), weight: None, word: None, coefficient: None });
            }
            let input = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
            let check = Check::new("serialise ∘ parse is the identity on canonical files", file_residuals);
            let check = if input == text { check.with_note("input is canonical") } else { check.with_note("input is not canonical") };
            let mut checks = vec![check];
            match &model {
                Model::Algebroid(s) => {
                    let ce = ce_differential(s, caps.weight)?;
                    let back = extract_structure(s.carrier(), &ce.sym, &ce.d)?;
                    let same = back == *s;
                    checks.push(Check::new(
                        "extract ∘ ce-build is the identity",
                        if same { vec![] } else { vec![ResidualEntry { location: "extracted structure differs".into(), weight: None, word: None, coefficient: None }] },
                    ));
                }
                Model::Derivation { carrier, sym, d } => {
                    let s = extract_structure(carrier, sym, d)?;
                    let ce = ce_differential(&s, caps.weight)?;
                    checks.push(Check::new("ce-build ∘ extract is the identity", derivation_difference(sym, &ce.d, d)));
                }
                Model::Geometry(g) => {
                    let s = structure_from_geometry(g)?;
                    let ce = ce_differential(&s, caps.weight)?;
                    let back = extract_structure(&g.normal, &ce.sym, &ce.d)?;
                    checks.push(Check::new(
                        "extract ∘ ce-build is the identity on the geometric algebroid",
                        if back == s { vec![] } else { vec![ResidualEntry { location: "extracted structure differs".into(), weight: None, word: None, coefficient: None }] },
                    ));
                }
            }
            checks
        }
        Command::FrakdBuild => {
            let g = geometry_of(&model, command)?;
            let frakd = build_frakd(g)?;
            output.push(frakd.d.display(&frakd.sym));
            if let Some(out) = &opts.out {
                let m = Model::Derivation { carrier: g.normal.clone(), sym: frakd.sym.clone(), d: frakd.d.clone() };
                write_model(out, &m, caps, "differential on the formal neighbourhood".into())?;
            }
            let d0 = Derivation::base_differential(&frakd.sym, &g.normal)?;
            vec![Check::new("weight-preserving part is the base differential", derivation_difference(&frakd.sym, &frakd.d.component(0), &d0))]
        }
        Command::FrakdSquare => {
            let g = geometry_of(&model, command)?;
            let frakd = build_frakd(g)?;
            vec![square_check("𝔇² = 0", &frakd.sym, &frakd.d)]
        }
        Command::Kapranov => {
            let g = geometry_of(&model, command)?;
            let k = build_kapranov(&g.curvature_perp, &g.normal, caps.weight)?;
            output.push(k.d.display(&k.sym));
            let mut checks = vec![square_check("D_σ² = 0 for the normal curvature", &k.sym, &k.d)];
            let diagonal = g.beta.iter().flatten().all(|b| b.is_zero()) && g.curvature_top.iter().flatten().all(|r| r.is_zero());
            if diagonal {
                let frakd = build_frakd(g)?;
                checks.push(Check::new("diagonal regime: 𝔇 equals the Kapranov differential", derivation_difference(&k.sym, &frakd.d, &k.d)));
                let s = structure_from_geometry(g)?;
                let anchors = (1..=s.cap())
                    .flat_map(|m| s.anchor_table(m).keys().cloned().collect::<Vec<_>>())
                    .map(|t| ResidualEntry { location: format!("anchor on {}", tuple_names(s.carrier(), &t)), weight: Some(t.len()), word: None, coefficient: None })
                    .collect();
                checks.push(Check::new("diagonal regime: anchors vanish", anchors));
            }
            checks
        }
        Command::Lemmas => {
            let g = geometry_of(&model, command)?;
            let tasks: Vec<Task> = vec![
                Box::new(move || Ok(Check::from_validation("retraction ρ∨π̃* = 1", &retraction_residual(g)?))),
                Box::new(move || Ok(Check::from_validation("commutator [ρ∨, D₀] = β̃P₁", &commutator_lemma_residual(g)?))),
                Box::new(move || Ok(Check::from_validation("transport P₁∇̄ = ∇̄⊥P₀ + S̃P₁ and its iterates", &transport_lemma_residual(g)?))),
                Box::new(move || {
                    Ok(Check::from_validation("transported ambient differential equals 𝔇", &frakd_oracle_residual(g)?))
                }),
                Box::new(move || {
                    let frakd = build_frakd(g)?;
                    let d0 = Derivation::base_differential(&frakd.sym, &g.normal)?;
                    Ok(Check::new("gr 𝔇 = D₀", derivation_difference(&frakd.sym, &frakd.d.component(0), &d0)))
                }),
            ];
            run_tasks(threads, tasks)?
        }
        Command::Mc { seed, samples } => {
            let carrier = match &model {
                Model::Algebroid(s) => s.carrier().clone(),
                Model::Derivation { carrier, .. } => carrier.clone(),
                Model::Geometry(g) => g.normal.clone(),
            };
            let carrier = &carrier;
            let tasks: Vec<Task> = (0..*samples)
                .map(|i| {
                    let seed = seed.wrapping_add(i as u64);
                    Box::new(move || mc_check(carrier, caps.weight, seed)) as Task
                })
                .collect();
            run_tasks(threads, tasks)?
        }
        Command::Duality => match &model {
            Model::Geometry(g) => {
                let s = structure_from_geometry(g)?;
                let ce = ce_differential(&s, caps.weight)?;
                let frakd = build_frakd(g)?;
                vec![Check::new("CE differential of the geometric algebroid equals 𝔇", derivation_difference(&frakd.sym, &ce.d, &frakd.d))]
            }
            Model::Algebroid(s) => {
                let ce = ce_differential(s, caps.weight)?;
                let back = extract_structure(s.carrier(), &ce.sym, &ce.d)?;
                let square_vanishes = ce.d.square_components(&ce.sym).is_empty();
                let residuals_vanish = all_residuals_vanish(s)?;
                let mut bridge = Vec::new();
                if square_vanishes != residuals_vanish {
                    bridge.push(ResidualEntry {
                        location: format!("D² = 0 is {square_vanishes} but the identities hold is {residuals_vanish}"),
                        weight: None,
                        word: None,
                        coefficient: None,
                    });
                }
                vec![
                    Check::new(
                        "extract ∘ ce-build is the identity",
                        if back == *s { vec![] } else { vec![ResidualEntry { location: "extracted structure differs".into(), weight: None, word: None, coefficient: None }] },
                    ),
                    Check::new("D² = 0 exactly when all identities hold", bridge)
                        .with_note(format!("D² = 0: {square_vanishes}")),
                ]
            }
            Model::Derivation { carrier, sym, d } => {
                let s = extract_structure(carrier, sym, d)?;
                let ce = ce_differential(&s, caps.weight)?;
                vec![Check::new("ce-build ∘ extract is the identity", derivation_difference(sym, &ce.d, d))]
            }
        },
    };
    Ok(Report {
        command: command.name().to_string(),
        model: path.display().to_string(),
        kind: model.kind().to_string(),
        effective_caps: caps,
        checks,
        output,
    })
}

/// Conjugates `D₀` by a random unipotent automorphism and checks the
/// Maurer–Cartan equation, `(ΦD₀Φ⁻¹)² = 0` and the identities of the
/// extracted structure.
fn mc_check(carrier: &FreeModule, weight: usize, seed: u64) -> Result<Check, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sym = carrier_sym(carrier, weight);
    let d0 = Derivation::base_differential(&sym, carrier)?;
    let phi = random::unipotent(&mut rng, &sym, 0.5)?;
    let mut residuals = Vec::new();
    let mc = phi.mc_residual(&sym, &d0)?;
    for (g, v) in mc.values() {
        residuals.extend(crate::report::sym_residuals(&sym, &format!("MC residual at {}", crate::report::generator_name(&sym, g)), v));
    }
    let d = phi.conjugate(&sym, &d0)?;
    let (sq, _) = square_residuals(&sym, &d);
    residuals.extend(sq);
    let s = extract_structure(carrier, &sym, &d)?;
    if !all_residuals_vanish(&s)? {
        residuals.push(ResidualEntry { location: "extracted structure violates an identity".into(), weight: None, word: None, coefficient: None });
    }
    Ok(Check::new(format!("Maurer–Cartan and conjugation, seed {seed}"), residuals))
}
