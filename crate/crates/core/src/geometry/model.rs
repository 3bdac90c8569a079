//! Finite tensor models of an embedding: splitting of the normal sequence,
//! holomorphic differential, connection data, shape operator,
//! Kodaira–Spencer form and split curvature.
//!
//! All bundle generators sit in degree 0, so their dual letters are even
//! and the only signs come from coefficients in `A`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graded::{odd, AlgebraElement, BaseAlgebra, FreeModule, ModuleElement, ValidationReport};
use crate::symtensor::{Derivation, SymAlgebra, SymElement, Word};

/// A degree-zero `A`-linear map between free modules, stored by the images
/// of the source generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub images: Vec<ModuleElement>,
}

impl ModuleMap {
    pub fn new(images: Vec<ModuleElement>) -> Self {
        ModuleMap { images }
    }

    /// `g_k ↦ g_{offset + k}` for `k < rank`.
    pub fn inclusion(rank: usize, offset: usize, one: &AlgebraElement) -> Self {
        ModuleMap { images: (0..rank).map(|k| ModuleElement::term(offset + k, one.clone())).collect() }
    }

    pub fn source_rank(&self) -> usize {
        self.images.len()
    }

    /// `f(Σ a_k g_k) = Σ a_k f(g_k)`.
    pub fn apply(&self, base: &BaseAlgebra, v: &ModuleElement) -> ModuleElement {
        let mut out = ModuleElement::zero();
        for (k, a) in v.terms() {
            for (l, c) in self.images[k].terms() {
                out.add_term(l, &base.mul(a, c));
            }
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, base: &BaseAlgebra, other: &ModuleMap) -> ModuleMap {
        ModuleMap { images: other.images.iter().map(|v| self.apply(base, v)).collect() }
    }

    /// Coefficient of `g'_target` in `f(g_source)`.
    pub fn entry(&self, source: usize, target: usize) -> AlgebraElement {
        self.images[source].coeff(target)
    }

    /// The transpose on dual letters, `f∨(x'_l) = Σ_k f(g_k)_l x_k`, as a
    /// letter map from the dual of the target into `source_sym`.
    pub fn dual(&self, target_rank: usize, source_sym: &SymAlgebra, offset: usize) -> LetterMap {
        let images = (0..target_rank)
            .map(|l| {
                let mut out = source_sym.zero();
                for k in 0..self.source_rank() {
                    let c = self.entry(k, l);
                    if !c.is_zero() {
                        out.add_term(Word::letter(offset + k), &c);
                    }
                }
                out
            })
            .collect();
        LetterMap { images }
    }
}

/// An algebra map between symmetric algebras on even letters, given by
/// weight-one images of letters with degree-zero coefficients and the
/// identity on `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterMap {
    pub images: Vec<SymElement>,
}

impl LetterMap {
    /// Sum of two maps with the same source, letter by letter.
    pub fn plus(&self, other: &LetterMap) -> LetterMap {
        LetterMap { images: self.images.iter().zip(&other.images).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn apply(&self, target: &SymAlgebra, eta: &SymElement) -> SymElement {
        let mut out = target.zero();
        for (w, c) in eta.terms() {
            let mut image = target.from_algebra(c);
            for &l in w.letters() {
                image = target.mul(&image, &self.images[l]);
            }
            out.add_assign(&image);
        }
        out
    }
}

/// A `C^∞` splitting of `0 → T → Y → N → 0`: `ι: T → Y`, `p: Y → N`,
/// `τ: Y → T`, `ρ: N → Y` with `τι = 1`, `pρ = 1`, `ιτ + ρp = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting {
    pub iota: ModuleMap,
    pub p: ModuleMap,
    pub tau: ModuleMap,
    pub rho: ModuleMap,
}

impl Splitting {
    /// `Y = T ⊕ N` with the standard inclusions and projections.
    pub fn standard(base: &BaseAlgebra, t: usize, n: usize) -> Self {
        let one = base.one();
        let mut p = vec![ModuleElement::zero(); t];
        p.extend((0..n).map(|j| ModuleElement::term(j, one.clone())));
        let mut tau: Vec<ModuleElement> = (0..t).map(|k| ModuleElement::term(k, one.clone())).collect();
        tau.extend(std::iter::repeat(ModuleElement::zero()).take(n));
        Splitting {
            iota: ModuleMap::inclusion(t, 0, &one),
            p: ModuleMap::new(p),
            tau: ModuleMap::new(tau),
            rho: ModuleMap::inclusion(n, t, &one),
        }
    }

    /// The standard splitting with `ρ(g_j) = y_{t+j} + Σ_k c_{jk} y_k` and
    /// `τ` adjusted so that all three identities hold; `c` has degree 0.
    pub fn sheared(base: &BaseAlgebra, t: usize, shear: &[Vec<AlgebraElement>]) -> Self {
        let n = shear.len();
        let mut s = Splitting::standard(base, t, n);
        for (j, row) in shear.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                s.rho.images[j].add_term(k, c);
                s.tau.images[t + j].add_term(k, &c.neg());
            }
        }
        s
    }
}

/// Input tensors for the formal neighbourhood of `X ⊂ Y` over a model dga
/// `A` of `(0,•)`-forms on `X`.
///
/// Letters: `t_i` dual to the generators of `Tm` and `n_j` dual to those
/// of `Nm`. Conventions:
/// * `holo_diff[a][i]` is the `t_i` component of `∂̂(e_a)`;
/// * `christoffel[j][i][j']`: `∇⊥_i n_j = Σ_{j'} Γ n_{j'}`;
/// * `shape[k][i][j']`: `S_N(t_k) = Σ_{i,j'} S t_i ⊗ n_{j'}`;
/// * `beta[k][j]`: `β(t_k) = Σ_j β n_j`, coefficients of degree 1;
/// * `connection[x][i][y]`, optional: `∇_i` of the split-frame ambient
///   letter `x` (`t` letters first, then `n` letters) has `y` coefficient;
/// * `curvature_perp[n−2][j] = R⊥_n(n_j)` and `curvature_top[n−2][k] = R⊤_n(t_k)`
///   are weight-`n` elements of `Ŝ(Nm∨)` of degree 1; `R⊤_1 = β`;
/// * `curvature_full[n−2][l]`, optional, is `R_n(y_l)` on the letters dual
///   to `ambient`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricModel {
    pub tangent: FreeModule,
    pub normal: FreeModule,
    pub ambient: FreeModule,
    pub splitting: Splitting,
    pub holo_diff: Vec<Vec<AlgebraElement>>,
    pub christoffel: Vec<Vec<Vec<AlgebraElement>>>,
    pub shape: Vec<Vec<Vec<AlgebraElement>>>,
    pub beta: Vec<Vec<AlgebraElement>>,
    pub connection: Option<Vec<Vec<Vec<AlgebraElement>>>>,
    pub curvature_perp: Vec<Vec<SymElement>>,
    pub curvature_top: Vec<Vec<SymElement>>,
    pub curvature_full: Option<Vec<Vec<SymElement>>>,
    /// Require `∂̄β = 0` in [`validate_geometric_model`].
    pub beta_closed: bool,
    pub cap: usize,
}

fn zeros2(r: usize, c: usize) -> Vec<Vec<AlgebraElement>> {
    vec![vec![AlgebraElement::zero(); c]; r]
}

fn zeros3(r: usize, c: usize, d: usize) -> Vec<Vec<Vec<AlgebraElement>>> {
    vec![zeros2(c, d); r]
}

impl GeometricModel {
    /// All tensors zero, standard splitting of `Y = T ⊕ N`, zero
    /// differentials on the bundles.
    pub fn trivial(base: Arc<BaseAlgebra>, t: usize, n: usize, cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::Invalid("weight cap must be positive".into()));
        }
        let names = |prefix: &str, r: usize| (0..r).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>();
        let tangent = FreeModule::new(base.clone(), vec![0; t]).with_names(names("T", t))?;
        let normal = FreeModule::new(base.clone(), vec![0; n]).with_names(names("N", n))?;
        let ambient = FreeModule::new(base.clone(), vec![0; t + n]).with_names(names("Y", t + n))?;
        let normal_sym = SymAlgebra::dual_of(&normal, cap);
        Ok(GeometricModel {
            splitting: Splitting::standard(&base, t, n),
            tangent,
            normal,
            ambient,
            holo_diff: zeros2(base.dim(), t),
            christoffel: zeros3(n, t, n),
            shape: zeros3(t, t, n),
            beta: zeros2(t, n),
            connection: None,
            curvature_perp: (2..=cap).map(|_| vec![normal_sym.zero(); n]).collect(),
            curvature_top: (2..=cap).map(|_| vec![normal_sym.zero(); t]).collect(),
            curvature_full: None,
            beta_closed: false,
            cap,
        })
    }

    pub fn base(&self) -> &Arc<BaseAlgebra> {
        self.tangent.base()
    }

    pub fn tangent_rank(&self) -> usize {
        self.tangent.rank()
    }

    pub fn normal_rank(&self) -> usize {
        self.normal.rank()
    }

    /// `Ŝ_A(Nm∨)` truncated at the cap, letters named `N_j∨`.
    pub fn normal_sym(&self) -> SymAlgebra {
        SymAlgebra::dual_of(&self.normal, self.cap).with_names(self.normal.names().iter().map(|n| format!("{n}∨")).collect())
    }

    /// `Ŝ_A(Ym∨)` on the letters dual to the ambient generators.
    pub fn ambient_frame_sym(&self) -> SymAlgebra {
        SymAlgebra::dual_of(&self.ambient, self.cap)
            .with_names(self.ambient.names().iter().map(|n| format!("{n}∨")).collect())
    }

    /// The same model with every weight-graded tensor re-truncated at `cap`.
    pub fn with_cap(&self, cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(Error::Invalid("weight cap must be positive".into()));
        }
        let recap = |list: &Vec<Vec<SymElement>>, rank: usize, zero: SymElement| -> Vec<Vec<SymElement>> {
            (2..=cap)
                .map(|n| list.get(n - 2).map_or_else(|| vec![zero.clone(); rank], |v| v.iter().map(|x| x.with_cap(cap)).collect()))
                .collect()
        };
        let zero = SymElement::zero(cap);
        let mut out = self.clone();
        out.cap = cap;
        out.curvature_perp = recap(&self.curvature_perp, self.normal_rank(), zero.clone());
        out.curvature_top = recap(&self.curvature_top, self.tangent_rank(), zero.clone());
        out.curvature_full = self.curvature_full.as_ref().map(|l| recap(l, self.ambient.rank(), zero));
        Ok(out)
    }

    /// `R⊥_n`, or `None` outside `2..=cap`.
    pub fn perp(&self, n: usize) -> Option<&[SymElement]> {
        n.checked_sub(2).and_then(|i| self.curvature_perp.get(i)).map(Vec::as_slice)
    }

    /// `R⊤_n` for `n ≥ 2`, or `None` outside `2..=cap`.
    pub fn top(&self, n: usize) -> Option<&[SymElement]> {
        n.checked_sub(2).and_then(|i| self.curvature_top.get(i)).map(Vec::as_slice)
    }

    /// The ambient module transported to `Tm ⊕ Nm` along the splitting:
    /// generators `T_k` then `N_j`, with `d(u) = (τ, p)(d_Y(ι u_T + ρ u_N))`.
    pub fn split_module(&self) -> Result<FreeModule> {
        let base = self.base().clone();
        let (t, n) = (self.tangent_rank(), self.normal_rank());
        let split = |y: &ModuleElement| {
            let mut out = self.splitting.tau.apply(&base, y);
            for (j, c) in self.splitting.p.apply(&base, y).terms() {
                out.add_term(t + j, c);
            }
            out
        };
        let mut values = std::collections::BTreeMap::new();
        for k in 0..t {
            values.insert(k, split(&self.ambient.d(&self.splitting.iota.images[k])));
        }
        for j in 0..n {
            values.insert(t + j, split(&self.ambient.d(&self.splitting.rho.images[j])));
        }
        let names = self.tangent.names().iter().chain(self.normal.names()).cloned().collect();
        FreeModule::new(base, vec![0; t + n]).with_names(names)?.with_differential(values)
    }

    /// The Kodaira–Spencer form induced by the ambient holomorphic
    /// structure: `β(t_k)` is the `n` part of `∂̄ t_k` in the split frame,
    /// i.e. `−τ ∘ d_Y ∘ ρ` transposed.
    pub fn induced_beta(&self) -> Result<Vec<Vec<AlgebraElement>>> {
        let split = self.split_module()?;
        let t = self.tangent_rank();
        Ok((0..t)
            .map(|k| (0..self.normal_rank()).map(|j| split.generator_differential(t + j).coeff(k).neg()).collect())
            .collect())
    }

    /// The ambient connection on split-frame letters; without an explicit
    /// table, the one whose only components are `Γ` and `S_N`.
    pub fn connection_table(&self) -> Vec<Vec<Vec<AlgebraElement>>> {
        if let Some(c) = &self.connection {
            return c.clone();
        }
        let (t, n) = (self.tangent_rank(), self.normal_rank());
        let mut table = zeros3(t + n, t, t + n);
        for k in 0..t {
            for i in 0..t {
                for j in 0..n {
                    table[k][i][t + j] = self.shape[k][i][j].clone();
                }
            }
        }
        for j in 0..n {
            for i in 0..t {
                for j2 in 0..n {
                    table[t + j][i][t + j2] = self.christoffel[j][i][j2].clone();
                }
            }
        }
        table
    }

    /// Replaces `Γ` and `S_N` by the normal components of the explicit
    /// connection table.
    pub fn derive_normal_connection(&mut self) {
        let Some(table) = &self.connection else { return };
        let (t, n) = (self.tangent_rank(), self.normal_rank());
        for j in 0..n {
            for i in 0..t {
                for j2 in 0..n {
                    self.christoffel[j][i][j2] = table[t + j][i][t + j2].clone();
                }
            }
        }
        for k in 0..t {
            for i in 0..t {
                for j2 in 0..n {
                    self.shape[k][i][j2] = table[k][i][t + j2].clone();
                }
            }
        }
    }

    /// Sets the full curvature and replaces `R⊥`, `R⊤` by its split.
    pub fn set_full_curvature(&mut self, full: Vec<Vec<SymElement>>) -> Result<()> {
        let mut perp = Vec::new();
        let mut top = Vec::new();
        for r in &full {
            let (p, t) = split_curvature(r, self)?;
            perp.push(p);
            top.push(t);
        }
        self.curvature_perp = perp;
        self.curvature_top = top;
        self.curvature_full = Some(full);
        Ok(())
    }

    /// `ι∨ ⊕ ρ∨`: letters dual to `ambient` into split-frame letters.
    pub fn to_split_frame(&self, split_sym: &SymAlgebra) -> LetterMap {
        let t = self.tangent_rank();
        let y = self.ambient.rank();
        self.splitting.iota.dual(y, split_sym, 0).plus(&self.splitting.rho.dual(y, split_sym, t))
    }

    /// `τ∨ ⊕ p∨`: split-frame letters into letters dual to `ambient`.
    pub fn from_split_frame(&self, frame_sym: &SymAlgebra) -> LetterMap {
        let mut images = self.splitting.tau.dual(self.tangent_rank(), frame_sym, 0).images;
        images.extend(self.splitting.p.dual(self.normal_rank(), frame_sym, 0).images);
        LetterMap { images }
    }

    /// `R_n` on split-frame letters: the transported full curvature, or
    /// `R⊤_n ⊕ R⊥_n` when no full curvature is given.
    pub fn split_frame_curvature(&self, n: usize, split_sym: &SymAlgebra) -> Result<Vec<SymElement>> {
        let (t, nr) = (self.tangent_rank(), self.normal_rank());
        if let Some(full) = &self.curvature_full {
            let Some(r) = full.get(n - 2) else { return Ok(vec![split_sym.zero(); t + nr]) };
            let frame = self.ambient_frame_sym();
            let into = self.to_split_frame(split_sym);
            let back = self.from_split_frame(&frame);
            return Ok(back
                .images
                .iter()
                .map(|x| into.apply(split_sym, &apply_letter_values(&frame, r, x)))
                .collect());
        }
        let embed = |x: &SymElement| shift_letters(split_sym, x, t);
        let mut out: Vec<SymElement> = match self.top(n) {
            Some(top) => top.iter().map(embed).collect(),
            None => vec![split_sym.zero(); t],
        };
        match self.perp(n) {
            Some(perp) => out.extend(perp.iter().map(embed)),
            None => out.extend(vec![split_sym.zero(); nr]),
        }
        Ok(out)
    }
}

/// `η` with every letter index raised by `offset`, read in `target`.
pub(crate) fn shift_letters(target: &SymAlgebra, eta: &SymElement, offset: usize) -> SymElement {
    let mut out = target.zero();
    for (w, c) in eta.terms() {
        if w.weight() <= target.cap() {
            out.add_term(Word::from_letters(w.letters().iter().map(|l| l + offset).collect()), c);
        }
    }
    out
}

/// `R(Σ c_l y_l) = Σ c_l R(y_l)` for a weight-one `x` with degree-zero
/// coefficients and letter values `r`.
fn apply_letter_values(sym: &SymAlgebra, r: &[SymElement], x: &SymElement) -> SymElement {
    let mut out = sym.zero();
    for (w, c) in x.terms() {
        let l = w.letters()[0];
        out.add_assign(&sym.act(c, &r[l]));
    }
    out
}

/// `R⊥_n = ρ∨ ∘ R_n ∘ p∨` and `R⊤_n = ρ∨ ∘ R_n ∘ τ∨` for a full curvature
/// given by its values on the letters dual to the ambient generators.
pub fn split_curvature(full: &[SymElement], g: &GeometricModel) -> Result<(Vec<SymElement>, Vec<SymElement>)> {
    let frame = g.ambient_frame_sym();
    let normal = g.normal_sym();
    let y = g.ambient.rank();
    if full.len() != y {
        return Err(Error::SizeMismatch { expected: y, found: full.len() });
    }
    let rho_dual = g.splitting.rho.dual(y, &normal, 0);
    let p_dual = g.splitting.p.dual(g.normal_rank(), &frame, 0);
    let tau_dual = g.splitting.tau.dual(g.tangent_rank(), &frame, 0);
    let through = |x: &SymElement| rho_dual.apply(&normal, &apply_letter_values(&frame, full, x));
    Ok((p_dual.images.iter().map(through).collect(), tau_dual.images.iter().map(through).collect()))
}

fn check_element(report: &mut ValidationReport, base: &BaseAlgebra, check: &str, what: String, x: &AlgebraElement, degree: i64) {
    match base.degree_of(x, degree) {
        Ok(d) if d == degree => {}
        _ => report.push(check, format!("{what} = {} is not of degree {degree}", base.display(x))),
    }
}

fn check_map(report: &mut ValidationReport, g: &GeometricModel, name: &str, f: &ModuleMap, source: usize, target: usize) {
    if f.source_rank() != source {
        report.push("splitting shapes", format!("{name} has {} images, expected {source}", f.source_rank()));
        return;
    }
    for (k, v) in f.images.iter().enumerate() {
        for (l, c) in v.terms() {
            if l >= target {
                report.push("splitting shapes", format!("{name}(g{k}) names generator {l} outside rank {target}"));
            }
            check_element(report, g.base(), "splitting degrees", format!("{name}(g{k})_{l}"), c, 0);
        }
    }
}

fn identity_defect(base: &BaseAlgebra, f: &ModuleMap, rank: usize) -> Vec<usize> {
    (0..rank)
        .filter(|&k| f.images.get(k).map_or(true, |v| *v != ModuleElement::term(k, base.one())))
        .collect()
}

fn chain_map_defects(base: &BaseAlgebra, f: &ModuleMap, source: &FreeModule, target: &FreeModule) -> Vec<usize> {
    (0..source.rank())
        .filter(|&k| f.apply(base, source.generator_differential(k)) != target.d(&f.images[k]))
        .collect()
}

/// Checks every structural invariant of a model and reports witnesses:
/// degrees and shapes of all tensors, the splitting identities, that
/// `ι` and `p` are chain maps, the Leibniz rule for `∂̂`, consistency of a
/// supplied full curvature with `R⊥`, `R⊤`, and `∂̄β = 0` when requested.
pub fn validate_geometric_model(g: &GeometricModel) -> ValidationReport {
    let mut r = ValidationReport::default();
    let base = g.base().clone();
    let (t, n) = (g.tangent_rank(), g.normal_rank());
    for (name, m) in [("tangent", &g.tangent), ("normal", &g.normal), ("ambient", &g.ambient)] {
        if m.base() != g.base() {
            r.push("common base", format!("{name} module lives over a different algebra"));
        }
        if let Some(i) = m.degrees().iter().position(|&d| d != 0) {
            r.push("bundle generators in degree 0", format!("{name} generator {i} has degree {}", m.degree(i)));
        }
        r.extend_scoped(name, m.validate());
    }
    if g.ambient.rank() != t + n {
        r.push("ranks", format!("ambient rank {} is not {t} + {n}", g.ambient.rank()));
        return r;
    }
    let y = t + n;
    let s = &g.splitting;
    check_map(&mut r, g, "ι", &s.iota, t, y);
    check_map(&mut r, g, "p", &s.p, y, n);
    check_map(&mut r, g, "τ", &s.tau, y, t);
    check_map(&mut r, g, "ρ", &s.rho, n, y);
    if !r.is_ok() {
        return r;
    }
    for k in identity_defect(&base, &s.tau.compose(&base, &s.iota), t) {
        r.push("τ∘ι = 1", format!("fails on T{k}"));
    }
    for j in identity_defect(&base, &s.p.compose(&base, &s.rho), n) {
        r.push("p∘ρ = 1", format!("fails on N{j}"));
    }
    let it = s.iota.compose(&base, &s.tau);
    let rp = s.rho.compose(&base, &s.p);
    for l in 0..y {
        let mut v = it.images[l].clone();
        v.add_assign(&rp.images[l]);
        if v != ModuleElement::term(l, base.one()) {
            r.push("ι∘τ + ρ∘p = 1", format!("fails on Y{l}"));
        }
    }
    for k in chain_map_defects(&base, &s.iota, &g.tangent, &g.ambient) {
        r.push("ι is a chain map", format!("fails on T{k}"));
    }
    for l in chain_map_defects(&base, &s.p, &g.ambient, &g.normal) {
        r.push("p is a chain map", format!("fails on Y{l}"));
    }
    check_tensors(&mut r, g);
    if !r.is_ok() {
        return r;
    }
    for a in 0..base.dim() {
        for b in 0..base.dim() {
            let ab = base.basis_product(a, b);
            for i in 0..t {
                let mut d = AlgebraElement::zero();
                for (c, s) in ab.terms() {
                    d.add_scaled(&g.holo_diff[c][i], s);
                }
                d.sub_assign(&base.mul(&g.holo_diff[a][i], &AlgebraElement::basis(b)));
                d.sub_assign(&base.mul(&AlgebraElement::basis(a), &g.holo_diff[b][i]));
                if !d.is_zero() {
                    r.push("∂̂ is a derivation", format!("∂̂_{i}({}·{}) defect {}", base.name(a), base.name(b), base.display(&d)));
                }
            }
        }
    }
    if let Some(full) = &g.curvature_full {
        for (idx, rn) in full.iter().enumerate() {
            match split_curvature(rn, g) {
                Ok((perp, top)) => {
                    if g.perp(idx + 2) != Some(perp.as_slice()) || g.top(idx + 2) != Some(top.as_slice()) {
                        r.push("curvature split", format!("R{} does not split into the stored R⊥, R⊤", idx + 2));
                    }
                }
                Err(e) => r.push("curvature split", format!("R{}: {e}", idx + 2)),
            }
        }
    }
    if g.beta_closed {
        for (k, j, v) in beta_differential(g) {
            r.push("∂̄β = 0", format!("component (T{k}, N{j}) is {}", base.display(&v)));
        }
    }
    r
}

fn check_tensors(r: &mut ValidationReport, g: &GeometricModel) {
    let base = g.base();
    let (t, n) = (g.tangent_rank(), g.normal_rank());
    let shape2 = |x: &Vec<Vec<AlgebraElement>>, a: usize, b: usize| x.len() == a && x.iter().all(|row| row.len() == b);
    let shape3 = |x: &Vec<Vec<Vec<AlgebraElement>>>, a: usize, b: usize, c: usize| {
        x.len() == a && x.iter().all(|m| shape2(m, b, c))
    };
    if !shape2(&g.holo_diff, base.dim(), t) {
        r.push("tensor shapes", "∂̂ must be indexed [basis][tangent direction]".into());
    }
    if !shape3(&g.christoffel, n, t, n) {
        r.push("tensor shapes", "Γ must be indexed [normal][tangent][normal]".into());
    }
    if !shape3(&g.shape, t, t, n) {
        r.push("tensor shapes", "S_N must be indexed [tangent][tangent][normal]".into());
    }
    if !shape2(&g.beta, t, n) {
        r.push("tensor shapes", "β must be indexed [tangent][normal]".into());
    }
    if let Some(c) = &g.connection {
        if !shape3(c, t + n, t, t + n) {
            r.push("tensor shapes", "connection must be indexed [letter][tangent][letter]".into());
        }
    }
    if !r.is_ok() {
        return;
    }
    for (a, row) in g.holo_diff.iter().enumerate() {
        for (i, x) in row.iter().enumerate() {
            check_element(r, base, "degree of ∂̂", format!("∂̂_{i}({})", base.name(a)), x, base.degree(a));
        }
    }
    let deg0 = |r: &mut ValidationReport, name: &str, x: &Vec<Vec<Vec<AlgebraElement>>>| {
        for (p, m) in x.iter().enumerate() {
            for (q, row) in m.iter().enumerate() {
                for (s, v) in row.iter().enumerate() {
                    check_element(r, base, &format!("degree of {name}"), format!("{name}[{p}][{q}][{s}]"), v, 0);
                }
            }
        }
    };
    deg0(r, "Γ", &g.christoffel);
    deg0(r, "S_N", &g.shape);
    if let Some(c) = &g.connection {
        deg0(r, "connection", c);
    }
    for (k, row) in g.beta.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            check_element(r, base, "degree of β", format!("β[{k}][{j}]"), v, 1);
        }
    }
    let normal = g.normal_sym();
    let curv = |r: &mut ValidationReport, name: &str, list: &Vec<Vec<SymElement>>, rank: usize, sym: &SymAlgebra| {
        if list.len() + 1 > g.cap.max(1) {
            r.push("curvature arity", format!("{name} lists {} orders, more than the cap {} allows", list.len(), g.cap));
        }
        for (idx, vals) in list.iter().enumerate() {
            let order = idx + 2;
            if vals.len() != rank {
                r.push("tensor shapes", format!("{name}{order} has {} values, expected {rank}", vals.len()));
                continue;
            }
            for (x, v) in vals.iter().enumerate() {
                if v.cap() != g.cap || v.weights().iter().any(|&w| w != order) || sym.degree_of(v, 1).ok() != Some(1) {
                    r.push("curvature shape", format!("{name}{order} on letter {x} must have weight {order} and degree 1"));
                }
            }
        }
    };
    curv(r, "R⊥", &g.curvature_perp, n, &normal);
    curv(r, "R⊤", &g.curvature_top, t, &normal);
    if let Some(full) = &g.curvature_full {
        curv(r, "R", full, t + n, &g.ambient_frame_sym());
    }
}

/// Nonzero components of `∂̄β` as a form valued in `Hom(T∨, N∨)`, computed
/// from the dual differentials of `Tm` and `Nm`:
/// `(∂̄β)(t_k) = D₀(β(t_k)) + β̃(D₀ t_k)`.
pub fn beta_differential(g: &GeometricModel) -> Vec<(usize, usize, AlgebraElement)> {
    let (t, n) = (g.tangent_rank(), g.normal_rank());
    let Ok(split) = diagonal_module(g) else { return Vec::new() };
    let sym = SymAlgebra::dual_of(&split, 1);
    let Ok(d0) = Derivation::base_differential(&sym, &split) else { return Vec::new() };
    let mut on_letters = vec![sym.zero(); t + n];
    for (k, value) in on_letters.iter_mut().enumerate().take(t) {
        for j in 0..n {
            value.add_term(Word::letter(t + j), &g.beta[k][j]);
        }
    }
    let Ok(b) = Derivation::new(&sym, 1, vec![sym.zero(); g.base().dim()], on_letters) else { return Vec::new() };
    let c = d0.commutator(&sym, &b);
    let mut out = Vec::new();
    for k in 0..t {
        for j in 0..n {
            let v = c.on_letters()[k].coeff(&Word::letter(t + j));
            if !v.is_zero() {
                out.push((k, j, v));
            }
        }
    }
    out
}

/// `Tm ⊕ Nm` with the direct-sum differential.
fn diagonal_module(g: &GeometricModel) -> Result<FreeModule> {
    let t = g.tangent_rank();
    let mut values = std::collections::BTreeMap::new();
    for k in 0..t {
        values.insert(k, g.tangent.generator_differential(k).clone());
    }
    for j in 0..g.normal_rank() {
        let mut v = ModuleElement::zero();
        for (i, c) in g.normal.generator_differential(j).terms() {
            v.add_term(t + i, c);
        }
        values.insert(t + j, v);
    }
    let names = g.tangent.names().iter().chain(g.normal.names()).cloned().collect();
    FreeModule::new(g.base().clone(), vec![0; t + g.normal_rank()]).with_names(names)?.with_differential(values)
}

/// `(−1)^{|c|} c` for a homogeneous algebra element.
pub(crate) fn koszul_pass(base: &BaseAlgebra, c: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (k, s) in c.terms() {
        out.add_term(k, &s.clone().negate_if(odd(base.degree(k))));
    }
    out
}
