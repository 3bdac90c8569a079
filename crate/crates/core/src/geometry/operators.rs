//! Operators on the ambient algebra `Ŝ_A(T∨ ⊕ N∨)` in the split frame:
//! tangent projections, symmetrisation, the lifted connection and the
//! derivations built from the shape operator and the split curvature.

use crate::error::Result;
use crate::geometry::model::{shift_letters, GeometricModel};
use crate::graded::{FreeModule, Scalar};
use crate::symtensor::{Derivation, SymAlgebra, SymElement, Word};

/// `Ŝ_A((Tm ⊕ Nm)∨)` with letters `t_0, …, t_{a−1}, n_0, …, n_{b−1}`.
#[derive(Clone, Debug)]
pub struct AmbientSym {
    pub sym: SymAlgebra,
    pub tangent_rank: usize,
    pub normal_rank: usize,
}

impl AmbientSym {
    pub fn t(&self, i: usize) -> usize {
        i
    }

    pub fn n(&self, j: usize) -> usize {
        self.tangent_rank + j
    }

    /// Number of `t` letters in a word.
    pub fn tangent_weight(&self, w: &Word) -> usize {
        w.letters().iter().filter(|&&l| l < self.tangent_rank).count()
    }

    /// `(tangent weight, normal weight)` of a word.
    pub fn bidegree(&self, w: &Word) -> (usize, usize) {
        let p = self.tangent_weight(w);
        (p, w.weight() - p)
    }

    /// The words with exactly `p` letters `t`.
    pub fn tangent_part(&self, eta: &SymElement, p: usize) -> SymElement {
        eta.filter(|w| self.tangent_weight(w) == p)
    }

    /// `Ŝ(N∨) → Ŝ(T∨ ⊕ N∨)`.
    pub fn embed_normal(&self, mu: &SymElement) -> SymElement {
        shift_letters(&self.sym, mu, self.tangent_rank)
    }

    /// `ρ∨`: drops every word containing a `t` and reads the rest in
    /// `Ŝ(N∨)`.
    pub fn restrict_normal(&self, normal: &SymAlgebra, eta: &SymElement) -> SymElement {
        let mut out = normal.zero();
        for (w, c) in eta.terms() {
            if self.tangent_weight(w) == 0 && w.weight() <= normal.cap() {
                out.add_term(Word::from_letters(w.letters().iter().map(|l| l - self.tangent_rank).collect()), c);
            }
        }
        out
    }
}

/// Everything needed to evaluate the formal-neighbourhood formulas for one
/// model, built once.
#[derive(Clone, Debug)]
pub struct Operators {
    pub ambient: AmbientSym,
    pub normal: SymAlgebra,
    pub split_module: FreeModule,
    /// `∇_i`, degree 0, `∂̂_i` on `A` and the connection on letters.
    pub nabla: Vec<Derivation>,
    /// `∇̄⊥`: `e ↦ Σ ∂̂_i(e) t_i`, `n_j ↦ Γ(n_j)`, `t ↦ 0`.
    pub nabla_perp: Derivation,
    /// `S̃_N`: `t_k ↦ S_N(t_k)`, zero elsewhere.
    pub shape: Derivation,
    /// `R̃⊤_p` for `p = 1, …, cap` at index `p − 1`, degree 1.
    pub top: Vec<Derivation>,
    /// `R̃⊥_k` on `Ŝ(N∨)` for `k = 2, …, cap` at index `k − 2`, degree 1.
    pub perp: Vec<Derivation>,
}

impl Operators {
    pub fn new(g: &GeometricModel) -> Result<Self> {
        let (a, b) = (g.tangent_rank(), g.normal_rank());
        let base = g.base().clone();
        let dim = base.dim();
        let split_module = g.split_module()?;
        let sym = SymAlgebra::dual_of(&split_module, g.cap)
            .with_names(split_module.names().iter().map(|n| format!("{n}∨")).collect());
        let ambient = AmbientSym { sym, tangent_rank: a, normal_rank: b };
        let normal = g.normal_sym();
        let s = &ambient.sym;
        let zero = s.zero();
        let table = g.connection_table();

        let mut nabla = Vec::with_capacity(a);
        for i in 0..a {
            let on_base = (0..dim).map(|e| s.from_algebra(&g.holo_diff[e][i])).collect();
            let on_letters = (0..a + b)
                .map(|x| {
                    let mut v = zero.clone();
                    for (y, c) in table[x][i].iter().enumerate() {
                        v.add_term(Word::letter(y), c);
                    }
                    v
                })
                .collect();
            nabla.push(Derivation::new(s, 0, on_base, on_letters)?);
        }

        let perp_base = (0..dim)
            .map(|e| {
                let mut v = zero.clone();
                for i in 0..a {
                    v.add_term(Word::letter(ambient.t(i)), &g.holo_diff[e][i]);
                }
                v
            })
            .collect();
        let mut perp_letters = vec![zero.clone(); a];
        for j in 0..b {
            let mut v = zero.clone();
            for i in 0..a {
                for j2 in 0..b {
                    v.add_term(Word::from_letters(vec![ambient.t(i), ambient.n(j2)]), &g.christoffel[j][i][j2]);
                }
            }
            perp_letters.push(v);
        }
        let nabla_perp = Derivation::new(s, 0, perp_base, perp_letters)?;

        let mut shape_letters = vec![zero.clone(); a + b];
        for (k, value) in shape_letters.iter_mut().enumerate().take(a) {
            for i in 0..a {
                for j2 in 0..b {
                    value.add_term(Word::from_letters(vec![ambient.t(i), ambient.n(j2)]), &g.shape[k][i][j2]);
                }
            }
        }
        let shape = Derivation::new(s, 0, vec![zero.clone(); dim], shape_letters)?;

        let mut top = Vec::with_capacity(g.cap);
        for p in 1..=g.cap {
            let mut letters = vec![zero.clone(); a + b];
            for (k, value) in letters.iter_mut().enumerate().take(a) {
                if p == 1 {
                    for j in 0..b {
                        value.add_term(Word::letter(ambient.n(j)), &g.beta[k][j]);
                    }
                } else if let Some(rt) = g.top(p) {
                    *value = ambient.embed_normal(&rt[k]);
                }
            }
            top.push(Derivation::new(s, 1, vec![zero.clone(); dim], letters)?);
        }

        let mut perp = Vec::new();
        for k in 2..=g.cap {
            let letters = match g.perp(k) {
                Some(r) => r.to_vec(),
                None => vec![normal.zero(); b],
            };
            perp.push(Derivation::new(&normal, 1, vec![normal.zero(); dim], letters)?);
        }

        Ok(Operators { ambient, normal, split_module, nabla, nabla_perp, shape, top, perp })
    }

    pub fn sym(&self) -> &SymAlgebra {
        &self.ambient.sym
    }

    pub fn p0(&self, eta: &SymElement) -> SymElement {
        self.ambient.tangent_part(eta, 0)
    }

    pub fn p1(&self, eta: &SymElement) -> SymElement {
        self.ambient.tangent_part(eta, 1)
    }

    pub fn rho_dual(&self, eta: &SymElement) -> SymElement {
        self.ambient.restrict_normal(&self.normal, eta)
    }

    pub fn embed(&self, mu: &SymElement) -> SymElement {
        self.ambient.embed_normal(mu)
    }

    /// `Sym̄_i(c·w) = c·t_i·w / (p(w) + 1)` with `p(w)` the number of `t`
    /// letters: the symmetrisation of `t_i ⊗ −` restricted to words of
    /// tangent weight `p(w)`.
    pub fn sym_bar(&self, i: usize, eta: &SymElement) -> SymElement {
        let mut out = self.sym().zero();
        for (w, c) in eta.terms() {
            if w.weight() >= self.sym().cap() {
                continue;
            }
            let p = self.ambient.tangent_weight(w) as i64;
            let mut letters = w.letters().to_vec();
            letters.push(self.ambient.t(i));
            let inv = Scalar::ratio(1, p + 1).expect("positive denominator");
            out.add_term(Word::from_letters(letters), &c.scale(&inv));
        }
        out
    }

    /// `∇̄⊥` on an ambient element: lands in tangent weight one on `Ŝ(N∨)`
    /// inputs and sends `e ∈ A` to `Σ_i ∂̂_i(e) t_i`.
    pub fn nabla_perp_bar(&self, eta: &SymElement) -> SymElement {
        self.nabla_perp.apply(self.sym(), eta)
    }

    /// `S̃_N(ξ)`.
    pub fn shape_derivation(&self, xi: &SymElement) -> SymElement {
        self.shape.apply(self.sym(), xi)
    }

    /// `∇̄η = Σ_i Sym̄_i(∇_i η)`.
    pub fn nabla_bar(&self, eta: &SymElement) -> SymElement {
        let mut out = self.sym().zero();
        for (i, d) in self.nabla.iter().enumerate() {
            out.add_assign(&self.sym_bar(i, &d.apply(self.sym(), eta)));
        }
        out
    }

    /// `∇̄^k η`.
    pub fn nabla_bar_power(&self, eta: &SymElement, k: usize) -> SymElement {
        (0..k).fold(eta.clone(), |x, _| self.nabla_bar(&x))
    }

    /// `π̃*(μ) = Σ_{k≥0} ∇̄^k μ` for `μ ∈ Ŝ(N∨)`, truncated at the cap.
    pub fn pi_tilde(&self, mu: &SymElement) -> SymElement {
        let mut cur = self.embed(mu);
        let mut out = cur.clone();
        for _ in 0..self.sym().cap() {
            cur = self.nabla_bar(&cur);
            if cur.is_zero() {
                break;
            }
            out.add_assign(&cur);
        }
        out
    }

    /// `Σ_{p≥1, q≥0} ρ∨ R̃⊤_p S̃^q ∇̄⊥(η)`.
    pub fn transported_curvature(&self, eta: &SymElement) -> SymElement {
        let mut out = self.normal.zero();
        let mut cur = self.nabla_perp.apply(self.sym(), eta);
        while !cur.is_zero() {
            for r in &self.top {
                out.add_assign(&self.rho_dual(&r.apply(self.sym(), &cur)));
            }
            cur = self.shape.apply(self.sym(), &cur);
        }
        out
    }

    /// `D₀` on `Ŝ((Tm ⊕ Nm)∨)` induced by the transported ambient
    /// differential.
    pub fn ambient_base_differential(&self) -> Result<Derivation> {
        Derivation::base_differential(self.sym(), &self.split_module)
    }

    /// `β̃ = R̃⊤_1`.
    pub fn beta(&self) -> &Derivation {
        &self.top[0]
    }
}
