//! The L∞[1]-algebroid on `Nm` read off from geometric data in closed form,
//! independently of the derivation `𝔇`.

use std::collections::HashMap;

use crate::algebroid::AlgebroidStructure;
use crate::error::Result;
use crate::geometry::model::GeometricModel;
use crate::graded::{AlgebraElement, AlgebraMap, ModuleElement};
use crate::linfty::{canonical_tuples, Symmetry};

/// Tuples `J` of normal generators mapped to `α_n(J)_k`, the `t_k`
/// coefficient of the transported curvature contracted with `J`.
type Alpha = HashMap<Vec<usize>, Vec<AlgebraElement>>;

/// Builds the algebroid on `Nm` with brackets and anchors
///
/// * `α_1(j)_k = β[k][j]`,
///   `α_n(J)_k = R⊤_n(t_k)(g_J) + Σ_r Σ_i α_{n−1}(J∖j_r)_i S[k][i][j_r]`;
/// * `{g_J | e_a} = Σ_k α_n(J)_k ∂̂_k(e_a)`;
/// * `ℓ_n(g_J) = −Σ_j g_j (R⊥_n(n_j)(g_J) + Σ_r Σ_i α_{n−1}(J∖j_r)_i Γ[j][i][j_r])`,
///
/// with `ℓ_1 = d_N` and all arities up to the cap.
pub fn structure_from_geometry(g: &GeometricModel) -> Result<AlgebroidStructure> {
    let base = g.base().clone();
    let sym = g.normal_sym();
    let (t, b) = (g.tangent_rank(), g.normal_rank());
    let degrees = vec![0; b];
    let mut s = AlgebroidStructure::new(g.normal.clone(), g.cap)?;
    let mut previous: Alpha = HashMap::new();
    for n in 1..=g.cap {
        let mut alpha: Alpha = HashMap::new();
        for tuple in canonical_tuples(Symmetry::Symmetric, n, &degrees) {
            let mut values: Vec<AlgebraElement> = (0..t)
                .map(|k| match n {
                    1 => g.beta[k][tuple[0]].clone(),
                    _ => g.top(n).map_or_else(AlgebraElement::zero, |r| sym.evaluate_on_generators(&r[k], &tuple)),
                })
                .collect();
            let mut bracket = ModuleElement::zero();
            if n >= 2 {
                for j in 0..b {
                    let mut c = g.perp(n).map_or_else(AlgebraElement::zero, |r| sym.evaluate_on_generators(&r[j], &tuple));
                    for r in 0..n {
                        let mut rest = tuple.clone();
                        let jr = rest.remove(r);
                        let prev = &previous[&rest];
                        for (i, a) in prev.iter().enumerate() {
                            c.add_assign(&base.mul(a, &g.christoffel[j][i][jr]));
                        }
                    }
                    bracket.add_term(j, &c.neg());
                }
                for (k, value) in values.iter_mut().enumerate() {
                    for r in 0..n {
                        let mut rest = tuple.clone();
                        let jr = rest.remove(r);
                        for (i, a) in previous[&rest].iter().enumerate() {
                            value.add_assign(&base.mul(a, &g.shape[k][i][jr]));
                        }
                    }
                }
                s.set_bracket(&tuple, bracket)?;
            }
            let images = (0..base.dim())
                .map(|e| {
                    let mut v = AlgebraElement::zero();
                    for (k, a) in values.iter().enumerate() {
                        v.add_assign(&base.mul(a, &g.holo_diff[e][k]));
                    }
                    v
                })
                .collect();
            s.set_anchor(&tuple, AlgebraMap { degree: 1, images })?;
            alpha.insert(tuple, values);
        }
        previous = alpha;
    }
    Ok(s)
}
