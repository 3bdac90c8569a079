#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use lrkit::graded::{models, AlgebraElement, BaseAlgebra, FreeModule, ModuleElement};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn with_d(base: Arc<BaseAlgebra>, degrees: Vec<i64>, d: &[(usize, Vec<(usize, usize)>)]) -> FreeModule {
    let mut values = BTreeMap::new();
    for (g, terms) in d {
        let mut v = ModuleElement::zero();
        for &(target, basis) in terms {
            v.add_term(target, &AlgebraElement::basis(basis));
        }
        values.insert(*g, v);
    }
    FreeModule::new(base, degrees).with_differential(values).unwrap()
}

/// Λ[e] with generators of degrees 0, 0, 1 and `d g0 = e g1`.
pub fn exterior_module() -> FreeModule {
    let a = Arc::new(models::exterior(&["e"]));
    with_d(a, vec![0, 0, 1], &[(0, vec![(1, 1)])])
}

/// The twisted dual numbers (`d x = e x`) with generators of degrees 0, 1
/// and `d g0 = e g0`.
pub fn twisted_module() -> FreeModule {
    let a = Arc::new(models::twisted_dual_numbers());
    with_d(a, vec![0, 1], &[(0, vec![(0, 2)])])
}

/// Λ[a, b] with generators of degrees 0, 0 and `d g0 = a g1 + b g1`.
pub fn two_generator_module() -> FreeModule {
    let a = Arc::new(models::exterior(&["a", "b"]));
    with_d(a, vec![0, 0], &[(0, vec![(1, 1), (1, 2)])])
}

pub fn modules() -> Vec<FreeModule> {
    vec![exterior_module(), twisted_module(), two_generator_module()]
}
