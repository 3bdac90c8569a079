//! L∞ and L∞[1] algebras on free modules, their Jacobi residuals and the
//! décalage between them.

use crate::error::{Error, Result};
use crate::graded::{odd, skew_sign_odd, sym_sign_odd, unshuffles, FreeModule, ModuleElement, Scalar};
use crate::linfty::table::{canonical_tuples, BracketTable, Symmetry};

/// A residual value attached to a sorted generator tuple.
pub type Residual<E> = Vec<(Vec<usize>, E)>;

/// Anything carrying graded symmetric brackets of degree one on a free
/// module, with `ℓ_1 = d_L`. Brackets are evaluated on arbitrary arguments
/// using the structure's own extension policy.
pub trait SymmetricBrackets {
    fn carrier(&self) -> &FreeModule;

    fn arity_cap(&self) -> usize;

    /// `ℓ_n(args)` with `n = args.len() ≥ 1`.
    fn bracket(&self, args: &[ModuleElement]) -> ModuleElement;
}

/// Generators `g_t` with unit coefficients.
pub(crate) fn generators(module: &FreeModule, tuple: &[usize]) -> Vec<ModuleElement> {
    tuple.iter().map(|&g| ModuleElement::term(g, module.base().one())).collect()
}

/// `Σ_{i+j=n} Σ_{σ ∈ Sh(i,j)} α(σ, v) ℓ_{j+1}(ℓ_i(v_σ(1), …, v_σ(i)), v_σ(i+1), …, v_σ(n))`
/// on every canonical generator tuple; only nonzero values are returned.
pub fn jacobi_residual<B: SymmetricBrackets + ?Sized>(b: &B, n: usize) -> Result<Residual<ModuleElement>> {
    if n > b.arity_cap() {
        return Err(Error::ArityOverflow { arity: n, cap: b.arity_cap() });
    }
    let module = b.carrier();
    let mut out = Vec::new();
    for tuple in canonical_tuples(Symmetry::Symmetric, n, module.degrees()) {
        let args = generators(module, &tuple);
        let degrees: Vec<i64> = tuple.iter().map(|&g| module.degree(g)).collect();
        let mut total = ModuleElement::zero();
        for i in 1..=n {
            for sigma in unshuffles(&[i, n - i]) {
                let v = sigma.permute(&args);
                let inner = b.bracket(&v[..i]);
                if inner.is_zero() {
                    continue;
                }
                let mut outer_args = vec![inner];
                outer_args.extend_from_slice(&v[i..]);
                let value = b.bracket(&outer_args);
                total.add_scaled(&value, &Scalar::sign(sym_sign_odd(&sigma, &degrees)));
            }
        }
        if !total.is_zero() {
            out.push((tuple, total));
        }
    }
    Ok(out)
}

/// An L∞[1] algebra: graded symmetric brackets `ℓ_n` of degree one, with
/// `ℓ_1 = d_L` and `ℓ_n` (`n ≥ 2`) extended `A`-multilinearly with Koszul
/// signs from their values on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LInftyOneAlgebra {
    carrier: FreeModule,
    cap: usize,
    brackets: Vec<BracketTable>,
}

impl LInftyOneAlgebra {
    /// The structure with `ℓ_1 = d_L` and all higher brackets zero.
    pub fn new(carrier: FreeModule, cap: usize) -> Self {
        let brackets = (2..=cap).map(|n| BracketTable::new(n, 1, Symmetry::Symmetric)).collect();
        LInftyOneAlgebra { carrier, cap, brackets }
    }

    pub fn arity_cap(&self) -> usize {
        self.cap
    }

    pub fn carrier(&self) -> &FreeModule {
        &self.carrier
    }

    /// `ℓ_n` for `2 ≤ n ≤ cap`.
    pub fn table(&self, n: usize) -> &BracketTable {
        &self.brackets[n - 2]
    }

    /// Sets `ℓ_n(g_tuple) = value`.
    pub fn set(&mut self, tuple: &[usize], value: ModuleElement) -> Result<()> {
        let n = tuple.len();
        if n < 2 || n > self.cap {
            return Err(Error::ArityOverflow { arity: n, cap: self.cap });
        }
        self.brackets[n - 2].set(&self.carrier, tuple, value)
    }

    pub fn jacobi_residual(&self, n: usize) -> Result<Residual<ModuleElement>> {
        jacobi_residual(self, n)
    }

    /// The L∞ algebra on the unshifted carrier (inverse décalage).
    pub fn undecalage(&self) -> Result<LInftyAlgebra> {
        let shifted = shift_carrier(&self.carrier, 1)?;
        let degrees: Vec<i64> = shifted.degrees().to_vec();
        let brackets = self
            .brackets
            .iter()
            .map(|t| {
                let n = t.arity() as i64;
                t.map_values(2 - n, Symmetry::Skew, |tuple, v| {
                    v.scale(&Scalar::sign(decalage_sign_odd(tuple, &degrees)))
                })
            })
            .collect();
        Ok(LInftyAlgebra { carrier: shifted, cap: self.cap, brackets })
    }
}

impl SymmetricBrackets for LInftyOneAlgebra {
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
            n if n <= self.cap => self.brackets[n - 2].apply(&self.carrier, args),
            _ => ModuleElement::zero(),
        }
    }
}

/// An L∞ algebra: graded skew brackets `l_n` of degree `2 − n` with
/// `l_1 = d_L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LInftyAlgebra {
    carrier: FreeModule,
    cap: usize,
    brackets: Vec<BracketTable>,
}

impl LInftyAlgebra {
    pub fn new(carrier: FreeModule, cap: usize) -> Self {
        let brackets = (2..=cap).map(|n| BracketTable::new(n, 2 - n as i64, Symmetry::Skew)).collect();
        LInftyAlgebra { carrier, cap, brackets }
    }

    pub fn arity_cap(&self) -> usize {
        self.cap
    }

    pub fn carrier(&self) -> &FreeModule {
        &self.carrier
    }

    pub fn table(&self, n: usize) -> &BracketTable {
        &self.brackets[n - 2]
    }

    pub fn set(&mut self, tuple: &[usize], value: ModuleElement) -> Result<()> {
        let n = tuple.len();
        if n < 2 || n > self.cap {
            return Err(Error::ArityOverflow { arity: n, cap: self.cap });
        }
        self.brackets[n - 2].set(&self.carrier, tuple, value)
    }

    /// `l_n(args)` with `n = args.len() ≥ 1`.
    pub fn bracket(&self, args: &[ModuleElement]) -> ModuleElement {
        match args.len() {
            0 => ModuleElement::zero(),
            1 => self.carrier.d(&args[0]),
            n if n <= self.cap => self.brackets[n - 2].apply(&self.carrier, args),
            _ => ModuleElement::zero(),
        }
    }

    /// `Σ_{i+j=n} Σ_{σ ∈ Sh(i,j)} (−1)^{ij} χ(σ, v) l_{j+1}(l_i(v_σ(1), …), …, v_σ(n))`
    /// on every canonical generator tuple.
    pub fn jacobi_residual_skew(&self, n: usize) -> Result<Residual<ModuleElement>> {
        if n > self.cap {
            return Err(Error::ArityOverflow { arity: n, cap: self.cap });
        }
        let module = &self.carrier;
        let mut out = Vec::new();
        for tuple in canonical_tuples(Symmetry::Skew, n, module.degrees()) {
            let args = generators(module, &tuple);
            let degrees: Vec<i64> = tuple.iter().map(|&g| module.degree(g)).collect();
            let mut total = ModuleElement::zero();
            for i in 1..=n {
                let j = n - i;
                for sigma in unshuffles(&[i, j]) {
                    let v = sigma.permute(&args);
                    let inner = self.bracket(&v[..i]);
                    if inner.is_zero() {
                        continue;
                    }
                    let mut outer_args = vec![inner];
                    outer_args.extend_from_slice(&v[i..]);
                    let value = self.bracket(&outer_args);
                    let flip = skew_sign_odd(&sigma, &degrees) ^ (odd(i as i64) && odd(j as i64));
                    total.add_scaled(&value, &Scalar::sign(flip));
                }
            }
            if !total.is_zero() {
                out.push((tuple, total));
            }
        }
        Ok(out)
    }

    /// The L∞[1] algebra on the shifted carrier, with
    /// `{v_1, …, v_k} = (−1)^{(k−1)|v_1| + (k−2)|v_2| + ⋯ + |v_{k−1}|} [v_1, …, v_k]`
    /// in the unshifted degrees.
    pub fn decalage(&self) -> Result<LInftyOneAlgebra> {
        let shifted = shift_carrier(&self.carrier, -1)?;
        let degrees = self.carrier.degrees().to_vec();
        let brackets = self
            .brackets
            .iter()
            .map(|t| {
                t.map_values(1, Symmetry::Symmetric, |tuple, v| {
                    v.scale(&Scalar::sign(decalage_sign_odd(tuple, &degrees)))
                })
            })
            .collect();
        Ok(LInftyOneAlgebra { carrier: shifted, cap: self.cap, brackets })
    }
}

/// Parity of `(k−1)|v_1| + (k−2)|v_2| + ⋯ + |v_{k−1}|` for unshifted degrees.
pub fn decalage_sign_odd(tuple: &[usize], degrees: &[i64]) -> bool {
    let k = tuple.len();
    tuple.iter().enumerate().filter(|&(i, &g)| odd((k - 1 - i) as i64) && odd(degrees[g])).count() % 2 == 1
}

/// The same module with every generator degree moved by `shift`.
fn shift_carrier(m: &FreeModule, shift: i64) -> Result<FreeModule> {
    let degrees = m.degrees().iter().map(|d| d + shift).collect();
    let differential = (0..m.rank()).map(|g| (g, m.generator_differential(g).clone())).collect();
    FreeModule::new(m.base().clone(), degrees).with_names(m.names().to_vec())?.with_differential(differential)
}
