//! Permutations, unshuffles and Koszul signs.
//!
//! Positions are 0-based throughout the API; `from_one_based` accepts the
//! textbook notation. A permutation `σ` acts on a word `(v_1, …, v_n)` by
//! `σ·v = (v_{σ(1)}, …, v_{σ(n)})`.
//!
//! Two signs are attached to `σ` and a degree vector:
//!
//! * `α(σ, v)` ([`sym_sign`]): `v_{σ(1)} ⊙ ⋯ ⊙ v_{σ(n)} = α(σ, v) v_1 ⊙ ⋯ ⊙ v_n`
//!   in the graded symmetric algebra, where swapping neighbours `a, b`
//!   costs `(−1)^{|a||b|}`.
//! * `χ(σ, v)` ([`skew_sign`]): the same relation in the graded exterior
//!   algebra, where a swap costs `−(−1)^{|a||b|}`. Hence
//!   `χ(σ, v) = sgn(σ)·α(σ, v)`.
//!
//! Worked table on `S_3` with all degrees odd, `(1, 1, 1)`:
//!
//! | images  | sgn | α  | χ  |
//! |---------|-----|----|----|
//! | 0 1 2   | +1  | +1 | +1 |
//! | 0 2 1   | −1  | −1 | +1 |
//! | 1 0 2   | −1  | −1 | +1 |
//! | 1 2 0   | +1  | +1 | +1 |
//! | 2 0 1   | +1  | +1 | +1 |
//! | 2 1 0   | −1  | −1 | +1 |
//!
//! With all degrees even, `α ≡ +1` and `χ = sgn`.

use crate::error::{Error, Result};
use crate::graded::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// 0-based images `σ(0), …, σ(n−1)`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::NotAPermutation(images));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Images in 1-based notation, e.g. `[2, 3, 1]` for `1→2→3→1`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::NotAPermutation(images.to_vec()));
        }
        Permutation::from_images(images.iter().map(|i| i - 1).collect())
    }

    /// The transposition exchanging positions `i` and `j` (0-based).
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i, j);
        Permutation { images }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `σ∘τ`, i.e. `i ↦ σ(τ(i))`.
    pub fn compose(&self, tau: &Permutation) -> Permutation {
        Permutation { images: tau.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.len()];
        for (i, &s) in self.images.iter().enumerate() {
            images[s] = i;
        }
        Permutation { images }
    }

    /// `σ·v = (v_{σ(0)}, …, v_{σ(n−1)})`.
    pub fn permute<T: Clone>(&self, items: &[T]) -> Vec<T> {
        self.images.iter().map(|&i| items[i].clone()).collect()
    }

    /// Parity of the permutation: `true` for odd.
    pub fn is_odd(&self) -> bool {
        inversions(&self.images).count() % 2 == 1
    }

    pub fn signature(&self) -> Scalar {
        Scalar::sign(self.is_odd())
    }
}

fn inversions(images: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    let n = images.len();
    (0..n).flat_map(move |p| {
        ((p + 1)..n)
            .filter(move |&q| images[p] > images[q])
            .map(move |q| (images[p], images[q]))
    })
}

fn odd(d: i64) -> bool {
    d & 1 == 1
}

/// Parity of `α(σ, v)`: each inverted pair contributes `|a||b|`.
pub fn sym_sign_odd(sigma: &Permutation, degrees: &[i64]) -> bool {
    inversions(&sigma.images).filter(|&(a, b)| odd(degrees[a]) && odd(degrees[b])).count() % 2 == 1
}

/// Parity of `χ(σ, v)`: each inverted pair contributes `1 + |a||b|`.
pub fn skew_sign_odd(sigma: &Permutation, degrees: &[i64]) -> bool {
    inversions(&sigma.images).filter(|&(a, b)| !(odd(degrees[a]) && odd(degrees[b]))).count() % 2
        == 1
}

fn check_len(sigma: &Permutation, degrees: &[i64]) -> Result<()> {
    if sigma.len() != degrees.len() {
        return Err(Error::SizeMismatch { expected: sigma.len(), found: degrees.len() });
    }
    Ok(())
}

/// The Koszul sign `α(σ, v)` of graded symmetric words.
pub fn sym_sign(sigma: &Permutation, degrees: &[i64]) -> Result<Scalar> {
    check_len(sigma, degrees)?;
    Ok(Scalar::sign(sym_sign_odd(sigma, degrees)))
}

/// The Koszul sign `χ(σ, v)` of graded skew words.
pub fn skew_sign(sigma: &Permutation, degrees: &[i64]) -> Result<Scalar> {
    check_len(sigma, degrees)?;
    Ok(Scalar::sign(skew_sign_odd(sigma, degrees)))
}

/// All `(k_1, …, k_l)`-unshuffles, sorted lexicographically by images.
///
/// An unshuffle is increasing on each block of consecutive positions
/// `k_1 + ⋯ + k_{i−1} ≤ p < k_1 + ⋯ + k_i`.
pub fn enumerate_unshuffles(blocks: &[i64]) -> Result<Vec<Permutation>> {
    if blocks.is_empty() || blocks.iter().any(|&k| k <= 0) {
        return Err(Error::InvalidBlocks(blocks.to_vec()));
    }
    let sizes: Vec<usize> = blocks.iter().map(|&k| k as usize).collect();
    Ok(unshuffles(&sizes))
}

/// Same as [`enumerate_unshuffles`] but zero-sized blocks are allowed and
/// contribute nothing. Internal sums (`Sh(i, 0)` etc.) use this form.
pub fn unshuffles(sizes: &[usize]) -> Vec<Permutation> {
    let n: usize = sizes.iter().sum();
    let mut out = Vec::new();
    let mut label = vec![usize::MAX; n];
    fill(sizes, 0, &mut label, &mut out);
    out.sort();
    out
}

fn fill(sizes: &[usize], block: usize, label: &mut Vec<usize>, out: &mut Vec<Permutation>) {
    if block == sizes.len() {
        let mut images = Vec::with_capacity(label.len());
        for b in 0..sizes.len() {
            images.extend((0..label.len()).filter(|&i| label[i] == b));
        }
        out.push(Permutation { images });
        return;
    }
    let free: Vec<usize> = (0..label.len()).filter(|&i| label[i] == usize::MAX).collect();
    for subset in combinations(&free, sizes[block]) {
        for &i in &subset {
            label[i] = block;
        }
        fill(sizes, block + 1, label, out);
        for &i in &subset {
            label[i] = usize::MAX;
        }
    }
}

/// `k`-element subsets of `items`, in lexicographic order.
pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in from..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut current, &mut out);
    out
}

/// All permutations of `{0, …, n−1}` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    unshuffles(&vec![1; n])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(images: &[usize]) -> Permutation {
        Permutation::from_one_based(images).unwrap()
    }

    #[test]
    fn unshuffles_of_one_one() {
        let sh = enumerate_unshuffles(&[1, 1]).unwrap();
        assert_eq!(sh, vec![Permutation::identity(2), one(&[2, 1])]);
    }

    #[test]
    fn unshuffles_of_two_one() {
        let sh = enumerate_unshuffles(&[2, 1]).unwrap();
        assert_eq!(sh, vec![one(&[1, 2, 3]), one(&[1, 3, 2]), one(&[2, 3, 1])]);
    }

    #[test]
    fn unshuffles_of_two_two_match_filtered_s4() {
        let filtered: Vec<_> = all_permutations(4)
            .into_iter()
            .filter(|s| s.apply(0) < s.apply(1) && s.apply(2) < s.apply(3))
            .collect();
        assert_eq!(enumerate_unshuffles(&[2, 2]).unwrap(), filtered);
        assert_eq!(filtered.len(), 6);
    }

    #[test]
    fn rejects_nonpositive_blocks() {
        assert!(enumerate_unshuffles(&[2, 0]).is_err());
        assert!(enumerate_unshuffles(&[]).is_err());
    }

    #[test]
    fn sign_examples() {
        let id = Permutation::identity(3);
        assert!(sym_sign(&id, &[1, 3, 0]).unwrap().is_one());
        let t = one(&[2, 1]);
        assert_eq!(sym_sign(&t, &[1, 1]).unwrap(), Scalar::from_int(-1));
        assert_eq!(skew_sign(&t, &[1, 1]).unwrap(), Scalar::one());
        assert_eq!(skew_sign(&t, &[0, 0]).unwrap(), Scalar::from_int(-1));
        let cycle = one(&[2, 3, 1]);
        assert!(sym_sign(&cycle, &[1, 1, 1]).unwrap().is_one());
        assert!(sym_sign(&t, &[1]).is_err());
    }

    #[test]
    fn compose_and_inverse() {
        let s = one(&[2, 3, 1]);
        assert_eq!(s.compose(&s.inverse()), Permutation::identity(3));
        assert_eq!(s.compose(&s), one(&[3, 1, 2]));
    }
}
