//! Arithmetic in the split crystallographic group `K ⋉ Z^n` and fixed lattices.
//!
//! An element `(k, a)` acts on `R^n` by `x ↦ k x + a`, so
//! `(k1, a1)(k2, a2) = (k1 k2, a1 + k1 a2)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{kernel_lattice, IntVector, IntegerMatrix, LatticeBasis};
use crate::matgroup::{ElementSet, FiniteMatrixGroup};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GammaElement {
    pub point: usize,
    pub translation: IntVector,
}

impl GammaElement {
    pub fn new(point: usize, translation: IntVector) -> Self {
        GammaElement { point, translation }
    }

    pub fn identity(group: &FiniteMatrixGroup) -> Self {
        GammaElement {
            point: group.identity(),
            translation: vec![BigInt::zero(); group.rank()],
        }
    }

    pub fn translation_only(group: &FiniteMatrixGroup, a: IntVector) -> Self {
        GammaElement {
            point: group.identity(),
            translation: a,
        }
    }

    pub fn mul(&self, other: &GammaElement, group: &FiniteMatrixGroup) -> GammaElement {
        let moved = group.element(self.point).mul_vec(&other.translation);
        GammaElement {
            point: group.mul(self.point, other.point),
            translation: self
                .translation
                .iter()
                .zip(moved)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn inverse(&self, group: &FiniteMatrixGroup) -> GammaElement {
        let k_inv = group.inv(self.point);
        let moved = group.element(k_inv).mul_vec(&self.translation);
        GammaElement {
            point: k_inv,
            translation: moved.into_iter().map(|x| -x).collect(),
        }
    }

    pub fn is_identity(&self, group: &FiniteMatrixGroup) -> bool {
        self.point == group.identity() && self.translation.iter().all(Zero::is_zero)
    }
}

/// Stacks `k - I` for the given elements.
pub fn stacked_fixing_matrix(group: &FiniteMatrixGroup, elements: &[usize]) -> IntegerMatrix {
    let n = group.rank();
    let id = IntegerMatrix::identity(n);
    let blocks: Vec<IntegerMatrix> = elements
        .iter()
        .map(|&k| group.element(k).sub(&id))
        .collect();
    IntegerMatrix::vstack(n, &blocks)
}

/// The lattice `C_A(H)` of translations fixed by every element of `h`.
pub fn fixed_lattice(group: &FiniteMatrixGroup, h: &ElementSet) -> Result<LatticeBasis> {
    group.check_subgroup(h)?;
    let elements = h.ids();
    if elements.is_empty() {
        return Ok(LatticeBasis::full(group.rank()));
    }
    Ok(kernel_lattice(&stacked_fixing_matrix(group, &elements)))
}

/// Dimension of the fixed space as the average of traces over `h`.
///
/// Equals `rank C_A(H)`; in particular `C_A(H)` is trivial exactly when this
/// inner product with the trivial character vanishes.
pub fn character_fixed_rank(group: &FiniteMatrixGroup, h: &ElementSet) -> Result<usize> {
    group.check_subgroup(h)?;
    let total: BigInt = h.iter().map(|k| group.element(k).trace()).sum();
    let (q, r) = total.div_rem(&BigInt::from(h.len()));
    if !r.is_zero() || q < BigInt::zero() {
        return Err(Error::NonIntegralAverage(format!("{total}/{}", h.len())));
    }
    Ok(q.try_into().expect("fixed rank fits in usize"))
}

/// For finite `H < L`, whether `C_Γ(L)` has finite index in `C_Γ(H)`.
///
/// Both centralizers are virtually their fixed lattices, so this reduces to
/// equality of the fixed ranks.
pub fn centralizer_index_finite(
    group: &FiniteMatrixGroup,
    h: &ElementSet,
    l: &ElementSet,
) -> Result<bool> {
    Ok(fixed_lattice(group, h)?.rank() == fixed_lattice(group, l)?.rank())
}
