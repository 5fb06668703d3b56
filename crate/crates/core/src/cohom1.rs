//! First cohomology `H^1(H, Z^n)` of a point subgroup, with explicit cocycles.
//!
//! Cochains are inhomogeneous: a 1-cochain is a function `f: H → Z^n`,
//! flattened into `Z^{|H| n}` by listing `f(h)` for `h` in increasing id
//! order. The differentials are
//!
//! ```text
//! d0(a)(h)       = h a - a
//! d1(f)(h1, h2)  = h1 f(h2) - f(h1 h2) + f(h1)
//! ```
//!
//! A cocycle `f` determines the complement `{(h, f(h))}` of `Z^n` in
//! `H ⋉ Z^n`; cohomologous cocycles give complements conjugate by a
//! translation.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::crystal::{stacked_fixing_matrix, GammaElement};
use crate::error::{Error, Result};
use crate::linalg::{
    kernel_lattice, smith_normal_form, solve_linear, AbelianInvariants, IntVector, IntegerMatrix,
    LatticeBasis,
};
use crate::matgroup::{ElementSet, FiniteMatrixGroup};

/// Size limits for cohomology computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CohomologyLimits {
    /// Bound on `|H| n`, the dimension of the 1-cochains.
    pub max_cochain_dim: usize,
    /// Bound on `|H^1|`, the number of enumerated classes.
    pub max_classes: u64,
}

impl Default for CohomologyLimits {
    fn default() -> Self {
        CohomologyLimits {
            max_cochain_dim: 8192,
            max_classes: 1_000_000,
        }
    }
}

/// A function `H → Z^n` on a point subgroup, keyed by element id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cocycle {
    pub subgroup: ElementSet,
    pub values: BTreeMap<usize, IntVector>,
}

impl Cocycle {
    pub fn zero(group: &FiniteMatrixGroup, subgroup: &ElementSet) -> Self {
        Cocycle {
            subgroup: subgroup.clone(),
            values: subgroup
                .iter()
                .map(|h| (h, vec![BigInt::zero(); group.rank()]))
                .collect(),
        }
    }

    /// Reads a flattened cochain vector (see module docs).
    pub fn from_flat(group: &FiniteMatrixGroup, subgroup: &ElementSet, flat: &[BigInt]) -> Self {
        let n = group.rank();
        Cocycle {
            subgroup: subgroup.clone(),
            values: subgroup
                .iter()
                .enumerate()
                .map(|(p, h)| (h, flat[p * n..(p + 1) * n].to_vec()))
                .collect(),
        }
    }

    pub fn to_flat(&self) -> IntVector {
        self.values.values().flatten().cloned().collect()
    }

    pub fn value(&self, h: usize) -> &IntVector {
        &self.values[&h]
    }

    /// Coboundary `h ↦ h a - a`.
    pub fn coboundary(group: &FiniteMatrixGroup, subgroup: &ElementSet, a: &[BigInt]) -> Self {
        Cocycle {
            subgroup: subgroup.clone(),
            values: subgroup
                .iter()
                .map(|h| {
                    let ha = group.element(h).mul_vec(a);
                    (h, ha.iter().zip(a).map(|(x, y)| x - y).collect())
                })
                .collect(),
        }
    }

    pub fn satisfies_cocycle_law(&self, group: &FiniteMatrixGroup) -> bool {
        if !group.is_subgroup(&self.subgroup)
            || self.values.len() != self.subgroup.len()
            || self.values.keys().any(|&h| !self.subgroup.contains(h))
        {
            return false;
        }
        self.values.iter().all(|(&h1, f1)| {
            let m = group.element(h1);
            self.values.iter().all(|(&h2, f2)| {
                let lhs = &self.values[&group.mul(h1, h2)];
                let rhs = m.mul_vec(f2);
                lhs.iter().zip(rhs.iter().zip(f1)).all(|(l, (a, b))| *l == a + b)
            })
        })
    }

    pub fn difference(&self, other: &Cocycle) -> Cocycle {
        assert_eq!(self.subgroup, other.subgroup);
        Cocycle {
            subgroup: self.subgroup.clone(),
            values: self
                .values
                .iter()
                .map(|(&h, v)| (h, v.iter().zip(&other.values[&h]).map(|(a, b)| a - b).collect()))
                .collect(),
        }
    }

    /// Conjugate cocycle `(k·f)(h) = k f(k^-1 h k)` on `k H k^-1`.
    ///
    /// This is the cocycle of the complement conjugated by `(k, 0)`.
    pub fn conjugate(&self, group: &FiniteMatrixGroup, k: usize) -> Cocycle {
        let km = group.element(k);
        let values = self
            .values
            .iter()
            .map(|(&h, v)| (group.conj(k, h), km.mul_vec(v)))
            .collect();
        Cocycle {
            subgroup: group.conj_set(k, &self.subgroup),
            values,
        }
    }

    pub fn restrict(&self, sub: &ElementSet) -> Cocycle {
        Cocycle {
            subgroup: sub.clone(),
            values: sub.iter().map(|h| (h, self.values[&h].clone())).collect(),
        }
    }
}

/// Matrix of `d0: Z^n → C^1`.
pub fn coboundary_matrix(group: &FiniteMatrixGroup, subgroup: &ElementSet) -> IntegerMatrix {
    stacked_fixing_matrix(group, &subgroup.ids())
}

/// Matrix of the full `d1: C^1 → C^2`, rows indexed by pairs `(h1, h2)`.
pub fn cocycle_matrix(group: &FiniteMatrixGroup, subgroup: &ElementSet) -> IntegerMatrix {
    let elements = subgroup.ids();
    let pairs: Vec<(usize, usize)> = (0..elements.len())
        .flat_map(|i| (0..elements.len()).map(move |j| (i, j)))
        .collect();
    differential_rows(group, &elements, &pairs)
}

/// Rows of `d1` for the given position pairs.
fn differential_rows(
    group: &FiniteMatrixGroup,
    elements: &[usize],
    pairs: &[(usize, usize)],
) -> IntegerMatrix {
    let n = group.rank();
    let m = elements.len();
    let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(p, &h)| (h, p)).collect();
    let mut d = IntegerMatrix::zeros(pairs.len() * n, m * n);
    for (row_block, &(p1, p2)) in pairs.iter().enumerate() {
        let h1 = elements[p1];
        let prod = pos[&group.mul(h1, elements[p2])];
        let h1m = group.element(h1);
        for i in 0..n {
            let r = row_block * n + i;
            for j in 0..n {
                let c = p2 * n + j;
                let v = d.get(r, c) + h1m.get(i, j);
                d.set(r, c, v);
            }
            let c = prod * n + i;
            let v = d.get(r, c) - 1;
            d.set(r, c, v);
            let c = p1 * n + i;
            let v = d.get(r, c) + 1;
            d.set(r, c, v);
        }
    }
    d
}

/// Constraints cutting out the 1-cocycles: `f(1) = 0` and the cocycle law on
/// pairs `(h, g)` with `g` in a generating set. By induction on word length
/// these imply the law on all pairs, so the kernel equals `ker d1`.
fn cocycle_constraints(group: &FiniteMatrixGroup, subgroup: &ElementSet) -> IntegerMatrix {
    let elements = subgroup.ids();
    let n = group.rank();
    let gens = group.small_generating_set(subgroup);
    let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(p, &h)| (h, p)).collect();
    let pairs: Vec<(usize, usize)> = (0..elements.len())
        .flat_map(|p| gens.iter().map(move |g| (p, g)))
        .map(|(p, g)| (p, pos[g]))
        .collect();
    let law = differential_rows(group, &elements, &pairs);
    let mut at_identity = IntegerMatrix::zeros(n, elements.len() * n);
    let id_pos = pos[&group.identity()];
    for i in 0..n {
        at_identity.set(i, id_pos * n + i, BigInt::from(1));
    }
    IntegerMatrix::vstack(elements.len() * n, &[law, at_identity])
}

/// `H^1(H, Z^n)` with one canonical cocycle per class.
#[derive(Clone, Debug)]
pub struct H1Data {
    pub subgroup: ElementSet,
    pub invariants: AbelianInvariants,
    /// Class representatives, each reduced modulo the coboundary lattice.
    pub class_reps: Vec<Cocycle>,
    pub index_of_zero: usize,
    coboundaries: LatticeBasis,
    lookup: HashMap<IntVector, usize>,
}

impl H1Data {
    pub fn order(&self) -> usize {
        self.class_reps.len()
    }

    /// Canonical form of a cochain modulo coboundaries.
    pub fn reduce(&self, f: &Cocycle) -> IntVector {
        self.coboundaries.reduce(&f.to_flat())
    }

    /// Index of the class of a cocycle on this subgroup, or `None` if `f` is
    /// not a cocycle.
    pub fn class_index(&self, f: &Cocycle) -> Option<usize> {
        debug_assert_eq!(f.subgroup, self.subgroup);
        self.lookup.get(&self.reduce(f)).copied()
    }
}

/// Computes `H^1(H, Z^n)` for the point subgroup `h`.
pub fn first_cohomology(
    group: &FiniteMatrixGroup,
    h: &ElementSet,
    limits: &CohomologyLimits,
) -> Result<H1Data> {
    group.check_subgroup(h)?;
    let n = group.rank();
    let dim = h.len() * n;
    if dim > limits.max_cochain_dim {
        return Err(Error::SizeCapExceeded {
            what: "cochain dimension",
            size: dim.to_string(),
            cap: limits.max_cochain_dim.to_string(),
        });
    }
    let d0 = coboundary_matrix(group, h);
    let coboundaries = LatticeBasis::from_generators(&d0.transpose());
    let cocycles = kernel_lattice(&cocycle_constraints(group, h));
    let r = cocycles.rank();
    let z_t = cocycles.basis().transpose();

    // Coordinates of each coboundary generator in the cocycle basis.
    let mut relations = IntegerMatrix::zeros(r, n);
    for j in 0..n {
        let c = solve_linear(&z_t, &d0.column(j)).expect("coboundaries are cocycles");
        for (i, ci) in c.into_iter().enumerate() {
            relations.set(i, j, ci);
        }
    }
    let snf = smith_normal_form(&relations);
    let diag = snf.diagonal();
    if diag.iter().filter(|d| !d.is_zero()).count() < r {
        return Err(Error::InfiniteCohomology);
    }
    let invariants = AbelianInvariants::of_cokernel(&relations);
    let count = invariants.torsion_order();
    if count > BigInt::from(limits.max_classes) {
        return Err(Error::SizeCapExceeded {
            what: "number of cohomology classes",
            size: count.to_string(),
            cap: limits.max_classes.to_string(),
        });
    }

    // Mixed-radix enumeration of Z^r / D, lifted back through U^-1.
    let radices: Vec<(usize, u64)> = diag
        .iter()
        .enumerate()
        .filter(|(_, d)| **d > BigInt::from(1))
        .map(|(i, d)| (i, d.to_u64().expect("torsion factor fits in u64")))
        .collect();
    let total = count.to_u64().expect("class count fits in u64");
    let mut class_reps = Vec::with_capacity(total as usize);
    let mut lookup = HashMap::new();
    let mut digits = vec![0u64; radices.len()];
    for _ in 0..total {
        let mut y = vec![BigInt::zero(); r];
        for ((i, _), &dg) in radices.iter().zip(&digits) {
            y[*i] = BigInt::from(dg);
        }
        let x = snf.u_inv.mul_vec(&y);
        let mut flat = vec![BigInt::zero(); dim];
        for (xi, zi) in x.iter().zip(cocycles.basis().row_vectors()) {
            if xi.is_zero() {
                continue;
            }
            for (f, z) in flat.iter_mut().zip(zi) {
                *f += xi * z;
            }
        }
        let reduced = coboundaries.reduce(&flat);
        let index = class_reps.len();
        let previous = lookup.insert(reduced.clone(), index);
        debug_assert!(previous.is_none(), "duplicate cohomology class representative");
        class_reps.push(Cocycle::from_flat(group, h, &reduced));
        for (d, (_, radix)) in digits.iter_mut().zip(&radices) {
            *d += 1;
            if *d < *radix {
                break;
            }
            *d = 0;
        }
    }
    Ok(H1Data {
        subgroup: h.clone(),
        invariants,
        class_reps,
        index_of_zero: 0,
        coboundaries,
        lookup,
    })
}

/// Some `a` with `f(h) = h a - a` for all `h`, if `f` is a coboundary.
pub fn coboundary_witness(group: &FiniteMatrixGroup, f: &Cocycle) -> Option<IntVector> {
    solve_linear(&coboundary_matrix(group, &f.subgroup), &f.to_flat())
}

/// Like [`coboundary_witness`], but only imposes the equations at the listed
/// elements. For a cocycle, generators of the subgroup suffice.
pub fn coboundary_witness_on(
    group: &FiniteMatrixGroup,
    f: &Cocycle,
    elements: &[usize],
) -> Option<IntVector> {
    let rhs: IntVector = elements.iter().flat_map(|h| f.value(*h).clone()).collect();
    solve_linear(&stacked_fixing_matrix(group, elements), &rhs)
}

/// Orbits of `N` acting on `H^1` by `(k·f)(h) = k f(k^-1 h k)`.
///
/// Each orbit is a sorted list of class indices; orbits are sorted by their
/// smallest index, so the zero class comes first.
pub fn normalizer_orbits(
    group: &FiniteMatrixGroup,
    h1: &H1Data,
    normalizer: &ElementSet,
) -> Result<Vec<Vec<usize>>> {
    if normalizer.iter().any(|k| !group.normalizes(k, &h1.subgroup)) {
        return Err(Error::DoesNotNormalize);
    }
    let gens = group.small_generating_set(normalizer);
    let images: Vec<Vec<usize>> = gens
        .iter()
        .map(|&k| {
            h1.class_reps
                .iter()
                .map(|f| {
                    h1.class_index(&f.conjugate(group, k))
                        .expect("conjugate of a cocycle is a cocycle")
                })
                .collect()
        })
        .collect();
    let mut orbit_of = vec![usize::MAX; h1.order()];
    let mut orbits = Vec::new();
    for start in 0..h1.order() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit = vec![start];
        orbit_of[start] = id;
        let mut i = 0;
        while i < orbit.len() {
            let c = orbit[i];
            for img in &images {
                let d = img[c];
                if orbit_of[d] == usize::MAX {
                    orbit_of[d] = id;
                    orbit.push(d);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    Ok(orbits)
}

/// The complement `{(h, f(h)) : h ∈ H}` of `Z^n` in `H ⋉ Z^n`.
pub fn complement_subgroup(group: &FiniteMatrixGroup, f: &Cocycle) -> Result<Vec<GammaElement>> {
    if !f.satisfies_cocycle_law(group) {
        return Err(Error::CocycleLawViolated);
    }
    let elements: Vec<GammaElement> = f
        .values
        .iter()
        .map(|(&h, v)| GammaElement::new(h, v.clone()))
        .collect();
    debug_assert!(elements.iter().all(|a| elements
        .iter()
        .all(|b| elements.binary_search(&a.mul(b, group)).is_ok())));
    Ok(elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vector;
    use crate::matgroup::close_group;

    fn minus_identity(n: usize) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::from(-1));
        }
        m
    }

    #[test]
    fn kummer_h1_is_elementary_abelian_of_order_16() {
        let g = close_group(4, &[minus_identity(4)], 10).unwrap();
        let h1 = first_cohomology(&g, &g.all(), &CohomologyLimits::default()).unwrap();
        assert_eq!(h1.order(), 16);
        assert_eq!(h1.invariants.torsion_factors, int_vector(&[2, 2, 2, 2]));
        assert_eq!(h1.invariants.free_rank, 0);
        assert!(h1.class_reps.iter().all(|f| f.satisfies_cocycle_law(&g)));
        assert_eq!(h1.class_reps[h1.index_of_zero], Cocycle::zero(&g, &g.all()));
    }

    #[test]
    fn trivial_subgroup_has_trivial_h1() {
        let g = close_group(4, &[minus_identity(4)], 10).unwrap();
        let h1 = first_cohomology(&g, &g.trivial_subgroup(), &CohomologyLimits::default()).unwrap();
        assert_eq!(h1.order(), 1);
        assert_eq!(h1.invariants, AbelianInvariants::trivial());
    }

    #[test]
    fn inversion_on_z_has_noncoboundary_cocycle() {
        let g = close_group(1, &[minus_identity(1)], 10).unwrap();
        let h1 = first_cohomology(&g, &g.all(), &CohomologyLimits::default()).unwrap();
        assert_eq!(h1.order(), 2);
        let nonzero = &h1.class_reps[1 - h1.index_of_zero];
        assert_eq!(coboundary_witness(&g, nonzero), None);
        let zero = Cocycle::zero(&g, &g.all());
        assert_eq!(coboundary_witness(&g, &zero), Some(int_vector(&[0])));
    }

    #[test]
    fn coboundary_of_a_vector_has_a_witness() {
        let g = close_group(4, &[minus_identity(4)], 10).unwrap();
        let a0 = int_vector(&[3, -1, 4, 1]);
        let f = Cocycle::coboundary(&g, &g.all(), &a0);
        let a = coboundary_witness(&g, &f).unwrap();
        assert_eq!(Cocycle::coboundary(&g, &g.all(), &a), f);
    }

    #[test]
    fn size_cap_is_enforced() {
        let g = close_group(4, &[minus_identity(4)], 10).unwrap();
        let limits = CohomologyLimits {
            max_cochain_dim: 8192,
            max_classes: 15,
        };
        assert!(matches!(
            first_cohomology(&g, &g.all(), &limits),
            Err(Error::SizeCapExceeded { .. })
        ));
    }

    #[test]
    fn broken_cocycle_is_rejected() {
        let g = close_group(1, &[minus_identity(1)], 10).unwrap();
        let mut f = Cocycle::zero(&g, &g.all());
        f.values.insert(g.identity(), int_vector(&[1]));
        assert!(matches!(complement_subgroup(&g, &f), Err(Error::CocycleLawViolated)));
    }

    #[test]
    fn inner_action_is_trivial() {
        let g = close_group(4, &[minus_identity(4)], 10).unwrap();
        let h1 = first_cohomology(&g, &g.all(), &CohomologyLimits::default()).unwrap();
        let orbits = normalizer_orbits(&g, &h1, &g.all()).unwrap();
        assert_eq!(orbits.len(), 16);
        assert!(orbits.iter().all(|o| o.len() == 1));
    }
}
