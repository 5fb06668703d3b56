//! Finite integer matrix groups and their subgroup lattices.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::IntegerMatrix;

/// Default bound on the order of a point group.
pub const DEFAULT_ORDER_CAP: usize = 512;

/// Set of element ids of a [`FiniteMatrixGroup`], stored as a bitset.
///
/// Ordering compares the sorted id lists lexicographically, which is the
/// canonical subgroup key (element ids are sorted by matrix encoding).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    words: Vec<u64>,
}

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet {
            words: vec![0; universe.div_ceil(64).max(1)],
        }
    }

    pub fn from_ids(universe: usize, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for i in ids {
            s.insert(i);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, id: usize) -> bool {
        let (w, b) = (id / 64, id % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    #[inline]
    pub fn contains(&self, id: usize) -> bool {
        self.words.get(id / 64).is_some_and(|w| w & (1 << (id % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + b)
            })
        })
    }

    pub fn ids(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl Ord for ElementSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for ElementSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite subgroup `K` of `GL_n(Z)`, elements sorted by canonical encoding.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    rank: usize,
    elements: Vec<IntegerMatrix>,
    generators: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    table: Vec<usize>,
    lookup: HashMap<IntegerMatrix, usize>,
}

/// Closes `generators` under multiplication.
pub fn close_group(
    rank: usize,
    generators: &[IntegerMatrix],
    order_cap: usize,
) -> Result<FiniteMatrixGroup> {
    for (index, g) in generators.iter().enumerate() {
        if g.rows() != rank || g.cols() != rank {
            return Err(Error::DimensionMismatch {
                index,
                expected: rank,
                rows: g.rows(),
                cols: g.cols(),
            });
        }
        if !g.determinant().abs().eq(&BigInt::from(1)) {
            return Err(Error::NonUnimodular { index });
        }
    }

    let identity = IntegerMatrix::identity(rank);
    let mut seen: HashSet<IntegerMatrix> = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.mul(g);
            if seen.insert(y.clone()) {
                if seen.len() > order_cap {
                    return Err(Error::OrderCapExceeded { cap: order_cap });
                }
                queue.push_back(y);
            }
        }
    }

    let mut elements: Vec<IntegerMatrix> = seen.into_iter().collect();
    elements.sort();
    let lookup: HashMap<IntegerMatrix, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let order = elements.len();
    let table: Vec<usize> = (0..order * order)
        .into_par_iter()
        .map(|ij| {
            let p = elements[ij / order].mul(&elements[ij % order]);
            lookup[&p]
        })
        .collect();
    let identity = lookup[&IntegerMatrix::identity(rank)];
    let mut inverse = vec![0; order];
    for a in 0..order {
        inverse[a] = (0..order)
            .find(|&b| table[a * order + b] == identity)
            .expect("finite group element without inverse");
    }
    let generators = generators.iter().map(|g| lookup[g]).collect();
    Ok(FiniteMatrixGroup {
        rank,
        elements,
        generators,
        identity,
        inverse,
        table,
        lookup,
    })
}

impl FiniteMatrixGroup {
    /// Dimension `n` of the lattice the group acts on.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[IntegerMatrix] {
        &self.elements
    }

    pub fn element(&self, id: usize) -> &IntegerMatrix {
        &self.elements[id]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn id_of(&self, m: &IntegerMatrix) -> Option<usize> {
        self.lookup.get(m).copied()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `k h k^-1`
    #[inline]
    pub fn conj(&self, k: usize, h: usize) -> usize {
        self.mul(self.mul(k, h), self.inv(k))
    }

    pub fn conj_set(&self, k: usize, s: &ElementSet) -> ElementSet {
        ElementSet::from_ids(self.order(), s.iter().map(|h| self.conj(k, h)))
    }

    pub fn all(&self) -> ElementSet {
        ElementSet::from_ids(self.order(), 0..self.order())
    }

    pub fn trivial_subgroup(&self) -> ElementSet {
        ElementSet::from_ids(self.order(), [self.identity])
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Subgroup generated by `gens`.
    pub fn generate(&self, gens: impl IntoIterator<Item = usize>) -> ElementSet {
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut set = self.trivial_subgroup();
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    /// Subgroup generated by `s` together with `g`, where `s` is a subgroup.
    fn join(&self, s: &ElementSet, g: usize) -> ElementSet {
        let mut gens = self.small_generating_set(s);
        gens.push(g);
        self.generate(gens)
    }

    pub fn is_subgroup(&self, s: &ElementSet) -> bool {
        s.contains(self.identity)
            && s.iter().all(|a| s.iter().all(|b| s.contains(self.mul(a, b))))
    }

    pub fn check_subgroup(&self, s: &ElementSet) -> Result<()> {
        if self.is_subgroup(s) {
            Ok(())
        } else {
            Err(Error::NotSubgroup)
        }
    }

    /// Greedy generating set: scans elements in id order, keeping each one not
    /// already generated.
    pub fn small_generating_set(&self, s: &ElementSet) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut current = self.trivial_subgroup();
        for x in s.iter() {
            if !current.contains(x) {
                gens.push(x);
                current = self.generate(gens.iter().copied());
            }
        }
        gens
    }

    pub fn normalizer(&self, s: &ElementSet) -> ElementSet {
        ElementSet::from_ids(
            self.order(),
            (0..self.order()).filter(|&k| s.iter().all(|h| s.contains(self.conj(k, h)))),
        )
    }

    pub fn normalizes(&self, k: usize, s: &ElementSet) -> bool {
        s.iter().all(|h| s.contains(self.conj(k, h)))
    }
}

/// Number of conjugacy classes of elements of the subgroup `h`.
///
/// This is the dimension of the complexified representation ring of `h`.
pub fn element_class_count(h: &ElementSet, group: &FiniteMatrixGroup) -> Result<usize> {
    group.check_subgroup(h)?;
    let mut seen = ElementSet::empty(group.order());
    let mut classes = 0;
    for x in h.iter() {
        if seen.contains(x) {
            continue;
        }
        classes += 1;
        for k in h.iter() {
            seen.insert(group.conj(k, x));
        }
    }
    Ok(classes)
}

/// A conjugacy class of subgroups of `K`.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    pub class_id: usize,
    /// Minimal subgroup key in the class.
    pub representative: ElementSet,
    pub order: usize,
    pub normalizer: ElementSet,
    pub conjugates_count: usize,
    pub element_class_count: usize,
    /// Indices into [`SubgroupLattice::subgroups`].
    pub members: Vec<usize>,
}

/// Every subgroup of `K`, bucketed by conjugacy.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    subgroups: Vec<ElementSet>,
    index: HashMap<ElementSet, usize>,
    class_of: Vec<usize>,
    /// `k` with `k S k^-1` equal to the class representative.
    to_representative: Vec<usize>,
    classes: Vec<SubgroupClass>,
}

impl SubgroupLattice {
    pub fn subgroups(&self) -> &[ElementSet] {
        &self.subgroups
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn class(&self, id: usize) -> &SubgroupClass {
        &self.classes[id]
    }

    pub fn index_of(&self, s: &ElementSet) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Class id and a conjugator `k` with `k s k^-1` the class representative.
    pub fn locate(&self, s: &ElementSet) -> Option<(usize, usize)> {
        self.index_of(s)
            .map(|i| (self.class_of[i], self.to_representative[i]))
    }

    pub fn class_of_subgroup(&self, index: usize) -> usize {
        self.class_of[index]
    }
}

/// Enumerates all subgroups of `group` and their conjugacy classes.
///
/// Starts from the cyclic subgroups and joins each found subgroup with every
/// cyclic subgroup until nothing new appears; every subgroup is a join of
/// cyclic ones, so the enumeration is complete.
pub fn subgroup_classes(group: &FiniteMatrixGroup) -> SubgroupLattice {
    let order = group.order();
    let mut cyclic: Vec<(usize, ElementSet)> = Vec::new();
    let mut found: HashSet<ElementSet> = HashSet::new();
    for g in 0..order {
        let c = group.generate([g]);
        if found.insert(c.clone()) {
            cyclic.push((g, c));
        }
    }
    let mut queue: VecDeque<ElementSet> = cyclic.iter().map(|(_, c)| c.clone()).collect();
    while let Some(s) = queue.pop_front() {
        let joins: Vec<ElementSet> = cyclic
            .par_iter()
            .filter(|(_, c)| !c.is_subset(&s))
            .map(|(g, _)| group.join(&s, *g))
            .collect();
        for j in joins {
            if found.insert(j.clone()) {
                queue.push_back(j);
            }
        }
    }

    let mut subgroups: Vec<ElementSet> = found.into_iter().collect();
    subgroups.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let index: HashMap<ElementSet, usize> = subgroups
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();

    let mut class_of = vec![usize::MAX; subgroups.len()];
    let mut to_representative = vec![0; subgroups.len()];
    let mut classes = Vec::new();
    // Subgroups are sorted by (order, key), so the first unclassified one is
    // the minimal key of its class.
    for start in 0..subgroups.len() {
        if class_of[start] != usize::MAX {
            continue;
        }
        let rep = subgroups[start].clone();
        let class_id = classes.len();
        let mut members = Vec::new();
        let mut normalizer = ElementSet::empty(order);
        for k in 0..order {
            let conj = group.conj_set(k, &rep);
            let i = index[&conj];
            if i == start {
                normalizer.insert(k);
            }
            if class_of[i] == usize::MAX {
                class_of[i] = class_id;
                // k rep k^-1 = conj, so k^-1 conj k = rep
                to_representative[i] = group.inv(k);
                members.push(i);
            }
        }
        members.sort_unstable();
        let element_class_count =
            element_class_count(&rep, group).expect("enumerated set is a subgroup");
        classes.push(SubgroupClass {
            class_id,
            order: rep.len(),
            conjugates_count: members.len(),
            normalizer,
            element_class_count,
            representative: rep,
            members,
        });
    }
    SubgroupLattice {
        subgroups,
        index,
        class_of,
        to_representative,
        classes,
    }
}
