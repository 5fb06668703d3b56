//! Conjugacy classes of finite subgroups of `Γ = K ⋉ Z^n`.
//!
//! A finite subgroup of `Γ` meets the translations trivially, so it projects
//! isomorphically onto some `H ≤ K` and is the complement `{(h, f(h))}` of a
//! 1-cocycle `f`. Conjugating by a translation changes `f` by a coboundary and
//! conjugating by `(k, 0)` moves `(H, f)` to `(kHk^-1, k·f)`. The classes over
//! a fixed `H` are therefore the `N_K(H)`-orbits on `H^1(H, Z^n)`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::cohom1::{
    coboundary_witness_on, first_cohomology, normalizer_orbits, Cocycle, CohomologyLimits, H1Data,
};
use crate::crystal::{fixed_lattice, GammaElement};
use crate::error::{Error, Result};
use crate::matgroup::{subgroup_classes, ElementSet, FiniteMatrixGroup, SubgroupLattice};

#[derive(Clone, Copy, Debug, Default)]
pub struct ClassifyOptions {
    pub limits: CohomologyLimits,
    /// Run per-class work on the rayon pool. Results are identical either way.
    pub parallel: bool,
}

/// A `Γ`-conjugacy class of finite subgroups.
#[derive(Clone, Debug)]
pub struct GammaClass {
    pub class_id: usize,
    pub label: String,
    /// Class of the image in `K`, an index into the subgroup lattice classes.
    pub point_class: usize,
    /// Indices into the `H^1` classes of the point class representative.
    pub cocycle_orbit: Vec<usize>,
    /// Lexicographically smallest cocycle of the orbit, on the point class
    /// representative.
    pub representative: Cocycle,
    pub order: usize,
    pub fixed_rank: usize,
    pub is_maximal: bool,
    pub in_omega: bool,
    pub flag_contractible: bool,
    /// Every class strictly containing this one (up to conjugacy).
    pub covers: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct PointClassData {
    pub fixed_rank: usize,
    pub h1: H1Data,
    pub orbits: Vec<Vec<usize>>,
    /// `H^1` class index to `Γ`-class id.
    pub gamma_class_of: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Classification {
    group: FiniteMatrixGroup,
    lattice: SubgroupLattice,
    points: Vec<PointClassData>,
    classes: Vec<GammaClass>,
}

fn maybe_par_map<T, R, F>(items: &[T], parallel: bool, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

/// Classifies the finite subgroups of `K ⋉ Z^n` up to conjugacy.
pub fn classify_finite_subgroups(
    group: FiniteMatrixGroup,
    options: &ClassifyOptions,
) -> Result<Classification> {
    let lattice = subgroup_classes(&group);
    let per_class: Vec<Result<(usize, H1Data, Vec<Vec<usize>>)>> =
        maybe_par_map(lattice.classes(), options.parallel, |sc| {
            let rank = fixed_lattice(&group, &sc.representative)?.rank();
            let h1 = first_cohomology(&group, &sc.representative, &options.limits)?;
            let orbits = normalizer_orbits(&group, &h1, &sc.normalizer)?;
            Ok((rank, h1, orbits))
        });

    let mut points = Vec::with_capacity(per_class.len());
    let mut classes = Vec::new();
    let mut label_counter: HashMap<usize, usize> = HashMap::new();
    for (pc, result) in per_class.into_iter().enumerate() {
        let (fixed_rank, h1, orbits) = result?;
        let mut gamma_class_of = vec![usize::MAX; h1.order()];
        for orbit in &orbits {
            let class_id = classes.len();
            for &i in orbit {
                gamma_class_of[i] = class_id;
            }
            let representative = orbit
                .iter()
                .map(|&i| &h1.class_reps[i])
                .min()
                .expect("orbits are nonempty")
                .clone();
            let order = lattice.class(pc).order;
            let counter = label_counter.entry(order).or_insert(0);
            *counter += 1;
            classes.push(GammaClass {
                class_id,
                label: format!("C{order}#{counter}"),
                point_class: pc,
                cocycle_orbit: orbit.clone(),
                representative,
                order,
                fixed_rank,
                is_maximal: false,
                in_omega: false,
                flag_contractible: false,
                covers: Vec::new(),
            });
        }
        points.push(PointClassData {
            fixed_rank,
            h1,
            orbits,
            gamma_class_of,
        });
    }

    let mut classification = Classification {
        group,
        lattice,
        points,
        classes,
    };

    let ids: Vec<usize> = (0..classification.classes.len()).collect();
    let covers: Vec<Vec<usize>> = maybe_par_map(&ids, options.parallel, |&i| {
        let ci = &classification.classes[i];
        classification
            .classes
            .iter()
            .filter(|cj| cj.order > ci.order && cj.order % ci.order == 0)
            .filter(|cj| classification.class_contained_in(ci, cj))
            .map(|cj| cj.class_id)
            .collect()
    });
    for (c, cov) in classification.classes.iter_mut().zip(covers) {
        c.is_maximal = cov.is_empty();
        c.in_omega = c.is_maximal && c.fixed_rank == 0;
        c.covers = cov;
    }
    let flags: Vec<bool> = classification
        .classes
        .iter()
        .map(|c| classification.is_flag_contractible(c))
        .collect();
    for (c, flag) in classification.classes.iter_mut().zip(flags) {
        c.flag_contractible = flag;
    }
    Ok(classification)
}

impl Classification {
    pub fn group(&self) -> &FiniteMatrixGroup {
        &self.group
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        &self.lattice
    }

    pub fn classes(&self) -> &[GammaClass] {
        &self.classes
    }

    pub fn class(&self, id: usize) -> &GammaClass {
        &self.classes[id]
    }

    pub fn point_data(&self, point_class: usize) -> &PointClassData {
        &self.points[point_class]
    }

    /// Point subgroup of the class representative.
    pub fn point_subgroup(&self, c: &GammaClass) -> &ElementSet {
        &self.lattice.class(c.point_class).representative
    }

    /// Fixed rank of the subgroup with the given lattice index.
    pub fn subgroup_fixed_rank(&self, index: usize) -> usize {
        self.points[self.lattice.class_of_subgroup(index)].fixed_rank
    }

    /// Virtual cohomological dimension, which equals the proper geometric
    /// dimension: `n`.
    pub fn vcd(&self) -> usize {
        self.group.rank()
    }

    pub fn omega_classes(&self) -> impl Iterator<Item = &GammaClass> {
        self.classes.iter().filter(|c| c.in_omega)
    }

    /// Number of `Ω` classes over each point class.
    pub fn omega_multiplicity(&self, point_class: usize) -> usize {
        self.omega_classes()
            .filter(|c| c.point_class == point_class)
            .count()
    }

    /// Complement subgroup of the class representative.
    pub fn representative_elements(&self, c: &GammaClass) -> Vec<GammaElement> {
        c.representative
            .values
            .iter()
            .map(|(&h, v)| GammaElement::new(h, v.clone()))
            .collect()
    }

    /// Whether some conjugate of the representative of `c1` lies in the
    /// representative of `c2`.
    pub fn class_contained_in(&self, c1: &GammaClass, c2: &GammaClass) -> bool {
        if c1.class_id == c2.class_id {
            return true;
        }
        if c1.order >= c2.order || c2.order % c1.order != 0 {
            return false;
        }
        let group = &self.group;
        let r1 = self.point_subgroup(c1);
        let r2 = self.point_subgroup(c2);
        // k and k·r give cohomologous conjugates, so left cosets suffice.
        let mut seen = ElementSet::empty(group.order());
        for k in 0..group.order() {
            if seen.contains(k) {
                continue;
            }
            for r in r1.iter() {
                seen.insert(group.mul(k, r));
            }
            let s = group.conj_set(k, r1);
            if !s.is_subset(r2) {
                continue;
            }
            let moved = c1.representative.conjugate(group, k);
            let delta = c2.representative.restrict(&s).difference(&moved);
            let gens = group.small_generating_set(&s);
            if coboundary_witness_on(group, &delta, &gens).is_some() {
                return true;
            }
        }
        false
    }

    /// Whether the poset of finite subgroups strictly containing a member of
    /// `c` is contractible: some strictly larger class has the same fixed rank.
    pub fn is_flag_contractible(&self, c: &GammaClass) -> bool {
        c.covers
            .iter()
            .any(|&j| self.classes[j].fixed_rank == c.fixed_rank)
    }

    /// `Γ`-class of the complement of `f` over the point subgroup `f.subgroup`.
    pub fn locate(&self, f: &Cocycle) -> Result<usize> {
        let (pc, k) = self.lattice.locate(&f.subgroup).ok_or(Error::NotSubgroup)?;
        let moved = f.conjugate(&self.group, k);
        let data = &self.points[pc];
        let index = data.h1.class_index(&moved).ok_or(Error::CocycleLawViolated)?;
        Ok(data.gamma_class_of[index])
    }

    /// `Γ`-class of the finite subgroup generated by `generators`.
    pub fn locate_generated(&self, generators: &[GammaElement]) -> Result<usize> {
        let group = &self.group;
        let mut by_point: HashMap<usize, GammaElement> = HashMap::new();
        let id = GammaElement::identity(group);
        by_point.insert(id.point, id.clone());
        let mut queue = vec![id];
        while let Some(x) = queue.pop() {
            for g in generators {
                let y = x.mul(g, group);
                match by_point.get(&y.point) {
                    Some(existing) if *existing == y => {}
                    Some(_) => return Err(Error::InfiniteSubgroup),
                    None => {
                        by_point.insert(y.point, y.clone());
                        queue.push(y);
                    }
                }
            }
        }
        let subgroup = ElementSet::from_ids(group.order(), by_point.keys().copied());
        let f = Cocycle {
            subgroup,
            values: by_point.into_iter().map(|(p, e)| (p, e.translation)).collect(),
        };
        self.locate(&f)
    }

    /// Whether some `(k, a)` outside the representative of `c` normalizes it.
    ///
    /// Modulo the representative itself, `k` ranges over `N_K(H) ∖ H` (with a
    /// translation solving `k·f - f = d0(a)`) or is trivial, in which case
    /// `(1, a)` normalizes exactly when `a` is a fixed vector.
    pub fn has_larger_normalizer(&self, c: &GammaClass) -> bool {
        if c.fixed_rank > 0 {
            return true;
        }
        let group = &self.group;
        let point = self.point_subgroup(c);
        let normalizer = &self.lattice.class(c.point_class).normalizer;
        let gens = group.small_generating_set(point);
        let f = &c.representative;
        normalizer.iter().filter(|k| !point.contains(*k)).any(|k| {
            // (1, a)(k, 0) normalizes iff k·f - f = d0(a) on the point group
            let delta = f.conjugate(group, k).difference(f);
            coboundary_witness_on(group, &delta, &gens).is_some()
        })
    }
}
